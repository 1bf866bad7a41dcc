#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sbfem/errors.hpp"
#include "sbfem/mesh.hpp"

namespace sbfem {

using nlohmann::json;

namespace {

Point read_point(const json& j, int dim, const std::string& where)
{
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ValidationError(where + ": expected an array of " + std::to_string(dim) + " numbers");
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
        if (!j[i].is_number())
            throw ValidationError(where + ": coordinate is not a number");
        p[i] = j[i].get<double>();
    }
    return p;
}

std::vector<int> read_indices(const json& j, const std::string& where)
{
    if (!j.is_array())
        throw ValidationError(where + ": expected an array of indices");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer())
            throw ValidationError(where + ": index is not an integer");
        out.push_back(v.get<int>());
    }
    return out;
}

json write_point(const Point& p)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i)
        a.push_back(p[i]);
    return a;
}

}  // namespace

PolytopalMesh import_mesh_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("mesh file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("mesh file: top level must be an object");
    MeshInput in;
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        throw ValidationError("mesh file: missing integer \"dimension\"");
    in.dimension = doc["dimension"].get<int>();
    if (in.dimension != 2 && in.dimension != 3)
        throw ValidationError("mesh file: dimension must be 2 or 3");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw ValidationError("mesh file: missing \"vertices\" array");
    for (std::size_t i = 0; i < doc["vertices"].size(); ++i)
        in.vertices.push_back(read_point(doc["vertices"][i], in.dimension, "vertex " + std::to_string(i)));
    if (doc.contains("selements")) {
        if (!doc["selements"].is_array())
            throw ValidationError("mesh file: \"selements\" must be an array");
        for (std::size_t s = 0; s < doc["selements"].size(); ++s) {
            const auto& je = doc["selements"][s];
            const std::string where = "S-element " + std::to_string(s);
            if (!je.is_object() || !je.contains("facets") || !je["facets"].is_array())
                throw ValidationError(where + ": missing \"facets\" array");
            SElementInput se;
            for (const auto& f : je["facets"])
                se.facets.push_back(read_indices(f, where));
            if (je.contains("center"))
                se.center = read_point(je["center"], in.dimension, where + " center");
            if (je.contains("dirichlet_sideface_nodes"))
                se.dirichlet_sideface_nodes = read_indices(je["dirichlet_sideface_nodes"], where);
            in.selements.push_back(std::move(se));
        }
    }
    if (doc.contains("fe_cells")) {
        if (!doc["fe_cells"].is_array())
            throw ValidationError("mesh file: \"fe_cells\" must be an array");
        for (std::size_t c = 0; c < doc["fe_cells"].size(); ++c)
            in.fe_cells.push_back(read_indices(doc["fe_cells"][c], "FE cell " + std::to_string(c)));
    }
    if (doc.contains("boundary_tags")) {
        const auto& tags = doc["boundary_tags"];
        if (!tags.is_object())
            throw ValidationError("mesh file: \"boundary_tags\" must be an object");
        for (auto it = tags.begin(); it != tags.end(); ++it) {
            int f;
            try {
                std::size_t used = 0;
                f = std::stoi(it.key(), &used);
                if (used != it.key().size())
                    throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ValidationError("mesh file: boundary tag key \"" + it.key() + "\" is not a facet index");
            }
            if (!it.value().is_string())
                throw ValidationError("mesh file: boundary tag values must be strings");
            in.boundary_tags[f] = it.value().get<std::string>();
        }
    }
    return build_mesh(in);
}

PolytopalMesh import_mesh(const std::string& path)
{
    std::ifstream file(path);
    if (!file)
        throw ValidationError("cannot open mesh file " + path);
    std::ostringstream os;
    os << file.rdbuf();
    return import_mesh_json(os.str());
}

std::string export_mesh_json(const PolytopalMesh& m)
{
    json doc;
    doc["dimension"] = m.dimension;
    doc["vertices"] = json::array();
    for (const auto& v : m.vertices)
        doc["vertices"].push_back(write_point(v));
    doc["selements"] = json::array();
    for (const auto& se : m.selements) {
        json je;
        je["facets"] = json::array();
        for (int f : se.facets)
            je["facets"].push_back(m.facets[f].vertices);
        je["center"] = write_point(se.scaling_center);
        if (!se.dirichlet_sideface_nodes.empty())
            je["dirichlet_sideface_nodes"] = se.dirichlet_sideface_nodes;
        doc["selements"].push_back(std::move(je));
    }
    if (!m.fe_cells.empty()) {
        doc["fe_cells"] = json::array();
        for (const auto& c : m.fe_cells)
            doc["fe_cells"].push_back(c.vertices);
    }
    doc["boundary_tags"] = json::object();
    for (const auto& [f, tag] : m.boundary_tags)
        doc["boundary_tags"][std::to_string(f)] = tag;
    return doc.dump(1);
}

}  // namespace sbfem
