#include "sbfem/study.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sbfem/errors.hpp"

namespace sbfem {

const std::string& default_outer_bc()
{
    static const std::string bc = kDirichletTag;
    return bc;
}

PolytopalMesh make_mesh(const std::string& name, int level, const std::string& outer_bc)
{
    if (name.rfind("file:", 0) == 0)
        return import_mesh(name.substr(5));
    if (level < 0 || level > 12)
        throw DomainError("refinement level " + std::to_string(level) + " out of range");
    if (name == "quad")
        return gen_quad_mesh(1 << (level + 1));
    if (name == "polygon1")
        return gen_polygon_case1(1 << level);
    if (name == "hex")
        return gen_hex_mesh(1 << level);
    if (name == "polyhedron1") {
        if (level < 1)
            throw DomainError("polyhedron1 starts at level 1");
        return gen_polyhedron_case1(1 << (level - 1));
    }
    if (name == "single-square")
        return gen_single_square(1 << level);
    if (name == "single-cube")
        return gen_single_cube(1 << level);
    if (name == "open-singular")
        return gen_open_singular(1 << level);
    if (name == "coupled-singular") {
        if (level < 1)
            throw DomainError("coupled-singular starts at level 1");
        const std::string& bc = outer_bc.empty() ? default_outer_bc() : outer_bc;
        if (bc != kDirichletTag && bc != kNeumannTag)
            throw DomainError("outer_bc must be dirichlet or neumann");
        return gen_coupled_singular(level, bc);
    }
    throw DomainError("unknown mesh \"" + name + "\"");
}

double mesh_size(const std::string& name, int level, const PolytopalMesh& mesh)
{
    if (name == "quad")
        return 2.0 / (1 << (level + 1));
    if (name == "single-square")
        return 2.0 / (1 << level);
    // case-1 polytopes: facet width
    if (name == "polygon1" || name == "polyhedron1" || name == "hex" || name == "single-cube" ||
        name == "open-singular" || name == "coupled-singular")
        return 1.0 / (1 << level);
    // largest S-element or cell diameter
    double h = 0.0;
    auto diameter = [&](const std::vector<int>& verts) {
        double dmax = 0.0;
        for (int a : verts)
            for (int b : verts)
                dmax = std::max(dmax, (mesh.vertices[a] - mesh.vertices[b]).norm());
        return dmax;
    };
    for (const auto& se : mesh.selements) {
        std::set<int> vs;
        for (int f : se.facets)
            vs.insert(mesh.facets[f].vertices.begin(), mesh.facets[f].vertices.end());
        h = std::max(h, diameter({vs.begin(), vs.end()}));
    }
    for (const auto& c : mesh.fe_cells)
        h = std::max(h, diameter(c.vertices));
    return h;
}

int first_level(const std::string& name)
{
    return name == "polyhedron1" || name == "coupled-singular" ? 1 : 0;
}

std::string default_problem(const std::string& mesh_name)
{
    if (mesh_name == "hex" || mesh_name == "polyhedron1" || mesh_name == "single-cube")
        return "exp3d";
    if (mesh_name == "coupled-singular" || mesh_name == "open-singular")
        return "sqrt2d";
    return "exp2d";
}

namespace {

DiscretizationOptions discretization_options(const RunConfig& c)
{
    DiscretizationOptions o;
    o.e_order = c.e_order;
    o.threads = c.threads;
    o.modes.zero_tol = c.zero_tol;
    o.modes.condition_cap = c.condition_cap;
    return o;
}

}  // namespace

CaseResult run_case(const RunConfig& config, int level, int k, bool galerkin)
{
    PolytopalMesh mesh = make_mesh(config.mesh, level, config.outer_bc);
    const ExactSolution& exact =
        exact_solution(config.problem.empty() ? default_problem(config.mesh) : config.problem);
    Discretization disc(mesh, k, discretization_options(config));
    DiscreteSolution sol;
    if (galerkin) {
        GlobalSystem sys = assemble_global(disc);
        apply_dirichlet(sys, disc, exact.value);
        apply_neumann(sys, disc, [&](const Point& x, const Point& n) { return exact.gradient(x).dot(n); });
        sol = solve(sys, disc);
    } else {
        sol = sbfem_interpolate(disc, exact.value);
    }
    CaseResult r;
    r.errors = compute_errors(sol, exact, disc, config.quadrature);
    r.residual = sol.residual;
    r.row = {level, mesh_size(config.mesh, level, mesh), disc.dofs().size(), r.errors.l2, r.errors.h1};
    return r;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse integer list \"" + text + "\"");
        }
    };
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(item));
            continue;
        }
        int a = to_int(item.substr(0, dots)), b = to_int(item.substr(dots + 2));
        if (b < a)
            throw ConfigError("empty range \"" + item + "\"");
        for (int v = a; v <= b; ++v)
            out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty integer list");
    return out;
}

RunConfig parse_config_json(const std::string& text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config: top level must be an object");
    RunConfig c;
    auto ints = [&](const json& v, const std::string& key) {
        if (v.is_number_integer())
            return std::vector<int>{v.get<int>()};
        if (v.is_string())
            return parse_int_list(v.get<std::string>());
        if (v.is_array()) {
            std::vector<int> out;
            for (const auto& x : v) {
                if (!x.is_number_integer())
                    throw ConfigError("config: \"" + key + "\" must hold integers");
                out.push_back(x.get<int>());
            }
            return out;
        }
        throw ConfigError("config: \"" + key + "\" must be an integer, list or range");
    };
    auto str = [&](const json& v, const std::string& key) {
        if (!v.is_string())
            throw ConfigError("config: \"" + key + "\" must be a string");
        return v.get<std::string>();
    };
    auto num = [&](const json& v, const std::string& key) {
        if (!v.is_number())
            throw ConfigError("config: \"" + key + "\" must be a number");
        return v.get<double>();
    };
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "command")
            c.command = str(v, key);
        else if (key == "mesh")
            c.mesh = str(v, key);
        else if (key == "k")
            c.k = ints(v, key);
        else if (key == "levels" || key == "level")
            c.levels = ints(v, key);
        else if (key == "problem")
            c.problem = str(v, key);
        else if (key == "method")
            c.method = str(v, key);
        else if (key == "outer_bc")
            c.outer_bc = str(v, key);
        else if (key == "output")
            c.output = str(v, key);
        else if (key == "threads")
            c.threads = static_cast<int>(num(v, key));
        else if (key == "e_order")
            c.e_order = static_cast<int>(num(v, key));
        else if (key == "facet_order")
            c.quadrature.facet_order = static_cast<int>(num(v, key));
        else if (key == "radial_order")
            c.quadrature.radial_order = static_cast<int>(num(v, key));
        else if (key == "radial_levels")
            c.quadrature.radial_levels = static_cast<int>(num(v, key));
        else if (key == "radial_ratio")
            c.quadrature.radial_ratio = num(v, key);
        else if (key == "zero_tol")
            c.zero_tol = num(v, key);
        else if (key == "condition_cap")
            c.condition_cap = num(v, key);
        else
            throw ConfigError("config: unknown key \"" + key + "\"");
    }
    return c;
}

RunConfig load_config_file(const std::string& path)
{
    std::ifstream file(path);
    if (!file)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream os;
    os << file.rdbuf();
    return parse_config_json(os.str());
}

namespace {

void validate(const RunConfig& c)
{
    static const std::set<std::string> commands = {"modes", "interp", "solve", "convergence"};
    if (!commands.count(c.command))
        throw ConfigError("unknown command \"" + c.command + "\"");
    for (int k : c.k)
        if (k < 1)
            throw ConfigError("k must be >= 1");
    if (c.method != "galerkin" && c.method != "interp")
        throw ConfigError("method must be galerkin or interp");
    if (c.command == "convergence" && c.levels.size() < 2)
        throw ConfigError("convergence needs at least two levels");
}

void emit(const RunConfig& c, const std::string& text, const std::string& suffix, std::ostream& out)
{
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::filesystem::path path = c.output;
    if (!suffix.empty())
        path.replace_filename(path.stem().string() + suffix + path.extension().string());
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file)
        throw Error("cannot write " + path.string());
    file << text;
}

std::string modes_csv(const Discretization& disc)
{
    std::ostringstream os;
    char buf[96];
    os << "re,im,selected\n";
    for (std::size_t s = 0; s < disc.selements().size(); ++s) {
        const SbfemModes& m = disc.selements()[s].modes;
        if (disc.selements().size() > 1)
            os << "# selement=" << s << '\n';
        std::vector<int> order(m.spectrum.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (m.spectrum[a].real() != m.spectrum[b].real())
                return m.spectrum[a].real() < m.spectrum[b].real();
            return m.spectrum[a].imag() < m.spectrum[b].imag();
        });
        for (int i : order) {
            std::snprintf(buf, sizeof buf, "%.10e,%.10e,%d\n", m.spectrum[i].real(), m.spectrum[i].imag(),
                          m.selected[i] ? 1 : 0);
            os << buf;
        }
    }
    return os.str();
}

}  // namespace

int run(const RunConfig& input, std::ostream& out, std::ostream& err)
{
    RunConfig config = input;
    try {
        validate(config);
        if (config.levels.empty())
            config.levels.push_back(first_level(config.mesh));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        if (config.command == "modes") {
            PolytopalMesh mesh = make_mesh(config.mesh, config.levels.front(), config.outer_bc);
            Discretization disc(mesh, config.k.front(), discretization_options(config));
            emit(config, modes_csv(disc), "", out);
            return 0;
        }
        if (config.command == "interp" || config.command == "solve") {
            bool galerkin = config.command == "solve";
            std::string text;
            for (int k : config.k) {
                CaseResult r = run_case(config, config.levels.front(), k, galerkin);
                ErrorReport rep;
                rep.rows.push_back(r.row);
                if (config.k.size() > 1)
                    text += "# k=" + std::to_string(k) + "\n";
                text += rep.to_csv();
            }
            emit(config, text, "", out);
            return 0;
        }
        bool galerkin = config.method == "galerkin";
        for (int k : config.k) {
            std::vector<ErrorRow> rows;
            for (int level : config.levels)
                rows.push_back(run_case(config, level, k, galerkin).row);
            ErrorReport rep = convergence_table(rows);
            std::string text = rep.to_csv();
            if (config.output.empty() && config.k.size() > 1)
                text = "# k=" + std::to_string(k) + "\n" + text;
            emit(config, text, "_k" + std::to_string(k), out);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sbfem
