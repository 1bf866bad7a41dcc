#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "sbfem/errors.hpp"
#include "sbfem/mesh.hpp"
#include "sbfem/polyspace.hpp"

namespace sbfem {

namespace {

// Topological owner of a lattice node of a patch (facet or FE cell).
struct NodeKey {
    int type;  // 0 vertex, 1 edge interior, 2 patch interior
    int a, b, c;
    bool operator<(const NodeKey& o) const { return std::tie(type, a, b, c) < std::tie(o.type, o.a, o.b, o.c); }
};

NodeKey edge_key(int from, int to, int pos, int k)
{
    if (from < to)
        return {1, from, to, pos};
    return {1, to, from, k - pos};
}

// Patch vertices follow the reference vertex order of `kind`.
NodeKey classify(FacetKind kind, const std::vector<int>& v, int k, int i, int j, int patch_type, int patch_id,
                 int interior_index)
{
    switch (kind) {
    case FacetKind::Segment:
        if (i == 0)
            return {0, v[0], 0, 0};
        if (i == k)
            return {0, v[1], 0, 0};
        return edge_key(v[0], v[1], i, k);
    case FacetKind::Quadrilateral:
        if (i == 0 && j == 0)
            return {0, v[0], 0, 0};
        if (i == k && j == 0)
            return {0, v[1], 0, 0};
        if (i == k && j == k)
            return {0, v[2], 0, 0};
        if (i == 0 && j == k)
            return {0, v[3], 0, 0};
        if (j == 0)
            return edge_key(v[0], v[1], i, k);
        if (i == k)
            return edge_key(v[1], v[2], j, k);
        if (j == k)
            return edge_key(v[3], v[2], i, k);
        if (i == 0)
            return edge_key(v[0], v[3], j, k);
        break;
    case FacetKind::Triangle:
        if (i == 0 && j == 0)
            return {0, v[0], 0, 0};
        if (i == k && j == 0)
            return {0, v[1], 0, 0};
        if (i == 0 && j == k)
            return {0, v[2], 0, 0};
        if (j == 0)
            return edge_key(v[0], v[1], i, k);
        if (i == 0)
            return edge_key(v[0], v[2], j, k);
        if (i + j == k)
            return edge_key(v[1], v[2], j, k);
        break;
    }
    return {patch_type, patch_id, interior_index, 0};
}

}  // namespace

DofMap::DofMap(const PolytopalMesh& mesh, int k) : mesh_(&mesh), k_(k)
{
    std::map<NodeKey, int> ids;
    vertex_node_.assign(mesh.vertices.size(), -1);
    auto number_patch = [&](FacetKind kind, const std::vector<int>& verts, int patch_type, int patch_id) {
        TraceBasis basis(kind, k);
        std::vector<Point> pts;
        for (int v : verts)
            pts.push_back(mesh.vertices[v]);
        std::vector<int> out;
        for (int l = 0; l < basis.cardinality(); ++l) {
            auto [i, j] = basis.lattice()[l];
            NodeKey key = classify(kind, verts, k, i, j, patch_type, patch_id, l);
            auto it = ids.find(key);
            if (it == ids.end()) {
                int id = static_cast<int>(nodes_.size());
                nodes_.push_back(facet_map(kind, pts, basis.nodes()[l]).x);
                it = ids.emplace(key, id).first;
                if (key.type == 0)
                    vertex_node_[key.a] = id;
            }
            out.push_back(it->second);
        }
        return out;
    };

    for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
        facet_nodes_.push_back(number_patch(mesh.facets[f].kind, mesh.facets[f].vertices, 2, f));
    for (const auto& cell : mesh.fe_cells)
        cell_nodes_.push_back(number_patch(cell.kind, cell.vertices, 3, cell.id));

    for (const auto& se : mesh.selements) {
        std::set<int> s;
        for (int f : se.facets)
            s.insert(facet_nodes_[f].begin(), facet_nodes_[f].end());
        selement_nodes_.emplace_back(s.begin(), s.end());
    }
}

std::vector<int> DofMap::sector_nodes(int selement, int sector) const
{
    const SElement& se = mesh_->selements.at(selement);
    int f = se.facets.at(sector);
    const std::vector<int>& g = facet_nodes_[f];
    if (!se.flipped[sector])
        return g;
    const FacetKind kind = mesh_->facets[f].kind;
    TraceBasis basis(kind, k_);
    std::vector<int> out(g.size());
    for (int l = 0; l < basis.cardinality(); ++l) {
        auto [i, j] = basis.lattice()[l];
        // Segment: j' = k - j. Quad and triangle: swap the lattice axes.
        int src = kind == FacetKind::Segment ? basis.lattice_index(k_ - i, 0) : basis.lattice_index(j, i);
        out[l] = g[src];
    }
    return out;
}

std::vector<int> DofMap::dirichlet_nodes() const
{
    std::set<int> s;
    for (int f : mesh_->boundary_facets())
        if (mesh_->boundary_tag(f) == kDirichletTag)
            s.insert(facet_nodes_[f].begin(), facet_nodes_[f].end());
    return {s.begin(), s.end()};
}

}  // namespace sbfem
