#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbfem/refgeom.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

inline const std::string kDirichletTag = "dirichlet";
inline const std::string kNeumannTag = "neumann";

// A codimension-one entity of the skeleton. The vertex order of the first
// owner defines the facet's reference parametrization.
struct Facet {
    std::vector<int> vertices;
    FacetKind kind = FacetKind::Segment;
};

struct SElement {
    int id = 0;
    Point scaling_center;
    std::vector<int> facets;
    // flipped[i]: sector i runs the reversed parametrization of facets[i].
    std::vector<bool> flipped;
    std::vector<Sector> sectors;
    std::vector<int> dirichlet_sideface_nodes;  // vertex ids
    bool open = false;
    std::vector<int> rim_vertices;  // vertices on side faces of an open boundary
};

// Standard 2D finite element cell used next to S-elements (coupled mode).
struct FeCell {
    int id = 0;
    FacetKind kind = FacetKind::Quadrilateral;  // Quadrilateral: Q_k, Triangle: P_k
    std::vector<int> vertices;                  // counter-clockwise
    std::vector<int> facets;                    // edge i joins vertices i, i+1
};

class PolytopalMesh {
public:
    int dimension = 2;
    std::vector<Point> vertices;
    std::vector<Facet> facets;
    std::vector<SElement> selements;
    std::vector<FeCell> fe_cells;
    std::map<int, std::string> boundary_tags;
    std::vector<int> facet_use_count;

    bool is_boundary_facet(int f) const { return facet_use_count[f] == 1; }
    std::vector<int> boundary_facets() const;
    // Tag or empty string.
    std::string boundary_tag(int f) const;
    std::vector<Point> facet_points(int f) const;
    Point facet_centroid(int f) const;
    // Sets the tag of every boundary facet from its centroid.
    void tag_boundary(const std::function<std::string(const Point&)>& tagger);
};

struct SElementInput {
    std::vector<std::vector<int>> facets;
    std::optional<Point> center;
    std::vector<int> dirichlet_sideface_nodes;
};

struct MeshInput {
    int dimension = 2;
    std::vector<Point> vertices;
    std::vector<SElementInput> selements;
    std::vector<std::vector<int>> fe_cells;
    std::map<int, std::string> boundary_tags;
};

// Deduplicates facets, sectorizes, and validates conformity, planarity and
// the star-shape condition. Throws ValidationError naming the element.
PolytopalMesh build_mesh(const MeshInput& input);
MeshInput to_input(const PolytopalMesh& mesh);

// Generators. Every boundary facet is tagged Dirichlet.
PolytopalMesh gen_quad_mesh(int n, double x0 = -1.0, double x1 = 1.0, double y0 = -1.0, double y1 = 1.0);
PolytopalMesh gen_polygon_case1(int n, double x0 = -1.0, double x1 = 1.0, double y0 = -1.0, double y1 = 1.0);
PolytopalMesh gen_hex_mesh(int n, double lo = 0.0, double hi = 1.0);
PolytopalMesh gen_polyhedron_case1(int n, double lo = 0.0, double hi = 1.0);
// Single S-element on [-1,1]^2 (or the given box) with n facets per side.
PolytopalMesh gen_single_square(int n, double half_width = 1.0);
// Single S-element on [lo,hi]^3 with n x n facets per face.
PolytopalMesh gen_single_cube(int n, double lo = 0.0, double hi = 1.0);
// Open S-element over [-1,1]x[0,1] centred at the origin: n facets on each
// vertical side, 2n on the top; the trace at (-1,0) is Dirichlet-constrained.
PolytopalMesh gen_open_singular(int n, bool constrain_left = true);
SElement singular_open_selement(int n);
// S-element [-0.5,0.5]x[0,0.5] centred at the origin inside a uniform Q_k
// mesh of [-1,1]x[0,1] with h = 2^-level. Bottom edges are Dirichlet for
// x < 0 and Neumann for x > 0; the other sides get outer_tag.
PolytopalMesh gen_coupled_singular(int level, const std::string& outer_tag = kDirichletTag);

// JSON mesh format (see README).
PolytopalMesh import_mesh(const std::string& path);
PolytopalMesh import_mesh_json(const std::string& text);
std::string export_mesh_json(const PolytopalMesh& mesh);

// Global trace/FE node numbering for degree k. Nodes are keyed by topology:
// vertices, edge interiors (sorted vertex pair, ordered from the lower id),
// facet interiors (global facet lattice) and FE cell interiors.
class DofMap {
public:
    DofMap(const PolytopalMesh& mesh, int k);

    int degree() const { return k_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const Point& node(int i) const { return nodes_[i]; }
    const std::vector<Point>& nodes() const { return nodes_; }
    // Global node ids of a facet in the facet's own lattice order.
    const std::vector<int>& facet_nodes(int f) const { return facet_nodes_[f]; }
    // Global node ids in the lattice order of a sector's parametrization.
    std::vector<int> sector_nodes(int selement, int sector) const;
    const std::vector<int>& cell_nodes(int c) const { return cell_nodes_[c]; }
    // Sorted global node ids on the scaled boundary of an S-element.
    const std::vector<int>& selement_nodes(int s) const { return selement_nodes_[s]; }
    int vertex_node(int v) const { return vertex_node_[v]; }
    // Nodes on boundary facets tagged Dirichlet.
    std::vector<int> dirichlet_nodes() const;
    const PolytopalMesh& mesh() const { return *mesh_; }

private:
    const PolytopalMesh* mesh_;
    int k_;
    std::vector<Point> nodes_;
    std::vector<std::vector<int>> facet_nodes_;
    std::vector<std::vector<int>> cell_nodes_;
    std::vector<std::vector<int>> selement_nodes_;
    std::vector<int> vertex_node_;
};

}  // namespace sbfem
