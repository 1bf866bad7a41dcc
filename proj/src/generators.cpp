#include <cmath>
#include <map>

#include "sbfem/errors.hpp"
#include "sbfem/mesh.hpp"

namespace sbfem {

namespace {

void require_positive(int n, const char* what)
{
    if (n < 1)
        throw DomainError(std::string(what) + ": subdivision count must be >= 1");
}

class GridVertices2D {
public:
    GridVertices2D(int nx, int ny, double x0, double x1, double y0, double y1)
        : x0_(x0), y0_(y0), hx_((x1 - x0) / nx), hy_((y1 - y0) / ny)
    {
    }
    int operator()(int i, int j)
    {
        auto key = std::make_pair(i, j);
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        int id = static_cast<int>(points.size());
        points.push_back(make_point({x0_ + hx_ * i, y0_ + hy_ * j}));
        ids_.emplace(key, id);
        return id;
    }
    std::vector<Point> points;

private:
    double x0_, y0_, hx_, hy_;
    std::map<std::pair<int, int>, int> ids_;
};

class GridVertices3D {
public:
    GridVertices3D(int n, double lo, double hi) : lo_(lo), h_((hi - lo) / n) {}
    int operator()(int i, int j, int k)
    {
        auto key = std::array<int, 3>{i, j, k};
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        int id = static_cast<int>(points.size());
        points.push_back(make_point({lo_ + h_ * i, lo_ + h_ * j, lo_ + h_ * k}));
        ids_.emplace(key, id);
        return id;
    }
    std::vector<Point> points;

private:
    double lo_, h_;
    std::map<std::array<int, 3>, int> ids_;
};

// Boundary loop of the grid rectangle [i0,i1]x[j0,j1] (counter-clockwise),
// with `step` grid units per facet.
std::vector<std::vector<int>> rectangle_loop(GridVertices2D& g, int i0, int j0, int i1, int j1, int step)
{
    std::vector<std::vector<int>> facets;
    for (int i = i0; i < i1; i += step)
        facets.push_back({g(i, j0), g(i + step, j0)});
    for (int j = j0; j < j1; j += step)
        facets.push_back({g(i1, j), g(i1, j + step)});
    for (int i = i1; i > i0; i -= step)
        facets.push_back({g(i, j1), g(i - step, j1)});
    for (int j = j1; j > j0; j -= step)
        facets.push_back({g(i0, j), g(i0, j - step)});
    return facets;
}

// Faces of the grid cube [c, c + size]^3 split into m x m quadrilaterals,
// each listed counter-clockwise seen from outside.
std::vector<std::vector<int>> cube_faces(GridVertices3D& g, int ci, int cj, int ck, int size, int m)
{
    std::vector<std::vector<int>> faces;
    int s = size / m;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            int u0 = a * s, u1 = (a + 1) * s, v0 = b * s, v1 = (b + 1) * s;
            // z = ck (normal -z)
            faces.push_back({g(ci + u0, cj + v0, ck), g(ci + u0, cj + v1, ck), g(ci + u1, cj + v1, ck),
                             g(ci + u1, cj + v0, ck)});
            // z = ck + size (normal +z)
            faces.push_back({g(ci + u0, cj + v0, ck + size), g(ci + u1, cj + v0, ck + size),
                             g(ci + u1, cj + v1, ck + size), g(ci + u0, cj + v1, ck + size)});
            // y = cj (normal -y)
            faces.push_back({g(ci + u0, cj, ck + v0), g(ci + u1, cj, ck + v0), g(ci + u1, cj, ck + v1),
                             g(ci + u0, cj, ck + v1)});
            // y = cj + size
            faces.push_back({g(ci + u0, cj + size, ck + v0), g(ci + u0, cj + size, ck + v1),
                             g(ci + u1, cj + size, ck + v1), g(ci + u1, cj + size, ck + v0)});
            // x = ci (normal -x)
            faces.push_back({g(ci, cj + u0, ck + v0), g(ci, cj + u0, ck + v1), g(ci, cj + u1, ck + v1),
                             g(ci, cj + u1, ck + v0)});
            // x = ci + size
            faces.push_back({g(ci + size, cj + u0, ck + v0), g(ci + size, cj + u1, ck + v0),
                             g(ci + size, cj + u1, ck + v1), g(ci + size, cj + u0, ck + v1)});
        }
    return faces;
}

PolytopalMesh finish(MeshInput in)
{
    PolytopalMesh m = build_mesh(in);
    m.tag_boundary([](const Point&) { return kDirichletTag; });
    return m;
}

}  // namespace

PolytopalMesh gen_quad_mesh(int n, double x0, double x1, double y0, double y1)
{
    require_positive(n, "gen_quad_mesh");
    GridVertices2D g(n, n, x0, x1, y0, y1);
    MeshInput in;
    in.dimension = 2;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            in.selements.push_back({rectangle_loop(g, i, j, i + 1, j + 1, 1), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

PolytopalMesh gen_polygon_case1(int n, double x0, double x1, double y0, double y1)
{
    require_positive(n, "gen_polygon_case1");
    GridVertices2D g(2 * n, 2 * n, x0, x1, y0, y1);
    MeshInput in;
    in.dimension = 2;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            in.selements.push_back({rectangle_loop(g, 2 * i, 2 * j, 2 * i + 2, 2 * j + 2, 1), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

PolytopalMesh gen_hex_mesh(int n, double lo, double hi)
{
    require_positive(n, "gen_hex_mesh");
    GridVertices3D g(n, lo, hi);
    MeshInput in;
    in.dimension = 3;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                in.selements.push_back({cube_faces(g, i, j, k, 1, 1), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

PolytopalMesh gen_polyhedron_case1(int n, double lo, double hi)
{
    require_positive(n, "gen_polyhedron_case1");
    GridVertices3D g(2 * n, lo, hi);
    MeshInput in;
    in.dimension = 3;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                in.selements.push_back({cube_faces(g, 2 * i, 2 * j, 2 * k, 2, 2), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

PolytopalMesh gen_single_square(int n, double half_width)
{
    require_positive(n, "gen_single_square");
    GridVertices2D g(n, n, -half_width, half_width, -half_width, half_width);
    MeshInput in;
    in.dimension = 2;
    in.selements.push_back({rectangle_loop(g, 0, 0, n, n, 1), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

PolytopalMesh gen_single_cube(int n, double lo, double hi)
{
    require_positive(n, "gen_single_cube");
    GridVertices3D g(n, lo, hi);
    MeshInput in;
    in.dimension = 3;
    in.selements.push_back({cube_faces(g, 0, 0, 0, n, n), std::nullopt, {}});
    in.vertices = g.points;
    return finish(in);
}

namespace {

MeshInput open_singular_input(int n, bool constrain_left)
{
    // grid over [-1,1]x[0,1] with spacing 1/n
    GridVertices2D g(2 * n, n, -1.0, 1.0, 0.0, 1.0);
    SElementInput se;
    for (int j = 0; j < n; ++j)
        se.facets.push_back({g(2 * n, j), g(2 * n, j + 1)});
    for (int i = 2 * n; i > 0; --i)
        se.facets.push_back({g(i, n), g(i - 1, n)});
    for (int j = n; j > 0; --j)
        se.facets.push_back({g(0, j), g(0, j - 1)});
    se.center = make_point({0.0, 0.0});
    if (constrain_left)
        se.dirichlet_sideface_nodes = {g(0, 0)};
    MeshInput in;
    in.dimension = 2;
    in.selements.push_back(std::move(se));
    in.vertices = g.points;
    return in;
}

}  // namespace

PolytopalMesh gen_open_singular(int n, bool constrain_left)
{
    require_positive(n, "gen_open_singular");
    PolytopalMesh m = build_mesh(open_singular_input(n, constrain_left));
    m.tag_boundary([](const Point&) { return kDirichletTag; });
    return m;
}

SElement singular_open_selement(int n)
{
    require_positive(n, "singular_open_selement");
    return build_mesh(open_singular_input(n, true)).selements.front();
}

PolytopalMesh gen_coupled_singular(int level, const std::string& outer_tag)
{
    if (level < 1)
        throw DomainError("gen_coupled_singular: level must be >= 1");
    const int m = 1 << level;  // cells per unit length
    // grid over [-1,1]x[0,1]; S region = [-m/2, m/2] x [0, m/2] in cell units
    GridVertices2D g(2 * m, m, -1.0, 1.0, 0.0, 1.0);
    const int s0 = m / 2, s1 = 3 * m / 2, st = m / 2;
    MeshInput in;
    in.dimension = 2;
    SElementInput se;
    for (int j = 0; j < st; ++j)
        se.facets.push_back({g(s1, j), g(s1, j + 1)});
    for (int i = s1; i > s0; --i)
        se.facets.push_back({g(i, st), g(i - 1, st)});
    for (int j = st; j > 0; --j)
        se.facets.push_back({g(s0, j), g(s0, j - 1)});
    se.center = make_point({0.0, 0.0});
    se.dirichlet_sideface_nodes = {g(s0, 0)};
    in.selements.push_back(std::move(se));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < 2 * m; ++i) {
            if (i >= s0 && i < s1 && j < st)
                continue;
            in.fe_cells.push_back({g(i, j), g(i + 1, j), g(i + 1, j + 1), g(i, j + 1)});
        }
    in.vertices = g.points;
    PolytopalMesh mesh = build_mesh(in);
    mesh.tag_boundary([&](const Point& c) {
        if (std::abs(c[1]) < 1e-12)
            return c[0] < 0.0 ? kDirichletTag : kNeumannTag;
        return outer_tag;
    });
    return mesh;
}

}  // namespace sbfem
