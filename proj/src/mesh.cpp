#include "sbfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "sbfem/errors.hpp"
#include "sbfem/polyspace.hpp"

namespace sbfem {

std::vector<int> PolytopalMesh::boundary_facets() const
{
    std::vector<int> out;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f)
        if (is_boundary_facet(f))
            out.push_back(f);
    return out;
}

std::string PolytopalMesh::boundary_tag(int f) const
{
    auto it = boundary_tags.find(f);
    return it == boundary_tags.end() ? std::string() : it->second;
}

std::vector<Point> PolytopalMesh::facet_points(int f) const
{
    std::vector<Point> pts;
    for (int v : facets[f].vertices)
        pts.push_back(vertices[v]);
    return pts;
}

Point PolytopalMesh::facet_centroid(int f) const
{
    Point c = Point::Zero(dimension);
    for (int v : facets[f].vertices)
        c += vertices[v];
    return c / static_cast<double>(facets[f].vertices.size());
}

void PolytopalMesh::tag_boundary(const std::function<std::string(const Point&)>& tagger)
{
    for (int f : boundary_facets())
        boundary_tags[f] = tagger(facet_centroid(f));
}

namespace {

std::vector<int> sorted_key(const std::vector<int>& v)
{
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    return s;
}

FacetKind facet_kind_for(int dimension, std::size_t nverts, const std::string& where)
{
    if (dimension == 2 && nverts == 2)
        return FacetKind::Segment;
    if (dimension == 3 && nverts == 3)
        return FacetKind::Triangle;
    if (dimension == 3 && nverts == 4)
        return FacetKind::Quadrilateral;
    throw ValidationError(where + ": facet with " + std::to_string(nverts) + " vertices is not supported in " +
                          std::to_string(dimension) + "D (segments, triangles or quadrilaterals only)");
}

// Same cyclic order (0), reversed cyclic order (1), or unrelated (-1).
int orientation_relation(const std::vector<int>& a, const std::vector<int>& b)
{
    const std::size_t n = a.size();
    if (b.size() != n)
        return -1;
    if (n == 2)
        return a == b ? 0 : (a[0] == b[1] && a[1] == b[0] ? 1 : -1);
    auto pos = std::find(b.begin(), b.end(), a[0]) - b.begin();
    if (static_cast<std::size_t>(pos) == n)
        return -1;
    bool same = true, rev = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[(pos + i) % n])
            same = false;
        if (a[i] != b[(pos + n - i) % n])
            rev = false;
    }
    return same ? 0 : (rev ? 1 : -1);
}

std::vector<int> flipped_order(const std::vector<int>& v)
{
    if (v.size() == 2)
        return {v[1], v[0]};
    if (v.size() == 3)
        return {v[0], v[2], v[1]};
    return {v[0], v[3], v[2], v[1]};
}

// Oriented sub-entities of a facet boundary: endpoints (2D) or edges (3D),
// each with the sorted key and a sign for the facet's orientation.
std::vector<std::pair<std::vector<int>, int>> boundary_of(const std::vector<int>& f)
{
    std::vector<std::pair<std::vector<int>, int>> out;
    if (f.size() == 2) {
        out.push_back({{f[0]}, -1});
        out.push_back({{f[1]}, +1});
        return out;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        int a = f[i], b = f[(i + 1) % f.size()];
        out.push_back({{std::min(a, b), std::max(a, b)}, a < b ? +1 : -1});
    }
    return out;
}

double sector_det(const PolytopalMesh& m, const Point& center, const std::vector<int>& verts, FacetKind kind,
                  const Point& eta)
{
    std::vector<Point> pts;
    for (int v : verts)
        pts.push_back(m.vertices[v]);
    auto fl = facet_map(kind, pts, eta);
    const int d = m.dimension;
    SmallMatrix J(d, d);
    J.col(0) = fl.x - center;
    J.rightCols(d - 1) = fl.grad;
    return J.determinant();
}

void check_planarity(const PolytopalMesh& m, int f)
{
    const auto& vs = m.facets[f].vertices;
    if (vs.size() != 4)
        return;
    const Point& p0 = m.vertices[vs[0]];
    Eigen::Vector3d a = (m.vertices[vs[1]] - p0), b = (m.vertices[vs[3]] - p0);
    Eigen::Vector3d nrm = a.cross(b);
    double size = std::max(a.norm(), b.norm());
    if (nrm.norm() <= 1e-14 * size * size)
        throw ValidationError("facet " + std::to_string(f) + ": degenerate quadrilateral");
    Eigen::Vector3d c = m.vertices[vs[2]] - p0;
    double dist = std::abs(nrm.normalized().dot(c));
    if (dist > 1e-8 * size)
        throw ValidationError("facet " + std::to_string(f) + ": quadrilateral is not planar (off-plane distance " +
                              std::to_string(dist) + ")");
}

bool point_inside_facet(const PolytopalMesh& m, int f, const Point& x)
{
    const auto& fac = m.facets[f];
    auto pts = m.facet_points(f);
    double size = 0.0;
    for (const auto& p : pts)
        size = std::max(size, (p - pts[0]).norm());
    const double tol = 1e-9 * size;
    if (fac.kind == FacetKind::Segment) {
        Point e = pts[1] - pts[0];
        double t = (x - pts[0]).dot(e) / e.squaredNorm();
        if (t <= 1e-9 || t >= 1 - 1e-9)
            return false;
        return (pts[0] + t * e - x).norm() <= tol;
    }
    // split into triangles and test barycentric coordinates
    std::vector<std::array<int, 3>> tris = {{0, 1, 2}};
    if (pts.size() == 4)
        tris.push_back({0, 2, 3});
    Eigen::Vector3d n = Eigen::Vector3d(pts[1] - pts[0]).cross(Eigen::Vector3d(pts[2] - pts[0])).normalized();
    if (std::abs(n.dot(Eigen::Vector3d(x - pts[0]))) > tol)
        return false;
    for (auto& t : tris) {
        Eigen::Vector3d a = pts[t[0]], b = pts[t[1]], c = pts[t[2]], p = x;
        Eigen::Matrix<double, 3, 2> M;
        M.col(0) = b - a;
        M.col(1) = c - a;
        Eigen::Vector2d lam = M.colPivHouseholderQr().solve(p - a);
        if (lam[0] >= -1e-9 && lam[1] >= -1e-9 && lam[0] + lam[1] <= 1 + 1e-9)
            return true;
    }
    return false;
}

}  // namespace

PolytopalMesh build_mesh(const MeshInput& in)
{
    PolytopalMesh m;
    if (in.dimension != 2 && in.dimension != 3)
        throw ValidationError("mesh dimension must be 2 or 3");
    m.dimension = in.dimension;
    m.vertices = in.vertices;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        if (m.vertices[v].size() != m.dimension || !m.vertices[v].allFinite())
            throw ValidationError("vertex " + std::to_string(v) + ": expected " + std::to_string(m.dimension) +
                                  " finite coordinates");
    if (in.selements.empty() && in.fe_cells.empty())
        throw ValidationError("mesh has no elements");
    if (!in.fe_cells.empty() && m.dimension != 2)
        throw ValidationError("finite element cells are supported in 2D only");

    const int nv = static_cast<int>(m.vertices.size());
    std::map<std::vector<int>, int> facet_index;
    auto register_facet = [&](const std::vector<int>& verts, const std::string& where) {
        for (int v : verts)
            if (v < 0 || v >= nv)
                throw ValidationError(where + ": vertex index " + std::to_string(v) + " out of range");
        auto key = sorted_key(verts);
        if (std::adjacent_find(key.begin(), key.end()) != key.end())
            throw ValidationError(where + ": repeated vertex in facet");
        auto it = facet_index.find(key);
        if (it != facet_index.end()) {
            if (orientation_relation(verts, m.facets[it->second].vertices) < 0)
                throw ValidationError(where + ": facet vertex order does not match its neighbour");
            m.facet_use_count[it->second]++;
            return it->second;
        }
        int id = static_cast<int>(m.facets.size());
        m.facets.push_back({verts, facet_kind_for(m.dimension, verts.size(), where)});
        m.facet_use_count.push_back(1);
        facet_index.emplace(key, id);
        return id;
    };

    for (std::size_t s = 0; s < in.selements.size(); ++s) {
        const auto& se = in.selements[s];
        const std::string where = "S-element " + std::to_string(s);
        if (se.facets.empty())
            throw ValidationError(where + ": no facets");
        SElement out;
        out.id = static_cast<int>(s);
        std::set<std::vector<int>> seen;
        for (const auto& f : se.facets) {
            if (!seen.insert(sorted_key(f)).second)
                throw ValidationError(where + ": facet listed twice");
            out.facets.push_back(register_facet(f, where));
        }
        out.dirichlet_sideface_nodes = se.dirichlet_sideface_nodes;
        std::set<int> verts;
        for (int f : out.facets)
            verts.insert(m.facets[f].vertices.begin(), m.facets[f].vertices.end());
        if (se.center) {
            if (se.center->size() != m.dimension || !se.center->allFinite())
                throw ValidationError(where + ": invalid scaling center");
            out.scaling_center = *se.center;
        } else {
            out.scaling_center = Point::Zero(m.dimension);
            for (int v : verts)
                out.scaling_center += m.vertices[v];
            out.scaling_center /= static_cast<double>(verts.size());
        }
        m.selements.push_back(std::move(out));
    }

    for (std::size_t c = 0; c < in.fe_cells.size(); ++c) {
        const auto& cv = in.fe_cells[c];
        const std::string where = "FE cell " + std::to_string(c);
        if (cv.size() != 3 && cv.size() != 4)
            throw ValidationError(where + ": only triangles and quadrilaterals are supported");
        FeCell cell;
        cell.id = static_cast<int>(c);
        cell.kind = cv.size() == 4 ? FacetKind::Quadrilateral : FacetKind::Triangle;
        cell.vertices = cv;
        for (int v : cv)
            if (v < 0 || v >= nv)
                throw ValidationError(where + ": vertex index out of range");
        double area = 0.0;
        for (std::size_t i = 0; i < cv.size(); ++i) {
            const Point& a = m.vertices[cv[i]];
            const Point& b = m.vertices[cv[(i + 1) % cv.size()]];
            area += a[0] * b[1] - a[1] * b[0];
        }
        if (area < 0)
            std::reverse(cell.vertices.begin() + 1, cell.vertices.end());
        if (std::abs(area) < 1e-14)
            throw ValidationError(where + ": degenerate cell");
        for (std::size_t i = 0; i < cell.vertices.size(); ++i)
            cell.facets.push_back(
                register_facet({cell.vertices[i], cell.vertices[(i + 1) % cell.vertices.size()]}, where));
        m.fe_cells.push_back(std::move(cell));
    }

    for (int f = 0; f < static_cast<int>(m.facets.size()); ++f) {
        if (m.facet_use_count[f] > 2)
            throw ValidationError("facet " + std::to_string(f) + " is shared by " +
                                  std::to_string(m.facet_use_count[f]) + " elements (non-conforming)");
        if (m.dimension == 3)
            check_planarity(m, f);
    }

    // Hanging vertices reveal non-conforming interfaces.
    {
        std::vector<char> used(nv, 0);
        for (const auto& f : m.facets)
            for (int v : f.vertices)
                used[v] = 1;
        for (int f = 0; f < static_cast<int>(m.facets.size()); ++f) {
            auto pts = m.facet_points(f);
            Point lo = pts[0], hi = pts[0];
            for (const auto& p : pts) {
                lo = lo.cwiseMin(p);
                hi = hi.cwiseMax(p);
            }
            double pad = 1e-9 * (hi - lo).norm();
            const auto& fv = m.facets[f].vertices;
            for (int v = 0; v < nv; ++v) {
                if (!used[v] || std::find(fv.begin(), fv.end(), v) != fv.end())
                    continue;
                const Point& x = m.vertices[v];
                if (((x - lo).array() < -pad).any() || ((x - hi).array() > pad).any())
                    continue;
                if (point_inside_facet(m, f, x))
                    throw ValidationError("vertex " + std::to_string(v) + " hangs on facet " + std::to_string(f) +
                                          " (non-conforming interface)");
            }
        }
    }

    // Orient each scaled boundary consistently and sectorize.
    for (auto& se : m.selements) {
        const std::string where = "S-element " + std::to_string(se.id);
        const int nf = static_cast<int>(se.facets.size());
        std::vector<std::vector<int>> oriented(nf);
        for (int i = 0; i < nf; ++i)
            oriented[i] = m.facets[se.facets[i]].vertices;
        std::map<std::vector<int>, std::vector<int>> users;
        for (int i = 0; i < nf; ++i)
            for (auto& [key, sign] : boundary_of(oriented[i]))
                users[key].push_back(i);
        for (auto& [key, list] : users)
            if (list.size() > 2)
                throw ValidationError(where + ": scaled boundary is not a manifold");
        std::vector<int> state(nf, -1);  // -1 unvisited
        int components = 0;
        for (int start = 0; start < nf; ++start) {
            if (state[start] >= 0)
                continue;
            ++components;
            state[start] = 0;
            std::deque<int> queue{start};
            while (!queue.empty()) {
                int i = queue.front();
                queue.pop_front();
                for (auto& [key, sign] : boundary_of(oriented[i])) {
                    for (int j : users[key]) {
                        if (j == i)
                            continue;
                        int sj = 0;
                        for (auto& [kj, s2] : boundary_of(oriented[j]))
                            if (kj == key)
                                sj = s2;
                        bool consistent = (sj == -sign);
                        if (state[j] < 0) {
                            if (!consistent)
                                oriented[j] = flipped_order(oriented[j]);
                            state[j] = 0;
                            queue.push_back(j);
                        } else if (!consistent) {
                            throw ValidationError(where + ": scaled boundary is not orientable");
                        }
                    }
                }
            }
        }
        if (components != 1)
            throw ValidationError(where + ": scaled boundary is not connected");
        for (auto& [key, list] : users)
            if (list.size() == 1) {
                se.open = true;
                se.rim_vertices.insert(se.rim_vertices.end(), key.begin(), key.end());
            }
        std::sort(se.rim_vertices.begin(), se.rim_vertices.end());
        se.rim_vertices.erase(std::unique(se.rim_vertices.begin(), se.rim_vertices.end()), se.rim_vertices.end());
        for (int v : se.dirichlet_sideface_nodes)
            if (!std::binary_search(se.rim_vertices.begin(), se.rim_vertices.end(), v))
                throw ValidationError(where + ": Dirichlet side-face node " + std::to_string(v) +
                                      " is not on a side face of the scaled boundary");

        double total = 0.0;
        for (int i = 0; i < nf; ++i) {
            FacetKind kind = m.facets[se.facets[i]].kind;
            total += sector_det(m, se.scaling_center, oriented[i], kind, reference_centroid(kind)) *
                     reference_measure(kind);
        }
        if (total < 0)
            for (auto& o : oriented)
                o = flipped_order(o);

        for (int i = 0; i < nf; ++i) {
            const Facet& fac = m.facets[se.facets[i]];
            int rel = orientation_relation(oriented[i], fac.vertices);
            bool flip = rel == 1;
            std::vector<int> order = flip ? flipped_order(fac.vertices) : fac.vertices;
            // star-shape check on a sample of facet points
            QuadratureRule probe = facet_quadrature(fac.kind, 7);
            std::vector<Point> samples = probe.points;
            TraceBasis corners(fac.kind, 1);
            for (const auto& c : corners.nodes())
                samples.push_back(c);
            double scale = 0.0;
            for (int v : order)
                scale = std::max(scale, (m.vertices[v] - se.scaling_center).norm());
            for (const auto& eta : samples) {
                double det = sector_det(m, se.scaling_center, order, fac.kind, eta);
                if (!(det > 1e-12 * std::pow(scale, m.dimension)))
                    throw ValidationError(where + " is not star-shaped with respect to its scaling center (facet " +
                                          std::to_string(se.facets[i]) + ")");
            }
            std::vector<Point> pts;
            for (int v : order)
                pts.push_back(m.vertices[v]);
            se.flipped.push_back(flip);
            se.sectors.emplace_back(se.scaling_center, std::move(pts), fac.kind,
                                    std::to_string(se.id) + ":" + std::to_string(i));
        }
    }

    for (auto& [f, tag] : in.boundary_tags) {
        if (f < 0 || f >= static_cast<int>(m.facets.size()))
            throw ValidationError("boundary tag for unknown facet " + std::to_string(f));
        if (!m.is_boundary_facet(f))
            throw ValidationError("boundary tag on interior facet " + std::to_string(f));
        m.boundary_tags[f] = tag;
    }
    return m;
}

MeshInput to_input(const PolytopalMesh& m)
{
    MeshInput in;
    in.dimension = m.dimension;
    in.vertices = m.vertices;
    for (const auto& se : m.selements) {
        SElementInput s;
        for (int f : se.facets)
            s.facets.push_back(m.facets[f].vertices);
        s.center = se.scaling_center;
        s.dirichlet_sideface_nodes = se.dirichlet_sideface_nodes;
        in.selements.push_back(std::move(s));
    }
    for (const auto& c : m.fe_cells)
        in.fe_cells.push_back(c.vertices);
    in.boundary_tags = m.boundary_tags;
    return in;
}

}  // namespace sbfem
