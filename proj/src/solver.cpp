#include "sbfem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/SparseCholesky>

#include "sbfem/errors.hpp"
#include "sbfem/parallel.hpp"

namespace sbfem {

Discretization::Discretization(const PolytopalMesh& mesh, int k, const DiscretizationOptions& options)
    : mesh_(&mesh), k_(k), threads_(resolve_threads(options.threads)), dofs_(mesh, k)
{
    selements_.resize(mesh.selements.size());
    parallel_for(mesh.selements.size(), threads_, [&](std::size_t s) {
        const int id = static_cast<int>(s);
        EMatrices E = assemble_E(mesh, dofs_, id, options.e_order);
        E = apply_sideface_bc(E, sideface_bc_for(mesh, dofs_, E, id));
        ModeOptions mo = options.modes;
        mo.label = "S-element " + std::to_string(id);
        SElementData data;
        data.modes = compute_modes(E, mo);
        data.stiffness = element_stiffness(data.modes, mo);
        data.E = std::move(E);
        selements_[s] = std::move(data);
    });
    fe_stiffness_.resize(mesh.fe_cells.size());
    parallel_for(mesh.fe_cells.size(), threads_, [&](std::size_t c) {
        const FeCell& cell = mesh.fe_cells[c];
        std::vector<Point> pts;
        for (int v : cell.vertices)
            pts.push_back(mesh.vertices[v]);
        fe_stiffness_[c] = fe_element_stiffness(cell.kind, pts, k, options.fe_order);
    });
}

TraceInterpolant trace_interpolate(const DofMap& dofs, const ScalarField& f)
{
    TraceInterpolant t;
    t.values.resize(dofs.size());
    for (int i = 0; i < dofs.size(); ++i)
        t.values[i] = f(dofs.node(i));
    return t;
}

DiscreteSolution reconstruct(const Discretization& disc, const Vector& nodal)
{
    DiscreteSolution sol;
    sol.nodal = nodal;
    sol.modal.resize(disc.selements().size());
    for (std::size_t s = 0; s < disc.selements().size(); ++s) {
        const SElementData& se = disc.selements()[s];
        const int N = se.E.size();
        Vector omega(N);
        for (int i = 0; i < N; ++i)
            omega[i] = nodal[se.E.global_nodes[i]];
        sol.modal[s] = se.modes.real_traces.partialPivLu().solve(omega);
    }
    return sol;
}

DiscreteSolution sbfem_interpolate(const Discretization& disc, const ScalarField& f)
{
    return reconstruct(disc, trace_interpolate(disc.dofs(), f).values);
}

GlobalSystem assemble_global(const Discretization& disc)
{
    const int n = disc.dofs().size();
    std::vector<Eigen::Triplet<double>> trip;
    GlobalSystem sys;
    sys.touched.assign(n, 0);
    auto scatter = [&](const Matrix& K, const std::vector<int>& ids) {
        for (std::size_t a = 0; a < ids.size(); ++a) {
            if (ids[a] < 0)
                continue;
            sys.touched[ids[a]] = 1;
            for (std::size_t b = 0; b < ids.size(); ++b)
                if (ids[b] >= 0 && K(a, b) != 0.0)
                    trip.emplace_back(ids[a], ids[b], K(a, b));
        }
    };
    for (const auto& se : disc.selements())
        scatter(se.stiffness.K, se.E.global_nodes);
    for (std::size_t c = 0; c < disc.fe_stiffness().size(); ++c)
        scatter(disc.fe_stiffness()[c], disc.dofs().cell_nodes(static_cast<int>(c)));
    // nodes removed by side-face constraints carry no element contribution
    std::set<int> pinned;
    const PolytopalMesh& mesh = disc.mesh();
    for (const auto& se : mesh.selements)
        for (int v : se.dirichlet_sideface_nodes)
            pinned.insert(disc.dofs().vertex_node(v));
    for (int i = 0; i < n; ++i)
        if (!sys.touched[i] && !pinned.count(i))
            throw AssemblyError("node " + std::to_string(i) + " receives no element contribution");
    sys.K.resize(n, n);
    sys.K.setFromTriplets(trip.begin(), trip.end());
    sys.rhs = Vector::Zero(n);
    sys.values = Vector::Zero(n);
    return sys;
}

void apply_dirichlet(GlobalSystem& sys, const Discretization& disc, const ScalarField& g)
{
    const PolytopalMesh& mesh = disc.mesh();
    for (int f : mesh.boundary_facets()) {
        const std::string tag = mesh.boundary_tag(f);
        if (tag.empty())
            throw ValidationError("boundary facet " + std::to_string(f) + " has no boundary tag");
        if (tag != kDirichletTag && tag != kNeumannTag)
            throw ValidationError("boundary facet " + std::to_string(f) + " has unknown tag \"" + tag + "\"");
    }
    sys.dirichlet = disc.dofs().dirichlet_nodes();
    for (int i : sys.dirichlet)
        sys.values[i] = g(disc.dofs().node(i));
}

void apply_neumann(GlobalSystem& sys, const Discretization& disc,
                   const std::function<double(const Point&, const Point&)>& flux)
{
    const PolytopalMesh& mesh = disc.mesh();
    const int k = disc.degree();
    // owner centroid of every boundary facet, for the outward direction
    std::vector<Point> inside(mesh.facets.size());
    for (const auto& se : mesh.selements)
        for (int f : se.facets)
            inside[f] = se.scaling_center;
    for (const auto& cell : mesh.fe_cells) {
        Point c = Point::Zero(mesh.dimension);
        for (int v : cell.vertices)
            c += mesh.vertices[v];
        c /= static_cast<double>(cell.vertices.size());
        for (int f : cell.facets)
            inside[f] = c;
    }
    for (int f : mesh.boundary_facets()) {
        if (mesh.boundary_tag(f) != kNeumannTag)
            continue;
        const Facet& fac = mesh.facets[f];
        TraceBasis basis(fac.kind, k);
        QuadratureRule rule = facet_quadrature(fac.kind, 2 * k + 6);
        auto pts = mesh.facet_points(f);
        const auto& ids = disc.dofs().facet_nodes(f);
        Point away = mesh.facet_centroid(f) - inside[f];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto fm = facet_map(fac.kind, pts, rule.points[q]);
            Point nrm(mesh.dimension);
            if (mesh.dimension == 2) {
                nrm << fm.grad(1, 0), -fm.grad(0, 0);
            } else {
                nrm = Eigen::Vector3d(fm.grad.col(0)).cross(Eigen::Vector3d(fm.grad.col(1)));
            }
            double jac = nrm.norm();
            nrm /= jac;
            if (nrm.dot(away) < 0)
                nrm = -nrm;
            ShapeValues sv = shape_values(basis, rule.points[q]);
            double g = flux(fm.x, nrm) * rule.weights[q] * jac;
            for (int l = 0; l < basis.cardinality(); ++l)
                sys.rhs[ids[l]] += g * sv.values[l];
        }
    }
}

DiscreteSolution solve(const GlobalSystem& sys, const Discretization& disc)
{
    const int n = static_cast<int>(sys.K.rows());
    std::vector<int> free_index(n, -1);
    std::vector<char> fixed(n, 0);
    for (int i : sys.dirichlet)
        fixed[i] = 1;
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (!fixed[i]) {
            if (!sys.touched[i])
                throw ConditioningError("free node " + std::to_string(i) + " has no stiffness");
            free_index[i] = nf++;
        }
    Vector u = Vector::Zero(n);
    for (int i : sys.dirichlet)
        u[i] = sys.values[i];
    if (nf > 0) {
        std::vector<Eigen::Triplet<double>> trip;
        Vector b(nf);
        for (int i = 0; i < n; ++i)
            if (free_index[i] >= 0)
                b[free_index[i]] = sys.rhs[i];
        for (int c = 0; c < sys.K.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(sys.K, c); it; ++it) {
                int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
                if (free_index[r] < 0)
                    continue;
                if (free_index[col] >= 0)
                    trip.emplace_back(free_index[r], free_index[col], it.value());
                else
                    b[free_index[r]] -= it.value() * u[col];
            }
        SparseMatrix Kff(nf, nf);
        Kff.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(Kff);
        if (ldlt.info() != Eigen::Success)
            throw ConditioningError("sparse factorization failed");
        Vector x = ldlt.solve(b);
        if (ldlt.info() != Eigen::Success || !x.allFinite())
            throw ConditioningError("sparse solve failed");
        if ((ldlt.vectorD().array() <= 0.0).any())
            throw ConditioningError("constrained stiffness is not positive definite");
        double bn = b.norm();
        double residual = (Kff * x - b).norm() / (bn > 0 ? bn : 1.0);
        for (int i = 0; i < n; ++i)
            if (free_index[i] >= 0)
                u[i] = x[free_index[i]];
        DiscreteSolution sol = reconstruct(disc, u);
        sol.residual = residual;
        return sol;
    }
    return reconstruct(disc, u);
}

}  // namespace sbfem
