#include "sbfem/ematrix.hpp"

#include <algorithm>
#include <cmath>

#include "sbfem/errors.hpp"

namespace sbfem {

namespace {

void fill_B(const SectorJacobian& jac, const Vector& N, const Matrix& dN, Matrix& B1, Matrix& B2)
{
    const int d = jac.dim;
    const int n = static_cast<int>(N.size());
    SmallMatrix JinvT = jac.J1.inverse().transpose();
    B1.resize(d, n);
    B2.resize(d, n);
    for (int l = 0; l < n; ++l) {
        B1.col(l) = JinvT.col(0) * N[l];
        B2.col(l) = JinvT.rightCols(d - 1) * dN.col(l);
    }
}

}  // namespace

BVectors sector_B(const Sector& sector, const TraceBasis& basis, const Point& eta)
{
    if (basis.facet_kind() != sector.facet_kind)
        throw DomainError("sector_B: basis and sector facet kinds differ");
    SectorJacobian jac = duffy_jacobian(sector, 1.0, eta);
    if (!(jac.detJ1 > 0.0))
        throw GeometryError("sector " + sector.label + ": negative orientation (detJ1 <= 0)");
    ShapeValues sv = shape_values(basis, eta);
    BVectors out;
    out.detJ1 = jac.detJ1;
    fill_B(jac, sv.values, sv.gradients, out.B1, out.B2);
    return out;
}

SectorE sector_E(const Sector& sector, const TraceBasis& basis, const QuadratureRule& rule)
{
    if (basis.facet_kind() != sector.facet_kind)
        throw DomainError("sector_E: basis and sector facet kinds differ");
    const int n = basis.cardinality();
    SectorE e;
    e.E11 = Matrix::Zero(n, n);
    e.E12 = Matrix::Zero(n, n);
    e.E22 = Matrix::Zero(n, n);
    Vector N;
    Matrix dN, B1, B2;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& eta = rule.points[q];
        SectorJacobian jac = duffy_jacobian(sector, 1.0, eta);
        if (!(jac.detJ1 > 0.0))
            throw GeometryError("sector " + sector.label + ": negative orientation (detJ1 <= 0)");
        shape_values_into(basis, eta, N, dN);
        fill_B(jac, N, dN, B1, B2);
        double w = rule.weights[q] * jac.detJ1;
        e.E11.noalias() += w * B1.transpose() * B1;
        e.E12.noalias() += w * B1.transpose() * B2;
        e.E22.noalias() += w * B2.transpose() * B2;
    }
    e.E11 = 0.5 * (e.E11 + e.E11.transpose()).eval();
    e.E22 = 0.5 * (e.E22 + e.E22.transpose()).eval();
    e.E21 = e.E12.transpose();
    return e;
}

int default_e_order(int k)
{
    return 2 * k + 2;
}

EMatrices assemble_E(const PolytopalMesh& mesh, const DofMap& dofs, int s, int order)
{
    const SElement& se = mesh.selements.at(s);
    const int k = dofs.degree();
    if (order < 0)
        order = default_e_order(k);
    EMatrices E;
    E.dimension = mesh.dimension;
    E.global_nodes = dofs.selement_nodes(s);
    const int N = static_cast<int>(E.global_nodes.size());
    E.E11 = Matrix::Zero(N, N);
    E.E12 = Matrix::Zero(N, N);
    E.E22 = Matrix::Zero(N, N);
    auto local_of = [&](int g) {
        auto it = std::lower_bound(E.global_nodes.begin(), E.global_nodes.end(), g);
        if (it == E.global_nodes.end() || *it != g)
            throw AssemblyError("S-element " + std::to_string(s) + ": sector node " + std::to_string(g) +
                                " is not on the scaled boundary");
        return static_cast<int>(it - E.global_nodes.begin());
    };
    for (std::size_t i = 0; i < se.sectors.size(); ++i) {
        const Sector& sector = se.sectors[i];
        TraceBasis basis(sector.facet_kind, k);
        QuadratureRule rule = facet_quadrature(sector.facet_kind, order);
        SectorE e = sector_E(sector, basis, rule);
        std::vector<int> nodes = dofs.sector_nodes(s, static_cast<int>(i));
        std::vector<int> loc;
        for (int g : nodes)
            loc.push_back(local_of(g));
        const int n = static_cast<int>(loc.size());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                E.E11(loc[a], loc[b]) += e.E11(a, b);
                E.E12(loc[a], loc[b]) += e.E12(a, b);
                E.E22(loc[a], loc[b]) += e.E22(a, b);
            }
        E.dof_map.push_back(std::move(loc));
    }
    E.E21 = E.E12.transpose();
    E.closed = !se.open;
    for (int v : se.rim_vertices)
        E.rim.push_back(local_of(dofs.vertex_node(v)));
    std::sort(E.rim.begin(), E.rim.end());
    return E;
}

EMatrices assemble_E(const PolytopalMesh& mesh, int selement, int k)
{
    DofMap dofs(mesh, k);
    return assemble_E(mesh, dofs, selement);
}

}  // namespace sbfem
