#include <cmath>

#include "sbfem/errors.hpp"
#include "sbfem/polyspace.hpp"
#include "sbfem/solver.hpp"

namespace sbfem {

Matrix fe_element_stiffness(FacetKind kind, std::span<const Point> vertices, int k, int order)
{
    if (kind == FacetKind::Segment)
        throw DomainError("fe_element_stiffness: 2D cells only");
    if (static_cast<int>(vertices.size()) != vertex_count(kind) || vertices[0].size() != 2)
        throw DomainError("fe_element_stiffness: wrong vertex count or dimension");
    if (order < 0)
        order = 2 * k;
    TraceBasis basis(kind, k);
    QuadratureRule rule = facet_quadrature(kind, std::max(order, 1));
    const int n = basis.cardinality();
    Matrix K = Matrix::Zero(n, n);
    Vector N;
    Matrix dN;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        auto fm = facet_map(kind, vertices, rule.points[q]);
        double det = fm.grad.determinant();
        if (!(det > 0.0))
            throw GeometryError("fe_element_stiffness: inverted or degenerate element");
        shape_values_into(basis, rule.points[q], N, dN);
        Matrix G = fm.grad.inverse().transpose() * dN;  // 2 x n physical gradients
        K.noalias() += (rule.weights[q] * det) * G.transpose() * G;
    }
    return 0.5 * (K + K.transpose());
}

}  // namespace sbfem
