#pragma once

#include <array>
#include <vector>

#include "sbfem/refgeom.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

inline constexpr int kMaxDegree = 8;

// Nodal Lagrange basis on equispaced nodes of a reference facet.
//
// Node ordering follows the lattice: Segment j = 0..k; Quadrilateral
// (i, j) -> i + (k+1) j; Triangle rows j = 0..k, i = 0..k-j.
class TraceBasis {
public:
    TraceBasis(FacetKind kind, int degree);

    FacetKind facet_kind() const { return kind_; }
    int degree() const { return k_; }
    int cardinality() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Point>& nodes() const { return nodes_; }
    // Integer lattice coordinates of each node (second entry 0 on segments).
    const std::vector<std::array<int, 2>>& lattice() const { return lattice_; }
    int lattice_index(int i, int j) const;

private:
    FacetKind kind_;
    int k_;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 2>> lattice_;
};

struct ShapeValues {
    Vector values;     // cardinality
    Matrix gradients;  // (d-1) x cardinality
};

ShapeValues shape_values(const TraceBasis& basis, const Point& eta);
// Same as shape_values without the domain check or allocation of a result.
void shape_values_into(const TraceBasis& basis, const Point& eta, Vector& values, Matrix& gradients);

// 1D Lagrange basis on equispaced nodes of [-1,1].
void lagrange_1d(int k, double t, double* values, double* derivatives);

struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    std::size_t size() const { return weights.size(); }
};

// n-point Gauss-Legendre on [-1,1].
QuadratureRule gauss_legendre(int npoints);
// n-point Gauss rule on [0,1] for the weight x^beta, beta > -1.
QuadratureRule gauss_jacobi_unit(int npoints, double beta);

QuadratureRule facet_quadrature(FacetKind kind, int order);

// Rule on [0,1] for integrands of the form x^beta g(x) with g smooth and
// beta = exponent_floor > -1. With composite_levels > 0 the interval is split
// geometrically at ratio^1, ..., ratio^levels; the innermost piece carries
// the x^beta weight exactly when beta < 0. Plain Gauss when
// composite_levels == 0 or exponent_floor >= 1. order is the Gauss point
// count per piece.
QuadratureRule radial_quadrature(double exponent_floor, int order, int composite_levels, double ratio = 0.2);

}  // namespace sbfem
