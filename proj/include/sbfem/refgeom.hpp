#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbfem/types.hpp"

namespace sbfem {

// Reference domains: Segment [-1,1], Quadrilateral [-1,1]^2, Triangle the
// unit triangle {eta1, eta2 >= 0, eta1 + eta2 <= 1}.
enum class FacetKind { Segment, Quadrilateral, Triangle };

std::string to_string(FacetKind kind);
int reference_dimension(FacetKind kind);
int vertex_count(FacetKind kind);
double reference_measure(FacetKind kind);
Point reference_centroid(FacetKind kind);
bool reference_contains(FacetKind kind, const Point& eta, double tol = 1e-12);

struct FacetMapValue {
    Point x;             // F_L(eta)
    SmallMatrix grad;    // d x (d-1), columns dF_L/deta_j
};

// Affine for Segment/Triangle, bilinear for Quadrilateral.
FacetMapValue facet_map(FacetKind kind, std::span<const Point> vertices, const Point& eta);

struct Sector {
    Point collapsed_vertex;
    std::vector<Point> facet_vertices;
    FacetKind facet_kind = FacetKind::Segment;
    std::string label;  // used in diagnostics only

    Sector() = default;
    Sector(Point a0, std::vector<Point> vertices, FacetKind kind, std::string name = {});

    int dimension() const { return static_cast<int>(collapsed_vertex.size()); }
};

struct SectorJacobian {
    SmallMatrix J1;  // J_K(1, eta) = [F_L - a0 | grad F_L]
    double detJ1 = 0.0;
    double xi = 1.0;
    int dim = 2;

    double detJ_at(double s) const;
    // J_K(xi, eta)^{-1} = diag(1, 1/xi I) J1^{-1}
    SmallMatrix inverse() const;
    // J_K(xi, eta)
    SmallMatrix jacobian() const;
};

Point duffy_map(const Sector& sector, double xi, const Point& eta);
SectorJacobian duffy_jacobian(const Sector& sector, double xi, const Point& eta);

struct SectorCoordinates {
    double xi;
    Point eta;
};

// Newton inversion of the Duffy map; empty when x is not inside the sector.
std::optional<SectorCoordinates> duffy_inverse(const Sector& sector, const Point& x, double tol = 1e-13);

}  // namespace sbfem
