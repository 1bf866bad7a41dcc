#include "sbfem/refgeom.hpp"

#include <cmath>
#include <sstream>

#include "sbfem/errors.hpp"

namespace sbfem {

std::string to_string(FacetKind kind)
{
    switch (kind) {
    case FacetKind::Segment: return "segment";
    case FacetKind::Quadrilateral: return "quadrilateral";
    case FacetKind::Triangle: return "triangle";
    }
    return "unknown";
}

int reference_dimension(FacetKind kind)
{
    return kind == FacetKind::Segment ? 1 : 2;
}

int vertex_count(FacetKind kind)
{
    switch (kind) {
    case FacetKind::Segment: return 2;
    case FacetKind::Quadrilateral: return 4;
    case FacetKind::Triangle: return 3;
    }
    return 0;
}

double reference_measure(FacetKind kind)
{
    switch (kind) {
    case FacetKind::Segment: return 2.0;
    case FacetKind::Quadrilateral: return 4.0;
    case FacetKind::Triangle: return 0.5;
    }
    return 0.0;
}

Point reference_centroid(FacetKind kind)
{
    switch (kind) {
    case FacetKind::Segment: return make_point({0.0});
    case FacetKind::Quadrilateral: return make_point({0.0, 0.0});
    case FacetKind::Triangle: return make_point({1.0 / 3.0, 1.0 / 3.0});
    }
    return {};
}

bool reference_contains(FacetKind kind, const Point& eta, double tol)
{
    if (eta.size() != reference_dimension(kind))
        return false;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        if (!std::isfinite(eta[i]))
            return false;
    switch (kind) {
    case FacetKind::Segment:
        return std::abs(eta[0]) <= 1.0 + tol;
    case FacetKind::Quadrilateral:
        return std::abs(eta[0]) <= 1.0 + tol && std::abs(eta[1]) <= 1.0 + tol;
    case FacetKind::Triangle:
        return eta[0] >= -tol && eta[1] >= -tol && eta[0] + eta[1] <= 1.0 + tol;
    }
    return false;
}

FacetMapValue facet_map(FacetKind kind, std::span<const Point> v, const Point& eta)
{
    if (static_cast<int>(v.size()) != vertex_count(kind))
        throw GeometryError("facet map: expected " + std::to_string(vertex_count(kind)) + " vertices for a " +
                            to_string(kind) + ", got " + std::to_string(v.size()));
    const Eigen::Index d = v[0].size();
    FacetMapValue out;
    switch (kind) {
    case FacetKind::Segment: {
        double t = eta[0];
        out.x = 0.5 * (1.0 - t) * v[0] + 0.5 * (1.0 + t) * v[1];
        out.grad = 0.5 * (v[1] - v[0]);
        break;
    }
    case FacetKind::Triangle: {
        out.x = v[0] + (v[1] - v[0]) * eta[0] + (v[2] - v[0]) * eta[1];
        out.grad.resize(d, 2);
        out.grad.col(0) = v[1] - v[0];
        out.grad.col(1) = v[2] - v[0];
        break;
    }
    case FacetKind::Quadrilateral: {
        double s = eta[0], t = eta[1];
        double n0 = 0.25 * (1 - s) * (1 - t), n1 = 0.25 * (1 + s) * (1 - t);
        double n2 = 0.25 * (1 + s) * (1 + t), n3 = 0.25 * (1 - s) * (1 + t);
        out.x = n0 * v[0] + n1 * v[1] + n2 * v[2] + n3 * v[3];
        out.grad.resize(d, 2);
        out.grad.col(0) = 0.25 * ((1 - t) * (v[1] - v[0]) + (1 + t) * (v[2] - v[3]));
        out.grad.col(1) = 0.25 * ((1 - s) * (v[3] - v[0]) + (1 + s) * (v[2] - v[1]));
        break;
    }
    }
    return out;
}

Sector::Sector(Point a0, std::vector<Point> vertices, FacetKind kind, std::string name)
    : collapsed_vertex(std::move(a0)), facet_vertices(std::move(vertices)), facet_kind(kind), label(std::move(name))
{
    const int d = static_cast<int>(collapsed_vertex.size());
    if (d != 2 && d != 3)
        throw GeometryError("sector " + label + ": ambient dimension must be 2 or 3");
    if (static_cast<int>(facet_vertices.size()) != vertex_count(kind))
        throw GeometryError("sector " + label + ": " + to_string(kind) + " facet needs " +
                            std::to_string(vertex_count(kind)) + " vertices");
    if (reference_dimension(kind) != d - 1)
        throw GeometryError("sector " + label + ": " + to_string(kind) + " facet in dimension " + std::to_string(d));
    for (const auto& p : facet_vertices)
        if (p.size() != d)
            throw GeometryError("sector " + label + ": inconsistent vertex dimension");
}

double SectorJacobian::detJ_at(double s) const
{
    return std::pow(s, dim - 1) * detJ1;
}

SmallMatrix SectorJacobian::inverse() const
{
    SmallMatrix inv = J1.inverse();
    for (int r = 1; r < dim; ++r)
        inv.row(r) /= xi;
    return inv;
}

SmallMatrix SectorJacobian::jacobian() const
{
    SmallMatrix J = J1;
    for (int c = 1; c < dim; ++c)
        J.col(c) *= xi;
    return J;
}

namespace {

void check_eta(const Sector& sector, const Point& eta)
{
    if (!reference_contains(sector.facet_kind, eta, 1e-10)) {
        std::ostringstream os;
        os << "sector " << sector.label << ": eta = (" << eta.transpose() << ") outside the reference "
           << to_string(sector.facet_kind);
        throw DomainError(os.str());
    }
}

}  // namespace

Point duffy_map(const Sector& sector, double xi, const Point& eta)
{
    check_eta(sector, eta);
    if (!(xi >= -1e-14 && xi <= 1.0 + 1e-14))
        throw DomainError("sector " + sector.label + ": xi = " + std::to_string(xi) + " outside [0,1]");
    auto fl = facet_map(sector.facet_kind, sector.facet_vertices, eta);
    return xi * (fl.x - sector.collapsed_vertex) + sector.collapsed_vertex;
}

SectorJacobian duffy_jacobian(const Sector& sector, double xi, const Point& eta)
{
    check_eta(sector, eta);
    if (!(xi > 0.0 && xi <= 1.0 + 1e-14))
        throw DomainError("sector " + sector.label + ": jacobian requested at xi = " + std::to_string(xi));
    auto fl = facet_map(sector.facet_kind, sector.facet_vertices, eta);
    const int d = sector.dimension();
    SectorJacobian out;
    out.dim = d;
    out.xi = xi;
    out.J1.resize(d, d);
    out.J1.col(0) = fl.x - sector.collapsed_vertex;
    out.J1.rightCols(d - 1) = fl.grad;
    out.detJ1 = out.J1.determinant();
    double scale = out.J1.colwise().norm().prod();
    if (!(std::abs(out.detJ1) > 1e-13 * scale) || scale == 0.0)
        throw GeometryError("sector " + sector.label + ": singular Jacobian (degenerate sector)");
    return out;
}

std::optional<SectorCoordinates> duffy_inverse(const Sector& sector, const Point& x, double tol)
{
    const int d = sector.dimension();
    if (x.size() != d)
        return std::nullopt;
    double xi = 0.5;
    Point eta = reference_centroid(sector.facet_kind);
    double size = 0.0;
    for (const auto& v : sector.facet_vertices)
        size = std::max(size, (v - sector.collapsed_vertex).norm());
    for (int it = 0; it < 60; ++it) {
        auto fl = facet_map(sector.facet_kind, sector.facet_vertices, eta);
        Point r = x - (xi * (fl.x - sector.collapsed_vertex) + sector.collapsed_vertex);
        if (r.norm() <= tol * size)
            break;
        SmallMatrix J(d, d);
        J.col(0) = fl.x - sector.collapsed_vertex;
        J.rightCols(d - 1) = xi * fl.grad;
        Point step = J.fullPivLu().solve(r);
        if (!step.allFinite())
            return std::nullopt;
        xi += step[0];
        eta += step.tail(d - 1);
        if (xi <= 1e-300)
            xi = 1e-3;
    }
    auto fl = facet_map(sector.facet_kind, sector.facet_vertices, eta);
    Point r = x - (xi * (fl.x - sector.collapsed_vertex) + sector.collapsed_vertex);
    if (r.norm() > 1e3 * tol * size + 1e-300)
        return std::nullopt;
    if (xi < -1e-10 || xi > 1.0 + 1e-10 || !reference_contains(sector.facet_kind, eta, 1e-10))
        return std::nullopt;
    return SectorCoordinates{xi, eta};
}

}  // namespace sbfem
