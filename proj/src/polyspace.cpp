#include "sbfem/polyspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "sbfem/errors.hpp"

namespace sbfem {

namespace {

void check_degree(int k)
{
    if (k < 1 || k > kMaxDegree)
        throw DomainError("trace degree " + std::to_string(k) + " outside supported range 1.." +
                          std::to_string(kMaxDegree) + " (equispaced nodes become ill-conditioned)");
}

// R_m(z) = prod_{s<m} (z - s)/(s + 1) and its derivative.
void silvester(int m, double z, double& value, double& derivative)
{
    value = 1.0;
    derivative = 0.0;
    for (int s = 0; s < m; ++s) {
        double f = (z - s) / (s + 1);
        derivative = derivative * f + value / (s + 1);
        value *= f;
    }
}

}  // namespace

void lagrange_1d(int k, double t, double* values, double* derivatives)
{
    // Nodes t_j = -1 + 2 j / k.
    for (int j = 0; j <= k; ++j) {
        double tj = -1.0 + 2.0 * j / k;
        double v = 1.0, dv = 0.0;
        for (int m = 0; m <= k; ++m) {
            if (m == j)
                continue;
            double tm = -1.0 + 2.0 * m / k;
            double f = (t - tm) / (tj - tm);
            dv = dv * f + v / (tj - tm);
            v *= f;
        }
        values[j] = v;
        derivatives[j] = dv;
    }
}

TraceBasis::TraceBasis(FacetKind kind, int degree) : kind_(kind), k_(degree)
{
    check_degree(degree);
    const int k = degree;
    switch (kind) {
    case FacetKind::Segment:
        for (int j = 0; j <= k; ++j) {
            nodes_.push_back(make_point({-1.0 + 2.0 * j / k}));
            lattice_.push_back({j, 0});
        }
        break;
    case FacetKind::Quadrilateral:
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= k; ++i) {
                nodes_.push_back(make_point({-1.0 + 2.0 * i / k, -1.0 + 2.0 * j / k}));
                lattice_.push_back({i, j});
            }
        break;
    case FacetKind::Triangle:
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i + j <= k; ++i) {
                nodes_.push_back(make_point({static_cast<double>(i) / k, static_cast<double>(j) / k}));
                lattice_.push_back({i, j});
            }
        break;
    }
}

int TraceBasis::lattice_index(int i, int j) const
{
    const int k = k_;
    switch (kind_) {
    case FacetKind::Segment: return i;
    case FacetKind::Quadrilateral: return i + (k + 1) * j;
    case FacetKind::Triangle:
        // rows j' < j hold (k + 1 - j') nodes each
        return j * (k + 1) - j * (j - 1) / 2 + i;
    }
    return -1;
}

void shape_values_into(const TraceBasis& basis, const Point& eta, Vector& values, Matrix& gradients)
{
    const int k = basis.degree();
    const int n = basis.cardinality();
    values.resize(n);
    gradients.resize(reference_dimension(basis.facet_kind()), n);
    switch (basis.facet_kind()) {
    case FacetKind::Segment: {
        double v[kMaxDegree + 1], dv[kMaxDegree + 1];
        lagrange_1d(k, eta[0], v, dv);
        for (int j = 0; j <= k; ++j) {
            values[j] = v[j];
            gradients(0, j) = dv[j];
        }
        break;
    }
    case FacetKind::Quadrilateral: {
        double vs[kMaxDegree + 1], ds[kMaxDegree + 1], vt[kMaxDegree + 1], dt[kMaxDegree + 1];
        lagrange_1d(k, eta[0], vs, ds);
        lagrange_1d(k, eta[1], vt, dt);
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= k; ++i) {
                int l = i + (k + 1) * j;
                values[l] = vs[i] * vt[j];
                gradients(0, l) = ds[i] * vt[j];
                gradients(1, l) = vs[i] * dt[j];
            }
        break;
    }
    case FacetKind::Triangle: {
        double L1 = 1.0 - eta[0] - eta[1], L2 = eta[0], L3 = eta[1];
        int l = 0;
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i + j <= k; ++i, ++l) {
                double r1, d1, r2, d2, r3, d3;
                silvester(k - i - j, k * L1, r1, d1);
                silvester(i, k * L2, r2, d2);
                silvester(j, k * L3, r3, d3);
                values[l] = r1 * r2 * r3;
                // dL1/deta = (-1,-1), dL2/deta = (1,0), dL3/deta = (0,1)
                gradients(0, l) = k * (-d1 * r2 * r3 + r1 * d2 * r3);
                gradients(1, l) = k * (-d1 * r2 * r3 + r1 * r2 * d3);
            }
        break;
    }
    }
}

ShapeValues shape_values(const TraceBasis& basis, const Point& eta)
{
    if (!reference_contains(basis.facet_kind(), eta, 1e-10))
        throw DomainError("shape_values: eta outside the reference " + to_string(basis.facet_kind()));
    ShapeValues out;
    shape_values_into(basis, eta, out.values, out.gradients);
    return out;
}

namespace {

// Golub-Welsch for the Jacobi weight (1 - t)^alpha (1 + t)^beta on [-1,1].
void golub_welsch_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w)
{
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    const double ab = alpha + beta;
    for (int i = 0; i < n; ++i) {
        double denom = (2.0 * i + ab) * (2.0 * i + ab + 2.0);
        if (i == 0)
            T(0, 0) = (beta - alpha) / (ab + 2.0);
        else
            T(i, i) = (beta * beta - alpha * alpha) / denom;
    }
    for (int i = 1; i < n; ++i) {
        double m = i;
        double s = 2.0 * m + ab;
        double b = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
        T(i, i - 1) = T(i - 1, i) = std::sqrt(b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                          std::lgamma(ab + 2.0));
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()[i];
        double v0 = es.eigenvectors()(0, i);
        w[i] = mu0 * v0 * v0;
    }
}

int points_for_order(int order)
{
    return order / 2 + 1;
}

}  // namespace

QuadratureRule gauss_legendre(int npoints)
{
    if (npoints < 1 || npoints > 200)
        throw QuadratureError("gauss_legendre: unsupported point count " + std::to_string(npoints));
    std::vector<double> x, w;
    golub_welsch_jacobi(npoints, 0.0, 0.0, x, w);
    QuadratureRule r;
    for (int i = 0; i < npoints; ++i) {
        // symmetrize the tiny eigen-solver asymmetry
        double xs = 0.5 * (x[i] - x[npoints - 1 - i]);
        double ws = 0.5 * (w[i] + w[npoints - 1 - i]);
        r.points.push_back(make_point({xs}));
        r.weights.push_back(ws);
    }
    r.exactness_degree = 2 * npoints - 1;
    return r;
}

QuadratureRule gauss_jacobi_unit(int npoints, double beta)
{
    if (npoints < 1 || npoints > 200)
        throw QuadratureError("gauss_jacobi: unsupported point count " + std::to_string(npoints));
    if (!(beta > -1.0))
        throw QuadratureError("gauss_jacobi: weight exponent must exceed -1");
    std::vector<double> x, w;
    golub_welsch_jacobi(npoints, 0.0, beta, x, w);
    QuadratureRule r;
    double scale = std::pow(2.0, -(beta + 1.0));
    for (int i = 0; i < npoints; ++i) {
        r.points.push_back(make_point({0.5 * (1.0 + x[i])}));
        r.weights.push_back(w[i] * scale);
    }
    r.exactness_degree = 2 * npoints - 1;
    return r;
}

QuadratureRule facet_quadrature(FacetKind kind, int order)
{
    if (order < 1 || order > 200)
        throw QuadratureError("facet_quadrature: unsupported order " + std::to_string(order));
    const int n = points_for_order(order);
    QuadratureRule g = gauss_legendre(n);
    QuadratureRule r;
    switch (kind) {
    case FacetKind::Segment:
        r = g;
        break;
    case FacetKind::Quadrilateral:
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                r.points.push_back(make_point({g.points[i][0], g.points[j][0]}));
                r.weights.push_back(g.weights[i] * g.weights[j]);
            }
        break;
    case FacetKind::Triangle: {
        // eta1 = 1 - s, eta2 = s t with Jacobian s; the s-rule carries that weight.
        QuadratureRule gs = gauss_jacobi_unit(n, 1.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = gs.points[a][0];
                double t = 0.5 * (1.0 + g.points[b][0]);
                r.points.push_back(make_point({1.0 - s, s * t}));
                r.weights.push_back(gs.weights[a] * 0.5 * g.weights[b]);
            }
        break;
    }
    }
    r.exactness_degree = 2 * n - 1;
    return r;
}

QuadratureRule radial_quadrature(double exponent_floor, int order, int composite_levels, double ratio)
{
    if (!(exponent_floor > -1.0))
        throw QuadratureError("radial_quadrature: integrand x^" + std::to_string(exponent_floor) +
                              " is not integrable at 0");
    if (order < 1 || composite_levels < 0 || !(ratio > 0.0 && ratio < 1.0))
        throw QuadratureError("radial_quadrature: invalid order, level count or ratio");
    const int n = order;
    QuadratureRule g = gauss_legendre(n);
    QuadratureRule r;
    r.exactness_degree = 2 * n - 1;
    auto append_mapped = [&](double a, double b) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            r.points.push_back(make_point({a + 0.5 * (b - a) * (1.0 + g.points[i][0])}));
            r.weights.push_back(0.5 * (b - a) * g.weights[i]);
        }
    };
    if (composite_levels == 0 || exponent_floor >= 1.0) {
        append_mapped(0.0, 1.0);
        return r;
    }
    double inner = std::pow(ratio, composite_levels);
    if (exponent_floor < 0.0) {
        QuadratureRule gj = gauss_jacobi_unit(n, exponent_floor);
        for (std::size_t i = 0; i < gj.size(); ++i) {
            double x = gj.points[i][0];
            // weight for f itself: w_j * inner^{beta+1} / (inner x)^beta
            r.points.push_back(make_point({inner * x}));
            r.weights.push_back(gj.weights[i] * inner / std::pow(x, exponent_floor));
        }
    } else {
        append_mapped(0.0, inner);
    }
    for (int level = composite_levels; level >= 1; --level)
        append_mapped(std::pow(ratio, level), std::pow(ratio, level - 1));
    return r;
}

}  // namespace sbfem
