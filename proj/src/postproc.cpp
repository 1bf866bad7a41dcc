#include "sbfem/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "sbfem/errors.hpp"
#include "sbfem/parallel.hpp"

namespace sbfem {

namespace {

std::map<std::string, ExactSolution, std::less<>> build_registry()
{
    using std::numbers::pi;
    std::map<std::string, ExactSolution, std::less<>> r;
    r["exp2d"] = {"exp2d", 2,
                  [](const Point& x) { return std::exp(pi * x[0]) * std::sin(pi * x[1]); },
                  [](const Point& x) {
                      double e = std::exp(pi * x[0]);
                      return make_point({pi * e * std::sin(pi * x[1]), pi * e * std::cos(pi * x[1])});
                  }};
    r["exp3d"] = {"exp3d", 3,
                  [](const Point& x) {
                      return 4.0 * (std::exp(pi * x[0] / 4) * std::sin(pi * x[1] / 4) +
                                    std::exp(pi * x[1] / 4) * std::sin(pi * x[2] / 4));
                  },
                  [](const Point& x) {
                      double ex = std::exp(pi * x[0] / 4), ey = std::exp(pi * x[1] / 4);
                      return make_point({pi * ex * std::sin(pi * x[1] / 4),
                                         pi * ex * std::cos(pi * x[1] / 4) + pi * ey * std::sin(pi * x[2] / 4),
                                         pi * ey * std::cos(pi * x[2] / 4)});
                  }};
    // 2^{-1/4} sqrt(x + r) = 2^{1/4} sqrt(r) cos(theta/2)
    r["sqrt2d"] = {"sqrt2d", 2,
                   [](const Point& x) {
                       double rr = std::hypot(x[0], x[1]);
                       return std::pow(2.0, -0.25) * std::sqrt(std::max(x[0] + rr, 0.0));
                   },
                   [](const Point& x) {
                       double rr = std::hypot(x[0], x[1]);
                       if (rr == 0.0)
                           return make_point({0.0, 0.0});
                       double th = std::atan2(x[1], x[0]);
                       double s = std::pow(2.0, 0.25) / (2.0 * std::sqrt(rr));
                       return make_point({s * std::cos(th / 2), s * std::sin(th / 2)});
                   }};
    r["const"] = {"const", 0, [](const Point&) { return 1.0; },
                  [](const Point& x) { return Point(Point::Zero(x.size())); }};
    r["linear"] = {"linear", 0, [](const Point& x) { return x[0]; },
                   [](const Point& x) {
                       Point g = Point::Zero(x.size());
                       g[0] = 1.0;
                       return g;
                   }};
    r["xy"] = {"xy", 2, [](const Point& x) { return x[0] * x[1]; },
               [](const Point& x) { return make_point({x[1], x[0]}); }};
    return r;
}

const std::map<std::string, ExactSolution, std::less<>>& registry()
{
    static const auto r = build_registry();
    return r;
}

}  // namespace

const ExactSolution& exact_solution(std::string_view name)
{
    auto it = registry().find(name);
    if (it == registry().end())
        throw DomainError("unknown exact solution \"" + std::string(name) + "\"");
    return it->second;
}

std::vector<std::string> exact_solution_names()
{
    std::vector<std::string> out;
    for (const auto& [k, v] : registry())
        out.push_back(k);
    return out;
}

FieldSample evaluate_selement(const DiscreteSolution& solution, const Discretization& disc, int s, int sector,
                              double xi, const Point& eta)
{
    const SElementData& data = disc.selements().at(s);
    const Sector& sec = disc.mesh().selements[s].sectors.at(sector);
    TraceBasis basis(sec.facet_kind, disc.degree());
    ModeShapes ms = shape_eval(data.modes, sector, sec, basis, xi, eta);
    const Vector& c = solution.modal.at(s);
    return {ms.values.dot(c), ms.gradients * c};
}

ErrorNorms compute_errors(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                          const ErrorOptions& opt)
{
    const PolytopalMesh& mesh = disc.mesh();
    const int d = mesh.dimension;
    const int k = disc.degree();
    if (exact.dimension != 0 && exact.dimension != d)
        throw DomainError("exact solution " + exact.name + " is defined in " + std::to_string(exact.dimension) + "D");
    const int facet_order = opt.facet_order > 0 ? opt.facet_order : 2 * k + 8;
    const int fe_order = opt.fe_order > 0 ? opt.fe_order : 2 * k + 8;

    const std::size_t ns = mesh.selements.size();
    const std::size_t nc = mesh.fe_cells.size();
    std::vector<double> l2(ns + nc, 0.0), h1(ns + nc, 0.0);

    parallel_for(ns, disc.threads(), [&](std::size_t s) {
        const SElementData& data = disc.selements()[s];
        const SbfemModes& modes = data.modes;
        const int N = modes.size();
        const double lmin = modes.min_positive_exponent();
        if (!(lmin > 0.0))
            throw QuadratureError("S-element " + std::to_string(s) + ": non-constant mode with Re(lambda) <= 0");
        // |grad|^2 xi^{d-1} behaves like xi^beta near the center
        const double beta = std::min(2.0 * (lmin - 1.0) + d - 1.0, 50.0);
        QuadratureRule radial =
            beta >= 1.0 ? radial_quadrature(beta, opt.radial_order > 0 ? opt.radial_order : 2 * k + 10, 0)
                        : radial_quadrature(beta, opt.radial_order > 0 ? opt.radial_order : k + 6, opt.radial_levels,
                                            opt.radial_ratio);
        const std::size_t nr = radial.size();
        // xi^lambda and xi^(lambda-1) per radial point
        CMatrix pw(nr, N), pw1(nr, N);
        for (std::size_t q = 0; q < nr; ++q) {
            double lx = std::log(radial.points[q][0]);
            for (int i = 0; i < N; ++i) {
                pw(q, i) = std::exp(modes.exponents[i] * lx);
                pw1(q, i) = std::exp((modes.exponents[i] - 1.0) * lx);
            }
        }
        CVector beta_w = complex_weights(modes, solution.modal[s]);
        const SElement& se = mesh.selements[s];
        double el2 = 0.0, eh1 = 0.0;
        for (std::size_t t = 0; t < se.sectors.size(); ++t) {
            const Sector& sec = se.sectors[t];
            const auto& map = modes.dof_map[t];
            TraceBasis basis(sec.facet_kind, k);
            QuadratureRule frule = facet_quadrature(sec.facet_kind, facet_order);
            const int n = basis.cardinality();
            // W(l, i) = beta_i A(map[l], i)
            CMatrix W = CMatrix::Zero(n, N);
            for (int l = 0; l < n; ++l)
                if (map[l] >= 0)
                    for (int i = 0; i < N; ++i)
                        W(l, i) = beta_w[i] * modes.A(map[l], i);
            for (std::size_t qf = 0; qf < frule.size(); ++qf) {
                const Point& eta = frule.points[qf];
                BVectors B = sector_B(sec, basis, eta);
                Vector Nv;
                Matrix dN;
                shape_values_into(basis, eta, Nv, dN);
                CVector sv = W.transpose() * Nv.cast<Complex>();   // N
                CMatrix t1 = B.B1.cast<Complex>() * W;             // d x N
                CMatrix t2 = B.B2.cast<Complex>() * W;             // d x N
                CMatrix tg(d, N);
                for (int i = 0; i < N; ++i) {
                    if (modes.constant_index && i == *modes.constant_index)
                        tg.col(i).setZero();
                    else
                        tg.col(i) = modes.exponents[i] * t1.col(i) + t2.col(i);
                }
                auto fl = facet_map(sec.facet_kind, sec.facet_vertices, eta);
                for (std::size_t qr = 0; qr < nr; ++qr) {
                    const double xi = radial.points[qr][0];
                    Complex v = pw.row(qr).transpose().cwiseProduct(sv).sum();
                    CVector g = tg * pw1.row(qr).transpose();
                    Point x = xi * (fl.x - sec.collapsed_vertex) + sec.collapsed_vertex;
                    double w = frule.weights[qf] * radial.weights[qr] * std::pow(xi, d - 1) * B.detJ1;
                    double ev = exact.value(x) - v.real();
                    Point eg = exact.gradient(x) - Point(g.real());
                    el2 += w * ev * ev;
                    eh1 += w * eg.squaredNorm();
                }
            }
        }
        l2[s] = el2;
        h1[s] = eh1;
    });

    parallel_for(nc, disc.threads(), [&](std::size_t c) {
        const FeCell& cell = mesh.fe_cells[c];
        std::vector<Point> pts;
        for (int v : cell.vertices)
            pts.push_back(mesh.vertices[v]);
        TraceBasis basis(cell.kind, k);
        QuadratureRule rule = facet_quadrature(cell.kind, fe_order);
        const auto& ids = disc.dofs().cell_nodes(static_cast<int>(c));
        Vector u(ids.size());
        for (std::size_t l = 0; l < ids.size(); ++l)
            u[l] = solution.nodal[ids[l]];
        double el2 = 0.0, eh1 = 0.0;
        Vector Nv;
        Matrix dN;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            auto fm = facet_map(cell.kind, pts, rule.points[q]);
            double det = fm.grad.determinant();
            shape_values_into(basis, rule.points[q], Nv, dN);
            double v = Nv.dot(u);
            Point g = fm.grad.inverse().transpose() * (dN * u);
            double w = rule.weights[q] * det;
            double ev = exact.value(fm.x) - v;
            el2 += w * ev * ev;
            eh1 += w * (exact.gradient(fm.x) - g).squaredNorm();
        }
        l2[ns + c] = el2;
        h1[ns + c] = eh1;
    });

    ErrorNorms out;
    double sl = 0.0, sh = 0.0;
    for (std::size_t i = 0; i < ns + nc; ++i) {
        sl += l2[i];
        sh += h1[i];
    }
    out.l2 = std::sqrt(std::max(sl, 0.0));
    out.h1 = std::sqrt(std::max(sh, 0.0));
    return out;
}

double energy_error(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                    const ErrorOptions& options)
{
    return compute_errors(solution, exact, disc, options).h1;
}

double l2_error(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                const ErrorOptions& options)
{
    return compute_errors(solution, exact, disc, options).l2;
}

std::string format_sci(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", value);
    return buf;
}

namespace {

std::string format_rate(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

}  // namespace

ErrorReport convergence_table(const std::vector<ErrorRow>& rows)
{
    if (rows.size() < 2)
        throw DomainError("convergence_table: at least two levels are required");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].dof <= rows[i - 1].dof)
            throw DomainError("convergence_table: DOF sequence is not increasing");
    ErrorReport r;
    r.rows = rows;
    const ErrorRow& a = rows[rows.size() - 2];
    const ErrorRow& b = rows.back();
    auto rate = [](double prev, double last) {
        if (prev == last)
            return 0.0;
        return std::log2(prev / last);
    };
    r.rate_l2 = rate(a.e_l2, b.e_l2);
    r.rate_h1 = rate(a.e_h1, b.e_h1);
    return r;
}

std::string ErrorReport::to_csv() const
{
    std::ostringstream os;
    os << "level,h,dof,e_l2,e_h1\n";
    for (const auto& row : rows)
        os << row.level << ',' << format_sci(row.h) << ',' << row.dof << ',' << format_sci(row.e_l2) << ','
           << format_sci(row.e_h1) << '\n';
    if (rows.size() >= 2)
        os << "# rate_l2=" << format_rate(rate_l2) << ",rate_h1=" << format_rate(rate_h1) << '\n';
    return os.str();
}

}  // namespace sbfem
