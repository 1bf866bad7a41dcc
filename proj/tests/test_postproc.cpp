#include <doctest.h>

#include <cmath>
#include <random>

#include "sbfem/errors.hpp"
#include "sbfem/postproc.hpp"

using namespace sbfem;

namespace {

Point random_point(const std::string& name, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (name == "exp3d")
        return make_point({0.1 + 0.8 * u(rng), 0.1 + 0.8 * u(rng), 0.1 + 0.8 * u(rng)});
    if (name == "sqrt2d")
        return make_point({-0.9 + 1.8 * u(rng), 0.1 + 0.8 * u(rng)});
    return make_point({-0.9 + 1.8 * u(rng), -0.9 + 1.8 * u(rng)});
}

DiscreteSolution galerkin(const Discretization& disc, const ExactSolution& u)
{
    GlobalSystem sys = assemble_global(disc);
    apply_dirichlet(sys, disc, u.value);
    apply_neumann(sys, disc, [&](const Point& x, const Point& n) { return u.gradient(x).dot(n); });
    return solve(sys, disc);
}

}  // namespace

TEST_CASE("registered solutions are harmonic")
{
    std::mt19937 rng(2);
    for (const char* name : {"exp2d", "exp3d", "sqrt2d"}) {
        CAPTURE(name);
        const ExactSolution& u = exact_solution(name);
        for (int t = 0; t < 20; ++t) {
            Point x = random_point(name, rng);
            const double h = 1e-3, hg = 1e-6;
            const double u0 = u.value(x);
            double lap = 0.0;
            Point fd(x.size());
            for (Eigen::Index j = 0; j < x.size(); ++j) {
                Point p = x, m = x;
                p[j] += h;
                m[j] -= h;
                lap += (u.value(p) - 2 * u0 + u.value(m)) / (h * h);
                p[j] = x[j] + hg;
                m[j] = x[j] - hg;
                fd[j] = (u.value(p) - u.value(m)) / (2 * hg);
            }
            const double scale = std::max(1.0, std::abs(u0));
            CHECK(std::abs(lap) < 1e-4 * scale);
            CHECK((fd - u.gradient(x)).norm() < 1e-5 * scale);
        }
    }
    CHECK_THROWS_AS(exact_solution("nope"), DomainError);
    CHECK(exact_solution_names().size() == 6);
}

TEST_CASE("CSV layout")
{
    std::vector<ErrorRow> rows = {{1, 0.5, 25, 1.72474, 18.3766}, {2, 0.25, 81, 0.443560, 9.27452}};
    ErrorReport r = convergence_table(rows);
    CHECK(r.to_csv() == "level,h,dof,e_l2,e_h1\n"
                        "1,5.00000e-01,25,1.72474e+00,1.83766e+01\n"
                        "2,2.50000e-01,81,4.43560e-01,9.27452e+00\n"
                        "# rate_l2=1.9592,rate_h1=0.9865\n");
    CHECK(format_sci(0.0) == "0.00000e+00");
}

TEST_CASE("convergence rates")
{
    ErrorReport r = convergence_table({{1, 1.0, 10, 1.0, 2.0}, {2, 0.5, 20, 0.25, 1.0}, {3, 0.25, 40, 0.25, 0.125}});
    CHECK(r.rate_l2 == 0.0);
    CHECK(r.rate_h1 == doctest::Approx(3.0));
    CHECK_THROWS_AS(convergence_table({{1, 1.0, 10, 1.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(convergence_table({{1, 1.0, 10, 1.0, 1.0}, {2, 0.5, 10, 0.5, 0.5}}), DomainError);
}

TEST_CASE("constant field has zero error")
{
    const ExactSolution& u = exact_solution("const");
    for (const PolytopalMesh& m : {gen_polygon_case1(2), gen_single_cube(2), gen_quad_mesh(3)}) {
        Discretization disc(m, 2);
        ErrorNorms e = compute_errors(sbfem_interpolate(disc, u.value), u, disc);
        CHECK(e.l2 < 1e-12);
        CHECK(e.h1 < 1e-12);
    }
}

TEST_CASE("errors are stable under doubled quadrature")
{
    const ExactSolution& u = exact_solution("exp2d");
    PolytopalMesh mesh = gen_quad_mesh(2);
    const int k = 2;
    Discretization disc(mesh, k);
    DiscreteSolution sol = galerkin(disc, u);
    ErrorNorms base = compute_errors(sol, u, disc);
    ErrorOptions fine;
    fine.facet_order = 2 * (2 * k + 8);
    fine.radial_order = 2 * (2 * k + 10);
    fine.fe_order = 2 * (2 * k + 8);
    ErrorNorms more = compute_errors(sol, u, disc, fine);
    CHECK(std::abs(more.l2 - base.l2) < 1e-3 * base.l2);
    CHECK(std::abs(more.h1 - base.h1) < 1e-3 * base.h1);
}

TEST_CASE("singular errors are stable under one more composite level")
{
    const ExactSolution& u = exact_solution("sqrt2d");
    PolytopalMesh mesh = gen_open_singular(4);
    Discretization disc(mesh, 2);
    DiscreteSolution sol = sbfem_interpolate(disc, u.value);
    ErrorOptions a, b;
    b.radial_levels = a.radial_levels + 1;
    ErrorNorms ea = compute_errors(sol, u, disc, a), eb = compute_errors(sol, u, disc, b);
    CHECK(std::abs(ea.h1 - eb.h1) < 5e-3 * ea.h1);
    CHECK(std::abs(ea.l2 - eb.l2) < 5e-3 * ea.l2);
}

TEST_CASE("energy and L2 errors agree with compute_errors")
{
    const ExactSolution& u = exact_solution("exp2d");
    PolytopalMesh mesh = gen_quad_mesh(2);
    Discretization disc(mesh, 1);
    DiscreteSolution sol = galerkin(disc, u);
    ErrorNorms e = compute_errors(sol, u, disc);
    CHECK(energy_error(sol, u, disc) == doctest::Approx(e.h1).epsilon(1e-12));
    CHECK(l2_error(sol, u, disc) == doctest::Approx(e.l2).epsilon(1e-12));
}
