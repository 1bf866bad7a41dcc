// Acceptance checks. Prints one PASS/FAIL line per criterion followed by
// indented details; exits nonzero when any criterion fails.
//
// SBFEM_ACCEPTANCE_FULL=1 adds the k = 3, 4 single-cube interpolation runs at
// n = 4, which take more than ten minutes each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sbfem/errors.hpp"
#include "sbfem/modes.hpp"
#include "sbfem/study.hpp"

using namespace sbfem;

namespace {

struct Criterion {
    int id;
    std::string title;
    bool pass = true;
    std::vector<std::string> lines;

    void note(bool ok, const std::string& text)
    {
        if (!ok)
            pass = false;
        lines.push_back((ok ? "  ok   " : "  MISS ") + text);
    }
    void info(const std::string& text) { lines.push_back("       " + text); }
};

std::vector<Criterion> results;

void report(const Criterion& c)
{
    std::printf("%s %d %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto& l : c.lines)
        std::printf("%s\n", l.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Published reference data: dof, L2 error, H1 error.
struct Ref {
    int dof;
    double l2, h1;
};
using RefTable = std::map<std::pair<int, int>, Ref>;  // (k, level)

const RefTable kQuad = {
    {{1, 1}, {25, 1.80, 19.9}},         {{1, 2}, {81, 0.450, 9.50}},
    {{1, 3}, {289, 0.113, 4.68}},       {{1, 4}, {1089, 2.82e-2, 2.33}},
    {{2, 1}, {65, 1.31e-1, 2.56}},      {{2, 2}, {225, 1.68e-2, 5.92e-1}},
    {{2, 3}, {833, 2.12e-3, 1.42e-1}},  {{2, 4}, {3201, 2.65e-4, 3.50e-2}},
    {{3, 1}, {105, 7.78e-3, 2.28e-1}},  {{3, 2}, {369, 4.68e-4, 2.62e-2}},
    {{3, 3}, {1377, 2.95e-5, 3.19e-3}}, {{3, 4}, {5313, 1.86e-6, 3.96e-4}},
};

const RefTable kPolygon = {
    {{1, 1}, {21, 8.06e-1, 12.3}},    {{1, 2}, {65, 2.86e-1, 6.66}},      {{1, 3}, {225, 1.54e-2, 3.08}},
    {{2, 1}, {45, 8.77e-2, 1.95}},    {{2, 2}, {145, 1.55e-2, 5.30e-1}}, {{2, 3}, {513, 1.87e-3, 1.22e-1}},
};

const RefTable kHex = {
    {{1, 1}, {27, 3.17e-2, 3.85e-1}},  {{1, 2}, {127, 7.85e-3, 1.87e-1}}, {{1, 3}, {729, 1.93e-3, 9.20e-2}},
    {{2, 1}, {117, 1.41e-3, 2.40e-2}}, {{2, 2}, {665, 1.93e-4, 6.02e-3}}, {{2, 3}, {4401, 2.48e-5, 1.51e-3}},
};

const RefTable kCoupled = {
    {{1, 1}, {14, 8.44e-4, 1.11e-1}}, {{1, 2}, {39, 2.02e-3, 5.54e-2}},  {{1, 3}, {125, 4.95e-4, 2.73e-2}},
    {{2, 1}, {26, 7.87e-4, 1.94e-2}}, {{2, 2}, {117, 1.12e-4, 4.23e-3}}, {{2, 3}, {665, 1.45e-5, 1.06e-3}},
};

struct SmoothRun {
    std::string mesh;
    int k, level;
    double galerkin_h1, interp_h1;
};
std::vector<SmoothRun> smooth_runs;

// Runs Galerkin solves over the table, checks dof and errors, returns rows per k.
std::map<int, std::vector<ErrorRow>> table_check(Criterion& c, const std::string& mesh, const RefTable& ref,
                                                 const std::vector<int>& required_levels, double err_tol,
                                                 bool smooth, bool timed)
{
    std::map<int, std::vector<ErrorRow>> rows;
    RunConfig cfg;
    cfg.mesh = mesh;
    for (const auto& [key, r] : ref) {
        const auto [k, level] = key;
        const bool required = std::find(required_levels.begin(), required_levels.end(), level) != required_levels.end();
        auto t0 = std::chrono::steady_clock::now();
        CaseResult g;
        try {
            g = run_case(cfg, level, k, true);
        } catch (const std::exception& e) {
            c.note(false, fmt("k=%d l=%d: %s", k, level, e.what()));
            continue;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows[k].push_back(g.row);
        const double dl2 = (g.row.e_l2 - r.l2) / r.l2, dh1 = (g.row.e_h1 - r.h1) / r.h1;
        std::string text = fmt("k=%d l=%d dof %d (ref %d)  e_l2 %.3e (ref %.3e, %+.1f%%)  e_h1 %.3e (ref %.3e, %+.1f%%)",
                               k, level, g.row.dof, r.dof, g.row.e_l2, r.l2, 100 * dl2, g.row.e_h1, r.h1, 100 * dh1);
        if (timed)
            text += fmt("  %.1fs", secs);
        bool ok = g.row.dof == r.dof && std::abs(dl2) <= err_tol && std::abs(dh1) <= err_tol;
        if (timed)
            ok = ok && secs < 60.0;
        if (required)
            c.note(ok, text);
        else
            c.info(text + (ok ? "" : "  (optional level, not counted)"));
        if (smooth) {
            CaseResult in = run_case(cfg, level, k, false);
            smooth_runs.push_back({mesh, k, level, g.row.e_h1, in.row.e_h1});
        }
    }
    return rows;
}

void rate_check(Criterion& c, const std::map<int, std::vector<ErrorRow>>& rows, double tol)
{
    for (const auto& [k, r] : rows) {
        if (r.size() < 2) {
            c.note(false, fmt("k=%d: not enough levels for rates", k));
            continue;
        }
        ErrorReport rep = convergence_table(r);
        bool ok = std::abs(rep.rate_l2 - (k + 1)) <= tol && std::abs(rep.rate_h1 - k) <= tol;
        c.note(ok, fmt("k=%d rates l2 %.3f (expect %d)  h1 %.3f (expect %d), levels %d-%d", k, rep.rate_l2, k + 1,
                       rep.rate_h1, k, r[r.size() - 2].level, r.back().level));
    }
}

// ---- fixtures for the element-level criteria

struct ElementFixture {
    std::string name;
    EMatrices E;
    const PolytopalMesh* mesh;
    int selement;
    int k;
};

std::vector<PolytopalMesh> fixture_meshes()
{
    return {gen_single_square(1), gen_polygon_case1(1), gen_single_cube(1), gen_polyhedron_case1(1),
            gen_open_singular(4)};
}

const char* kFixtureNames[] = {"single-square", "polygon1", "single-cube", "polyhedron1", "open-singular"};

std::vector<ElementFixture> element_fixtures(const std::vector<PolytopalMesh>& meshes, int kmax)
{
    std::vector<ElementFixture> out;
    for (std::size_t m = 0; m < meshes.size(); ++m)
        for (int k = 1; k <= kmax; ++k) {
            DofMap dofs(meshes[m], k);
            for (std::size_t s = 0; s < meshes[m].selements.size(); ++s) {
                EMatrices E = assemble_E(meshes[m], dofs, static_cast<int>(s));
                E = apply_sideface_bc(E, sideface_bc_for(meshes[m], dofs, E, static_cast<int>(s)));
                out.push_back({fmt("%s[%zu] k=%d", kFixtureNames[m], s, k), E, &meshes[m], static_cast<int>(s), k});
            }
        }
    return out;
}

double spectral_radius(const CVector& ev)
{
    double rho = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        rho = std::max(rho, std::abs(ev[i]));
    return rho;
}

// Largest |lambda + mu + (d - 2)| under a greedy matching of the spectrum with itself.
double pairing_defect(const CVector& ev, int d)
{
    const Eigen::Index n = ev.size();
    std::vector<bool> used(n, false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[i])
            continue;
        double best = INFINITY;
        Eigen::Index arg = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[j])
                continue;
            double e = std::abs(ev[i] + ev[j] + double(d - 2));
            if (e < best) {
                best = e;
                arg = j;
            }
        }
        used[i] = true;
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

PolytopalMesh random_star_polygon(std::mt19937& rng)
{
    std::uniform_int_distribution<int> count(4, 9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = count(rng);
    // jittered angles keep consecutive vertices apart
    MeshInput in;
    in.dimension = 2;
    SElementInput se;
    for (int i = 0; i < n; ++i) {
        double t = 2 * M_PI * (i + 0.15 + 0.7 * u(rng)) / n;
        double r = 0.6 + 0.8 * u(rng);
        in.vertices.push_back(make_point({r * std::cos(t), r * std::sin(t)}));
        se.facets.push_back({i, (i + 1) % n});
    }
    se.center = make_point({0.0, 0.0});
    in.selements.push_back(se);
    return build_mesh(in);
}

PolytopalMesh random_cube(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-0.15, 0.15);
    std::bernoulli_distribution coin(0.5);
    MeshInput in;
    in.dimension = 3;
    for (int i = 0; i < 8; ++i)
        in.vertices.push_back(
            make_point({(i & 1 ? 1.0 : -1.0) + u(rng), (i & 2 ? 1.0 : -1.0) + u(rng), (i & 4 ? 1.0 : -1.0) + u(rng)}));
    const int faces[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    SElementInput se;
    for (const auto& f : faces) {
        if (coin(rng)) {
            se.facets.push_back({f[0], f[1], f[2]});
            se.facets.push_back({f[0], f[2], f[3]});
        } else {
            se.facets.push_back({f[0], f[1], f[3]});
            se.facets.push_back({f[1], f[2], f[3]});
        }
    }
    se.center = make_point({0.0, 0.0, 0.0});
    in.selements.push_back(se);
    return build_mesh(in);
}

// ---- criteria

void criterion1()
{
    Criterion c{1, "quad mesh: dof, errors within 2%, rates within 0.15, under one minute per run"};
    auto rows = table_check(c, "quad", kQuad, {1, 2, 3, 4}, 0.02, true, true);
    rate_check(c, rows, 0.15);
    results.push_back(c);
    report(c);
}

void criterion2()
{
    Criterion c{2, "polygon mesh case 1: dof, errors within 2%"};
    table_check(c, "polygon1", kPolygon, {1, 2, 3}, 0.02, true, false);
    results.push_back(c);
    report(c);
}

void criterion3()
{
    Criterion c{3, "hexahedral mesh: dof, errors within 2% (levels 1-2), rates within 0.15"};
    auto rows = table_check(c, "hex", kHex, {1, 2}, 0.02, true, false);
    rate_check(c, rows, 0.15);
    results.push_back(c);
    report(c);
}

void criterion4()
{
    Criterion c{4, "coupled singular mesh: dof, errors within 5%, rates within 0.15"};
    auto rows = table_check(c, "coupled-singular", kCoupled, {1, 2, 3}, 0.05, false, false);
    rate_check(c, rows, 0.15);
    results.push_back(c);
    report(c);
}

void criterion5()
{
    Criterion c{5, "spectrum: square exponents, pairing symmetry, wedge exponent"};
    {
        SbfemModes m = compute_modes(assemble_E(gen_single_square(1), 0, 1));
        std::vector<double> lam;
        double worst_im = 0.0;
        for (Eigen::Index i = 0; i < m.exponents.size(); ++i) {
            lam.push_back(m.exponents[i].real());
            worst_im = std::max(worst_im, std::abs(m.exponents[i].imag()));
        }
        std::sort(lam.begin(), lam.end());
        const double expected[] = {0, 1, 1, 2};
        double worst = worst_im;
        for (std::size_t i = 0; i < lam.size() && i < 4; ++i)
            worst = std::max(worst, std::abs(lam[i] - expected[i]));
        c.note(lam.size() == 4 && worst < 1e-8, fmt("square k=1 exponents deviate from {0,1,1,2} by %.2e", worst));
    }
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> kd(1, 4);
    for (int t = 0; t < 20; ++t) {
        const bool three = t >= 10;
        PolytopalMesh mesh = three ? random_cube(rng) : random_star_polygon(rng);
        const int k = three ? 1 + t % 3 : kd(rng);
        EMatrices E = assemble_E(mesh, 0, k);
        const int d = mesh.dimension;
        CVector ev = Eigen::EigenSolver<Matrix>(build_system(E, d).M, false).eigenvalues();
        const double rho = spectral_radius(ev);
        const double defect = pairing_defect(ev, d) / std::max(1.0, rho);
        c.note(defect < 1e-8, fmt("random %s (%zu facets) k=%d: pairing defect %.2e (|M| spectrum radius %.1f)",
                                  three ? "cube" : "star polygon", mesh.selements[0].facets.size(), k, defect, rho));
    }
    {
        PolytopalMesh mesh = gen_open_singular(4);
        DofMap dofs(mesh, 3);
        EMatrices E = assemble_E(mesh, dofs, 0);
        E = apply_sideface_bc(E, sideface_bc_for(mesh, dofs, E, 0));
        const double lmin = compute_modes(E).min_positive_exponent();
        c.note(std::abs(lmin - 0.5) < 1e-3, fmt("wedge n=4 k=3: lambda_min %.8f", lmin));
    }
    results.push_back(c);
    report(c);
}

std::vector<Vector> random_traces(int n, std::mt19937& rng)
{
    std::normal_distribution<double> g;
    std::vector<Vector> out;
    for (int t = 0; t < 5; ++t) {
        Vector v(n);
        for (int i = 0; i < n; ++i)
            v[i] = g(rng);
        out.push_back(v);
    }
    return out;
}

void criterion6(const std::vector<ElementFixture>& fixtures)
{
    Criterion c{6, "gradient orthogonality below 1e-9, defining and extended classes"};
    std::mt19937 rng(6);
    const Polynomial bubble{{0.0, 1.0, -1.0}};       // sigma(0) = sigma(1) = 0
    const Polynomial cubic{{1.0, -3.0, 3.0, -1.0}};  // sigma(1) = 0 only
    double worst_def = 0.0, worst_ext = 0.0;
    std::string arg_def, arg_ext;
    int skipped_ext = 0;
    for (const auto& f : fixtures) {
        SbfemModes m = compute_modes(f.E);
        double r = orthogonality_residual(m, f.E, bubble, random_traces(f.E.size(), rng));
        if (r >= worst_def) {
            worst_def = r;
            arg_def = f.name;
        }
        if (r >= 1e-9)
            c.note(false, fmt("%s defining class %.2e", f.name.c_str(), r));
        // for d = 2, sigma(0) != 0 keeps finite energy only with a constant trace,
        // which the rim-pinned open element does not contain
        if (!f.E.closed && f.E.dimension == 2) {
            ++skipped_ext;
            continue;
        }
        std::vector<Vector> mu = f.E.dimension == 2 ? std::vector<Vector>{Vector::Ones(f.E.size())}
                                                    : random_traces(f.E.size(), rng);
        double e = orthogonality_residual(m, f.E, cubic, mu);
        if (e >= worst_ext) {
            worst_ext = e;
            arg_ext = f.name;
        }
        if (e >= 1e-9)
            c.note(false, fmt("%s extended class %.2e", f.name.c_str(), e));
    }
    c.note(worst_def < 1e-9, fmt("defining class worst %.2e (%s) over %zu elements", worst_def, arg_def.c_str(),
                                 fixtures.size()));
    c.note(worst_ext < 1e-9, fmt("extended class worst %.2e (%s)", worst_ext, arg_ext.c_str()));
    c.info(fmt("extended class not applicable to %d open 2D elements", skipped_ext));
    results.push_back(c);
    report(c);
}

void criterion7(const std::vector<ElementFixture>& fixtures)
{
    Criterion c{7, "stiffness: flux form equals mode Gram form to 1e-7; symmetric PSD, constant kernel"};
    double worst = 0.0;
    std::string arg;
    for (const auto& f : fixtures) {
        SbfemModes m = compute_modes(f.E);
        SElementStiffness st = element_stiffness(m);
        const double nk = st.K.norm();
        CMatrix Ainv = m.A.inverse();
        CMatrix flux = m.P * Ainv;
        CMatrix gram = Ainv.transpose() * mode_gram(m, f.E) * Ainv;
        const double d = (flux - gram).norm() / nk;
        if (d >= worst) {
            worst = d;
            arg = f.name;
        }
        if (d >= 1e-7)
            c.note(false, fmt("%s flux vs Gram %.2e", f.name.c_str(), d));
        Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(st.K).eigenvalues();
        bool ok = st.asymmetry < 1e-8 && ev[0] > -1e-10 * nk;
        if (f.E.closed)
            ok = ok && (st.K * Vector::Ones(st.K.rows())).norm() < 1e-9 * nk && ev[1] > 1e-8 * nk;
        else
            ok = ok && ev[0] > 0.0;
        if (!ok)
            c.note(false, fmt("%s asymmetry %.2e, eigenvalues %.2e %.2e", f.name.c_str(), st.asymmetry, ev[0] / nk,
                              ev[1] / nk));
    }
    c.note(worst < 1e-7, fmt("worst |Q A^-1 - A^-T G A^-1| / |K| = %.2e (%s)", worst, arg.c_str()));
    c.info("symmetry before symmetrization < 1e-8, min eigenvalue > -1e-10 |K|, "
           "closed: K 1 = 0 and second eigenvalue > 1e-8 |K|, open: definite");
    results.push_back(c);
    report(c);
}

void criterion8()
{
    Criterion c{8, "Galerkin energy error below interpolation error; interpolation slopes within 0.15"};
    int violations = 0;
    for (const auto& r : smooth_runs)
        if (!(r.galerkin_h1 <= r.interp_h1 * (1 + 1e-10))) {
            ++violations;
            c.note(false, fmt("%s k=%d l=%d galerkin %.4e > interp %.4e", r.mesh.c_str(), r.k, r.level, r.galerkin_h1,
                              r.interp_h1));
        }
    c.note(violations == 0, fmt("%zu smooth runs compared", smooth_runs.size()));

    const bool full = std::getenv("SBFEM_ACCEPTANCE_FULL") != nullptr;
    struct Figure {
        std::string mesh;
        std::vector<int> levels;
        int kmax;
    };
    for (const Figure& fig : {Figure{"single-square", {1, 2, 3}, 6}, Figure{"single-cube", {0, 1, 2}, full ? 4 : 2}}) {
        RunConfig cfg;
        cfg.mesh = fig.mesh;
        for (int k = 1; k <= fig.kmax; ++k) {
            std::vector<ErrorRow> rows;
            try {
                for (int level : fig.levels)
                    rows.push_back(run_case(cfg, level, k, false).row);
            } catch (const std::exception& e) {
                c.note(false, fmt("%s k=%d: %s", fig.mesh.c_str(), k, e.what()));
                continue;
            }
            ErrorReport rep = convergence_table(rows);
            bool ok = std::abs(rep.rate_l2 - (k + 1)) <= 0.15 && std::abs(rep.rate_h1 - k) <= 0.15;
            c.note(ok, fmt("%s k=%d interpolation slopes l2 %.3f (expect %d)  h1 %.3f (expect %d)", fig.mesh.c_str(),
                           k, rep.rate_l2, k + 1, rep.rate_h1, k));
        }
    }
    if (!full)
        c.note(false, "single-cube k=3,4 not run (over ten minutes each); set SBFEM_ACCEPTANCE_FULL=1");
    results.push_back(c);
    report(c);
}

void criterion9(const std::vector<ElementFixture>& fixtures)
{
    Criterion c{9, "shape gradients match central differences to 1e-5 at 20 points per fixture"};
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::string arg;
    for (const auto& f : fixtures) {
        SbfemModes m = compute_modes(f.E);
        const auto& sectors = f.mesh->selements[f.selement].sectors;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(sectors.size()) - 1);
        const int d = f.mesh->dimension;
        for (int t = 0; t < 20; ++t) {
            const int s = pick(rng);
            const Sector& sec = sectors[s];
            TraceBasis b(sec.facet_kind, f.k);
            const double xi = 0.1 + 0.85 * u(rng);
            Point eta(reference_dimension(sec.facet_kind));
            if (sec.facet_kind == FacetKind::Triangle) {
                double a = 0.05 + 0.9 * u(rng);
                eta << a, 0.05 + 0.9 * u(rng) * (1 - a);
            } else {
                for (Eigen::Index j = 0; j < eta.size(); ++j)
                    eta[j] = -0.95 + 1.9 * u(rng);
            }
            ModeShapes sh = shape_eval(m, s, sec, b, xi, eta);
            Point x = duffy_map(sec, xi, eta);
            const double h = 1e-6;
            Matrix fd(d, m.size());
            for (int j = 0; j < d; ++j) {
                Point xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                auto cp = duffy_inverse(sec, xp), cm = duffy_inverse(sec, xm);
                if (!cp || !cm)
                    throw Error("finite difference stencil left the sector");
                fd.row(j) = (shape_eval(m, s, sec, b, cp->xi, cp->eta).values -
                             shape_eval(m, s, sec, b, cm->xi, cm->eta).values)
                                .transpose() /
                            (2 * h);
            }
            double gmax = 0.0;
            for (int r = 0; r < m.size(); ++r)
                gmax = std::max(gmax, sh.gradients.col(r).norm());
            for (int r = 0; r < m.size(); ++r) {
                const double g = sh.gradients.col(r).norm();
                if (g < 1e-8 * gmax)
                    continue;
                const double e = (fd.col(r) - sh.gradients.col(r)).norm() / g;
                if (e > worst) {
                    worst = e;
                    arg = f.name;
                }
            }
        }
    }
    c.note(worst < 1e-5, fmt("worst relative error %.2e (%s), h = 1e-6, gradients below 1e-8 of the largest skipped",
                             worst, arg.c_str()));
    results.push_back(c);
    report(c);
}

}  // namespace

int main()
{
    auto guarded = [](int id, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            Criterion c{id, "aborted"};
            c.note(false, e.what());
            results.push_back(c);
            report(c);
        }
    };
    guarded(1, criterion1);
    guarded(2, criterion2);
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, criterion5);
    std::vector<PolytopalMesh> meshes = fixture_meshes();
    std::vector<ElementFixture> fixtures = element_fixtures(meshes, 4);
    guarded(6, [&] { criterion6(fixtures); });
    guarded(7, [&] { criterion7(fixtures); });
    guarded(8, criterion8);
    guarded(9, [&] { criterion9(fixtures); });

    int failed = 0;
    for (const auto& c : results)
        failed += !c.pass;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed ? 1 : 0;
}
