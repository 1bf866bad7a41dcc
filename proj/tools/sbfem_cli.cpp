#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sbfem/study.hpp"

namespace {

struct Flags {
    std::string config, mesh, k, levels, problem, method, outer_bc, output;
    std::optional<int> threads, e_order, facet_order, radial_order, radial_levels;
    std::optional<double> radial_ratio, zero_tol, condition_cap;
};

void add_flags(CLI::App* app, Flags& f)
{
    // repeated flags: the last one wins
    app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--mesh", f.mesh, "generator name or file:<path>");
    app->add_option("--k", f.k, "degree, list or range a..b");
    app->add_option("--levels,--level", f.levels, "refinement levels, list or range a..b");
    app->add_option("--problem", f.problem, "exact solution name");
    app->add_option("--method", f.method, "galerkin or interp");
    app->add_option("--outer-bc,--outer_bc", f.outer_bc, "coupled-singular outer sides");
    app->add_option("--output", f.output, "output CSV path");
    app->add_option("--threads", f.threads, "worker threads (0: hardware)");
    app->add_option("--e-order,--e_order", f.e_order, "facet quadrature order for E matrices");
    app->add_option("--facet-order,--facet_order", f.facet_order);
    app->add_option("--radial-order,--radial_order", f.radial_order);
    app->add_option("--radial-levels,--radial_levels", f.radial_levels);
    app->add_option("--radial-ratio,--radial_ratio", f.radial_ratio);
    app->add_option("--zero-tol,--zero_tol", f.zero_tol);
    app->add_option("--condition-cap,--condition_cap", f.condition_cap);
}

sbfem::RunConfig merge(const std::string& command, const Flags& f)
{
    sbfem::RunConfig c = f.config.empty() ? sbfem::RunConfig{} : sbfem::load_config_file(f.config);
    c.command = command;
    if (!f.mesh.empty())
        c.mesh = f.mesh;
    if (!f.k.empty())
        c.k = sbfem::parse_int_list(f.k);
    if (!f.levels.empty())
        c.levels = sbfem::parse_int_list(f.levels);
    if (!f.problem.empty())
        c.problem = f.problem;
    if (!f.method.empty())
        c.method = f.method;
    if (!f.outer_bc.empty())
        c.outer_bc = f.outer_bc;
    if (!f.output.empty())
        c.output = f.output;
    if (f.threads)
        c.threads = *f.threads;
    if (f.e_order)
        c.e_order = *f.e_order;
    if (f.facet_order)
        c.quadrature.facet_order = *f.facet_order;
    if (f.radial_order)
        c.quadrature.radial_order = *f.radial_order;
    if (f.radial_levels)
        c.quadrature.radial_levels = *f.radial_levels;
    if (f.radial_ratio)
        c.quadrature.radial_ratio = *f.radial_ratio;
    if (f.zero_tol)
        c.zero_tol = *f.zero_tol;
    if (f.condition_cap)
        c.condition_cap = *f.condition_cap;
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SBFEM solver for the Laplace equation on polytopal meshes"};
    app.require_subcommand(1);
    Flags flags;
    for (const char* name : {"modes", "interp", "solve", "convergence"})
        add_flags(app.add_subcommand(name), flags);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    sbfem::RunConfig config;
    try {
        config = merge(command, flags);
    } catch (const sbfem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return sbfem::run(config, std::cout, std::cerr);
}
