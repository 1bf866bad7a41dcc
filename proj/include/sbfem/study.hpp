#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbfem/errors.hpp"
#include "sbfem/mesh.hpp"
#include "sbfem/postproc.hpp"
#include "sbfem/solver.hpp"

namespace sbfem {

// Error raised for malformed run configurations (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::string command;          // modes | interp | solve | convergence
    std::string mesh = "quad";    // generator name or file:<path>
    std::vector<int> k{1};
    std::vector<int> levels;      // empty: first level of the mesh (single-run commands)
    std::string problem;          // registry name, default per mesh
    std::string method = "galerkin";  // convergence: galerkin | interp
    std::string outer_bc;         // coupled-singular outer sides: dirichlet | neumann
    std::string output;           // empty: stdout
    int threads = 0;
    int e_order = -1;
    ErrorOptions quadrature;
    double zero_tol = 1e-8;
    double condition_cap = 1e12;
};

// Generator names: quad, polygon1, hex, polyhedron1, single-square,
// single-cube, open-singular, coupled-singular; or file:<path>.
PolytopalMesh make_mesh(const std::string& name, int level, const std::string& outer_bc = {});
double mesh_size(const std::string& name, int level, const PolytopalMesh& mesh);
// Coarsest level a generator accepts.
int first_level(const std::string& name);
std::string default_problem(const std::string& mesh_name);
// Default side treatment of the coupled singular benchmark.
const std::string& default_outer_bc();

struct CaseResult {
    ErrorRow row;
    ErrorNorms errors;
    double residual = 0.0;
};

CaseResult run_case(const RunConfig& config, int level, int k, bool galerkin);

// Parses "a..b" ranges and comma lists.
std::vector<int> parse_int_list(const std::string& text);
RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Executes the command, writing CSV output; returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sbfem
