#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sbfem/solver.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

struct ExactSolution {
    std::string name;
    int dimension = 0;  // 0: any
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;
};

// Registered: exp2d, exp3d, sqrt2d, const, linear, xy.
const ExactSolution& exact_solution(std::string_view name);
std::vector<std::string> exact_solution_names();

struct ErrorOptions {
    int facet_order = -1;    // default 2k+8
    int radial_order = -1;   // Gauss points; default 2k+10 (smooth), k+6 per piece (singular)
    int radial_levels = 8;   // geometric pieces when the gradient is singular
    double radial_ratio = 0.2;
    int fe_order = -1;       // default 2k+8
};

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;  // energy seminorm
};

ErrorNorms compute_errors(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                          const ErrorOptions& options = {});
double energy_error(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                    const ErrorOptions& options = {});
double l2_error(const DiscreteSolution& solution, const ExactSolution& exact, const Discretization& disc,
                const ErrorOptions& options = {});

// Value and gradient of the discrete field at (xi, eta) of a sector.
struct FieldSample {
    double value;
    Point gradient;
};
FieldSample evaluate_selement(const DiscreteSolution& solution, const Discretization& disc, int selement,
                              int sector, double xi, const Point& eta);

struct ErrorRow {
    int level = 0;
    double h = 0.0;
    int dof = 0;
    double e_l2 = 0.0;
    double e_h1 = 0.0;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    double rate_l2 = 0.0;
    double rate_h1 = 0.0;

    std::string to_csv() const;
};

// Rates are log2(e_prev / e_last) over the last two levels.
ErrorReport convergence_table(const std::vector<ErrorRow>& rows);
std::string format_sci(double value);

}  // namespace sbfem
