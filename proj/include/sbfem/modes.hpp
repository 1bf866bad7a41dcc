#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbfem/ematrix.hpp"
#include "sbfem/polyspace.hpp"
#include "sbfem/refgeom.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

// Local (S-element) trace DOFs pinned to zero on Dirichlet side faces.
struct SideFaceBC {
    std::vector<int> constrained;
};

SideFaceBC sideface_bc_for(const PolytopalMesh& mesh, const DofMap& dofs, const EMatrices& E, int selement);
EMatrices apply_sideface_bc(const EMatrices& E, const SideFaceBC& bc);

// xi [Phi; p]' = M [Phi; p] with p = xi^{2-d} Q and
// Q = xi^{d-1} E11 Phi' + xi^{d-2} E12 Phi.
struct EulerSystem {
    Matrix M;
    int dimension = 2;

    int size() const { return static_cast<int>(M.rows() / 2); }
};

EulerSystem build_system(const EMatrices& E, int dimension);

struct ModeOptions {
    double zero_tol = 1e-8;        // relative to the spectral radius
    double condition_cap = 1e12;   // cap on cond(A)
    double residual_tol = 1e-8;    // eigenpair residual, relative to ||M||
    std::string label;             // S-element name for diagnostics
};

// A real basis function: Re or Im part of a complex mode.
struct RealMode {
    int mode = 0;
    bool imaginary = false;
};

struct SbfemModes {
    int dimension = 2;
    CVector exponents;  // lambda_i, Re >= 0
    CMatrix A;          // trace eigenvectors (columns)
    CMatrix P;          // fluxes Q_i(1)
    std::optional<int> constant_index;
    double condition_A = 0.0;
    CVector spectrum;               // every eigenvalue of M
    std::vector<bool> selected;     // mask over spectrum
    std::vector<std::vector<int>> dof_map;
    std::vector<RealMode> real_modes;
    Matrix real_traces;             // N x N, columns Re/Im of A_i
    // Orthonormal basis [X1; X2] of the selected invariant subspace of M (ordered Schur vectors).
    CMatrix subspace;

    int size() const { return static_cast<int>(exponents.size()); }
    double min_positive_exponent() const;
};

SbfemModes select_modes(const EulerSystem& system, const EMatrices& E, const ModeOptions& options = {});
SbfemModes compute_modes(const EMatrices& E, const ModeOptions& options = {});

struct ModeShapes {
    Vector values;     // N
    Matrix gradients;  // d x N
};

// Realified shape functions of the S-element on one of its sectors.
ModeShapes shape_eval(const SbfemModes& modes, int sector_index, const Sector& sector, const TraceBasis& basis,
                      double xi, const Point& eta);

struct SElementStiffness {
    Matrix K;
    double asymmetry = 0.0;      // ||K - K^T|| / ||K|| before symmetrization
    double imag_residue = 0.0;   // ||Im(X2 X1^-1)|| / ||K||
    double mode_deviation = 0.0; // ||P A^-1 - X2 X1^-1|| / ||K||
};

SElementStiffness element_stiffness(const SbfemModes& modes, const ModeOptions& options = {});

// Gram of the complex modes under the gradient bilinear form.
CMatrix mode_gram(const SbfemModes& modes, const EMatrices& E);
// Stiffness through the mode Gram: Re(A^-T G A^-1).
Matrix gram_stiffness(const SbfemModes& modes, const EMatrices& E);

// Real polynomial in xi, ascending coefficients.
struct Polynomial {
    std::vector<double> coeffs;
    double operator()(double x) const;
};

// max |<phi_r, psi>| / (|phi_r| |psi|) over non-constant realified modes and
// test functions psi = sigma(xi) mu(eta) with mu taken from test_traces.
double orthogonality_residual(const SbfemModes& modes, const EMatrices& E, const Polynomial& sigma,
                              const std::vector<Vector>& test_traces);

// Relative residual of the second-order radial equation for mode i at xi.
double ode_residual(const SbfemModes& modes, const EMatrices& E, int mode, double xi);

// Complex mode weights beta with Re sum beta_i phi_i equal to the real
// combination sum c_r f_r of realified functions.
CVector complex_weights(const SbfemModes& modes, const Vector& real_coeffs);

}  // namespace sbfem
