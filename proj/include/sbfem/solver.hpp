#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "sbfem/ematrix.hpp"
#include "sbfem/mesh.hpp"
#include "sbfem/modes.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct DiscretizationOptions {
    int e_order = -1;  // E-matrix facet rule order, default 2k+2
    int fe_order = -1; // FE stiffness rule order, default 2k
    ModeOptions modes;
    int threads = 0;   // 0: hardware concurrency
};

struct SElementData {
    EMatrices E;  // after side-face constraints
    SbfemModes modes;
    SElementStiffness stiffness;
};

// Per-element operators of a mesh at degree k. Keeps a reference to the mesh,
// which must outlive it.
class Discretization {
public:
    Discretization(const PolytopalMesh& mesh, int k, const DiscretizationOptions& options = {});
    Discretization(PolytopalMesh&&, int, const DiscretizationOptions& = {}) = delete;

    const PolytopalMesh& mesh() const { return *mesh_; }
    const DofMap& dofs() const { return dofs_; }
    int degree() const { return k_; }
    int threads() const { return threads_; }
    const std::vector<SElementData>& selements() const { return selements_; }
    const std::vector<Matrix>& fe_stiffness() const { return fe_stiffness_; }

private:
    const PolytopalMesh* mesh_;
    int k_;
    int threads_;
    DofMap dofs_;
    std::vector<SElementData> selements_;
    std::vector<Matrix> fe_stiffness_;
};

// Laplace stiffness of a 2D Q_k (quadrilateral) or P_k (triangle) element,
// vertices counter-clockwise, lattice order of TraceBasis.
Matrix fe_element_stiffness(FacetKind kind, std::span<const Point> vertices, int k, int order = -1);

struct TraceInterpolant {
    Vector values;  // one per global node
};

TraceInterpolant trace_interpolate(const DofMap& dofs, const ScalarField& f);

struct DiscreteSolution {
    Vector nodal;
    // Per S-element coefficients in the realified mode basis.
    std::vector<Vector> modal;
    double residual = 0.0;
};

// Mode coefficients from nodal values: c = A_r^{-1} omega.
DiscreteSolution reconstruct(const Discretization& disc, const Vector& nodal);
DiscreteSolution sbfem_interpolate(const Discretization& disc, const ScalarField& f);

struct GlobalSystem {
    SparseMatrix K;
    Vector rhs;
    std::vector<int> dirichlet;  // sorted node ids
    Vector values;               // prescribed values, indexed by node id
    std::vector<char> touched;   // node received an element contribution
};

GlobalSystem assemble_global(const Discretization& disc);
void apply_dirichlet(GlobalSystem& system, const Discretization& disc, const ScalarField& g);
// Adds int_F flux N_i over boundary facets tagged Neumann; flux(x, n) is the
// outward normal derivative.
void apply_neumann(GlobalSystem& system, const Discretization& disc,
                   const std::function<double(const Point&, const Point&)>& flux);
DiscreteSolution solve(const GlobalSystem& system, const Discretization& disc);

}  // namespace sbfem
