#pragma once

#include <vector>

#include "sbfem/mesh.hpp"
#include "sbfem/polyspace.hpp"
#include "sbfem/refgeom.hpp"
#include "sbfem/types.hpp"

namespace sbfem {

struct BVectors {
    Matrix B1;  // d x n, column l = J1^{-T} [N_l; 0]
    Matrix B2;  // d x n, column l = J1^{-T} [0; grad N_l]
    double detJ1 = 0.0;
};

BVectors sector_B(const Sector& sector, const TraceBasis& basis, const Point& eta);

// E12 is the B1-B2 Gram: (E12)_ab = int B1a . B2b |J1|; E21 = E12^T.
struct SectorE {
    Matrix E11, E12, E21, E22;
};

SectorE sector_E(const Sector& sector, const TraceBasis& basis, const QuadratureRule& rule);

struct EMatrices {
    int dimension = 2;
    Matrix E11, E12, E21, E22;
    // Per sector: lattice node -> local index, or -1 when constrained.
    std::vector<std::vector<int>> dof_map;
    // Local index -> global node id.
    std::vector<int> global_nodes;
    // Local indices of nodes on side faces of an open scaled boundary.
    std::vector<int> rim;
    bool closed = true;

    int size() const { return static_cast<int>(E11.rows()); }
};

int default_e_order(int k);

EMatrices assemble_E(const PolytopalMesh& mesh, const DofMap& dofs, int selement, int order = -1);
// Convenience overload numbering the mesh at degree k.
EMatrices assemble_E(const PolytopalMesh& mesh, int selement, int k);

}  // namespace sbfem
