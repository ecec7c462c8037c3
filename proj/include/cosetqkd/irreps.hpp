#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cosetqkd/group.hpp"

namespace cosetqkd::finite {

// Unitary irreducible representation of a subgroup, given by one matrix per
// subgroup element (in the order of Subgroup::elems).
struct Irrep {
    int dim = 1;
    std::vector<Eigen::MatrixXcd> mats;
};

struct IrrepSet {
    std::vector<Irrep> irreps;
    int sum_dim_sq() const;
};

// Builds the complete set of irreps of H. Supported structures: abelian
// subgroups (via character exponents) and dihedral groups of odd rotation
// order (closed-form 1- and 2-dimensional blocks). Anything else raises a
// validation error naming the obstruction.
//
// Ordering: trivial irrep first, remaining 1-dimensional irreps next, then
// higher-dimensional blocks; deterministic for a fixed (G, H).
IrrepSet irreps_of(const GroupTable &G, const Subgroup &H);

// Checks row-orthogonality of the matrix entries under the normalized
// invariant inner product; throws on failure.
void check_schur_orthogonality(const GroupTable &G, const Subgroup &H,
                               const IrrepSet &irr, double tol = 1e-9);

}  // namespace cosetqkd::finite
