#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cosetqkd/bounds.hpp"
#include "cosetqkd/group.hpp"
#include "cosetqkd/irreps.hpp"

namespace cosetqkd::finite {

// Lexicographically smallest representative of each left coset gH, ascending.
std::vector<int> coset_reps(const GroupTable &G, const Subgroup &H);

struct ColumnInfo {
    int rep;          // coset representative (group element index)
    int irrep_index;  // position in the IrrepSet
    int row, col;     // matrix-entry indices within the irrep
};

// Orthonormal basis of C^{|G|} whose columns are the normalized states
//   sqrt(d/|H|) * sum_h irrep(h)[row][col] |g h>,
// grouped by coset rep, then irrep, then (row, col) in row-major order.
struct CosetBasis {
    Eigen::MatrixXcd U;  // |G| x |G|, unitary
    std::vector<ColumnInfo> columns;
    std::vector<int> reps;
};

CosetBasis coset_basis(const GroupTable &G, const Subgroup &H, const IrrepSet &irr);

// Largest singular value of P Q, where P projects onto the span of the
// (irrep_index, row, col) columns over all cosets of H, and Q projects onto
// the coordinates of the coset qK. Also returns the closed-form bound
// sqrt(d * |H meet K| / |H|) that the norm must not exceed.
struct OverlapResult {
    double norm;
    double bound;
};

OverlapResult overlap_check(const GroupTable &G, const Subgroup &H, const Subgroup &K,
                            int irrep_index, int row, int col, int q);

// Winning-probability bound for the coset guessing game played over the
// subgroup collection S: averages, over the cyclic shifts pairing each
// subgroup with another, the clamped worst-case overlap term
//   min(1, max_{H, irrep} sqrt(d * |H meet H'| / |H|)).
bounds::Bound finite_bound(const GroupTable &G, const std::vector<Subgroup> &S);

}  // namespace cosetqkd::finite
