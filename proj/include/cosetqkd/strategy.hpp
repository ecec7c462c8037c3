#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cosetqkd/coset.hpp"
#include "cosetqkd/group.hpp"

namespace cosetqkd::finite {

// Tripartite strategy for the coset guessing game: a shared state on
// A (dim |G|) x B x C, one POVM per subgroup for the player guessing the
// coset, and one per subgroup for the player guessing the matrix entry.
struct FiniteStrategy {
    Eigen::MatrixXcd rho;                             // density matrix, dim |G|*dB*dC
    std::vector<std::vector<Eigen::MatrixXcd>> bob;   // [subgroup][coset index]
    std::vector<std::vector<Eigen::MatrixXcd>> charlie;  // [subgroup][basis column index]
    int d_B = 0;
    int d_C = 0;
};

// Average over the subgroup collection of the probability that both players
// answer correctly. Validates the state (hermitian, positive, unit trace) and
// every POVM (positive elements summing to identity) to 1e-10, and the
// outcome counts against the coset structure.
double strategy_value(const GroupTable &G, const std::vector<Subgroup> &S,
                      const FiniteStrategy &strat);

struct SeesawOptions {
    uint64_t seed = 0;
    int iterations = 60;
    double tolerance = 1e-10;
    int d_B = 0;  // 0 means |G|
    int d_C = 0;  // 0 means |G|
};

struct SeesawResult {
    double value = 0.0;
    FiniteStrategy strategy;
    bool converged = false;
    int iterations_run = 0;
};

// Alternating optimization: square-root-measurement updates for the two
// guessing POVMs, then a leading-eigenvector update for the shared state.
// Returns the best strategy seen; its value is a certified lower bound on
// the optimal winning probability and never falls below the uniform-guessing
// value 1/|G|.
SeesawResult seesaw_lower_bound(const GroupTable &G, const std::vector<Subgroup> &S,
                                const SeesawOptions &opts);

}  // namespace cosetqkd::finite
