#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cosetqkd::bounds {

// Winning-probability upper bound for one monogamy-game instance. Values above
// 1 are reported raw with `trivial` set; callers that need a probability clamp.
struct Bound {
    double value = 0;
    bool trivial = false;
};

inline Bound make_bound(double v) { return Bound{v, v >= 1.0}; }

struct GameSpecU1 {
    std::vector<long> primes;  // strictly ascending, each prime
    double epsilon = 0;        // angular tolerance, 0 < epsilon <= pi/p_N^2
};

struct GameSpecRn {
    int n = 0;            // even mode count
    double delta = 0;     // position bin half-width
    double epsilon = 0;   // momentum bin half-width
    std::optional<double> gamma;  // mode-failure fraction, gamma*n/2 integer
};

struct GameSpecGkp {
    std::vector<long> alphas;  // ascending primes
    double epsilon = 0;
    double M = 0;  // support cutoff
    double a = 0;  // damping strength
};

struct GameSpecSo3 {
    int N = 0;           // even subgroup count
    double epsilon = 0;  // metric radius, 0 < epsilon < 2 sin(pi/2N)
};

double binary_entropy(double gamma);

// Cyclic family pi_j(k) = (k+j) mod m; pi_i o pi_j^-1 is fixed-point-free for i != j.
std::vector<std::vector<int>> orthogonal_permutations(int m);

Bound bound_u1(const GameSpecU1 &spec);
Bound bound_complex(int n, double delta, double epsilon);

struct RnBound {
    double exact_sum = 0;    // (1/C(n,n/2)) * sum_k C(n/2,k)^2 (2 sqrt(de))^k
    double closed_form = 0;  // sqrt(e) * (1/2 + sqrt(de))^(n/2)
};
RnBound bound_rn(const GameSpecRn &spec);

Bound bound_rn_mode_failure(const GameSpecRn &spec);

Bound bound_gkp(const GameSpecGkp &spec);
// Evaluates bound_gkp for each cutoff in Ms and returns the smallest, with the cutoff attaining it.
struct GkpSweep {
    double best_M = 0;
    Bound bound;
};
GkpSweep bound_gkp_sweep(GameSpecGkp spec, const std::vector<double> &Ms);

Bound bound_so3(const GameSpecSo3 &spec);

// Largest relative overlap between the reference circle subgroup and a rotated
// copy at angle theta, with metric radius epsilon: 1 if |cos theta| > cos eta,
// else (2/pi) asin sqrt(1 - sqrt(1 - sin^2 eta / sin^2 theta)), cos(eta/2) = 1 - eps^2/2.
double so3_coset_overlap(double theta, double epsilon);

struct McEstimate {
    double estimate = 0;
    double std_error = 0;
};

// Independent Monte-Carlo oracle for so3_coset_overlap: samples phi uniformly
// on the reference circle, tests the min-over-chi quaternion distance
// d(Z(phi)X(theta), X(beta)Z(chi)) < epsilon, and maximizes the hit measure
// over beta on a 720-point grid with local refinement. The estimate is taken
// from fresh samples at the winning beta, so its standard error is binomial.
McEstimate so3_overlap_mc(double theta, double epsilon, int trials, uint64_t seed);

}  // namespace cosetqkd::bounds
