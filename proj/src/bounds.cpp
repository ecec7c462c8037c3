#include "cosetqkd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cosetqkd/errors.hpp"
#include "cosetqkd/rng.hpp"

namespace cosetqkd::bounds {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; d++) {
        if (p % d == 0) return false;
    }
    return true;
}

void check_ascending_primes(const std::vector<long> &ps, const char *what) {
    require_valid(!ps.empty(), std::string(what) + ": need at least one prime");
    for (size_t i = 0; i < ps.size(); i++) {
        require_valid(is_prime(ps[i]), std::string(what) + ": entries must be prime");
        if (i > 0) {
            require_valid(ps[i] > ps[i - 1], std::string(what) + ": entries must be strictly ascending");
        }
    }
}

}  // namespace

double binary_entropy(double gamma) {
    require_valid(gamma >= 0.0 && gamma <= 1.0, "binary_entropy: gamma must lie in [0,1]");
    if (gamma == 0.0 || gamma == 1.0) {
        return 0.0;
    }
    return -gamma * std::log2(gamma) - (1.0 - gamma) * std::log2(1.0 - gamma);
}

std::vector<std::vector<int>> orthogonal_permutations(int m) {
    require_valid(m >= 1, "orthogonal_permutations: m must be positive");
    std::vector<std::vector<int>> fam(m, std::vector<int>(m));
    for (int j = 0; j < m; j++) {
        for (int k = 0; k < m; k++) {
            fam[j][k] = (k + j) % m;
        }
    }
    return fam;
}

Bound bound_u1(const GameSpecU1 &spec) {
    check_ascending_primes(spec.primes, "bound_u1");
    require_valid(spec.epsilon > 0, "bound_u1: epsilon must be positive");
    double pN = static_cast<double>(spec.primes.back());
    require_precondition(spec.epsilon <= kPi / (pN * pN),
                         "bound_u1: epsilon must satisfy epsilon <= pi / p_N^2");
    double N = static_cast<double>(spec.primes.size());
    return make_bound(1.0 / N + 1.0 / std::sqrt(static_cast<double>(spec.primes.front())));
}

Bound bound_complex(int n, double delta, double epsilon) {
    require_valid(n > 0 && n % 4 == 0, "bound_complex: n must be a positive multiple of 4");
    require_valid(delta >= 0 && epsilon >= 0, "bound_complex: delta, epsilon must be nonnegative");
    double nn = n;
    return make_bound(2.0 / nn + 4.0 * (1.0 + 1.0 / nn) * std::sqrt(delta * epsilon));
}

RnBound bound_rn(const GameSpecRn &spec) {
    require_valid(spec.n > 0 && spec.n % 2 == 0, "bound_rn: n must be even and positive");
    require_valid(spec.delta >= 0 && spec.epsilon >= 0, "bound_rn: delta, epsilon must be nonnegative");
    require_valid(!spec.gamma.has_value(), "bound_rn: gamma must be absent (use bound_rn_mode_failure)");
    int half = spec.n / 2;
    double x = 2.0 * std::sqrt(spec.delta * spec.epsilon);

    // Exact binomials fit a double mantissa through n = 64; fall back to
    // log-space accumulation above that.
    double exact;
    if (spec.n <= 64) {
        double central = 1.0;  // C(n, n/2)
        for (int i = 0; i < half; i++) {
            central = central * static_cast<double>(spec.n - i) / static_cast<double>(i + 1);
        }
        double sum = 0.0;
        double c = 1.0;  // C(half, k)
        double xk = 1.0;
        for (int k = 0; k <= half; k++) {
            sum += c * c * xk;
            xk *= x;
            c = c * static_cast<double>(half - k) / static_cast<double>(k + 1);
        }
        exact = sum / central;
    } else {
        double log_central = std::lgamma(spec.n + 1.0) - 2.0 * std::lgamma(half + 1.0);
        double lx = x > 0 ? std::log(x) : 0.0;
        std::vector<double> logs(half + 1);
        double peak = -HUGE_VAL;
        for (int k = 0; k <= half; k++) {
            double lc = std::lgamma(half + 1.0) - std::lgamma(k + 1.0) - std::lgamma(half - k + 1.0);
            logs[k] = (x > 0 || k == 0) ? 2.0 * lc + k * lx - log_central : -HUGE_VAL;
            peak = std::max(peak, logs[k]);
        }
        double acc = 0.0;
        for (double lv : logs) {
            acc += std::exp(lv - peak);
        }
        exact = std::exp(peak) * acc;
    }

    double closed = std::sqrt(std::numbers::e) * std::pow(0.5 + std::sqrt(spec.delta * spec.epsilon), half);
    return RnBound{exact, closed};
}

Bound bound_rn_mode_failure(const GameSpecRn &spec) {
    require_valid(spec.n > 0 && spec.n % 2 == 0, "bound_rn_mode_failure: n must be even and positive");
    require_valid(spec.delta >= 0 && spec.epsilon >= 0,
                  "bound_rn_mode_failure: delta, epsilon must be nonnegative");
    require_valid(spec.gamma.has_value(), "bound_rn_mode_failure: gamma required");
    double g = *spec.gamma;
    require_valid(g >= 0 && g < 1, "bound_rn_mode_failure: gamma must lie in [0,1)");
    double half_count = g * spec.n / 2.0;
    require_valid(std::abs(half_count - std::round(half_count)) < 1e-9,
                  "bound_rn_mode_failure: gamma*n/2 must be an integer");
    double exponent = (1.0 - g) * std::log2(0.5 + std::sqrt(spec.delta * spec.epsilon)) +
                      binary_entropy(g) + 1.0 / (std::numbers::ln2 * spec.n);
    return make_bound(std::exp2(exponent * spec.n / 2.0));
}

Bound bound_gkp(const GameSpecGkp &spec) {
    check_ascending_primes(spec.alphas, "bound_gkp");
    require_valid(spec.epsilon >= 0, "bound_gkp: epsilon must be nonnegative");
    require_valid(spec.M > 0, "bound_gkp: M must be positive");
    require_valid(spec.a > 0, "bound_gkp: a must be positive");
    double N = static_cast<double>(spec.alphas.size());
    double a1 = static_cast<double>(spec.alphas.front());
    double aN = static_cast<double>(spec.alphas.back());
    double mid = 2.0 * std::sqrt((aN + 2.0 * spec.M / a1) * spec.epsilon);
    double tail = std::sqrt((1.0 / spec.M) * std::sqrt(2.0 / (kPi * spec.a))) *
                  std::exp(-spec.a * spec.M * spec.M);
    return make_bound(1.0 / N + mid + tail);
}

GkpSweep bound_gkp_sweep(GameSpecGkp spec, const std::vector<double> &Ms) {
    require_valid(!Ms.empty(), "bound_gkp_sweep: need at least one cutoff");
    GkpSweep best;
    best.bound.value = HUGE_VAL;
    for (double M : Ms) {
        spec.M = M;
        Bound b = bound_gkp(spec);
        if (b.value < best.bound.value) {
            best.bound = b;
            best.best_M = M;
        }
    }
    return best;
}

Bound bound_so3(const GameSpecSo3 &spec) {
    require_valid(spec.N > 0 && spec.N % 2 == 0, "bound_so3: N must be even and positive");
    require_valid(spec.epsilon > 0, "bound_so3: epsilon must be positive");
    require_precondition(spec.epsilon < 2.0 * std::sin(kPi / (2.0 * spec.N)),
                         "bound_so3: epsilon must satisfy epsilon < 2 sin(pi/2N)");
    return make_bound(2.0 / spec.N + 2.0 * std::sqrt(kPi * spec.epsilon));
}

double so3_coset_overlap(double theta, double epsilon) {
    require_valid(theta >= 0 && theta < 2.0 * kPi, "so3_coset_overlap: theta must lie in [0, 2pi)");
    require_valid(epsilon > 0 && epsilon < 1, "so3_coset_overlap: epsilon must lie in (0,1)");
    double eta = 2.0 * std::acos(1.0 - epsilon * epsilon / 2.0);
    double c = std::abs(std::cos(theta));
    if (c > std::cos(eta)) {
        return 1.0;
    }
    double ratio = std::sin(eta) / std::sin(theta);
    double inner = 1.0 - std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    return (2.0 / kPi) * std::asin(std::sqrt(inner));
}

namespace {

// Squared overlap |<q1, q2(chi)>|^2 maximized over chi in closed form:
// with q1 = quat(Z(phi) X(theta)) and q2 = quat(X(beta) Z(chi)), the inner
// product is A cos(chi/2) + B sin(chi/2), so the max of |.| is sqrt(A^2+B^2).
// The quaternion distance min over +-q then satisfies d^2 = 2 - 2 sqrt(A^2+B^2).
double max_quat_alignment(double phi, double theta, double beta) {
    double cp = std::cos(phi / 2), sp = std::sin(phi / 2);
    double ct = std::cos(theta / 2), st = std::sin(theta / 2);
    double cb = std::cos(beta / 2), sb = std::sin(beta / 2);
    // q1 = (w, x, y, z) from (cp + i sp)(ct + k st).
    double w = cp * ct, x = sp * ct, y = -sp * st, z = cp * st;
    double A = cb * w + sb * z;
    double B = cb * x + sb * y;
    return A * A + B * B;
}

bool hit(double phi, double theta, double beta, double eps2) {
    double align = std::sqrt(max_quat_alignment(phi, theta, beta));
    return 2.0 - 2.0 * align < eps2;
}

}  // namespace

McEstimate so3_overlap_mc(double theta, double epsilon, int trials, uint64_t seed) {
    require_valid(theta >= 0 && theta < 2.0 * kPi, "so3_overlap_mc: theta must lie in [0, 2pi)");
    require_valid(epsilon > 0 && epsilon < 1, "so3_overlap_mc: epsilon must lie in (0,1)");
    require_valid(trials >= 1000, "so3_overlap_mc: need trials >= 1000");

    double eps2 = epsilon * epsilon;
    int n1 = trials / 2;
    int n2 = trials - n1;

    // Phase 1: shared phi samples across the beta grid (common random numbers),
    // coarse 720-point scan plus a fine local scan around the argmax.
    std::vector<double> phis(n1);
    for (int t = 0; t < n1; t++) {
        Rng r(derive_seed(seed, 0x51u, static_cast<uint64_t>(t)));
        phis[t] = r.uniform() * 2.0 * kPi;
    }
    const int coarse = 720;
    double best_beta = 0;
    long best_hits = -1;
    for (int b = 0; b < coarse; b++) {
        double beta = 2.0 * kPi * b / coarse;
        long hits = 0;
        for (double phi : phis) {
            hits += hit(phi, theta, beta, eps2);
        }
        if (hits > best_hits) {
            best_hits = hits;
            best_beta = beta;
        }
    }
    double span = 2.0 * kPi / coarse;
    for (int b = 0; b <= 100; b++) {
        double beta = best_beta - span + 2.0 * span * b / 100.0;
        long hits = 0;
        for (double phi : phis) {
            hits += hit(phi, theta, beta, eps2);
        }
        if (hits > best_hits) {
            best_hits = hits;
            best_beta = beta;
        }
    }

    // Phase 2: fresh samples at the selected beta give an unbiased estimate of
    // its hit measure, with a binomial standard error.
    long hits = 0;
    for (int t = 0; t < n2; t++) {
        Rng r(derive_seed(seed, 0x52u, static_cast<uint64_t>(t)));
        double phi = r.uniform() * 2.0 * kPi;
        hits += hit(phi, theta, best_beta, eps2);
    }
    double p = static_cast<double>(hits) / n2;
    double se = std::sqrt(std::max(0.0, p * (1.0 - p) / n2));
    return McEstimate{p, se};
}

}  // namespace cosetqkd::bounds
