#include "cosetqkd/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cosetqkd/errors.hpp"
#include "cosetqkd/rng.hpp"

namespace cosetqkd::gaussian {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Seed-derivation tags for the independent substreams of this module.
constexpr uint64_t kTagPositionParams = 0x71;
constexpr uint64_t kTagMomentumParams = 0x72;
constexpr uint64_t kTagHomodyneOutcome = 0x73;
constexpr uint64_t kTagHomodyneNoise = 0x74;

// A mode whose acceptance probability is healthy succeeds in a handful of
// draws; hitting this cap means acceptance below roughly 1e-5.
constexpr long kRejectionCap = 2'000'000;

double truncated_gaussian(Rng &rng, double sigma, double cut, const char *what, long &rejections) {
    for (long tries = 0; tries < kRejectionCap; ++tries) {
        double v = sigma * rng.gaussian();
        if (std::abs(v) < cut) {
            rejections += tries;
            return v;
        }
    }
    throw resource_error(std::string("sample_coset_params: ") + what +
                         " cutoff rejects every draw; acceptance probability too small");
}

}  // namespace

void validate(const RegisterSubspace &P) {
    require_valid(P.n > 0 && P.n % 2 == 0, "register subspace: mode count must be positive and even");
    require_valid(static_cast<int>(P.modes.size()) == P.n / 2,
                  "register subspace: index set must contain exactly half the modes");
    require_valid(std::is_sorted(P.modes.begin(), P.modes.end()),
                  "register subspace: mode indices must be sorted");
    for (size_t i = 0; i < P.modes.size(); ++i) {
        require_valid(P.modes[i] >= 0 && P.modes[i] < P.n,
                      "register subspace: mode index out of range");
        require_valid(i == 0 || P.modes[i] != P.modes[i - 1],
                      "register subspace: duplicate mode index");
    }
}

void validate(const DampedCosetState &state) {
    validate(state.subspace);
    require_valid(state.a > 0 && state.b > state.a,
                  "damped coset state: need damping parameters b > a > 0");
    require_valid(state.q.size() == state.subspace.n / 2,
                  "damped coset state: position vector must cover the complement modes");
    require_valid(state.p.size() == state.subspace.n / 2,
                  "damped coset state: momentum vector must cover the subspace modes");
}

SqueezedMode mode_state(const DampedCosetState &state, int mode) {
    validate(state);
    require_valid(mode >= 0 && mode < state.subspace.n, "mode_state: mode index out of range");
    const auto &I = state.subspace.modes;
    auto it = std::lower_bound(I.begin(), I.end(), mode);
    if (it != I.end() && *it == mode) {
        long k = it - I.begin();
        double ab_over = state.a * state.b / (state.a + state.b);
        return SqueezedMode{ab_over, 0.0, -state.b * state.p(k) / (state.a + state.b)};
    }
    // Position within the ascending complement: mode minus the subspace
    // members below it.
    long below = it - I.begin();
    long k = mode - below;
    return SqueezedMode{state.b, state.q(k), 0.0};
}

void validate(const AgwnParams &noise) {
    require_valid(noise.x >= 0 && noise.y >= 0, "noise channel: scales must be nonnegative");
}

CosetParams sample_coset_params(const RegisterSubspace &P, double a, double b,
                                double q_cut, double p_cut, uint64_t seed) {
    validate(P);
    require_valid(a > 0 && b > a, "sample_coset_params: need b > a > 0");
    require_valid(q_cut > 0 && p_cut > 0, "sample_coset_params: cutoffs must be positive");

    const int half = P.n / 2;
    const double q_sigma = 1.0 / (2.0 * std::sqrt(a));
    const double p_sigma = std::sqrt(a + b) / (2.0 * kPi);

    CosetParams out;
    out.q.resize(half);
    out.p.resize(half);
    for (int i = 0; i < half; ++i) {
        Rng rq(derive_seed(seed, kTagPositionParams, static_cast<uint64_t>(i)));
        out.q(i) = truncated_gaussian(rq, q_sigma, q_cut, "position", out.rejections);
        Rng rp(derive_seed(seed, kTagMomentumParams, static_cast<uint64_t>(i)));
        out.p(i) = truncated_gaussian(rp, p_sigma, p_cut, "momentum", out.rejections);
    }
    return out;
}

double homodyne_measure(Quadrature kind, double true_value, double a, double b,
                        const AgwnParams &noise, uint64_t seed) {
    require_valid(a > 0 && b > a, "homodyne_measure: need b > a > 0");
    validate(noise);

    Rng out(derive_seed(seed, kTagHomodyneOutcome, 0));
    double g = out.gaussian();

    if (kind == Quadrature::position) {
        double shift = 0;
        if (noise.x > 0) {
            Rng nz(derive_seed(seed, kTagHomodyneNoise, 0));
            shift = noise.x / std::sqrt(2.0) * nz.gaussian();
        }
        double sd = 1.0 / (2.0 * std::sqrt(b));
        return true_value + shift + sd * g;
    }

    double shift = 0;
    if (noise.y > 0) {
        Rng nz(derive_seed(seed, kTagHomodyneNoise, 0));
        shift = noise.y / std::sqrt(2.0) * nz.gaussian();
    }
    double mean = -true_value / (1.0 + a / b);
    double sd = std::sqrt(a * b / (a + b)) / (2.0 * kPi);
    return mean + shift + sd * g;
}

double rescale_momentum(double outcome, double a, double b) {
    require_valid(a > 0 && b > a, "rescale_momentum: need b > a > 0");
    return -(1.0 + a / b) * outcome;
}

double expected_mismatch_position(double a, double b, double delta, double x) {
    require_valid(a > 0 && b > 0 && delta > 0, "expected_mismatch_position: need positive a, b, delta");
    require_valid(x >= 0, "expected_mismatch_position: noise scale must be nonnegative");
    return 6.0 * std::sqrt(1.0 + 2.0 * b * x * x) / (std::sqrt(2.0 * kPi * b) * delta);
}

double expected_mismatch_momentum(double a, double b, double epsilon, double y) {
    require_valid(a > 0 && b > 0 && epsilon > 0,
                  "expected_mismatch_momentum: need positive a, b, epsilon");
    require_valid(y >= 0, "expected_mismatch_momentum: noise scale must be nonnegative");
    return 3.0 * std::sqrt(a * (1.0 + a / b)) / (std::pow(kPi, 1.5) * epsilon) *
           std::sqrt(1.0 + 2.0 * kPi * kPi * (1.0 / a + 1.0 / b) * y * y);
}

GridSpec default_floor_grid(double alpha, double sigma) {
    require_valid(alpha > 0, "default_floor_grid: alpha must be positive");
    require_valid(sigma > 0, "default_floor_grid: sigma must be positive");
    return GridSpec{std::max(8.0 * sigma, 8.0 / std::sqrt(alpha)), 4001};
}

double floor_integral_check(double alpha, const std::function<double(double)> &density,
                            const GridSpec &grid) {
    require_valid(alpha > 0, "floor_integral_check: alpha must be positive");
    require_valid(grid.half_width > 0, "floor_integral_check: grid half-width must be positive");
    require_valid(grid.points >= 3 && grid.points % 2 == 1,
                  "floor_integral_check: need an odd number of grid points >= 3");

    const int n = grid.points;
    const double L = grid.half_width;
    const double h = 2.0 * L / (n - 1);

    std::vector<double> x(n), w(n), dens(n), bin(n);
    double max_dens = 0;
    for (int i = 0; i < n; ++i) {
        x[i] = -L + i * h;
        w[i] = (i == 0 || i == n - 1) ? h / 2.0 : h;
        dens[i] = density(x[i]);
        require_valid(dens[i] >= 0, "floor_integral_check: density must be nonnegative");
        max_dens = std::max(max_dens, dens[i]);
        bin[i] = std::floor(x[i] + 0.5);
    }
    for (int i = 0; i < n; ++i) {
        require_valid(std::abs(dens[i] - dens[n - 1 - i]) <= 1e-9 * max_dens,
                      "floor_integral_check: density must be symmetric");
    }
    for (int i = n / 2; i + 1 < n; ++i) {
        require_valid(dens[i + 1] <= dens[i] + 1e-12 * max_dens,
                      "floor_integral_check: density must be nonincreasing in |x|");
    }
    double mass = 0;
    for (int i = 0; i < n; ++i) mass += w[i] * dens[i];
    require_valid(std::abs(mass - 1.0) <= 1e-2,
                  "floor_integral_check: density is not normalized on the grid");

    // The kernel depends only on |i-j|; entries beyond the underflow horizon
    // contribute nothing and are skipped.
    std::vector<double> kernel(n, 0.0);
    int reach = n - 1;
    for (int d = 0; d < n; ++d) {
        double arg = alpha * h * h * static_cast<double>(d) * static_cast<double>(d);
        if (arg > 745.0) {
            reach = d;
            break;
        }
        kernel[d] = std::exp(-arg);
    }

    double total = 0;
    for (int i = 0; i < n; ++i) {
        if (dens[i] == 0) continue;
        double inner = 0;
        int lo = std::max(0, i - reach), hi = std::min(n - 1, i + reach);
        for (int j = lo; j <= hi; ++j) {
            double diff = std::abs(bin[i] - bin[j]);
            if (diff != 0) inner += w[j] * kernel[std::abs(i - j)] * diff;
        }
        total += w[i] * (dens[i] / mass) * inner;
    }
    return total;
}

}  // namespace cosetqkd::gaussian
