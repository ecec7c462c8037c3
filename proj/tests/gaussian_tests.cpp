#include <cmath>
#include <vector>

#include "cosetqkd/errors.hpp"
#include "cosetqkd/gaussian.hpp"
#include "cosetqkd/rng.hpp"
#include "doctest.h"

using namespace cosetqkd;
using namespace cosetqkd::gaussian;

namespace {

RegisterSubspace even_split(int n) {
    RegisterSubspace P;
    P.n = n;
    for (int i = 1; i < n; i += 2) P.modes.push_back(i);
    return P;
}

double sample_variance(const std::vector<double> &v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

long bin_of(double value, double width) {
    return static_cast<long>(std::floor(value / width + 0.5));
}

}  // namespace

TEST_CASE("register subspace and damped state validation") {
    RegisterSubspace P = even_split(4);
    validate(P);

    RegisterSubspace bad = P;
    bad.modes = {3, 1};
    CHECK_THROWS_AS(validate(bad), validation_error);
    bad.modes = {1, 1};
    CHECK_THROWS_AS(validate(bad), validation_error);
    bad.modes = {1, 4};
    CHECK_THROWS_AS(validate(bad), validation_error);
    bad.modes = {1};
    CHECK_THROWS_AS(validate(bad), validation_error);
    RegisterSubspace odd{3, {1}};
    CHECK_THROWS_AS(validate(odd), validation_error);

    DampedCosetState st;
    st.subspace = P;
    st.a = 0.5;
    st.b = 2.0;
    st.q = Eigen::VectorXd::Zero(2);
    st.p = Eigen::VectorXd::Zero(2);
    validate(st);
    st.b = 0.25;  // must exceed a
    CHECK_THROWS_AS(validate(st), validation_error);
    st.b = 2.0;
    st.q = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(validate(st), validation_error);
}

TEST_CASE("per-mode factors of a damped coset state") {
    DampedCosetState st;
    st.subspace = RegisterSubspace{4, {1, 3}};
    st.a = 0.5;
    st.b = 2.0;
    st.q = Eigen::VectorXd(2);
    st.q << 1.25, -0.75;
    st.p = Eigen::VectorXd(2);
    st.p << 0.5, 4.0;

    SqueezedMode m0 = mode_state(st, 0);
    CHECK(m0.a == 2.0);
    CHECK(m0.x0 == 1.25);
    CHECK(m0.p0 == 0.0);

    SqueezedMode m2 = mode_state(st, 2);
    CHECK(m2.x0 == -0.75);

    // Momentum-carrying modes: squeezing ab/(a+b), center -b p/(a+b).
    SqueezedMode m1 = mode_state(st, 1);
    CHECK(m1.a == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(m1.x0 == 0.0);
    CHECK(m1.p0 == doctest::Approx(-0.4).epsilon(1e-15));

    SqueezedMode m3 = mode_state(st, 3);
    CHECK(m3.p0 == doctest::Approx(-3.2).epsilon(1e-15));

    CHECK_THROWS_AS(mode_state(st, 4), validation_error);
}

TEST_CASE("coset parameter sampling reproduces the damped-state moments") {
    const double a = 0.5, b = 1.0;
    RegisterSubspace P = even_split(16);
    std::vector<double> qs, ps;
    qs.reserve(1000000);
    ps.reserve(1000000);
    for (int rep = 0; rep < 125000; ++rep) {
        CosetParams cp = sample_coset_params(P, a, b, 1e6, 1e6, derive_seed(5150, 0xa0, rep));
        for (int i = 0; i < 8; ++i) {
            qs.push_back(cp.q(i));
            ps.push_back(cp.p(i));
        }
    }
    // q_i ~ N(0, 1/(4a)), p_i ~ N(0, (a+b)/(4 pi^2)); 10^6 samples pin the
    // variances to ~0.14% relative, well inside the 1% gate.
    CHECK(sample_variance(qs) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sample_variance(ps) == doctest::Approx(0.037995443865876664).epsilon(0.01));
}

TEST_CASE("coset parameter sampling respects cutoffs and is deterministic") {
    RegisterSubspace P = even_split(8);
    CosetParams tight = sample_coset_params(P, 0.5, 1.0, 0.4, 0.05, 99);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(tight.q(i)) < 0.4);
        CHECK(std::abs(tight.p(i)) < 0.05);
    }

    CosetParams r1 = sample_coset_params(P, 0.5, 1.0, 2.0, 1.0, 1234);
    CosetParams r2 = sample_coset_params(P, 0.5, 1.0, 2.0, 1.0, 1234);
    CHECK(r1.q == r2.q);
    CHECK(r1.p == r2.p);

    CHECK_THROWS_AS(sample_coset_params(P, 0.5, 1.0, 1e-9, 1.0, 7), resource_error);
    CHECK_THROWS_AS(sample_coset_params(P, 1.0, 0.5, 1.0, 1.0, 7), validation_error);
    CHECK_THROWS_AS(sample_coset_params(P, 0.5, 1.0, 0.0, 1.0, 7), validation_error);
}

TEST_CASE("homodyne outcome statistics match the overlap densities") {
    const double a = 0.5, b = 2.0, truth = 1.7;
    const int N = 1000000;
    std::vector<double> pos(N), mom(N);
    for (int t = 0; t < N; ++t) {
        pos[t] = homodyne_measure(Quadrature::position, truth, a, b, {}, derive_seed(61, 0xb0, t));
        mom[t] = homodyne_measure(Quadrature::momentum, truth, a, b, {}, derive_seed(61, 0xb1, t));
    }
    double pos_mean = 0, mom_mean = 0;
    for (int t = 0; t < N; ++t) {
        pos_mean += pos[t];
        mom_mean += mom[t];
    }
    pos_mean /= N;
    mom_mean /= N;

    // position ~ N(truth, 1/(4b)); momentum ~ N(-truth/(1+a/b), ab/(4 pi^2 (a+b))).
    double pos_sd = std::sqrt(0.125);
    CHECK(std::abs(pos_mean - truth) <= 3.0 * pos_sd / std::sqrt(static_cast<double>(N)));
    CHECK(sample_variance(pos) == doctest::Approx(0.125).epsilon(0.01));

    double mom_truth = -truth / (1.0 + a / b);
    double mom_sd = std::sqrt(0.010132118364233777);
    CHECK(std::abs(mom_mean - mom_truth) <= 3.0 * mom_sd / std::sqrt(static_cast<double>(N)));
    CHECK(sample_variance(mom) == doctest::Approx(0.010132118364233777).epsilon(0.01));

    // Outcomes are reported raw; range policy belongs to the protocol layer.
    double far = homodyne_measure(Quadrature::position, 1e6, a, b, {}, 3);
    CHECK(std::abs(far - 1e6) < 10.0);
}

TEST_CASE("noise channel folds into the outcome and vanishes at zero scales") {
    const double a = 0.5, b = 2.0;
    for (int t = 0; t < 100; ++t) {
        uint64_t seed = derive_seed(77, 0xc0, t);
        double base = homodyne_measure(Quadrature::position, 0.3, a, b, {}, seed);
        double zero = homodyne_measure(Quadrature::position, 0.3, a, b, {0.0, 0.0}, seed);
        CHECK(base == zero);
        double basem = homodyne_measure(Quadrature::momentum, 0.3, a, b, {}, seed);
        double zerom = homodyne_measure(Quadrature::momentum, 0.3, a, b, {0.0, 0.0}, seed);
        CHECK(basem == zerom);

        double noisy1 = homodyne_measure(Quadrature::position, 0.3, a, b, {0.5, 0.0}, seed);
        double noisy2 = homodyne_measure(Quadrature::position, 0.3, a, b, {0.5, 0.0}, seed);
        CHECK(noisy1 == noisy2);
    }

    // Position noise x widens the outcome spread to 1/(4b) + x^2/2.
    const int N = 200000;
    std::vector<double> noisy(N);
    for (int t = 0; t < N; ++t)
        noisy[t] =
            homodyne_measure(Quadrature::position, 0.0, a, b, {0.5, 0.0}, derive_seed(78, 0xc1, t));
    CHECK(sample_variance(noisy) == doctest::Approx(0.125 + 0.125).epsilon(0.02));

    CHECK_THROWS_AS(homodyne_measure(Quadrature::position, 0.0, a, b, {-0.1, 0.0}, 1),
                    validation_error);
}

TEST_CASE("momentum rescaling inverts the attenuation") {
    CHECK(rescale_momentum(0.0, 0.5, 2.0) == 0.0);
    CHECK(rescale_momentum(1.0, 0.5, 2.0) == doctest::Approx(-1.25).epsilon(1e-15));
    // a -> 0 limit approaches plain negation.
    CHECK(rescale_momentum(1.0, 1e-12, 2.0) == doctest::Approx(-1.0).epsilon(1e-11));
    CHECK_THROWS_AS(rescale_momentum(1.0, 2.0, 0.5), validation_error);

    const double a = 0.5, b = 2.0, truth = 0.9;
    const int N = 100000;
    double mean = 0;
    for (int t = 0; t < N; ++t) {
        double out = homodyne_measure(Quadrature::momentum, truth, a, b, {}, derive_seed(91, 0xd0, t));
        mean += rescale_momentum(out, a, b);
    }
    mean /= N;
    double chain_sd = (1.0 + a / b) * std::sqrt(0.010132118364233777);
    CHECK(std::abs(mean - truth) <= 3.0 * chain_sd / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("bin-mismatch bounds: closed forms") {
    // x = 0 reduces to 6 / (sqrt(2 pi b) delta).
    CHECK(expected_mismatch_position(1.0, 5e5, 4.0, 0.0) ==
          doctest::Approx(0.00084628437532163443).epsilon(1e-14));
    CHECK(expected_mismatch_position(1.0, 2.0, 3.0, 0.0) ==
          doctest::Approx(6.0 / (std::sqrt(4.0 * 3.14159265358979323846) * 3.0)).epsilon(1e-14));
    CHECK(expected_mismatch_position(0.5, 2.0, 0.5, 0.3) ==
          doctest::Approx(3.9477147854877246).epsilon(1e-14));

    CHECK(expected_mismatch_momentum(5e-7, 5e5, 1.0 / 64.0, 0.0) ==
          doctest::Approx(0.024381556198760723).epsilon(1e-14));
    CHECK(expected_mismatch_momentum(0.2, 3.0, 0.25, 0.15) ==
          doctest::Approx(1.8269105798160292).epsilon(1e-14));

    CHECK_THROWS_AS(expected_mismatch_position(1.0, 0.0, 1.0, 0.0), validation_error);
    CHECK_THROWS_AS(expected_mismatch_momentum(0.0, 1.0, 1.0, 0.0), validation_error);
    CHECK_THROWS_AS(expected_mismatch_position(1.0, 1.0, 1.0, -1.0), validation_error);
}

TEST_CASE("bin-mismatch bounds dominate simulation on a parameter grid") {
    struct Point {
        double a, b, delta, eps, x, y;
    };
    const Point grid[5] = {
        {5e-7, 5e5, 4.0, 1.0 / 64.0, 0.0, 0.0},
        {5e-7, 5e5, 4.0, 1.0 / 64.0, 1e-3, 1e-4},
        {0.5, 2.0, 5.0, 1.0, 0.0, 0.0},
        {0.2, 3.0, 4.0, 0.5, 0.5, 0.1},
        {1.0, 10.0, 1.0, 0.25, 0.0, 0.05},
    };
    const int kModes = 20000;
    for (int g = 0; g < 5; ++g) {
        const Point &pt = grid[g];
        AgwnParams noise{pt.x, pt.y};
        double q_sigma = 1.0 / (2.0 * std::sqrt(pt.a));
        double p_sigma = std::sqrt(pt.a + pt.b) / (2.0 * 3.14159265358979323846);
        double gamma_sum = 0, delta_sum = 0;
        Rng draw(derive_seed(404, 0xe0, g));
        for (int m = 0; m < kModes; ++m) {
            double q = q_sigma * draw.gaussian();
            double p = p_sigma * draw.gaussian();
            uint64_t seed = derive_seed(404, 0xe1, static_cast<uint64_t>(g) * kModes + m);
            double q_hat = homodyne_measure(Quadrature::position, q, pt.a, pt.b, noise, seed);
            gamma_sum += (bin_of(q_hat, pt.delta) != bin_of(q, pt.delta)) ? 1.0 : 0.0;
            uint64_t seed2 = derive_seed(404, 0xe2, static_cast<uint64_t>(g) * kModes + m);
            double p_hat = homodyne_measure(Quadrature::momentum, p, pt.a, pt.b, noise, seed2);
            double p_corr = rescale_momentum(p_hat, pt.a, pt.b);
            delta_sum += std::abs(static_cast<double>(bin_of(p_corr, pt.eps) - bin_of(p, pt.eps)));
        }
        CHECK(gamma_sum / kModes <= expected_mismatch_position(pt.a, pt.b, pt.delta, pt.x));
        CHECK(delta_sum / kModes <= expected_mismatch_momentum(pt.a, pt.b, pt.eps, pt.y));
    }
}

TEST_CASE("floor-kernel integral oracle") {
    auto gauss = [](double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * 3.14159265358979323846); };
    auto unif = [](double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; };
    const double sigma_g = 1.0;
    const double sigma_u = 0.28867513459481288;  // 1/sqrt(12)

    // For a density uniform over a single bin the integral is exactly 1/alpha
    // (the tent-kernel identity); for the unit Gaussian it differs from
    // 1/alpha only by O(e^{-2 pi^2}). Both sit under the 6/alpha contract
    // with a factor-6 margin, so these double as sharp quadrature checks.
    for (double alpha : {1.0, 10.0, 10000.0}) {
        double vg = floor_integral_check(alpha, gauss, default_floor_grid(alpha, sigma_g));
        CHECK(vg <= 6.0 / alpha);
        CHECK(vg == doctest::Approx(1.0 / alpha).epsilon(5e-3));
        double vu = floor_integral_check(alpha, unif, default_floor_grid(alpha, sigma_u));
        CHECK(vu <= 6.0 / alpha);
        CHECK(vu == doctest::Approx(1.0 / alpha).epsilon(5e-3));
    }
    // alpha = 10^4 with the unit Gaussian: far below the 1e-3 coarse gate.
    CHECK(floor_integral_check(1e4, gauss, default_floor_grid(1e4, sigma_g)) < 1e-3);

    GridSpec gspec = default_floor_grid(10.0, 1.0);
    CHECK(gspec.half_width == 8.0);
    CHECK(gspec.points == 4001);
    CHECK(default_floor_grid(1e4, 0.01).half_width == doctest::Approx(0.08).epsilon(1e-12));

    auto scaled = [&](double x) { return 0.8 * std::exp(-x * x / 2.0) / std::sqrt(2.0 * 3.14159265358979323846); };
    CHECK_THROWS_AS(floor_integral_check(1.0, scaled, gspec), validation_error);
    auto shifted = [&](double x) { return std::exp(-(x - 0.5) * (x - 0.5) / 2.0) / std::sqrt(2.0 * 3.14159265358979323846); };
    CHECK_THROWS_AS(floor_integral_check(1.0, shifted, gspec), validation_error);
    auto growing = [](double x) { return std::abs(x) <= 1.0 ? std::abs(x) : 0.0; };
    CHECK_THROWS_AS(floor_integral_check(1.0, growing, gspec), validation_error);
    CHECK_THROWS_AS(floor_integral_check(1.0, [](double) { return 1.0; }, GridSpec{8.0, 4000}),
                    validation_error);
    CHECK_THROWS_AS(floor_integral_check(0.0, [](double) { return 1.0; }, gspec), validation_error);
}
