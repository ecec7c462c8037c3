#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace cosetqkd::gaussian {

// Squeezed single-mode state |a, x0, p0>: position variance 1/(4a), centered
// at (x0, p0) in phase space.
struct SqueezedMode {
    double a = 0;
    double x0 = 0;
    double p0 = 0;
};

// Coordinate subspace of an n-mode register: modes in I carry momentum data,
// the complement carries position data.
struct RegisterSubspace {
    int n = 0;               // total modes, even
    std::vector<int> modes;  // I: sorted, distinct, size n/2, entries in [0, n)
};

void validate(const RegisterSubspace &P);

// Damped coset state: per-mode product of squeezed states determined by the
// subspace split, the coset parameters (q over the complement of I, p over I)
// and the damping pair b > a > 0.
struct DampedCosetState {
    RegisterSubspace subspace;
    Eigen::VectorXd q;  // length n/2, indexed by ascending complement modes
    Eigen::VectorXd p;  // length n/2, indexed by ascending modes of I
    double a = 0;
    double b = 0;
};

void validate(const DampedCosetState &state);

// The single-mode factor of a damped coset state at `mode`: position-squeezed
// |b, q_i, 0> off the subspace, momentum-squeezed |ab/(a+b), 0, -b p_i/(a+b)>
// on it.
SqueezedMode mode_state(const DampedCosetState &state, int mode);

// Additive Gaussian white noise: centers shift by xi ~ N(0, x^2/2) in
// position and phi ~ N(0, y^2/2) in momentum. x = y = 0 is the identity
// channel.
struct AgwnParams {
    double x = 0;
    double y = 0;
};

void validate(const AgwnParams &noise);

struct CosetParams {
    Eigen::VectorXd q;
    Eigen::VectorXd p;
    long rejections = 0;  // total draws discarded by the truncation cutoffs
};

// Draws the coset parameters of a damped state: q_i iid N(0, 1/(4a)) and
// p_i iid N(0, (a+b)/(4 pi^2)), each rejection-resampled until |q_i| < q_cut
// and |p_i| < p_cut. Per-mode substreams are derived from (seed, mode), so
// results are reproducible and order-independent. Throws resource_error when
// a cutoff is so tight that a mode fails to accept within the retry cap.
CosetParams sample_coset_params(const RegisterSubspace &P, double a, double b,
                                double q_cut, double p_cut, uint64_t seed);

enum class Quadrature { position, momentum };

// Homodyne outcome for one mode of a damped coset state with true coset
// parameter `true_value`, including the noise channel:
//   position: N(true_value + xi, 1/(4b))
//   momentum: N(-true_value/(1+a/b) + phi, ab / (4 pi^2 (a+b)))
// The noise shift is drawn from a separate substream, so x = y = 0
// reproduces the noiseless outcome bit-for-bit at the same seed.
double homodyne_measure(Quadrature kind, double true_value, double a, double b,
                        const AgwnParams &noise, uint64_t seed);

// Inverts the deterministic attenuation of the momentum outcome: the
// corrected estimate -(1+a/b) * outcome has noiseless expectation equal to
// the true momentum parameter.
double rescale_momentum(double outcome, double a, double b);

// Closed-form upper bound on the probability that the binned position outcome
// (bin width delta) misses the true bin under position noise scale x:
//   6 sqrt(1 + 2 b x^2) / (sqrt(2 pi b) delta).
double expected_mismatch_position(double a, double b, double delta, double x);

// Closed-form upper bound on the expected bin-index distance of the corrected
// momentum outcome (bin width epsilon) under momentum noise scale y:
//   3 sqrt(a (1 + a/b)) / (pi^{3/2} epsilon) * sqrt(1 + 2 pi^2 (1/a + 1/b) y^2).
double expected_mismatch_momentum(double a, double b, double epsilon, double y);

// Quadrature grid for floor_integral_check: symmetric trapezoid rule on
// [-half_width, half_width] with `points` nodes.
struct GridSpec {
    double half_width = 0;
    int points = 0;
};

// Default grid: wide enough for both the density (std sigma) and the kernel
// scale 1/sqrt(alpha).
GridSpec default_floor_grid(double alpha, double sigma);

// Numerically evaluates
//   I = integral of |floor(x+1/2) - floor(y+1/2)| e^{-alpha (x-y)^2} pi(x) dx dy
// for a symmetric density pi that is nonincreasing in |x|; such densities
// always satisfy I <= 6/alpha. The density is validated (symmetry,
// monotonicity, grid normalization within 1%) and renormalized on the grid.
double floor_integral_check(double alpha, const std::function<double(double)> &density,
                            const GridSpec &grid);

}  // namespace cosetqkd::gaussian
