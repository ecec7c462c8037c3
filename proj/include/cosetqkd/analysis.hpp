#pragma once

#include <string>
#include <vector>

namespace cosetqkd::analysis {

// Asymptotic parameter set for the strongly squeezed protocol family: the
// squeeze factor fixes the damping pair a = squeeze^2/2, b = 1/(2 squeeze^2),
// and each register holds n_M (position) / n_N (momentum) bits, so the
// supports are [-M delta, M delta) and [-N epsilon, N epsilon) with
// M = 2^(n_M - 1), N = 2^(n_N - 1).
struct AsymptoticParams {
    double squeeze = 0.001;
    double delta = 4;
    double epsilon = 1.0 / 64;
    int n_M = 16;
    int n_N = 16;

    double a() const { return squeeze * squeeze / 2; }
    double b() const { return 1.0 / (2 * squeeze * squeeze); }
    double pos_cutoff() const;  // M * delta
    double mom_cutoff() const;  // N * epsilon
};

void validate(const AsymptoticParams &p);

// Left-hand side of the asymptotic key condition at parameter-estimation
// tolerance gamma: a positive value means key can be extracted at rate
// lhs/2 per mode. Combines the guessing-probability term, the entropy cost
// of the tolerance (with the syndrome priced at the code-existence rate,
// giving the h(gamma) coefficient 1 + n_N), and the two support-truncation
// corrections. Throws when a truncation term reaches 1.
double asymptotic_lhs(const AsymptoticParams &p, double gamma);

struct CurvePoint {
    double rate = 0;   // key rate per mode, clipped at 0
    double gamma = 0;  // tolerance in [0, 1/2)
};

struct ToleranceCurve {
    std::vector<CurvePoint> points;
    double gamma_max = 0;  // largest tolerance with positive rate (bisection, 1e-6)
    double r_max = 0;      // rate at zero tolerance
};

// Samples rate(gamma) on a uniform gamma grid over [0, gamma_max] with
// grid_points entries. Requires grid_points >= 2 and a positive rate at
// gamma = 0.
ToleranceCurve tolerance_curve(const AsymptoticParams &p, int grid_points);

// Largest key rate compatible with the abort-probability guarantees under
// additive noise (x, y): the tolerance must exceed both the expected
// position mismatch rate and 1/n_N times the expected momentum bin distance,
// and the code's relative distance is tied to the same tolerance, so the
// optimum sits at the smaller of the two slacks.
struct RateResult {
    double rate = 0;
    double gamma = 0;      // minimal admissible tolerance
    double gamma_max = 0;  // largest tolerance with positive rate
    bool feasible = false;
    std::string binding_constraint;  // "position" or "momentum"
};

RateResult completeness_constrained_rate(const AsymptoticParams &p, double x, double y);

// Column-labelled numeric table for file emission.
struct DataSet {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class EmitFormat {
    csv,           // comma-separated, header row
    gnuplot_data,  // space-separated, "# ..." header comment
};

EmitFormat parse_emit_format(const std::string &name);
std::string format_name(EmitFormat f);

// Renders the dataset with 17 significant digits; byte-deterministic.
std::string render(const DataSet &d, EmitFormat f);

// Renders to a file; IO failures raise a resource error naming the path.
void emit(const DataSet &d, EmitFormat f, const std::string &path);

}  // namespace cosetqkd::analysis
