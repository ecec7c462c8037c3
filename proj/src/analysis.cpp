#include "cosetqkd/analysis.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "cosetqkd/bounds.hpp"
#include "cosetqkd/errors.hpp"
#include "cosetqkd/gaussian.hpp"

namespace cosetqkd::analysis {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

double lg1m(double t, const char *what) {
    require_precondition(t < 1.0,
                         std::string("asymptotic rate: ") + what +
                             " truncation term reaches 1; enlarge the support cutoff");
    return std::log1p(-t) / kLn2;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// lhs is strictly decreasing on [0, 1/2) whenever lhs(0) > 0; bisect its root.
double solve_gamma_max(const AsymptoticParams &p) {
    double lo = 0.0;
    double hi = 0.5 - 1e-9;
    require_precondition(asymptotic_lhs(p, lo) > 0,
                         "asymptotic rate: no positive rate even at zero tolerance");
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (asymptotic_lhs(p, mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double AsymptoticParams::pos_cutoff() const { return std::ldexp(delta, n_M - 1); }

double AsymptoticParams::mom_cutoff() const { return std::ldexp(epsilon, n_N - 1); }

void validate(const AsymptoticParams &p) {
    require_valid(p.squeeze > 0 && p.squeeze < 1, "squeeze factor must lie in (0, 1)");
    require_valid(p.delta > 0, "position bin width must be positive");
    require_valid(p.epsilon > 0, "momentum bin width must be positive");
    require_valid(p.n_M >= 2 && p.n_M <= 62, "position register bits must lie in [2, 62]");
    require_valid(p.n_N >= 2 && p.n_N <= 62, "momentum register bits must lie in [2, 62]");
}

double asymptotic_lhs(const AsymptoticParams &p, double gamma) {
    validate(p);
    require_valid(gamma >= 0 && gamma < 0.5, "tolerance must lie in [0, 1/2)");

    double a = p.a();
    double b = p.b();
    double u = a * p.pos_cutoff() * p.pos_cutoff();
    double pos_trunc = std::exp(-2 * u) / std::sqrt(2 * M_PI * u);
    double v = p.mom_cutoff() * p.mom_cutoff();
    double mom_trunc = std::sqrt((a + b) / (M_PI * M_PI * M_PI * v)) *
                       std::exp(-2 * M_PI * M_PI * v / (a + b));

    double guess = -(1 - gamma) * std::log2(0.5 + std::sqrt(p.delta * p.epsilon));
    double entropy = (1.0 + p.n_N) * bounds::binary_entropy(gamma);
    return guess - entropy + lg1m(pos_trunc, "position") + lg1m(mom_trunc, "momentum");
}

ToleranceCurve tolerance_curve(const AsymptoticParams &p, int grid_points) {
    validate(p);
    require_valid(grid_points >= 2, "tolerance curve needs at least 2 grid points");

    ToleranceCurve out;
    out.gamma_max = solve_gamma_max(p);
    out.r_max = asymptotic_lhs(p, 0.0) / 2;
    out.points.reserve(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        double gamma = out.gamma_max * i / (grid_points - 1);
        double rate = std::max(asymptotic_lhs(p, gamma) / 2, 0.0);
        out.points.push_back({rate, gamma});
    }
    return out;
}

RateResult completeness_constrained_rate(const AsymptoticParams &p, double x, double y) {
    validate(p);
    require_valid(x >= 0, "position noise scale must be nonnegative");
    require_valid(y >= 0, "momentum noise scale must be nonnegative");

    double a = p.a();
    double b = p.b();
    double gamma_pos = gaussian::expected_mismatch_position(a, b, p.delta, x);
    double gamma_mom = gaussian::expected_mismatch_momentum(a, b, p.epsilon, y) / p.n_N;

    RateResult r;
    r.gamma = std::max(gamma_pos, gamma_mom);
    r.gamma_max = solve_gamma_max(p);
    r.binding_constraint = gamma_pos > gamma_mom ? "position" : "momentum";
    r.feasible = r.gamma < r.gamma_max;
    r.rate = r.feasible ? asymptotic_lhs(p, r.gamma) / 2 : 0.0;
    return r;
}

EmitFormat parse_emit_format(const std::string &name) {
    if (name == "csv") {
        return EmitFormat::csv;
    }
    if (name == "gnuplot-data") {
        return EmitFormat::gnuplot_data;
    }
    throw validation_error("unknown output format '" + name + "' (expected csv or gnuplot-data)");
}

std::string format_name(EmitFormat f) {
    return f == EmitFormat::csv ? "csv" : "gnuplot-data";
}

std::string render(const DataSet &d, EmitFormat f) {
    require_valid(!d.columns.empty(), "dataset has no columns");
    require_valid(!d.rows.empty(), "dataset has no rows");
    for (const auto &row : d.rows) {
        require_valid(row.size() == d.columns.size(),
                      "dataset row width does not match the column count");
    }

    const char sep = f == EmitFormat::csv ? ',' : ' ';
    std::string out;
    if (f == EmitFormat::gnuplot_data) {
        out += "#";
    }
    for (size_t c = 0; c < d.columns.size(); ++c) {
        if (f == EmitFormat::gnuplot_data) {
            out += ' ';
        } else if (c > 0) {
            out += sep;
        }
        out += d.columns[c];
    }
    out += '\n';
    for (const auto &row : d.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += sep;
            }
            out += fmt(row[c]);
        }
        out += '\n';
    }
    return out;
}

void emit(const DataSet &d, EmitFormat f, const std::string &path) {
    std::string body = render(d, f);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw resource_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    }
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    file.flush();
    if (!file) {
        throw resource_error("write to '" + path + "' failed: " + std::strerror(errno));
    }
}

}  // namespace cosetqkd::analysis
