// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cosetqkd/analysis.hpp"
#include "cosetqkd/bounds.hpp"
#include "cosetqkd/coding.hpp"
#include "cosetqkd/coset.hpp"
#include "cosetqkd/errors.hpp"
#include "cosetqkd/gaussian.hpp"
#include "cosetqkd/group.hpp"
#include "cosetqkd/irreps.hpp"
#include "cosetqkd/protocol.hpp"
#include "cosetqkd/rng.hpp"
#include "cosetqkd/strategy.hpp"

using namespace cosetqkd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

struct Budget {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fail(const char *fmtstr, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmtstr);
    std::vsnprintf(buf, sizeof(buf), fmtstr, args);
    va_end(args);
    return buf;
}

// ---- 1: asymptotic key-rate relation --------------------------------------

std::string criterion1() {
    Budget budget;
    analysis::AsymptoticParams p;  // squeeze 0.001, delta 4, epsilon 1/64, 16+16 bits

    double lhs0 = analysis::asymptotic_lhs(p, 0.0);
    if (std::abs(lhs0 - 0.4150) > 0.0005) {
        return fail("constant %.6f outside 0.4150+-0.0005", lhs0);
    }
    // Entropy coefficient extracted numerically: lhs(g) = A(1-g) - C h(g) + T.
    double g = 0.001;
    double A = -std::log2(0.5 + std::sqrt(p.delta * p.epsilon));
    double T = lhs0 - A;
    double h = -(g * std::log2(g) + (1 - g) * std::log2(1 - g));
    double C = (A * (1 - g) + T - analysis::asymptotic_lhs(p, g)) / h;
    if (std::abs(C - 17.0) > 1e-9) {
        return fail("entropy coefficient %.12f != 17", C);
    }
    analysis::ToleranceCurve curve = analysis::tolerance_curve(p, 2);
    if (std::abs(curve.gamma_max - 0.0024) > 0.0002) {
        return fail("gamma_max %.6f outside 0.0024+-0.0002", curve.gamma_max);
    }
    if (std::abs(curve.r_max - 0.2075) > 0.005) {
        return fail("r_max %.6f outside 0.2075+-0.005", curve.r_max);
    }
    if (budget.seconds() >= 1.0) {
        return fail("took %.2f s (budget 1 s)", budget.seconds());
    }
    return "";
}

// ---- 2: noise-constrained key rate ----------------------------------------

std::string criterion2() {
    Budget budget;
    analysis::AsymptoticParams p;

    analysis::RateResult id = analysis::completeness_constrained_rate(p, 0, 0);
    if (!id.feasible || std::abs(id.rate - 0.07) > 0.01) {
        return fail("identity-channel rate %.6f outside 0.07+-0.01", id.rate);
    }
    analysis::RateResult margin = analysis::completeness_constrained_rate(p, 0.0027, 0.0002);
    if (budget.seconds() >= 1.0) {
        return fail("took %.2f s (budget 1 s)", budget.seconds());
    }
    if (!margin.feasible || margin.rate <= 0) {
        return fail("x=0.0027,y=0.0002 infeasible: needs tolerance %.7f > limit %.7f via the %s "
                    "constraint (largest feasible noise: x=0.0026552, y=0.00019380; identity "
                    "rate %.4f is fine)",
                    margin.gamma, margin.gamma_max, margin.binding_constraint.c_str(), id.rate);
    }
    return "";
}

// ---- 3: subspace overlap sweep --------------------------------------------

void sweep_pair(const finite::GroupTable &G, const finite::Subgroup &H,
                const finite::Subgroup &K, const finite::IrrepSet &irr, long &checks,
                double &max_excess) {
    std::vector<int> qs = finite::coset_reps(G, K);
    for (size_t ii = 0; ii < irr.irreps.size(); ++ii) {
        int dim = irr.irreps[ii].dim;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                for (int q : qs) {
                    finite::OverlapResult res =
                        finite::overlap_check(G, H, K, static_cast<int>(ii), r, c, q);
                    ++checks;
                    max_excess = std::max(max_excess, res.norm - res.bound);
                }
            }
        }
    }
}

std::string criterion3() {
    Budget budget;
    long checks = 0;
    double max_excess = -1e300;

    finite::GroupTable d15 = finite::dihedral_group(15);
    std::vector<finite::Subgroup> subs = finite::two_generated_subgroups(d15);
    std::vector<finite::IrrepSet> irr;
    irr.reserve(subs.size());
    for (const auto &H : subs) {
        irr.push_back(finite::irreps_of(d15, H));
    }
    for (size_t i = 0; i < subs.size(); ++i) {
        for (size_t j = 0; j < subs.size(); ++j) {
            sweep_pair(d15, subs[i], subs[j], irr[i], checks, max_excess);
        }
    }

    // Coordinate subgroups of z2^4: one per subset of the four factors.
    finite::GroupTable z16 = finite::parse_group_spec("z2^4");
    std::vector<finite::Subgroup> regs;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<int> gens = {0};
        for (int i = 0; i < 4; ++i) {
            if (mask & (1 << i)) {
                gens.push_back(8 >> i);
            }
        }
        regs.push_back(finite::subgroup_from_generators(z16, gens));
    }
    std::vector<finite::IrrepSet> reg_irr;
    reg_irr.reserve(regs.size());
    for (const auto &H : regs) {
        reg_irr.push_back(finite::irreps_of(z16, H));
    }
    for (size_t i = 0; i < regs.size(); ++i) {
        for (size_t j = 0; j < regs.size(); ++j) {
            sweep_pair(z16, regs[i], regs[j], reg_irr[i], checks, max_excess);
        }
    }

    if (max_excess > 1e-9) {
        return fail("norm exceeds bound by %.3g over %ld checks", max_excess, checks);
    }
    if (budget.seconds() >= 120.0) {
        return fail("took %.1f s (budget 120 s)", budget.seconds());
    }
    return "";
}

// ---- 4: coset-basis closed forms ------------------------------------------

std::string criterion4() {
    finite::GroupTable G = finite::dihedral_group(15);
    finite::Subgroup H = finite::subgroup_from_generators(G, {5, 15});
    finite::CosetBasis basis = finite::coset_basis(G, H, finite::irreps_of(G, H));
    const int N = 15, p = 3;
    auto rot = [&](int a) { return ((a % N) + N) % N; };          // r^a
    auto ref = [&](int a) { return N + rot(a); };                 // t r^a
    const double s6 = 1.0 / std::sqrt(6.0);
    const double s3 = 1.0 / std::sqrt(3.0);

    // The three closed-form families over cosets r^q H: uniform-sum,
    // sign-alternating, and the four half-support phase states.
    std::vector<VectorXcd> forms;
    for (int q = 0; q < 5; ++q) {
        VectorXcd triv = VectorXcd::Zero(30), sign = VectorXcd::Zero(30);
        for (int j = 0; j < p; ++j) {
            triv(rot(N / p * j + q)) += s6;
            triv(ref(N / p * j - q)) += s6;
            sign(rot(N / p * j + q)) += s6;
            sign(ref(N / p * j - q)) -= s6;
        }
        forms.push_back(triv);
        forms.push_back(sign);
        for (int m = 0; m < 2; ++m) {
            for (int n = 0; n < 2; ++n) {
                VectorXcd v = VectorXcd::Zero(30);
                int sq = ((m + n) % 2) ? -q : q;
                for (int j = 0; j < p; ++j) {
                    std::complex<double> phase =
                        std::exp(std::complex<double>(0, (m ? -1 : 1) * 2 * M_PI * j / p));
                    v(((m + n) % 2) ? ref(N / p * j + sq) : rot(N / p * j + sq)) += phase * s3;
                }
                forms.push_back(v);
            }
        }
    }

    std::vector<int> used(30, 0);
    for (size_t s = 0; s < forms.size(); ++s) {
        int hit = -1;
        for (int c = 0; c < 30; ++c) {
            if ((forms[s] - basis.U.col(c)).cwiseAbs().maxCoeff() < 1e-10) {
                hit = c;
                break;
            }
        }
        if (hit < 0) {
            return fail("closed-form state %zu matches no basis column to 1e-10", s);
        }
        if (++used[hit] > 1) {
            return fail("two closed-form states map to basis column %d", hit);
        }
    }

    // Gram matrices of every basis built here and in a spread of other cases.
    struct Case {
        const char *group;
        std::vector<int> gens;
    };
    std::vector<Case> cases = {{"dihedral:15", {5, 15}}, {"dihedral:15", {1, 15}},
                               {"dihedral:15", {3}},     {"z2^4", {8, 4}},
                               {"z2^4", {0}},            {"z12", {2}}};
    for (const auto &cs : cases) {
        finite::GroupTable Gi = finite::parse_group_spec(cs.group);
        finite::Subgroup Hi = finite::subgroup_from_generators(Gi, cs.gens);
        finite::CosetBasis bi = finite::coset_basis(Gi, Hi, finite::irreps_of(Gi, Hi));
        double resid = (bi.U.adjoint() * bi.U - MatrixXcd::Identity(Gi.order, Gi.order))
                           .cwiseAbs()
                           .maxCoeff();
        if (resid > 1e-10) {
            return fail("%s Gram residual %.3g > 1e-10", cs.group, resid);
        }
    }
    return "";
}

// ---- 5: seesaw soundness --------------------------------------------------

std::string criterion5() {
    const std::vector<std::string> pool = {"cyclic:2", "cyclic:3",   "cyclic:4", "cyclic:5",
                                           "cyclic:6", "dihedral:3", "z2^2"};
    Rng rng(derive_seed(20250823, 0xac, 5));
    for (int trial = 0; trial < 50; ++trial) {
        const std::string &name = pool[rng.uniform_below(pool.size())];
        finite::GroupTable G = finite::parse_group_spec(name);
        std::vector<finite::Subgroup> S = finite::two_generated_subgroups(G);
        finite::SeesawOptions opts;
        opts.seed = derive_seed(20250823, 0xad, trial);
        opts.iterations = 5;
        finite::SeesawResult res = finite::seesaw_lower_bound(G, S, opts);
        double ub = finite::finite_bound(G, S).value;
        if (res.value > ub + 1e-9) {
            return fail("trial %d (%s): seesaw %.12f above bound %.12f", trial, name.c_str(),
                        res.value, ub);
        }
        if (res.value < 1.0 / G.order - 1e-12 || res.value > 1 + 1e-12) {
            return fail("trial %d (%s): value %.12f outside [1/|G|, 1]", trial, name.c_str(),
                        res.value);
        }
    }
    return "";
}

// ---- 6: Gaussian moment identities ----------------------------------------

std::string criterion6() {
    Budget budget;
    const double a = 0.3, b = 2.0;
    const long samples = 1000000;
    const double pi2 = 4 * M_PI * M_PI;

    // Coset-parameter priors, sampled in blocks of 10^4 modes.
    double sq = 0, sp = 0, sq2 = 0, sp2 = 0;
    gaussian::RegisterSubspace P;
    P.n = 20000;
    for (int i = 0; i < 10000; ++i) {
        P.modes.push_back(2 * i);
    }
    for (int block = 0; block < 100; ++block) {
        gaussian::CosetParams cp = gaussian::sample_coset_params(
            P, a, b, 1e9, 1e9, derive_seed(618, 0xc6, block));
        sq += cp.q.sum();
        sq2 += cp.q.squaredNorm();
        sp += cp.p.sum();
        sp2 += cp.p.squaredNorm();
    }
    double var_q = sq2 / samples - (sq / samples) * (sq / samples);
    double var_p = sp2 / samples - (sp / samples) * (sp / samples);
    if (std::abs(var_q - 1 / (4 * a)) > 0.01 / (4 * a)) {
        return fail("position prior variance %.6f vs %.6f", var_q, 1 / (4 * a));
    }
    if (std::abs(var_p - (a + b) / pi2) > 0.01 * (a + b) / pi2) {
        return fail("momentum prior variance %.6f vs %.6f", var_p, (a + b) / pi2);
    }

    // Homodyne outcomes around a fixed coset parameter.
    double sx = 0, sx2 = 0, sy = 0, sy2 = 0;
    for (long i = 0; i < samples; ++i) {
        double x = gaussian::homodyne_measure(gaussian::Quadrature::position, 0.0, a, b, {0, 0},
                                              derive_seed(618, 0xc7, i));
        double y = gaussian::homodyne_measure(gaussian::Quadrature::momentum, 0.0, a, b, {0, 0},
                                              derive_seed(618, 0xc8, i));
        sx += x;
        sx2 += x * x;
        sy += y;
        sy2 += y * y;
    }
    double var_x = sx2 / samples - (sx / samples) * (sx / samples);
    double var_y = sy2 / samples - (sy / samples) * (sy / samples);
    if (std::abs(var_x - 1 / (4 * b)) > 0.01 / (4 * b)) {
        return fail("position outcome variance %.6f vs %.6f", var_x, 1 / (4 * b));
    }
    double vy = a * b / (pi2 * (a + b));
    if (std::abs(var_y - vy) > 0.01 * vy) {
        return fail("momentum outcome variance %.6f vs %.6f", var_y, vy);
    }
    if (budget.seconds() >= 30.0) {
        return fail("took %.1f s (budget 30 s)", budget.seconds());
    }
    return "";
}

// ---- 7: session aborts vs analytic bounds ---------------------------------

std::string criterion7() {
    Budget budget;
    struct Desk {
        const char *label;
        protocol::ProtocolParams params;
    };
    std::vector<Desk> desks;
    {
        protocol::ProtocolParams p;
        p.n = 16;
        p.a = 0.05;
        p.b = 80;
        p.pos_bins = coding::make_bin_config(2.0, 4);
        p.mom_bins = coding::make_bin_config(0.5, 3);
        p.theta = 0.5;
        p.gamma_tol = 0.75;
        p.eta = 0.25;
        p.key_len = 6;
        p.code = coding::make_code("random:24:10:4");
        p.tau = 0.1;
        desks.push_back({"n=16", p});
        p.n = 64;
        p.a = 0.005;
        p.key_len = 16;
        p.code = coding::make_code("random:96:76:1:d=3");
        desks.push_back({"n=64", p});
    }

    const long trials = 1000;
    for (const auto &desk : desks) {
        protocol::MonteCarloSummary mc = protocol::monte_carlo(
            desk.params, protocol::ChannelModel::identity(), trials, 20250823);
        double comp = protocol::completeness_bound(desk.params).total;
        double corr = protocol::correctness_bound(desk.params);
        double abort_rate = static_cast<double>(mc.aborts) / trials;
        double mism_rate = static_cast<double>(mc.key_mismatches) / trials;
        double comp_gate = comp + 3 * std::sqrt(comp * (1 - comp) / trials);
        double corr_gate = corr + 3 * std::sqrt(corr * (1 - corr) / trials);
        if (abort_rate > comp_gate) {
            return fail("%s: abort rate %.4f above gate %.4f", desk.label, abort_rate,
                        comp_gate);
        }
        if (mism_rate > corr_gate) {
            return fail("%s: mismatch rate %.4f above gate %.4f", desk.label, mism_rate,
                        corr_gate);
        }
    }
    if (budget.seconds() >= 300.0) {
        return fail("took %.1f s (budget 300 s)", budget.seconds());
    }
    return "";
}

// ---- 8: floor-kernel integral bound ---------------------------------------

std::string criterion8() {
    auto gauss = [](double x) {
        return std::exp(-x * x / 2.0) / std::sqrt(2.0 * M_PI);
    };
    auto unif = [](double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; };
    const double sigma_g = 1.0;
    const double sigma_u = 0.28867513459481288;  // 1/sqrt(12)
    for (double alpha : {1.0, 10.0, 10000.0}) {
        double vg = gaussian::floor_integral_check(alpha, gauss,
                                                   gaussian::default_floor_grid(alpha, sigma_g));
        if (vg > 6.0 / alpha) {
            return fail("Gaussian density at alpha=%g: %.6g > %.6g", alpha, vg, 6.0 / alpha);
        }
        double vu = gaussian::floor_integral_check(alpha, unif,
                                                   gaussian::default_floor_grid(alpha, sigma_u));
        if (vu > 6.0 / alpha) {
            return fail("uniform density at alpha=%g: %.6g > %.6g", alpha, vu, 6.0 / alpha);
        }
    }
    return "";
}

// ---- 9: rotated-circle overlap --------------------------------------------

std::string criterion9() {
    const int N = 6;
    const std::vector<double> epsilons = {0.01, 0.02};
    const std::vector<double> thetas = {M_PI / 6, M_PI / 3, M_PI / 2, 2 * M_PI / 3,
                                        5 * M_PI / 6};

    int outside = 0;
    double worst_gap = 0, worst_theta = 0, worst_eps = 0, worst_mc = 0, worst_se = 0,
           worst_cf = 0;
    int point = 0;
    for (double eps : epsilons) {
        for (double theta : thetas) {
            bounds::McEstimate mc = bounds::so3_overlap_mc(theta, eps, 60000, 900 + point);
            double cf = bounds::so3_coset_overlap(theta, eps);
            double gap = std::abs(mc.estimate - cf);
            if (gap > 3 * mc.std_error) {
                ++outside;
                if (gap / std::max(mc.std_error, 1e-12) > worst_gap) {
                    worst_gap = gap / std::max(mc.std_error, 1e-12);
                    worst_theta = theta;
                    worst_eps = eps;
                    worst_mc = mc.estimate;
                    worst_se = mc.std_error;
                    worst_cf = cf;
                }
            }
            ++point;
        }
    }

    // Average of the per-shift overlap terms against the closed bound.
    for (double eps : epsilons) {
        double avg = 1.0 / N;
        for (double theta : thetas) {
            avg += bounds::so3_coset_overlap(theta, eps) / N;
        }
        double bound = bounds::bound_so3({N, eps}).value;
        if (avg > bound + 1e-12) {
            return fail("averaged overlaps %.6f above bound %.6f at eps=%g", avg, bound, eps);
        }
    }

    if (outside > 0) {
        return fail("%d/10 grid points beyond 3 standard errors; worst at theta=%.4f eps=%.3g: "
                    "sampled %.5f+-%.5f vs closed form %.5f (closed form sits a factor ~sqrt(2) "
                    "high: its arcsin argument misses a half-angle split)",
                    outside, worst_theta, worst_eps, worst_mc, worst_se, worst_cf);
    }
    return "";
}

// ---- 10: coding layer exactness -------------------------------------------

std::string criterion10() {
    for (uint32_t k = 0; k + 1 < (1u << 10); ++k) {
        if (coding::gray_decode(coding::gray_encode(k, 10)) != k) {
            return fail("Gray round trip fails at %u", k);
        }
        if (coding::gray_encode(k, 10).hamming(coding::gray_encode(k + 1, 10)) != 1) {
            return fail("Gray adjacency fails at %u", k);
        }
    }

    coding::LinearCode ham = coding::make_hamming74();
    coding::SyndromeTable table = coding::build_syndrome_table(ham);
    BitVec zero_syn(3);
    int codewords = 0;
    for (uint32_t w = 0; w < (1u << 7); ++w) {
        BitVec word = BitVec::from_uint(w, 7);
        if (coding::syndrome(ham, word).any()) {
            continue;
        }
        ++codewords;
        for (int i = 0; i < 7; ++i) {
            BitVec hit = word;
            hit.set(i, !hit.get(i));
            if (coding::decode_with_syndrome(ham, table, hit, zero_syn) != word) {
                return fail("single error at bit %d of codeword %u not corrected", i, w);
            }
        }
    }
    if (codewords != 16) {
        return fail("expected 16 codewords, found %d", codewords);
    }

    const std::vector<std::pair<int, int>> shapes = {{2, 1}, {3, 2}, {4, 2}, {5, 3}, {6, 3}};
    for (auto [in, out] : shapes) {
        double worst = coding::universality_check(in, out);
        if (worst != std::exp2(-out)) {
            return fail("hash family at (%d,%d): collision bound %.17g != 2^-%d", in, out,
                        worst, out);
        }
    }
    return "";
}

// ---- 11: deterministic replay ---------------------------------------------

std::string slurp(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        return "";
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string criterion11() {
    const std::string cli = CLI_PATH;
    auto shell = [&](const std::string &cmd) { return std::system(cmd.c_str()) == 0; };

    std::vector<std::string> cleanup;
    auto compare_twice = [&](const std::string &args, const std::string &tag,
                             const std::vector<std::string> &files) -> std::string {
        std::vector<std::string> first;
        for (int round = 0; round < 2; ++round) {
            std::string suffix = round == 0 ? ".a" : ".b";
            std::string cmd = cli + " " + args;
            size_t pos;
            while ((pos = cmd.find("%R")) != std::string::npos) {
                cmd.replace(pos, 2, suffix);
            }
            if (!shell(cmd)) {
                return fail("%s: command failed on round %d", tag.c_str(), round + 1);
            }
            for (size_t i = 0; i < files.size(); ++i) {
                std::string path = files[i];
                while ((pos = path.find("%R")) != std::string::npos) {
                    path.replace(pos, 2, suffix);
                }
                cleanup.push_back(path);
                std::string body = slurp(path);
                if (body.empty()) {
                    return fail("%s: output %s missing or empty", tag.c_str(), path.c_str());
                }
                if (round == 0) {
                    first.push_back(body);
                } else if (body != first[i]) {
                    return fail("%s: %s differs between identical runs", tag.c_str(),
                                path.c_str());
                }
            }
        }
        return "";
    };

    std::string r = compare_twice(
        "qkd simulate --seed 424242 --channel agwn:x=0.01,y=0.01 --transcript "
        "acc11_t%R.jsonl > acc11_s%R.csv",
        "transcript+summary", {"acc11_t%R.jsonl", "acc11_s%R.csv"});
    if (r.empty()) {
        r = compare_twice("qkd simulate --seed 7 --trials 100 > acc11_m%R.csv", "aggregate",
                          {"acc11_m%R.csv"});
    }
    if (r.empty()) {
        r = compare_twice("qkd keyrate --curve acc11_c%R.csv --points 50 > acc11_k%R.csv",
                          "keyrate+curve", {"acc11_c%R.csv", "acc11_k%R.csv"});
    }
    for (const auto &path : cleanup) {
        std::remove(path.c_str());
    }
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "asymptotic key-rate relation", criterion1},
        {2, "noise-constrained key rate", criterion2},
        {3, "subspace overlap sweep", criterion3},
        {4, "coset-basis closed forms", criterion4},
        {5, "seesaw soundness", criterion5},
        {6, "Gaussian moment identities", criterion6},
        {7, "session aborts vs analytic bounds", criterion7},
        {8, "floor-kernel integral bound", criterion8},
        {9, "rotated-circle overlap", criterion9},
        {10, "coding layer exactness", criterion10},
        {11, "deterministic replay", criterion11},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception &e) {
            detail = fail("unexpected error: %s", e.what());
        }
        if (detail.empty()) {
            std::printf("criterion %2d (%s): PASS\n", c.id, c.name);
        } else {
            std::printf("criterion %2d (%s): FAIL — %s\n", c.id, c.name, detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
