#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cosetqkd/analysis.hpp"
#include "cosetqkd/bounds.hpp"
#include "cosetqkd/coding.hpp"
#include "cosetqkd/coset.hpp"
#include "cosetqkd/errors.hpp"
#include "cosetqkd/group.hpp"
#include "cosetqkd/irreps.hpp"
#include "cosetqkd/protocol.hpp"
#include "cosetqkd/strategy.hpp"

using namespace cosetqkd;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<long> parse_long_list(const std::string &text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stol(item, &pos));
            require_valid(pos == item.size(), "trailing characters");
        } catch (const std::exception &) {
            throw validation_error("cannot parse integer list entry '" + item + "'");
        }
    }
    require_valid(!out.empty(), "empty integer list");
    return out;
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    for (long v : parse_long_list(text)) {
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            require_valid(pos == item.size(), "trailing characters");
        } catch (const std::exception &) {
            throw validation_error("cannot parse number list entry '" + item + "'");
        }
    }
    require_valid(!out.empty(), "empty number list");
    return out;
}

template <typename T>
std::string join(const std::vector<T> &xs, char sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += std::to_string(xs[i]);
    }
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw resource_error("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw resource_error("cannot open '" + path + "' for writing");
    }
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    f.flush();
    if (!f) {
        throw resource_error("write to '" + path + "' failed");
    }
}

void print_bound_row(const std::string &game, const std::string &params,
                     const bounds::Bound &b) {
    std::cout << game << "," << params << "," << fmt(b.value) << "," << (b.trivial ? 1 : 0)
              << "\n";
}

// ---- bounds ---------------------------------------------------------------

struct BoundsOpts {
    std::string primes = "2,3,5";
    std::string alphas = "2,3";
    double epsilon = 1e-3;
    double delta = 1e-3;
    int n = 16;
    int N = 4;
    double M = 2;
    double a = 1e-2;
    double gamma = -1;
    std::string sweep;
};

void add_bounds(CLI::App &app, BoundsOpts &o) {
    auto *cmd = app.add_subcommand("bounds", "closed-form winning-probability bounds");
    cmd->require_subcommand(1);

    auto *u1 = cmd->add_subcommand("u1", "phase-angle game over ascending prime scales");
    u1->add_option("--primes", o.primes, "comma-separated ascending primes")
        ->capture_default_str();
    u1->add_option("--epsilon", o.epsilon, "angular tolerance")->capture_default_str();
    u1->callback([&o] {
        bounds::GameSpecU1 spec;
        spec.primes = parse_long_list(o.primes);
        spec.epsilon = o.epsilon;
        std::cout << "game,params,bound,trivial\n";
        print_bound_row("u1", "primes=" + join(spec.primes, ';') + " epsilon=" + fmt(o.epsilon),
                        bounds::bound_u1(spec));
    });

    auto *cx = cmd->add_subcommand("complex", "plane game with position and momentum bins");
    cx->add_option("--n", o.n, "mode count (even)")->capture_default_str();
    cx->add_option("--delta", o.delta, "position bin half-width")->capture_default_str();
    cx->add_option("--epsilon", o.epsilon, "momentum bin half-width")->capture_default_str();
    cx->callback([&o] {
        std::cout << "game,params,bound,trivial\n";
        print_bound_row("complex",
                        "n=" + std::to_string(o.n) + " delta=" + fmt(o.delta) +
                            " epsilon=" + fmt(o.epsilon),
                        bounds::bound_complex(o.n, o.delta, o.epsilon));
    });

    auto *rn = cmd->add_subcommand("rn", "n-mode register-subspace game");
    rn->add_option("--n", o.n, "mode count (even)")->capture_default_str();
    rn->add_option("--delta", o.delta, "position bin half-width")->capture_default_str();
    rn->add_option("--epsilon", o.epsilon, "momentum bin half-width")->capture_default_str();
    rn->add_option("--gamma", o.gamma,
                   "mode-failure fraction; adds the relaxed-win bound when set")
        ->capture_default_str();
    rn->callback([&o] {
        bounds::GameSpecRn spec;
        spec.n = o.n;
        spec.delta = o.delta;
        spec.epsilon = o.epsilon;
        std::string params = "n=" + std::to_string(o.n) + " delta=" + fmt(o.delta) +
                             " epsilon=" + fmt(o.epsilon);
        bounds::RnBound rb = bounds::bound_rn(spec);
        std::cout << "game,params,bound,trivial\n";
        print_bound_row("rn-exact", params, bounds::make_bound(rb.exact_sum));
        print_bound_row("rn-closed", params, bounds::make_bound(rb.closed_form));
        if (o.gamma >= 0) {
            spec.gamma = o.gamma;
            print_bound_row("rn-mode-failure", params + " gamma=" + fmt(o.gamma),
                            bounds::bound_rn_mode_failure(spec));
        }
    });

    auto *gkp = cmd->add_subcommand("gkp", "lattice-state game with damping and support cutoff");
    gkp->add_option("--alphas", o.alphas, "comma-separated ascending primes")
        ->capture_default_str();
    gkp->add_option("--epsilon", o.epsilon, "tolerance")->capture_default_str();
    gkp->add_option("--M", o.M, "support cutoff")->capture_default_str();
    gkp->add_option("--a", o.a, "damping strength")->capture_default_str();
    gkp->add_option("--sweep", o.sweep, "comma-separated cutoffs; reports the best one");
    gkp->callback([&o] {
        bounds::GameSpecGkp spec;
        spec.alphas = parse_long_list(o.alphas);
        spec.epsilon = o.epsilon;
        spec.M = o.M;
        spec.a = o.a;
        std::string params = "alphas=" + join(spec.alphas, ';') + " epsilon=" + fmt(o.epsilon) +
                             " a=" + fmt(o.a);
        std::cout << "game,params,bound,trivial\n";
        print_bound_row("gkp", params + " M=" + fmt(o.M), bounds::bound_gkp(spec));
        if (!o.sweep.empty()) {
            bounds::GkpSweep s = bounds::bound_gkp_sweep(spec, parse_double_list(o.sweep));
            print_bound_row("gkp-sweep", params + " M=" + fmt(s.best_M), s.bound);
        }
    });

    auto *so3 = cmd->add_subcommand("so3", "rotation-group game over circle subgroups");
    so3->add_option("--N", o.N, "subgroup count (even)")->capture_default_str();
    so3->add_option("--epsilon", o.epsilon, "metric radius")->capture_default_str();
    so3->callback([&o] {
        bounds::GameSpecSo3 spec;
        spec.N = o.N;
        spec.epsilon = o.epsilon;
        std::cout << "game,params,bound,trivial\n";
        print_bound_row("so3", "N=" + std::to_string(o.N) + " epsilon=" + fmt(o.epsilon),
                        bounds::bound_so3(spec));
    });
}

// ---- game -----------------------------------------------------------------

struct GameOpts {
    std::string group = "dihedral:15";
    std::string subgroup;
    std::string other;
    uint64_t seed = 0;
    int iterations = 60;
    int d_B = 0;
    int d_C = 0;
};

double pair_max_excess(const finite::GroupTable &G, const finite::Subgroup &H,
                       const finite::Subgroup &K, const finite::IrrepSet &irr, long &checks,
                       double &max_norm) {
    std::vector<int> qs = finite::coset_reps(G, K);
    double excess = -1e300;
    for (size_t ii = 0; ii < irr.irreps.size(); ++ii) {
        int dim = irr.irreps[ii].dim;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                for (int q : qs) {
                    finite::OverlapResult res =
                        finite::overlap_check(G, H, K, static_cast<int>(ii), r, c, q);
                    ++checks;
                    max_norm = std::max(max_norm, res.norm);
                    excess = std::max(excess, res.norm - res.bound);
                }
            }
        }
    }
    return excess;
}

void add_game(CLI::App &app, GameOpts &o) {
    auto *cmd = app.add_subcommand("game", "finite coset guessing games");
    cmd->require_subcommand(1);

    auto *build = cmd->add_subcommand("build", "construct a group, subgroup, and coset basis");
    build->add_option("--group", o.group, "group spec, e.g. dihedral:15 or z2^4")
        ->capture_default_str();
    build->add_option("--subgroup", o.subgroup, "comma-separated generator element indices")
        ->required();
    build->callback([&o] {
        finite::GroupTable G = finite::parse_group_spec(o.group);
        finite::validate(G);
        finite::Subgroup H = finite::subgroup_from_generators(G, parse_int_list(o.subgroup));
        finite::validate(G, H);
        finite::IrrepSet irr = finite::irreps_of(G, H);
        finite::check_schur_orthogonality(G, H, irr);
        finite::CosetBasis basis = finite::coset_basis(G, H, irr);
        double residual = (basis.U.adjoint() * basis.U -
                           Eigen::MatrixXcd::Identity(G.order, G.order))
                              .cwiseAbs()
                              .maxCoeff();
        std::cout << "group,order,subgroup_order,cosets,irreps,sum_dim_sq,unitarity_residual\n";
        std::cout << o.group << "," << G.order << "," << H.order() << ","
                  << G.order / H.order() << "," << irr.irreps.size() << "," << irr.sum_dim_sq()
                  << "," << fmt(residual) << "\n";
    });

    auto *check = cmd->add_subcommand(
        "check", "verify the subspace-overlap inequality across subgroup pairs");
    check->add_option("--group", o.group, "group spec")->capture_default_str();
    check->add_option("--subgroup", o.subgroup, "generators of the basis subgroup (optional)");
    check->add_option("--other", o.other, "generators of the projecting subgroup (optional)");
    check->callback([&o] {
        finite::GroupTable G = finite::parse_group_spec(o.group);
        finite::validate(G);
        long checks = 0;
        double max_norm = 0;
        if (!o.subgroup.empty() || !o.other.empty()) {
            require_valid(!o.subgroup.empty() && !o.other.empty(),
                          "--subgroup and --other must be given together");
            finite::Subgroup H = finite::subgroup_from_generators(G, parse_int_list(o.subgroup));
            finite::Subgroup K = finite::subgroup_from_generators(G, parse_int_list(o.other));
            finite::IrrepSet irr = finite::irreps_of(G, H);
            double excess = pair_max_excess(G, H, K, irr, checks, max_norm);
            std::cout << "group,subgroup_order,other_order,checks,max_norm,max_excess\n";
            std::cout << o.group << "," << H.order() << "," << K.order() << "," << checks << ","
                      << fmt(max_norm) << "," << fmt(excess) << "\n";
            return;
        }
        std::vector<finite::Subgroup> S = finite::two_generated_subgroups(G);
        std::vector<finite::IrrepSet> irreps;
        irreps.reserve(S.size());
        for (const auto &H : S) {
            irreps.push_back(finite::irreps_of(G, H));
        }
        double excess = -1e300;
        for (size_t i = 0; i < S.size(); ++i) {
            for (size_t j = 0; j < S.size(); ++j) {
                excess = std::max(excess,
                                  pair_max_excess(G, S[i], S[j], irreps[i], checks, max_norm));
            }
        }
        std::cout << "group,subgroups,pairs,checks,max_excess\n";
        std::cout << o.group << "," << S.size() << "," << S.size() * S.size() << "," << checks
                  << "," << fmt(excess) << "\n";
    });

    auto *bound = cmd->add_subcommand("bound", "winning-probability bound for the game");
    bound->add_option("--group", o.group, "group spec")->capture_default_str();
    bound->callback([&o] {
        finite::GroupTable G = finite::parse_group_spec(o.group);
        finite::validate(G);
        std::vector<finite::Subgroup> S = finite::two_generated_subgroups(G);
        bounds::Bound b = finite::finite_bound(G, S);
        std::cout << "group,subgroups,bound,trivial\n";
        std::cout << o.group << "," << S.size() << "," << fmt(b.value) << ","
                  << (b.trivial ? 1 : 0) << "\n";
    });

    auto *seesaw = cmd->add_subcommand("seesaw", "alternating-optimization lower bound");
    seesaw->add_option("--group", o.group, "group spec")->capture_default_str();
    seesaw->add_option("--seed", o.seed, "RNG seed")->required();
    seesaw->add_option("--iterations", o.iterations, "maximum sweeps")->capture_default_str();
    seesaw->add_option("--dB", o.d_B, "coset guesser dimension (0 = group order)")
        ->capture_default_str();
    seesaw->add_option("--dC", o.d_C, "entry guesser dimension (0 = group order)")
        ->capture_default_str();
    seesaw->callback([&o] {
        finite::GroupTable G = finite::parse_group_spec(o.group);
        finite::validate(G);
        std::vector<finite::Subgroup> S = finite::two_generated_subgroups(G);
        finite::SeesawOptions opts;
        opts.seed = o.seed;
        opts.iterations = o.iterations;
        opts.d_B = o.d_B;
        opts.d_C = o.d_C;
        finite::SeesawResult res = finite::seesaw_lower_bound(G, S, opts);
        bounds::Bound ub = finite::finite_bound(G, S);
        std::cout << "group,seed,value,upper_bound,converged,iterations\n";
        std::cout << o.group << "," << o.seed << "," << fmt(res.value) << "," << fmt(ub.value)
                  << "," << (res.converged ? 1 : 0) << "," << res.iterations_run << "\n";
    });
}

// ---- qkd ------------------------------------------------------------------

struct QkdOpts {
    int n = 16;
    double a = 0.05;
    double b = 80;
    double pos_width = 2.0;
    int pos_bits = 4;
    double mom_width = 0.5;
    int mom_bits = 3;
    double theta = 0.5;
    double gamma_tol = 0.75;
    double eta = 0.25;
    int key_len = 6;
    std::string code = "random:24:10:4";
    double tau = 0.1;
    std::string channel = "identity";
    uint64_t seed = 0;
    long trials = 1;
    std::string transcript;
    std::string replay_path;
    // asymptotic analysis
    double squeeze = 0.001;
    double delta = 4;
    double epsilon = 1.0 / 64;
    int n_M = 16;
    int n_N = 16;
    double x = 0;
    double y = 0;
    std::string curve;
    int points = 200;
    std::string format = "csv";
};

protocol::ProtocolParams session_params(const QkdOpts &o) {
    protocol::ProtocolParams p;
    p.n = o.n;
    p.a = o.a;
    p.b = o.b;
    p.pos_bins = coding::make_bin_config(o.pos_width, o.pos_bits);
    p.mom_bins = coding::make_bin_config(o.mom_width, o.mom_bits);
    p.theta = o.theta;
    p.gamma_tol = o.gamma_tol;
    p.eta = o.eta;
    p.key_len = o.key_len;
    p.code = coding::make_code(o.code);
    p.tau = o.tau;
    return p;
}

void print_summary(const protocol::MonteCarloSummary &mc, const std::string &abort_stage) {
    std::cout << "trials,aborts,accepted,key_mismatches,abort_rate,abort_low,abort_high,"
                 "key_mismatch_rate,mean_pe_mismatches,mean_corrected_distance,mean_resamples,"
                 "abort_stage\n";
    std::cout << mc.trials << "," << mc.aborts << "," << mc.accepted << ","
              << mc.key_mismatches << "," << fmt(mc.abort_rate.rate) << ","
              << fmt(mc.abort_rate.low) << "," << fmt(mc.abort_rate.high) << ","
              << fmt(mc.key_mismatch_rate.rate) << "," << fmt(mc.mean_pe_mismatches) << ","
              << fmt(mc.mean_corrected_distance) << "," << fmt(mc.mean_resamples) << ","
              << abort_stage << "\n";
}

void add_session_options(CLI::App *cmd, QkdOpts &o) {
    cmd->set_config("--config", "", "key=value file; command-line flags override it");
    cmd->add_option("--n", o.n, "mode count (even)")->capture_default_str();
    cmd->add_option("--a", o.a, "damping lower parameter")->capture_default_str();
    cmd->add_option("--b", o.b, "damping upper parameter")->capture_default_str();
    cmd->add_option("--pos_width", o.pos_width, "position bin width")->capture_default_str();
    cmd->add_option("--pos_bits", o.pos_bits, "position register bits")->capture_default_str();
    cmd->add_option("--mom_width", o.mom_width, "momentum bin width")->capture_default_str();
    cmd->add_option("--mom_bits", o.mom_bits, "momentum register bits")->capture_default_str();
    cmd->add_option("--theta", o.theta, "checked-mode fraction")->capture_default_str();
    cmd->add_option("--gamma_tol", o.gamma_tol, "mismatch tolerance")->capture_default_str();
    cmd->add_option("--eta", o.eta, "reconciliation sample fraction")->capture_default_str();
    cmd->add_option("--key_len", o.key_len, "output key bits")->capture_default_str();
    cmd->add_option("--code", o.code, "linear code spec")->capture_default_str();
    cmd->add_option("--tau", o.tau, "secrecy slack")->capture_default_str();
    cmd->add_option("--channel", o.channel,
                    "identity | agwn:x=..,y=.. | permode:x,y;x,y;...")
        ->capture_default_str();
}

void add_qkd(CLI::App &app, QkdOpts &o) {
    auto *cmd = app.add_subcommand("qkd", "squeezed-state protocol sessions and key rates");
    cmd->require_subcommand(1);

    auto *sim = cmd->add_subcommand("simulate", "run sessions and print a summary row");
    add_session_options(sim, o);
    sim->add_option("--seed", o.seed, "RNG seed")->required();
    sim->add_option("--trials", o.trials, "session count")->capture_default_str();
    sim->add_option("--transcript", o.transcript,
                    "write the session transcript here (single trial only)");
    sim->callback([&o] {
        protocol::ProtocolParams p = session_params(o);
        protocol::ChannelModel ch = protocol::parse_channel(o.channel);
        if (o.trials == 1) {
            protocol::SessionResult r = protocol::run_session(p, ch, o.seed);
            if (!o.transcript.empty()) {
                write_file(o.transcript, protocol::session_to_jsonl(p, ch, o.seed));
            }
            protocol::MonteCarloSummary one;
            one.trials = 1;
            one.aborts = r.accepted ? 0 : 1;
            one.accepted = r.accepted ? 1 : 0;
            one.key_mismatches =
                (r.accepted && *r.alice_key != *r.bob_key) ? 1 : 0;
            one.abort_rate = protocol::wilson_interval(one.aborts, 1);
            one.key_mismatch_rate =
                protocol::wilson_interval(one.key_mismatches, one.accepted);
            one.mean_pe_mismatches = r.diagnostics.pe_mismatches;
            one.mean_corrected_distance = r.diagnostics.corrected_distance;
            one.mean_resamples = r.diagnostics.resamples;
            print_summary(one, r.abort_stage);
            return;
        }
        require_valid(o.transcript.empty(), "transcript capture needs --trials 1");
        print_summary(protocol::monte_carlo(p, ch, o.trials, o.seed), "");
    });

    auto *replay = cmd->add_subcommand("replay", "re-run a stored transcript and compare bytes");
    replay->add_option("--transcript", o.replay_path, "transcript file")->required();
    replay->callback([&o] {
        std::string stored = read_file(o.replay_path);
        size_t eol = stored.find('\n');
        require_valid(eol != std::string::npos, "transcript has no header line");
        protocol::TranscriptHeader header =
            protocol::parse_transcript_header(stored.substr(0, eol));
        std::string fresh =
            protocol::session_to_jsonl(header.params, header.channel, header.seed);
        if (fresh != stored) {
            throw validation_error(
                "transcript does not match its deterministic regeneration");
        }
        size_t lines = 0;
        for (char c : stored) {
            lines += c == '\n';
        }
        std::cout << "transcript,messages,bytes,match\n";
        std::cout << o.replay_path << "," << lines - 1 << "," << stored.size() << ",1\n";
    });

    auto *keyrate = cmd->add_subcommand("keyrate", "asymptotic rate and tolerance analysis");
    keyrate->set_config("--config", "", "key=value file; command-line flags override it");
    keyrate->add_option("--squeeze", o.squeeze, "squeeze factor")->capture_default_str();
    keyrate->add_option("--delta", o.delta, "position bin width")->capture_default_str();
    keyrate->add_option("--epsilon", o.epsilon, "momentum bin width")->capture_default_str();
    keyrate->add_option("--n_M", o.n_M, "position register bits")->capture_default_str();
    keyrate->add_option("--n_N", o.n_N, "momentum register bits")->capture_default_str();
    keyrate->add_option("--x", o.x, "position noise scale")->capture_default_str();
    keyrate->add_option("--y", o.y, "momentum noise scale")->capture_default_str();
    keyrate->add_option("--curve", o.curve, "write the rate-tolerance curve to this file");
    keyrate->add_option("--points", o.points, "curve grid points")->capture_default_str();
    keyrate->add_option("--format", o.format, "curve format: csv | gnuplot-data")
        ->capture_default_str();
    keyrate->callback([&o] {
        analysis::AsymptoticParams p;
        p.squeeze = o.squeeze;
        p.delta = o.delta;
        p.epsilon = o.epsilon;
        p.n_M = o.n_M;
        p.n_N = o.n_N;
        analysis::RateResult rate = analysis::completeness_constrained_rate(p, o.x, o.y);
        std::cout << "lhs0,r_max,gamma_max,noise_x,noise_y,required_gamma,binding,feasible,"
                     "rate\n";
        std::cout << fmt(analysis::asymptotic_lhs(p, 0)) << ","
                  << fmt(analysis::asymptotic_lhs(p, 0) / 2) << "," << fmt(rate.gamma_max)
                  << "," << fmt(o.x) << "," << fmt(o.y) << "," << fmt(rate.gamma) << ","
                  << rate.binding_constraint << "," << (rate.feasible ? 1 : 0) << ","
                  << fmt(rate.rate) << "\n";
        if (!o.curve.empty()) {
            analysis::ToleranceCurve tc = analysis::tolerance_curve(p, o.points);
            analysis::DataSet d;
            d.columns = {"rate", "gamma"};
            for (const auto &pt : tc.points) {
                d.rows.push_back({pt.rate, pt.gamma});
            }
            analysis::emit(d, analysis::parse_emit_format(o.format), o.curve);
        }
    });
}

// ---- codes ----------------------------------------------------------------

struct CodesOpts {
    std::string spec = "hamming:7:4";
    std::string word;
    std::string target;
    int in_len = 6;
    int out_len = 3;
};

void add_codes(CLI::App &app, CodesOpts &o) {
    auto *cmd = app.add_subcommand("codes", "linear codes, decoding, and hashing");
    cmd->require_subcommand(1);

    auto *make = cmd->add_subcommand("make", "construct a code from its spec string");
    make->add_option("--spec", o.spec, "hamming:7:4 | repetition:n | random:n:k:seed[:d=..]")
        ->capture_default_str();
    make->callback([&o] {
        coding::LinearCode code = coding::make_code(o.spec);
        std::cout << "spec,n,k,distance\n";
        std::cout << code.spec << "," << code.n << "," << code.k << ","
                  << (code.d ? std::to_string(*code.d) : "") << "\n";
    });

    auto *dist = cmd->add_subcommand("distance", "distance information for a code");
    dist->add_option("--spec", o.spec, "code spec")->capture_default_str();
    dist->callback([&o] {
        coding::LinearCode code = coding::make_code(o.spec);
        std::cout << "spec,distance,column_bound\n";
        std::cout << code.spec << "," << (code.d ? std::to_string(*code.d) : "") << ","
                  << coding::column_distance_bound(code) << "\n";
    });

    auto *dec = cmd->add_subcommand("decode", "move a word to a target syndrome");
    dec->add_option("--spec", o.spec, "code spec")->capture_default_str();
    dec->add_option("--word", o.word, "received word as a bit string")->required();
    dec->add_option("--target", o.target, "target syndrome as a bit string")->required();
    dec->callback([&o] {
        coding::LinearCode code = coding::make_code(o.spec);
        BitVec word = BitVec::from_string(o.word);
        BitVec target = BitVec::from_string(o.target);
        require_valid(static_cast<int>(word.size()) == code.n, "word length must equal n");
        require_valid(static_cast<int>(target.size()) == code.n - code.k,
                      "target syndrome length must equal n-k");
        coding::SyndromeTable table = coding::build_syndrome_table(code);
        BitVec corrected = coding::decode_with_syndrome(code, table, word, target);
        std::cout << "word,corrected,flips\n";
        std::cout << word.to_string() << "," << corrected.to_string() << ","
                  << word.hamming(corrected) << "\n";
    });

    auto *hash = cmd->add_subcommand("hashcheck", "exhaustive two-point collision bound");
    hash->add_option("--in_len", o.in_len, "input bits (kept small; enumeration)")
        ->capture_default_str();
    hash->add_option("--out_len", o.out_len, "output bits")->capture_default_str();
    hash->callback([&o] {
        double worst = coding::universality_check(o.in_len, o.out_len);
        std::cout << "in_len,out_len,max_collision,target\n";
        std::cout << o.in_len << "," << o.out_len << "," << fmt(worst) << ","
                  << fmt(std::exp2(-o.out_len)) << "\n";
    });
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coset-game bounds and squeezed-state QKD simulation toolkit"};
    app.require_subcommand(1);

    BoundsOpts bounds_opts;
    GameOpts game_opts;
    QkdOpts qkd_opts;
    CodesOpts codes_opts;
    add_bounds(app, bounds_opts);
    add_game(app, game_opts);
    add_qkd(app, qkd_opts);
    add_codes(app, codes_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    } catch (const validation_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
