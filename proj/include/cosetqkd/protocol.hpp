#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetqkd/bits.hpp"
#include "cosetqkd/coding.hpp"
#include "cosetqkd/gaussian.hpp"

namespace cosetqkd::protocol {

// Full parameter set of one key-distribution session. pos_bins carries
// (delta, M, n_M) for the position quadrature, mom_bins (epsilon, N, n_N)
// for the momentum quadrature; the linear code lives on n*n_N/2 bits.
struct ProtocolParams {
    int n = 0;                    // mode count, even
    double a = 0;                 // damping, b > a > 0
    double b = 0;
    coding::BinConfig pos_bins;
    coding::BinConfig mom_bins;
    double theta = 0;             // fraction of position modes checked publicly
    double gamma_tol = 0;         // tolerated fraction of check mismatches
    double eta = 0;               // fraction of corrected bits compared verbatim
    int key_len = 0;              // hashed key length
    coding::LinearCode code;
    double tau = 0;               // smoothing slack in the secrecy evaluation
};

// theta*n/2, gamma*theta*n/2 and eta*n_N*n/2 must be integers; the code must
// have length n*n_N/2 and dimension >= key_len.
void validate(const ProtocolParams &params);

int pe_count(const ProtocolParams &params);         // theta*n/2
int pe_tolerance(const ProtocolParams &params);     // gamma*theta*n/2
int reconcile_count(const ProtocolParams &params);  // eta*n_N*n/2
int block_length(const ProtocolParams &params);     // n*n_N/2

// Per-mode classical Gaussian noise between the two parties: none, the same
// (x, y) pair on every mode, or an explicit per-mode list of length n.
struct ChannelModel {
    enum class Kind { identity, agwn, per_mode };
    Kind kind = Kind::identity;
    gaussian::AgwnParams noise;
    std::vector<gaussian::AgwnParams> mode_noise;

    static ChannelModel identity();
    static ChannelModel agwn(gaussian::AgwnParams noise);
    static ChannelModel per_mode(std::vector<gaussian::AgwnParams> mode_noise);
};

void validate(const ChannelModel &channel, int n);
gaussian::AgwnParams channel_noise(const ChannelModel &channel, int mode);

// Round-trippable text form: "identity", "agwn:x=<v>,y=<v>",
// "permode:<x>,<y>;<x>,<y>;...".
std::string to_string(const ChannelModel &channel);
ChannelModel parse_channel(const std::string &text);

enum class Stage {
    state_preparation,
    parameter_estimation,
    error_correction,
    information_reconciliation,
    privacy_amplification,
};
const char *stage_name(Stage stage);

// One classical message of the session transcript. The subset/bits fields are
// populated per kind: basis_and_pe carries the momentum-mode mask, the checked
// modes and the sender's binned values; syndrome and hash_seed carry bits only;
// reconcile carries the compared positions and the sender's bits.
struct Message {
    enum class Kind { ack, basis_and_pe, syndrome, reconcile, hash_seed, abort };
    enum class Sender { alice, bob };

    Kind kind = Kind::ack;
    Stage stage = Stage::state_preparation;
    Sender sender = Sender::alice;
    BitVec subspace_mask;      // basis_and_pe
    std::vector<int> subset;   // basis_and_pe, reconcile
    BitVec bits;               // basis_and_pe, syndrome, reconcile, hash_seed

    bool operator==(const Message &other) const;
    bool operator!=(const Message &other) const { return !(*this == other); }
};

// Wire form: a leading kind byte, then the kind-specific body; bit strings as
// u32 bit length plus packed bytes, index lists as u32 count plus u32 entries.
std::vector<uint8_t> encode_message(const Message &msg);
Message decode_message(Stage stage, Message::Sender sender, const std::vector<uint8_t> &payload);

// One line-delimited JSON record {"stage":...,"sender":...,"payload":<hex>}.
std::string message_to_json(const Message &msg);
Message message_from_json(const std::string &line);

struct SessionDiagnostics {
    int pe_mismatches = 0;       // bin disagreements among the checked modes
    int corrected_distance = 0;  // bits flipped by syndrome decoding
    long resamples = 0;          // truncation retries while drawing (q, p)
};

struct SessionResult {
    bool accepted = false;
    std::string abort_stage;  // empty when accepted
    std::optional<BitVec> alice_key;
    std::optional<BitVec> bob_key;
    std::vector<Message> transcript;
    SessionDiagnostics diagnostics;
};

// Runs the five stages against the given channel: subspace + truncated coset
// sampling, per-mode homodyne with out-of-range outcomes replaced by 0, bin
// comparison on the checked modes with abort beyond gamma*theta*n/2 mismatches,
// syndrome correction of the rescaled momentum string, verbatim comparison on
// the reconciliation subset, and Toeplitz hashing. Pure in (params, channel,
// seed); messages appear in stage order and an abort ends the transcript.
SessionResult run_session(const ProtocolParams &params, const ChannelModel &channel, uint64_t seed);

// Out-of-range values fall back to the bits of 0 rather than failing.
BitVec binned_with_default(double value, const coding::BinConfig &cfg);

// Transcript serialization: a header line with the parameters, channel and
// seed, then one JSON record per message. Requires code.spec nonempty so the
// header alone can rebuild the session.
std::string session_to_jsonl(const ProtocolParams &params, const ChannelModel &channel, uint64_t seed);

struct TranscriptHeader {
    ProtocolParams params;
    ChannelModel channel;
    uint64_t seed = 0;
};
TranscriptHeader parse_transcript_header(const std::string &line);

// Probability that the two hashed keys differ in an accepted session, from the
// code distance: (1 - 2d/(n_N*n))^(eta*n_N*n/2). Requires code.d known.
double correctness_bound(const ProtocolParams &params);

struct CompletenessBreakdown {
    double pe_term = 0;          // abort pressure from the position checks
    double ec_term = 0;          // abort pressure from the momentum correction
    double total = 0;            // sum; the abort-probability bound
    double position_bound = 0;   // expected mismatch rate the tolerance must clear
    double momentum_bound = 0;   // per-mode bin distance the code distance must clear
};

// Abort-probability bound on the noiseless channel:
//   exp(-(gamma -posBound)^2)^(theta*n) + exp(-(2d/(n*n_N) - momBound/n_N))^n.
// Requires gamma > posBound and d > (n/2)*momBound, else a precondition error
// naming the failing inequality.
CompletenessBreakdown completeness_bound(const ProtocolParams &params);

// Same under per-mode Gaussian noise (x, y); both bounds pick up their noise
// factors and the second exponent is squared:
//   exp(-(gamma - posBound(x))^2)^(theta*n) + exp(-(2d/(n*n_N) - momBound(y)/n_N)^2)^n.
CompletenessBreakdown completeness_bound_agwn(const ProtocolParams &params, double x, double y);

// Raw inputs of the secrecy formula, decoupled from ProtocolParams so that
// asymptotically large sessions can be evaluated without materializing a code.
struct SecrecyInputs {
    double n = 0;
    double a = 0;
    double b = 0;
    double delta = 0;
    double M = 0;
    double n_M = 0;
    double epsilon = 0;
    double N = 0;
    double n_N = 0;
    double theta = 0;
    double gamma = 0;
    double eta = 0;
    double tau = 0;
    double syndrome_len = 0;  // s
    double key_len = 0;       // l
};

SecrecyInputs secrecy_inputs(const ProtocolParams &params);

struct SecrecyBreakdown {
    double bracket = 0;  // per-mode exponent; negative iff the head term shrinks with n
    double head = 0;     // 2^((n/4) * bracket)
    double tail = 0;     // 4 * exp(-tau^2 * theta * n)
    double epsilon = 0;  // head + tail
};

// Distance from a uniform independent key:
//   2^((n/4)[(1-gamma-tau) lg(1/2+sqrt(delta*epsilon)) + h(gamma+tau) + theta*n_M
//   + 2s/n + eta*n_N - lg(1-posTrunc) - lg(1-momTrunc) + 2(l-2)/n + 1/(ln2 n)])
//   + 4 exp(-tau^2 theta n),
// where posTrunc = e^(-2a(M delta)^2)/sqrt(2 pi a (M delta)^2) and
// momTrunc = sqrt((a+b)/(pi^3 (N epsilon)^2)) e^(-2 pi^2 (N epsilon)^2/(a+b)).
// A truncation term reaching 1 makes the bracket undefined -> precondition error.
SecrecyBreakdown secrecy_epsilon_detail(const SecrecyInputs &in);
double secrecy_epsilon(const ProtocolParams &params);

struct WilsonInterval {
    double rate = 0;
    double low = 0;
    double high = 0;
};

// 99% Wilson score interval (z pinned in the implementation).
WilsonInterval wilson_interval(long successes, long trials);

struct MonteCarloSummary {
    long trials = 0;
    long aborts = 0;
    long accepted = 0;
    long key_mismatches = 0;       // accepted sessions with differing keys
    WilsonInterval abort_rate;
    WilsonInterval key_mismatch_rate;  // over accepted sessions
    double mean_pe_mismatches = 0;
    double mean_corrected_distance = 0;
    double mean_resamples = 0;
};

// Repeats run_session over per-trial derived seeds and aggregates; the trial
// order never affects the result.
MonteCarloSummary monte_carlo(const ProtocolParams &params, const ChannelModel &channel,
                              long trials, uint64_t seed);

}  // namespace cosetqkd::protocol
