#include "cosetqkd/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "json.hpp"

#include "cosetqkd/bounds.hpp"
#include "cosetqkd/errors.hpp"
#include "cosetqkd/rng.hpp"

namespace cosetqkd::protocol {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Seed-derivation tags for the independent substreams of this module.
constexpr uint64_t kTagSubspace = 0x81;
constexpr uint64_t kTagCoset = 0x82;
constexpr uint64_t kTagPeSubset = 0x83;
constexpr uint64_t kTagHomodyne = 0x84;
constexpr uint64_t kTagRecon = 0x85;
constexpr uint64_t kTagHash = 0x86;
constexpr uint64_t kTagTrial = 0x87;

// 99% two-sided normal quantile.
constexpr double kWilsonZ = 2.5758293035489004;

long integral_count(double value, const char *what) {
    double r = std::round(value);
    require_valid(std::abs(value - r) <= 1e-9,
                  std::string("protocol params: ") + what + " must be an integer");
    return static_cast<long>(r);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_u32(std::vector<uint8_t> &out, uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
}

void append_bits(std::vector<uint8_t> &out, const BitVec &bits) {
    append_u32(out, static_cast<uint32_t>(bits.size()));
    for (uint8_t byte : bits.to_bytes()) {
        out.push_back(byte);
    }
}

void append_ints(std::vector<uint8_t> &out, const std::vector<int> &xs) {
    append_u32(out, static_cast<uint32_t>(xs.size()));
    for (int x : xs) {
        append_u32(out, static_cast<uint32_t>(x));
    }
}

struct Cursor {
    const std::vector<uint8_t> &data;
    size_t pos = 0;

    uint32_t read_u32() {
        require_valid(pos + 4 <= data.size(), "message payload: truncated integer");
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(data[pos + i]) << (8 * i);
        }
        pos += 4;
        return v;
    }

    BitVec read_bits() {
        uint32_t n = read_u32();
        size_t bytes = (n + 7) / 8;
        require_valid(pos + bytes <= data.size(), "message payload: truncated bit string");
        std::vector<uint8_t> raw(data.begin() + pos, data.begin() + pos + bytes);
        pos += bytes;
        return BitVec::from_bytes(raw, n);
    }

    std::vector<int> read_ints() {
        uint32_t n = read_u32();
        std::vector<int> xs(n);
        for (uint32_t i = 0; i < n; ++i) {
            xs[i] = static_cast<int>(read_u32());
        }
        return xs;
    }
};

const char *sender_name(Message::Sender s) {
    return s == Message::Sender::alice ? "alice" : "bob";
}

Stage stage_from_name(const std::string &name) {
    for (Stage s : {Stage::state_preparation, Stage::parameter_estimation, Stage::error_correction,
                    Stage::information_reconciliation, Stage::privacy_amplification}) {
        if (name == stage_name(s)) {
            return s;
        }
    }
    throw validation_error("transcript record: unknown stage '" + name + "'");
}

// Coset-leader tables are deterministic per code, so sessions sharing a code
// (every Monte-Carlo trial does) build the table once.
const coding::SyndromeTable &session_table(const coding::LinearCode &code) {
    static std::map<std::string, coding::SyndromeTable> cache;
    std::string key = code.spec;
    key += '#';
    key += std::to_string(code.n);
    key += ':';
    key += std::to_string(code.k);
    for (const auto &row : code.parity) {
        key += '#';
        key += row.to_hex();
    }
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, coding::build_syndrome_table(code)).first;
    }
    return it->second;
}

BitVec random_bits(Rng &rng, size_t len) {
    BitVec out(len);
    for (size_t i = 0; i < len; ++i) {
        out.set(i, (rng.next_u64() >> 63) != 0);
    }
    return out;
}

Message make_ack(Stage stage) {
    Message m;
    m.kind = Message::Kind::ack;
    m.stage = stage;
    m.sender = Message::Sender::bob;
    return m;
}

Message make_abort(Stage stage) {
    Message m;
    m.kind = Message::Kind::abort;
    m.stage = stage;
    m.sender = Message::Sender::bob;
    return m;
}

}  // namespace

void validate(const ProtocolParams &params) {
    require_valid(params.n > 0 && params.n % 2 == 0, "protocol params: mode count must be positive and even");
    require_valid(params.a > 0 && params.b > params.a, "protocol params: need b > a > 0");
    coding::validate(params.pos_bins);
    coding::validate(params.mom_bins);
    require_valid(params.theta > 0 && params.theta <= 1, "protocol params: theta must lie in (0,1]");
    require_valid(params.gamma_tol >= 0 && params.gamma_tol <= 1, "protocol params: gamma must lie in [0,1]");
    require_valid(params.eta > 0 && params.eta <= 1, "protocol params: eta must lie in (0,1]");
    require_valid(params.tau >= 0, "protocol params: tau must be nonnegative");
    long pe = integral_count(params.theta * params.n / 2.0, "theta*n/2");
    require_valid(pe >= 1, "protocol params: theta*n/2 must be at least 1");
    integral_count(params.gamma_tol * static_cast<double>(pe), "gamma*theta*n/2");
    long rec = integral_count(params.eta * params.mom_bins.n_bits * params.n / 2.0, "eta*n_N*n/2");
    require_valid(rec >= 1, "protocol params: eta*n_N*n/2 must be at least 1");
    long block = static_cast<long>(params.n) * params.mom_bins.n_bits / 2;
    require_valid(params.code.n == block, "protocol params: code length must equal n*n_N/2");
    require_valid(params.code.k >= 1 && params.code.k <= params.code.n, "protocol params: code dimension out of range");
    require_valid(static_cast<int>(params.code.parity.size()) == params.code.n - params.code.k,
                  "protocol params: code parity row count must equal n-k");
    require_valid(params.key_len >= 1 && params.key_len <= params.code.k,
                  "protocol params: key length must lie in [1, code dimension]");
}

int pe_count(const ProtocolParams &params) {
    return static_cast<int>(integral_count(params.theta * params.n / 2.0, "theta*n/2"));
}

int pe_tolerance(const ProtocolParams &params) {
    return static_cast<int>(
        integral_count(params.gamma_tol * params.theta * params.n / 2.0, "gamma*theta*n/2"));
}

int reconcile_count(const ProtocolParams &params) {
    return static_cast<int>(
        integral_count(params.eta * params.mom_bins.n_bits * params.n / 2.0, "eta*n_N*n/2"));
}

int block_length(const ProtocolParams &params) {
    return params.n * params.mom_bins.n_bits / 2;
}

ChannelModel ChannelModel::identity() {
    return ChannelModel{};
}

ChannelModel ChannelModel::agwn(gaussian::AgwnParams noise) {
    ChannelModel c;
    c.kind = Kind::agwn;
    c.noise = noise;
    return c;
}

ChannelModel ChannelModel::per_mode(std::vector<gaussian::AgwnParams> mode_noise) {
    ChannelModel c;
    c.kind = Kind::per_mode;
    c.mode_noise = std::move(mode_noise);
    return c;
}

void validate(const ChannelModel &channel, int n) {
    switch (channel.kind) {
        case ChannelModel::Kind::identity:
            break;
        case ChannelModel::Kind::agwn:
            gaussian::validate(channel.noise);
            break;
        case ChannelModel::Kind::per_mode:
            require_valid(static_cast<int>(channel.mode_noise.size()) == n,
                          "channel model: per-mode noise list must have one entry per mode");
            for (const auto &noise : channel.mode_noise) {
                gaussian::validate(noise);
            }
            break;
    }
}

gaussian::AgwnParams channel_noise(const ChannelModel &channel, int mode) {
    switch (channel.kind) {
        case ChannelModel::Kind::identity:
            return gaussian::AgwnParams{0, 0};
        case ChannelModel::Kind::agwn:
            return channel.noise;
        case ChannelModel::Kind::per_mode:
            require_valid(mode >= 0 && mode < static_cast<int>(channel.mode_noise.size()),
                          "channel model: mode index out of range");
            return channel.mode_noise[mode];
    }
    throw validation_error("channel model: unknown kind");
}

std::string to_string(const ChannelModel &channel) {
    switch (channel.kind) {
        case ChannelModel::Kind::identity:
            return "identity";
        case ChannelModel::Kind::agwn:
            return "agwn:x=" + fmt_double(channel.noise.x) + ",y=" + fmt_double(channel.noise.y);
        case ChannelModel::Kind::per_mode: {
            std::string out = "permode:";
            for (size_t i = 0; i < channel.mode_noise.size(); ++i) {
                if (i) {
                    out += ';';
                }
                out += fmt_double(channel.mode_noise[i].x) + "," + fmt_double(channel.mode_noise[i].y);
            }
            return out;
        }
    }
    throw validation_error("channel model: unknown kind");
}

ChannelModel parse_channel(const std::string &text) {
    auto parse_num = [](const std::string &s, const char *what) {
        try {
            size_t used = 0;
            double v = std::stod(s, &used);
            require_valid(used == s.size(), std::string("channel spec: trailing characters in ") + what);
            return v;
        } catch (const std::logic_error &) {
            throw validation_error(std::string("channel spec: cannot parse ") + what + " '" + s + "'");
        }
    };
    if (text == "identity") {
        return ChannelModel::identity();
    }
    if (text.rfind("agwn:", 0) == 0) {
        std::string body = text.substr(5);
        size_t comma = body.find(',');
        require_valid(comma != std::string::npos && body.rfind("x=", 0) == 0 &&
                          body.compare(comma + 1, 2, "y=") == 0,
                      "channel spec: expected agwn:x=<v>,y=<v>");
        gaussian::AgwnParams noise;
        noise.x = parse_num(body.substr(2, comma - 2), "x");
        noise.y = parse_num(body.substr(comma + 3), "y");
        gaussian::validate(noise);
        return ChannelModel::agwn(noise);
    }
    if (text.rfind("permode:", 0) == 0) {
        std::string body = text.substr(8);
        std::vector<gaussian::AgwnParams> list;
        size_t pos = 0;
        while (pos <= body.size()) {
            size_t semi = body.find(';', pos);
            std::string pair = body.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
            size_t comma = pair.find(',');
            require_valid(comma != std::string::npos, "channel spec: expected permode:<x>,<y>;...");
            gaussian::AgwnParams noise;
            noise.x = parse_num(pair.substr(0, comma), "x");
            noise.y = parse_num(pair.substr(comma + 1), "y");
            gaussian::validate(noise);
            list.push_back(noise);
            if (semi == std::string::npos) {
                break;
            }
            pos = semi + 1;
        }
        return ChannelModel::per_mode(std::move(list));
    }
    throw validation_error("channel spec: expected identity, agwn:... or permode:...");
}

const char *stage_name(Stage stage) {
    switch (stage) {
        case Stage::state_preparation:
            return "state-preparation";
        case Stage::parameter_estimation:
            return "parameter-estimation";
        case Stage::error_correction:
            return "error-correction";
        case Stage::information_reconciliation:
            return "information-reconciliation";
        case Stage::privacy_amplification:
            return "privacy-amplification";
    }
    return "unknown";
}

bool Message::operator==(const Message &other) const {
    return kind == other.kind && stage == other.stage && sender == other.sender &&
           subspace_mask == other.subspace_mask && subset == other.subset && bits == other.bits;
}

std::vector<uint8_t> encode_message(const Message &msg) {
    std::vector<uint8_t> out{static_cast<uint8_t>(msg.kind)};
    switch (msg.kind) {
        case Message::Kind::ack:
        case Message::Kind::abort:
            break;
        case Message::Kind::basis_and_pe:
            append_bits(out, msg.subspace_mask);
            append_ints(out, msg.subset);
            append_bits(out, msg.bits);
            break;
        case Message::Kind::syndrome:
        case Message::Kind::hash_seed:
            append_bits(out, msg.bits);
            break;
        case Message::Kind::reconcile:
            append_ints(out, msg.subset);
            append_bits(out, msg.bits);
            break;
    }
    return out;
}

Message decode_message(Stage stage, Message::Sender sender, const std::vector<uint8_t> &payload) {
    require_valid(!payload.empty(), "message payload: missing kind byte");
    require_valid(payload[0] <= static_cast<uint8_t>(Message::Kind::abort),
                  "message payload: unknown kind byte");
    Message msg;
    msg.kind = static_cast<Message::Kind>(payload[0]);
    msg.stage = stage;
    msg.sender = sender;
    Cursor cur{payload, 1};
    switch (msg.kind) {
        case Message::Kind::ack:
        case Message::Kind::abort:
            break;
        case Message::Kind::basis_and_pe:
            msg.subspace_mask = cur.read_bits();
            msg.subset = cur.read_ints();
            msg.bits = cur.read_bits();
            break;
        case Message::Kind::syndrome:
        case Message::Kind::hash_seed:
            msg.bits = cur.read_bits();
            break;
        case Message::Kind::reconcile:
            msg.subset = cur.read_ints();
            msg.bits = cur.read_bits();
            break;
    }
    require_valid(cur.pos == payload.size(), "message payload: trailing bytes");
    return msg;
}

std::string message_to_json(const Message &msg) {
    std::string out = "{\"stage\":\"";
    out += stage_name(msg.stage);
    out += "\",\"sender\":\"";
    out += sender_name(msg.sender);
    out += "\",\"payload\":\"";
    out += bytes_to_hex(encode_message(msg));
    out += "\"}";
    return out;
}

Message message_from_json(const std::string &line) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
        throw validation_error(std::string("transcript record: ") + e.what());
    }
    require_valid(rec.is_object() && rec.contains("stage") && rec.contains("sender") && rec.contains("payload"),
                  "transcript record: expected {stage, sender, payload}");
    Stage stage = stage_from_name(rec.at("stage").get<std::string>());
    std::string sender = rec.at("sender").get<std::string>();
    require_valid(sender == "alice" || sender == "bob", "transcript record: unknown sender");
    std::vector<uint8_t> payload = hex_to_bytes(rec.at("payload").get<std::string>());
    return decode_message(stage, sender == "alice" ? Message::Sender::alice : Message::Sender::bob,
                          payload);
}

BitVec binned_with_default(double value, const coding::BinConfig &cfg) {
    auto bits = coding::signed_bin_bits(value, cfg);
    if (!bits) {
        bits = coding::signed_bin_bits(0.0, cfg);
    }
    return *bits;
}

SessionResult run_session(const ProtocolParams &params, const ChannelModel &channel, uint64_t seed) {
    validate(params);
    validate(channel, params.n);

    const int n = params.n;
    const int half = n / 2;
    SessionResult result;

    // State preparation: Alice's subspace split and truncated coset draw, then
    // Bob's homodyne outcome per mode (position off the subspace, momentum on).
    Rng subspace_rng(derive_seed(seed, kTagSubspace));
    gaussian::RegisterSubspace subspace{n, subspace_rng.sample_subset(n, half)};
    const double q_cut = static_cast<double>(params.pos_bins.count) * params.pos_bins.width;
    const double p_cut = static_cast<double>(params.mom_bins.count) * params.mom_bins.width;
    gaussian::CosetParams coset = gaussian::sample_coset_params(subspace, params.a, params.b, q_cut,
                                                                p_cut, derive_seed(seed, kTagCoset));
    result.diagnostics.resamples = coset.rejections;

    std::vector<bool> on_subspace(n, false);
    for (int mode : subspace.modes) {
        on_subspace[mode] = true;
    }
    std::vector<int> position_modes;
    position_modes.reserve(half);
    for (int i = 0; i < n; ++i) {
        if (!on_subspace[i]) {
            position_modes.push_back(i);
        }
    }

    std::vector<double> outcome(n);
    {
        int qi = 0;
        int pi = 0;
        for (int i = 0; i < n; ++i) {
            gaussian::Quadrature kind =
                on_subspace[i] ? gaussian::Quadrature::momentum : gaussian::Quadrature::position;
            double truth = on_subspace[i] ? coset.p(pi++) : coset.q(qi++);
            outcome[i] = gaussian::homodyne_measure(kind, truth, params.a, params.b,
                                                    channel_noise(channel, i),
                                                    derive_seed(seed, kTagHomodyne, i));
        }
    }
    result.transcript.push_back(make_ack(Stage::state_preparation));

    // Parameter estimation: Alice reveals the split and her bins on a random
    // subset of the position modes; Bob counts bin disagreements.
    const int pe_n = pe_count(params);
    Rng pe_rng(derive_seed(seed, kTagPeSubset));
    std::vector<int> pe_picks = pe_rng.sample_subset(half, pe_n);

    Message basis;
    basis.kind = Message::Kind::basis_and_pe;
    basis.stage = Stage::parameter_estimation;
    basis.sender = Message::Sender::alice;
    basis.subspace_mask = BitVec(n);
    for (int mode : subspace.modes) {
        basis.subspace_mask.set(mode, true);
    }
    for (int pick : pe_picks) {
        basis.subset.push_back(position_modes[pick]);
        basis.bits.append(binned_with_default(coset.q(pick), params.pos_bins));
    }
    result.transcript.push_back(basis);

    int mismatches = 0;
    for (int j = 0; j < pe_n; ++j) {
        int mode = basis.subset[j];
        double measured = outcome[mode];
        if (!(measured >= -q_cut && measured < q_cut)) {
            measured = 0.0;
        }
        long bob_bin = coding::signed_bits_to_index(binned_with_default(measured, params.pos_bins),
                                                    params.pos_bins);
        long alice_bin = coding::signed_bits_to_index(
            basis.bits.slice(static_cast<size_t>(j) * params.pos_bins.n_bits, params.pos_bins.n_bits),
            params.pos_bins);
        if (bob_bin != alice_bin) {
            ++mismatches;
        }
    }
    result.diagnostics.pe_mismatches = mismatches;
    if (mismatches > pe_tolerance(params)) {
        result.transcript.push_back(make_abort(Stage::parameter_estimation));
        result.abort_stage = stage_name(Stage::parameter_estimation);
        return result;
    }
    result.transcript.push_back(make_ack(Stage::parameter_estimation));

    // Error correction: Alice's syndrome steers Bob's rescaled momentum bins.
    BitVec alice_word;
    for (int j = 0; j < half; ++j) {
        alice_word.append(binned_with_default(coset.p(j), params.mom_bins));
    }
    Message syn;
    syn.kind = Message::Kind::syndrome;
    syn.stage = Stage::error_correction;
    syn.sender = Message::Sender::alice;
    syn.bits = coding::syndrome(params.code, alice_word);
    result.transcript.push_back(syn);

    BitVec bob_word;
    for (int mode : subspace.modes) {
        double corrected = gaussian::rescale_momentum(outcome[mode], params.a, params.b);
        if (!(corrected >= -p_cut && corrected < p_cut)) {
            corrected = 0.0;
        }
        bob_word.append(binned_with_default(corrected, params.mom_bins));
    }
    BitVec corrected_word =
        coding::decode_with_syndrome(params.code, session_table(params.code), bob_word, syn.bits);
    result.diagnostics.corrected_distance = static_cast<int>(bob_word.hamming(corrected_word));
    result.transcript.push_back(make_ack(Stage::error_correction));

    // Information reconciliation: verbatim comparison on a random bit subset.
    const int rec_n = reconcile_count(params);
    Rng rec_rng(derive_seed(seed, kTagRecon));
    Message rec;
    rec.kind = Message::Kind::reconcile;
    rec.stage = Stage::information_reconciliation;
    rec.sender = Message::Sender::alice;
    rec.subset = rec_rng.sample_subset(block_length(params), rec_n);
    rec.bits = BitVec(rec_n);
    for (int t = 0; t < rec_n; ++t) {
        rec.bits.set(t, alice_word.get(rec.subset[t]));
    }
    result.transcript.push_back(rec);

    bool reconciled = true;
    for (int t = 0; t < rec_n; ++t) {
        if (corrected_word.get(rec.subset[t]) != rec.bits.get(t)) {
            reconciled = false;
            break;
        }
    }
    if (!reconciled) {
        result.transcript.push_back(make_abort(Stage::information_reconciliation));
        result.abort_stage = stage_name(Stage::information_reconciliation);
        return result;
    }
    result.transcript.push_back(make_ack(Stage::information_reconciliation));

    // Privacy amplification: both sides hash with Alice's Toeplitz seed.
    Rng hash_rng(derive_seed(seed, kTagHash));
    coding::ToeplitzHash hash;
    hash.in_len = block_length(params);
    hash.out_len = params.key_len;
    hash.diag = random_bits(hash_rng, static_cast<size_t>(hash.in_len + hash.out_len - 1));
    Message hs;
    hs.kind = Message::Kind::hash_seed;
    hs.stage = Stage::privacy_amplification;
    hs.sender = Message::Sender::alice;
    hs.bits = hash.diag;
    result.transcript.push_back(hs);

    result.accepted = true;
    result.alice_key = coding::toeplitz_apply(hash, alice_word);
    result.bob_key = coding::toeplitz_apply(hash, corrected_word);
    return result;
}

std::string session_to_jsonl(const ProtocolParams &params, const ChannelModel &channel, uint64_t seed) {
    require_valid(!params.code.spec.empty(),
                  "transcript header: code needs a construction spec to be replayable");
    SessionResult result = run_session(params, channel, seed);
    std::string out = "{\"n\":" + std::to_string(params.n);
    out += ",\"a\":" + fmt_double(params.a);
    out += ",\"b\":" + fmt_double(params.b);
    out += ",\"delta\":" + fmt_double(params.pos_bins.width);
    out += ",\"n_M\":" + std::to_string(params.pos_bins.n_bits);
    out += ",\"epsilon\":" + fmt_double(params.mom_bins.width);
    out += ",\"n_N\":" + std::to_string(params.mom_bins.n_bits);
    out += ",\"theta\":" + fmt_double(params.theta);
    out += ",\"gamma_tol\":" + fmt_double(params.gamma_tol);
    out += ",\"eta\":" + fmt_double(params.eta);
    out += ",\"key_len\":" + std::to_string(params.key_len);
    out += ",\"code\":\"" + params.code.spec + "\"";
    out += ",\"tau\":" + fmt_double(params.tau);
    out += ",\"channel\":\"" + to_string(channel) + "\"";
    out += ",\"seed\":" + std::to_string(seed);
    out += "}\n";
    for (const Message &msg : result.transcript) {
        out += message_to_json(msg);
        out += '\n';
    }
    return out;
}

TranscriptHeader parse_transcript_header(const std::string &line) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
        throw validation_error(std::string("transcript header: ") + e.what());
    }
    TranscriptHeader header;
    try {
        header.params.n = rec.at("n").get<int>();
        header.params.a = rec.at("a").get<double>();
        header.params.b = rec.at("b").get<double>();
        header.params.pos_bins =
            coding::make_bin_config(rec.at("delta").get<double>(), rec.at("n_M").get<int>());
        header.params.mom_bins =
            coding::make_bin_config(rec.at("epsilon").get<double>(), rec.at("n_N").get<int>());
        header.params.theta = rec.at("theta").get<double>();
        header.params.gamma_tol = rec.at("gamma_tol").get<double>();
        header.params.eta = rec.at("eta").get<double>();
        header.params.key_len = rec.at("key_len").get<int>();
        header.params.code = coding::make_code(rec.at("code").get<std::string>());
        header.params.tau = rec.at("tau").get<double>();
        header.channel = parse_channel(rec.at("channel").get<std::string>());
        header.seed = rec.at("seed").get<uint64_t>();
    } catch (const nlohmann::json::exception &e) {
        throw validation_error(std::string("transcript header: ") + e.what());
    }
    validate(header.params);
    return header;
}

double correctness_bound(const ProtocolParams &params) {
    require_precondition(params.code.d.has_value(), "correctness bound: code distance unknown");
    double block = static_cast<double>(params.mom_bins.n_bits) * params.n;
    double base = 1.0 - 2.0 * *params.code.d / block;
    if (base <= 0) {
        return 0.0;
    }
    return std::pow(base, params.eta * block / 2.0);
}

namespace {

CompletenessBreakdown completeness_terms(const ProtocolParams &params, double x, double y,
                                         bool square_second) {
    require_precondition(params.code.d.has_value(), "completeness bound: code distance unknown");
    CompletenessBreakdown out;
    out.position_bound =
        gaussian::expected_mismatch_position(params.a, params.b, params.pos_bins.width, x);
    out.momentum_bound =
        gaussian::expected_mismatch_momentum(params.a, params.b, params.mom_bins.width, y);
    require_precondition(params.gamma_tol > out.position_bound,
                         "completeness bound: tolerance gamma must exceed the expected position "
                         "mismatch rate " +
                             fmt_double(out.position_bound));
    double need = params.n / 2.0 * out.momentum_bound;
    require_precondition(*params.code.d > need,
                         "completeness bound: code distance must exceed (n/2) times the expected "
                         "momentum bin distance " +
                             fmt_double(need));
    double gap = params.gamma_tol - out.position_bound;
    out.pe_term = std::exp(-gap * gap * params.theta * params.n);
    double n_N = params.mom_bins.n_bits;
    double arg = 2.0 * *params.code.d / (params.n * n_N) - out.momentum_bound / n_N;
    out.ec_term = std::exp(-(square_second ? arg * arg : arg) * params.n);
    out.total = out.pe_term + out.ec_term;
    return out;
}

}  // namespace

CompletenessBreakdown completeness_bound(const ProtocolParams &params) {
    return completeness_terms(params, 0.0, 0.0, false);
}

CompletenessBreakdown completeness_bound_agwn(const ProtocolParams &params, double x, double y) {
    require_valid(x >= 0 && y >= 0, "completeness bound: noise scales must be nonnegative");
    return completeness_terms(params, x, y, true);
}

SecrecyInputs secrecy_inputs(const ProtocolParams &params) {
    SecrecyInputs in;
    in.n = params.n;
    in.a = params.a;
    in.b = params.b;
    in.delta = params.pos_bins.width;
    in.M = static_cast<double>(params.pos_bins.count);
    in.n_M = params.pos_bins.n_bits;
    in.epsilon = params.mom_bins.width;
    in.N = static_cast<double>(params.mom_bins.count);
    in.n_N = params.mom_bins.n_bits;
    in.theta = params.theta;
    in.gamma = params.gamma_tol;
    in.eta = params.eta;
    in.tau = params.tau;
    in.syndrome_len = static_cast<double>(params.code.n - params.code.k);
    in.key_len = params.key_len;
    return in;
}

SecrecyBreakdown secrecy_epsilon_detail(const SecrecyInputs &in) {
    require_valid(in.n > 0, "secrecy: mode count must be positive");
    require_valid(in.a > 0 && in.b > in.a, "secrecy: need b > a > 0");
    require_valid(in.delta > 0 && in.epsilon > 0 && in.M > 0 && in.N > 0,
                  "secrecy: bin widths and cutoffs must be positive");
    require_valid(in.n_M > 0 && in.n_N > 0, "secrecy: bin bit counts must be positive");
    require_valid(in.theta >= 0 && in.theta <= 1 && in.eta >= 0 && in.eta <= 1,
                  "secrecy: theta and eta must lie in [0,1]");
    require_valid(in.tau > 0, "secrecy: tau must be positive");
    require_valid(in.gamma >= 0 && in.gamma + in.tau <= 1, "secrecy: gamma+tau must lie in [0,1]");
    require_valid(in.syndrome_len >= 0 && in.key_len >= 0, "secrecy: lengths must be nonnegative");

    const double ln2 = std::numbers::ln2;
    double u = in.a * in.M * in.delta * in.M * in.delta;
    double pos_trunc = std::exp(-2.0 * u) / std::sqrt(2.0 * kPi * u);
    double v = in.N * in.epsilon * in.N * in.epsilon;
    double mom_trunc = std::sqrt((in.a + in.b) / (kPi * kPi * kPi * v)) *
                       std::exp(-2.0 * kPi * kPi * v / (in.a + in.b));
    require_precondition(pos_trunc < 1,
                         "secrecy: position truncation term reaches 1; enlarge M*delta");
    require_precondition(mom_trunc < 1,
                         "secrecy: momentum truncation term reaches 1; enlarge N*epsilon");

    SecrecyBreakdown out;
    out.bracket = (1.0 - in.gamma - in.tau) * std::log2(0.5 + std::sqrt(in.delta * in.epsilon)) +
                  bounds::binary_entropy(in.gamma + in.tau) + in.theta * in.n_M +
                  2.0 * in.syndrome_len / in.n + in.eta * in.n_N - std::log1p(-pos_trunc) / ln2 -
                  std::log1p(-mom_trunc) / ln2 + 2.0 * (in.key_len - 2.0) / in.n +
                  1.0 / (ln2 * in.n);
    out.head = std::exp2(in.n / 4.0 * out.bracket);
    out.tail = 4.0 * std::exp(-in.tau * in.tau * in.theta * in.n);
    out.epsilon = out.head + out.tail;
    return out;
}

double secrecy_epsilon(const ProtocolParams &params) {
    return secrecy_epsilon_detail(secrecy_inputs(params)).epsilon;
}

WilsonInterval wilson_interval(long successes, long trials) {
    require_valid(trials >= 0 && successes >= 0 && successes <= trials,
                  "wilson interval: need 0 <= successes <= trials");
    if (trials == 0) {
        return WilsonInterval{0.0, 0.0, 1.0};
    }
    double m = static_cast<double>(trials);
    double p = static_cast<double>(successes) / m;
    double z2 = kWilsonZ * kWilsonZ;
    double denom = 1.0 + z2 / m;
    double center = (p + z2 / (2.0 * m)) / denom;
    double half = kWilsonZ / denom * std::sqrt(p * (1.0 - p) / m + z2 / (4.0 * m * m));
    return WilsonInterval{p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloSummary monte_carlo(const ProtocolParams &params, const ChannelModel &channel,
                              long trials, uint64_t seed) {
    require_valid(trials >= 1, "monte carlo: need at least one trial");
    validate(params);
    validate(channel, params.n);

    MonteCarloSummary summary;
    summary.trials = trials;
    double pe_sum = 0;
    double dist_sum = 0;
    double resample_sum = 0;
    for (long t = 0; t < trials; ++t) {
        SessionResult r = run_session(params, channel, derive_seed(seed, kTagTrial, static_cast<uint64_t>(t)));
        if (r.accepted) {
            ++summary.accepted;
            if (*r.alice_key != *r.bob_key) {
                ++summary.key_mismatches;
            }
        } else {
            ++summary.aborts;
        }
        pe_sum += r.diagnostics.pe_mismatches;
        dist_sum += r.diagnostics.corrected_distance;
        resample_sum += static_cast<double>(r.diagnostics.resamples);
    }
    summary.abort_rate = wilson_interval(summary.aborts, trials);
    summary.key_mismatch_rate = wilson_interval(summary.key_mismatches, summary.accepted);
    summary.mean_pe_mismatches = pe_sum / static_cast<double>(trials);
    summary.mean_corrected_distance = dist_sum / static_cast<double>(trials);
    summary.mean_resamples = resample_sum / static_cast<double>(trials);
    return summary;
}

}  // namespace cosetqkd::protocol
