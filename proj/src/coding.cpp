#include "cosetqkd/coding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cosetqkd/bounds.hpp"
#include "cosetqkd/errors.hpp"
#include "cosetqkd/rng.hpp"

namespace cosetqkd::coding {

BinConfig make_bin_config(double width, int n_bits) {
    BinConfig cfg;
    cfg.width = width;
    cfg.n_bits = n_bits;
    require_valid(n_bits >= 1 && n_bits <= 31, "BinConfig: n_bits must lie in [1,31]");
    cfg.count = 1l << (n_bits - 1);
    validate(cfg);
    return cfg;
}

void validate(const BinConfig &cfg) {
    require_valid(cfg.width > 0, "BinConfig: width must be positive");
    require_valid(cfg.n_bits >= 1 && cfg.n_bits <= 31, "BinConfig: n_bits must lie in [1,31]");
    require_valid(cfg.count == (1l << (cfg.n_bits - 1)), "BinConfig: count must equal 2^(n_bits-1)");
}

long bin_index(double x, double width) {
    require_valid(width > 0, "bin_index: width must be positive");
    return static_cast<long>(std::floor(x / width + 0.5));
}

uint32_t gray_encode_int(uint32_t k) {
    return k ^ (k >> 1);
}

uint32_t gray_decode_int(uint32_t g) {
    uint32_t k = g;
    for (uint32_t shift = 1; shift < 32; shift <<= 1) {
        k ^= k >> shift;
    }
    return k;
}

BitVec gray_encode(uint32_t k, int bits) {
    require_valid(bits >= 1 && bits <= 31, "gray_encode: bits must lie in [1,31]");
    require_valid(k < (1u << bits), "gray_encode: value out of range");
    return BitVec::from_uint(gray_encode_int(k), static_cast<size_t>(bits));
}

uint32_t gray_decode(const BitVec &bits) {
    require_valid(bits.size() >= 1 && bits.size() <= 31, "gray_decode: width must lie in [1,31]");
    return gray_decode_int(static_cast<uint32_t>(bits.to_uint()));
}

std::optional<BitVec> signed_bin_bits(double x, const BinConfig &cfg) {
    validate(cfg);
    double lim = static_cast<double>(cfg.count) * cfg.width;
    if (!(x >= -lim && x < lim)) {
        return std::nullopt;
    }
    long m = std::clamp(bin_index(x, cfg.width), -cfg.count, cfg.count - 1);
    return gray_encode(static_cast<uint32_t>(m + cfg.count), cfg.n_bits);
}

long signed_bits_to_index(const BitVec &bits, const BinConfig &cfg) {
    validate(cfg);
    require_valid(bits.size() == static_cast<size_t>(cfg.n_bits), "signed_bits_to_index: width mismatch");
    return static_cast<long>(gray_decode(bits)) - cfg.count;
}

namespace {

int brute_force_distance(const LinearCode &code) {
    // Minimum weight over nonzero codewords; enumerate the null space of the
    // parity matrix from a basis.
    std::vector<BitVec> rows = code.parity;
    int n = code.n;
    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < n && rank < static_cast<int>(rows.size()); col++) {
        int sel = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); r++) {
            if (rows[r].get(col)) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        std::swap(rows[rank], rows[sel]);
        for (int r = 0; r < static_cast<int>(rows.size()); r++) {
            if (r != rank && rows[r].get(col)) {
                rows[r] ^= rows[rank];
            }
        }
        pivot_col.push_back(col);
        rank++;
    }
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; c++) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }
    // Basis vector per free column: free col = 1, pivots solved from rows.
    std::vector<BitVec> basis;
    for (int fc : free_cols) {
        BitVec v(n);
        v.set(fc, true);
        for (int r = 0; r < rank; r++) {
            if (rows[r].get(fc)) {
                v.set(pivot_col[r], true);
            }
        }
        basis.push_back(v);
    }
    size_t k = basis.size();
    int best = code.n + 1;
    for (uint64_t mask = 1; mask < (1ull << k); mask++) {
        BitVec w(n);
        for (size_t i = 0; i < k; i++) {
            if ((mask >> i) & 1) w ^= basis[i];
        }
        best = std::min(best, static_cast<int>(w.weight()));
    }
    return best;
}

void finalize_code(LinearCode &code, std::optional<int> declared_d) {
    if (code.n <= 24) {
        code.d = brute_force_distance(code);
    } else {
        code.d = declared_d;
    }
}

int parity_rank(const std::vector<BitVec> &parity) {
    std::vector<BitVec> rows = parity;
    int rank = 0;
    size_t n = rows.empty() ? 0 : rows[0].size();
    for (size_t col = 0; col < n && rank < static_cast<int>(rows.size()); col++) {
        int sel = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); r++) {
            if (rows[r].get(col)) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        std::swap(rows[rank], rows[sel]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); r++) {
            if (rows[r].get(col)) rows[r] ^= rows[rank];
        }
        rank++;
    }
    return rank;
}

}  // namespace

LinearCode make_hamming74() {
    LinearCode code;
    code.n = 7;
    code.k = 4;
    code.spec = "hamming:7:4";
    // Columns are 1..7 in binary; column j equals the syndrome of a flip at j.
    code.parity = {
        BitVec::from_string("1010101"),
        BitVec::from_string("0110011"),
        BitVec::from_string("0001111"),
    };
    finalize_code(code, {});
    return code;
}

LinearCode make_repetition(int n) {
    require_valid(n >= 1, "repetition code: n must be positive");
    LinearCode code;
    code.n = n;
    code.k = 1;
    code.spec = "repetition:" + std::to_string(n);
    for (int r = 0; r + 1 < n; r++) {
        BitVec row(n);
        row.set(r, true);
        row.set(r + 1, true);
        code.parity.push_back(row);
    }
    if (n <= 24) {
        code.d = n;
    } else {
        code.d = n;  // exact by construction
    }
    return code;
}

LinearCode make_random_code(int n, int k, uint64_t seed, std::optional<int> declared_d) {
    require_valid(0 < k && k < n, "random code: need 0 < k < n");
    int s = n - k;
    for (int attempt = 0; attempt < 100; attempt++) {
        Rng rng(derive_seed(seed, 0xC0DEu, static_cast<uint64_t>(attempt)));
        std::vector<BitVec> parity;
        for (int r = 0; r < s; r++) {
            BitVec row(n);
            for (int c = 0; c < n; c++) {
                row.set(c, rng.uniform_below(2) == 1);
            }
            parity.push_back(row);
        }
        if (parity_rank(parity) == s) {
            LinearCode code;
            code.n = n;
            code.k = k;
            code.parity = std::move(parity);
            code.spec = "random:" + std::to_string(n) + ":" + std::to_string(k) + ":" + std::to_string(seed);
            finalize_code(code, declared_d);
            if (n > 24 && declared_d) {
                code.spec += ":d=" + std::to_string(*declared_d);
            }
            return code;
        }
    }
    throw validation_error("random code: rank-deficient after 100 draws");
}

LinearCode make_code(const std::string &spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    require_valid(!parts.empty(), "make_code: empty spec");
    try {
        if (parts[0] == "hamming") {
            require_valid(parts.size() == 3 && parts[1] == "7" && parts[2] == "4",
                          "make_code: only hamming:7:4 is supported");
            return make_hamming74();
        }
        if (parts[0] == "repetition") {
            require_valid(parts.size() == 2, "make_code: repetition:<n>");
            return make_repetition(std::stoi(parts[1]));
        }
        if (parts[0] == "random") {
            require_valid(parts.size() == 4 || parts.size() == 5,
                          "make_code: random:<n>:<k>:<seed>[:d=<declared>]");
            std::optional<int> dd;
            if (parts.size() == 5) {
                require_valid(parts[4].rfind("d=", 0) == 0, "make_code: trailing field must be d=<value>");
                dd = std::stoi(parts[4].substr(2));
            }
            return make_random_code(std::stoi(parts[1]), std::stoi(parts[2]),
                                    std::stoull(parts[3]), dd);
        }
    } catch (const std::invalid_argument &) {
        throw validation_error("make_code: malformed numeric field in '" + spec + "'");
    } catch (const std::out_of_range &) {
        throw validation_error("make_code: numeric field out of range in '" + spec + "'");
    }
    throw validation_error("make_code: unknown code family '" + parts[0] + "'");
}

BitVec syndrome(const LinearCode &code, const BitVec &word) {
    require_valid(word.size() == static_cast<size_t>(code.n), "syndrome: word length mismatch");
    BitVec s(code.parity.size());
    for (size_t r = 0; r < code.parity.size(); r++) {
        s.set(r, code.parity[r].dot(word));
    }
    return s;
}

int column_distance_bound(const LinearCode &code) {
    int s = code.n - code.k;
    require_valid(s <= 62, "column_distance_bound: syndrome too wide");
    std::vector<uint64_t> cols(code.n, 0);
    for (int c = 0; c < code.n; c++) {
        for (int r = 0; r < s; r++) {
            cols[c] |= static_cast<uint64_t>(code.parity[r].get(c)) << r;
        }
    }
    bool nonzero = std::all_of(cols.begin(), cols.end(), [](uint64_t c) { return c != 0; });
    if (!nonzero) return 1;
    std::sort(cols.begin(), cols.end());
    bool distinct = std::adjacent_find(cols.begin(), cols.end()) == cols.end();
    return distinct ? 3 : 2;
}

SyndromeTable build_syndrome_table(const LinearCode &code) {
    int s = code.n - code.k;
    require_valid(s <= 20, "syndrome table: n-k must be <= 20");
    require_valid(code.n <= 128, "syndrome table: block length must be <= 128");
    size_t total = 1ull << s;

    // Column syndromes as packed integers for fast pattern accumulation.
    std::vector<uint32_t> col_syn(code.n, 0);
    for (int c = 0; c < code.n; c++) {
        for (int r = 0; r < s; r++) {
            col_syn[c] |= static_cast<uint32_t>(code.parity[r].get(c)) << r;
        }
    }

    SyndromeTable table;
    table.n = code.n;
    table.leaders.assign(total, {~0ull, ~0ull});
    std::vector<bool> filled(total, false);
    size_t remaining = total;
    filled[0] = true;
    table.leaders[0] = {0, 0};
    remaining--;

    // Enumerate error patterns in (weight, lexicographic) order; the first
    // pattern reaching a syndrome is its minimum-weight, lex-least leader.
    std::vector<int> pos;
    const size_t pattern_cap = 40'000'000;
    size_t visited = 0;
    for (int w = 1; w <= code.n && remaining > 0; w++) {
        pos.assign(w, 0);
        for (int i = 0; i < w; i++) pos[i] = i;
        while (true) {
            uint32_t syn = 0;
            std::array<uint64_t, 2> words = {0, 0};
            for (int i = 0; i < w; i++) {
                syn ^= col_syn[pos[i]];
                words[pos[i] >> 6] |= 1ull << (pos[i] & 63);
            }
            if (!filled[syn]) {
                filled[syn] = true;
                table.leaders[syn] = words;
                if (--remaining == 0) break;
            }
            if (++visited > pattern_cap) {
                throw validation_error("syndrome table: coset-leader search exceeded pattern cap");
            }
            // next combination
            int i = w - 1;
            while (i >= 0 && pos[i] == code.n - w + i) i--;
            if (i < 0) break;
            pos[i]++;
            for (int j = i + 1; j < w; j++) pos[j] = pos[j - 1] + 1;
        }
    }
    require_valid(remaining == 0, "syndrome table: some syndromes unreachable (parity not full rank?)");
    return table;
}

BitVec decode_with_syndrome(const LinearCode &code, const SyndromeTable &table, const BitVec &word,
                            const BitVec &target_syndrome) {
    require_valid(table.n == code.n, "decode: table/code mismatch");
    require_valid(word.size() == static_cast<size_t>(code.n), "decode: word length mismatch");
    require_valid(target_syndrome.size() == code.parity.size(), "decode: syndrome length mismatch");
    BitVec diff = syndrome(code, word);
    diff ^= target_syndrome;
    // Table indexing places syndrome bit r at integer bit r, matching build.
    uint32_t key = 0;
    for (size_t r = 0; r < diff.size(); r++) {
        key |= static_cast<uint32_t>(diff.get(r)) << r;
    }
    const auto &leader = table.leaders[key];
    BitVec out = word;
    for (int i = 0; i < code.n; i++) {
        if ((leader[i >> 6] >> (i & 63)) & 1) {
            out.set(i, !out.get(i));
        }
    }
    return out;
}

int gv_syndrome_len(long block, double gamma) {
    require_valid(block >= 0, "gv_syndrome_len: block must be nonnegative");
    require_valid(gamma >= 0 && gamma <= 0.5, "gv_syndrome_len: gamma must lie in [0, 1/2]");
    return static_cast<int>(std::ceil(static_cast<double>(block) * bounds::binary_entropy(gamma)));
}

BitVec toeplitz_apply(const ToeplitzHash &h, const BitVec &input) {
    require_valid(h.out_len >= 1 && h.out_len <= h.in_len, "toeplitz: need 1 <= outLen <= inLen");
    require_valid(h.diag.size() == static_cast<size_t>(h.in_len + h.out_len - 1),
                  "toeplitz: seed length must be inLen+outLen-1");
    require_valid(input.size() == static_cast<size_t>(h.in_len), "toeplitz: input length mismatch");
    BitVec out(h.out_len);
    for (int i = 0; i < h.out_len; i++) {
        bool acc = false;
        for (int j = 0; j < h.in_len; j++) {
            if (input.get(j) && h.diag.get(static_cast<size_t>(i - j + h.in_len - 1))) {
                acc = !acc;
            }
        }
        out.set(i, acc);
    }
    return out;
}

double universality_check(int in_len, int out_len) {
    require_valid(in_len >= 1 && in_len <= 6, "universality_check: inLen must be <= 6");
    require_valid(out_len >= 1 && out_len <= 3 && out_len <= in_len,
                  "universality_check: outLen must be <= 3 and <= inLen");
    int seed_bits = in_len + out_len - 1;
    uint64_t n_seeds = 1ull << seed_bits;
    uint64_t n_inputs = 1ull << in_len;
    double worst = 0;
    for (uint64_t xa = 0; xa < n_inputs; xa++) {
        for (uint64_t xb = xa + 1; xb < n_inputs; xb++) {
            uint64_t collisions = 0;
            for (uint64_t sd = 0; sd < n_seeds; sd++) {
                ToeplitzHash h{in_len, out_len, BitVec::from_uint(sd, static_cast<size_t>(seed_bits))};
                BitVec ya = toeplitz_apply(h, BitVec::from_uint(xa, static_cast<size_t>(in_len)));
                BitVec yb = toeplitz_apply(h, BitVec::from_uint(xb, static_cast<size_t>(in_len)));
                if (ya == yb) collisions++;
            }
            worst = std::max(worst, static_cast<double>(collisions) / static_cast<double>(n_seeds));
        }
    }
    return worst;
}

}  // namespace cosetqkd::coding
