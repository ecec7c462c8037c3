#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetqkd/bits.hpp"

namespace cosetqkd::coding {

// Bin layout for one quadrature: 2*count half-open bins of the given width,
// indices -count .. count-1 after clamping, encoded in n_bits Gray bits.
struct BinConfig {
    double width = 0;
    long count = 0;
    int n_bits = 0;
};

BinConfig make_bin_config(double width, int n_bits);
void validate(const BinConfig &cfg);

long bin_index(double x, double width);

uint32_t gray_encode_int(uint32_t k);
uint32_t gray_decode_int(uint32_t g);
BitVec gray_encode(uint32_t k, int bits);  // MSB-first bit string
uint32_t gray_decode(const BitVec &bits);

// Gray encoding of bin_index(x)+count; nullopt when x is outside
// [-count*width, count*width). The top half-bin [(count-1/2)w, count*w) is
// clamped to index count-1 so every in-range x fits in n_bits.
std::optional<BitVec> signed_bin_bits(double x, const BinConfig &cfg);
long signed_bits_to_index(const BitVec &bits, const BinConfig &cfg);  // back to bin index in [-count, count)

struct LinearCode {
    int n = 0;
    int k = 0;
    std::vector<BitVec> parity;  // n-k rows of n bits
    std::optional<int> d;        // brute-forced for n <= 24, else declared
    std::string spec;            // human-readable construction tag
};

// spec strings: "hamming:7:4", "random:<n>:<k>:<seed>[:d=<declared>]", "repetition:<n>"
LinearCode make_code(const std::string &spec);
LinearCode make_hamming74();
LinearCode make_repetition(int n);
LinearCode make_random_code(int n, int k, uint64_t seed, std::optional<int> declared_d = {});

BitVec syndrome(const LinearCode &code, const BitVec &word);

// Certified lower bound on the minimum distance from parity-column structure:
// 3 if all columns are distinct and nonzero, 2 if merely nonzero, else 1.
int column_distance_bound(const LinearCode &code);

// Coset-leader table for all 2^(n-k) syndromes; requires n-k <= 20. Leaders are
// minimum weight, ties broken by lexicographic minimality of the pattern.
struct SyndromeTable {
    std::vector<std::array<uint64_t, 2>> leaders;  // packed patterns, n <= 128
    int n = 0;
};
SyndromeTable build_syndrome_table(const LinearCode &code);

BitVec decode_with_syndrome(const LinearCode &code, const SyndromeTable &table, const BitVec &word,
                            const BitVec &target_syndrome);

int gv_syndrome_len(long block, double gamma);

struct ToeplitzHash {
    int in_len = 0;
    int out_len = 0;
    BitVec diag;  // in_len + out_len - 1 seed bits
};

// T[i][j] = diag[i - j + in_len - 1]; row 0 reads diag[in_len-1] down to diag[0].
BitVec toeplitz_apply(const ToeplitzHash &h, const BitVec &input);

// Exhaustive max collision probability over all seeds and input pairs.
double universality_check(int in_len, int out_len);

}  // namespace cosetqkd::coding
