#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cosetqkd {

// Fixed-length bit string over GF(2), packed into 64-bit words.
// Bit 0 is the leftmost position for display and lexicographic order;
// to_uint()/from_uint() treat bit 0 as the most significant bit.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVec from_string(const std::string &bits);   // e.g. "0110"
    static BitVec from_uint(uint64_t value, size_t n);    // MSB-first
    static BitVec from_hex(const std::string &hex, size_t n);

    size_t size() const { return n_; }
    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v);

    BitVec &operator^=(const BitVec &other);
    friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
    bool operator==(const BitVec &other) const { return n_ == other.n_ && w_ == other.w_; }
    bool operator!=(const BitVec &other) const { return !(*this == other); }

    // Lexicographic on the bit sequence (position 0 first).
    bool lex_less(const BitVec &other) const;

    size_t weight() const;
    bool any() const;
    size_t hamming(const BitVec &other) const;

    uint64_t to_uint() const;  // requires size() <= 64
    BitVec slice(size_t begin, size_t len) const;
    void append(const BitVec &other);

    std::string to_string() const;
    // Byte packing for hex: bit i lives in byte i/8 at bit position i%8.
    std::vector<uint8_t> to_bytes() const;
    static BitVec from_bytes(const std::vector<uint8_t> &bytes, size_t n);
    std::string to_hex() const;

    // Parity of the AND with another vector of equal length (GF(2) dot product).
    bool dot(const BitVec &other) const;

  private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
    void clear_tail();
};

std::string bytes_to_hex(const std::vector<uint8_t> &bytes);
std::vector<uint8_t> hex_to_bytes(const std::string &hex);

}  // namespace cosetqkd
