#include "cosetqkd/bits.hpp"

#include <bit>

#include "cosetqkd/errors.hpp"

namespace cosetqkd {

void BitVec::clear_tail() {
    size_t rem = n_ & 63;
    if (rem != 0 && !w_.empty()) {
        w_.back() &= (~0ull) >> (64 - rem);
    }
}

BitVec BitVec::from_string(const std::string &bits) {
    BitVec v(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        require_valid(bits[i] == '0' || bits[i] == '1', "BitVec: bit string must be 0/1");
        v.set(i, bits[i] == '1');
    }
    return v;
}

BitVec BitVec::from_uint(uint64_t value, size_t n) {
    require_valid(n <= 64, "BitVec::from_uint: width must be <= 64");
    require_valid(n == 64 || value < (1ull << n), "BitVec::from_uint: value does not fit");
    BitVec v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, (value >> (n - 1 - i)) & 1);
    }
    return v;
}

void BitVec::set(size_t i, bool v) {
    if (v) {
        w_[i >> 6] |= 1ull << (i & 63);
    } else {
        w_[i >> 6] &= ~(1ull << (i & 63));
    }
}

BitVec &BitVec::operator^=(const BitVec &other) {
    require_valid(n_ == other.n_, "BitVec xor: length mismatch");
    for (size_t i = 0; i < w_.size(); i++) {
        w_[i] ^= other.w_[i];
    }
    return *this;
}

bool BitVec::lex_less(const BitVec &other) const {
    require_valid(n_ == other.n_, "BitVec lex_less: length mismatch");
    for (size_t i = 0; i < w_.size(); i++) {
        uint64_t diff = w_[i] ^ other.w_[i];
        if (diff != 0) {
            // Lowest differing bit index decides (bit 0 is most significant here).
            uint64_t first = diff & (~diff + 1);
            return (other.w_[i] & first) != 0;
        }
    }
    return false;
}

size_t BitVec::weight() const {
    size_t c = 0;
    for (uint64_t x : w_) {
        c += static_cast<size_t>(std::popcount(x));
    }
    return c;
}

bool BitVec::any() const {
    for (uint64_t x : w_) {
        if (x != 0) {
            return true;
        }
    }
    return false;
}

size_t BitVec::hamming(const BitVec &other) const {
    require_valid(n_ == other.n_, "BitVec hamming: length mismatch");
    size_t c = 0;
    for (size_t i = 0; i < w_.size(); i++) {
        c += static_cast<size_t>(std::popcount(w_[i] ^ other.w_[i]));
    }
    return c;
}

uint64_t BitVec::to_uint() const {
    require_valid(n_ <= 64, "BitVec::to_uint: width must be <= 64");
    uint64_t v = 0;
    for (size_t i = 0; i < n_; i++) {
        v = (v << 1) | static_cast<uint64_t>(get(i));
    }
    return v;
}

BitVec BitVec::slice(size_t begin, size_t len) const {
    require_valid(begin + len <= n_, "BitVec::slice: out of range");
    BitVec v(len);
    for (size_t i = 0; i < len; i++) {
        v.set(i, get(begin + i));
    }
    return v;
}

void BitVec::append(const BitVec &other) {
    size_t old = n_;
    n_ += other.n_;
    w_.resize((n_ + 63) / 64, 0);
    for (size_t i = 0; i < other.n_; i++) {
        set(old + i, other.get(i));
    }
}

std::string BitVec::to_string() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

std::vector<uint8_t> BitVec::to_bytes() const {
    std::vector<uint8_t> out((n_ + 7) / 8, 0);
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) {
            out[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
        }
    }
    return out;
}

BitVec BitVec::from_bytes(const std::vector<uint8_t> &bytes, size_t n) {
    require_valid(bytes.size() == (n + 7) / 8, "BitVec::from_bytes: size mismatch");
    BitVec v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, (bytes[i >> 3] >> (i & 7)) & 1);
    }
    return v;
}

std::string BitVec::to_hex() const {
    return bytes_to_hex(to_bytes());
}

BitVec BitVec::from_hex(const std::string &hex, size_t n) {
    return from_bytes(hex_to_bytes(hex), n);
}

bool BitVec::dot(const BitVec &other) const {
    require_valid(n_ == other.n_, "BitVec dot: length mismatch");
    uint64_t acc = 0;
    for (size_t i = 0; i < w_.size(); i++) {
        acc ^= w_[i] & other.w_[i];
    }
    return std::popcount(acc) & 1;
}

std::string bytes_to_hex(const std::vector<uint8_t> &bytes) {
    static const char *digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

std::vector<uint8_t> hex_to_bytes(const std::string &hex) {
    require_valid(hex.size() % 2 == 0, "hex: length must be even");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw validation_error("hex: invalid digit");
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); i++) {
        out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return out;
}

}  // namespace cosetqkd
