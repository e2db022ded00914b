#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmx {

// One symbol per entry, values 0/1.
using BitVec = std::vector<std::uint8_t>;

inline void xor_inplace(BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_inplace: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

inline BitVec xor_bits(BitVec a, const BitVec& b) {
    xor_inplace(a, b);
    return a;
}

inline int weight(const BitVec& v) {
    int w = 0;
    for (auto b : v) w += b;
    return w;
}

inline bool lex_less(const BitVec& a, const BitVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::string to_binary_string(const BitVec& v) {
    std::string s;
    s.reserve(v.size());
    for (auto b : v) s.push_back(b ? '1' : '0');
    return s;
}

// Accepts "0101", "0b0101" or "0x1f" (hex, MSB-first per nibble).
// expected_len trims up to three leading zero bits of a hex string whose
// nibble padding overshoots; pass 0 to keep the literal length.
inline BitVec parse_bits(const std::string& text, std::size_t expected_len = 0) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    BitVec out;
    auto is_hex = t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X');
    auto is_bin_prefixed = t.size() > 2 && t[0] == '0' && (t[1] == 'b' || t[1] == 'B');
    if (is_hex) {
        for (std::size_t i = 2; i < t.size(); ++i) {
            int v;
            char c = t[i];
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = 10 + c - 'a';
            else if (c >= 'A' && c <= 'F') v = 10 + c - 'A';
            else throw std::invalid_argument("parse_bits: bad hex digit");
            for (int k = 3; k >= 0; --k) out.push_back(static_cast<std::uint8_t>((v >> k) & 1));
        }
        if (expected_len != 0 && out.size() > expected_len && out.size() - expected_len < 4) {
            for (std::size_t i = 0; i < out.size() - expected_len; ++i)
                if (out[i] != 0) throw std::invalid_argument("parse_bits: nonzero bits beyond expected length");
            out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(out.size() - expected_len));
        }
    } else {
        std::size_t start = is_bin_prefixed ? 2 : 0;
        for (std::size_t i = start; i < t.size(); ++i) {
            if (t[i] == '0') out.push_back(0);
            else if (t[i] == '1') out.push_back(1);
            else throw std::invalid_argument("parse_bits: bad binary digit");
        }
    }
    return out;
}

}  // namespace rmx
