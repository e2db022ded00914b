// Test-side reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rmx/bits.hpp"
#include "rmx/channel.hpp"
#include "rmx/decoder.hpp"

namespace testo {

// Codebook of RM(m, r) straight from the monomial generator matrix:
// rows evaluate all monomials of degree <= r over the m-cube. Returned as a
// set of codeword strings for membership/equality checks; feasible for
// k <= ~16.
inline std::set<std::string> rm_generator_codebook(int m, int r) {
    const int n = 1 << m;
    std::vector<std::vector<std::uint8_t>> rows;
    for (int mask = 0; mask < n; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > r) continue;
        std::vector<std::uint8_t> row(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            row[static_cast<std::size_t>(i)] = ((i & mask) == mask) ? 1 : 0;
        rows.push_back(std::move(row));
    }
    std::set<std::string> book;
    const std::size_t k = rows.size();
    for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << k); ++sel) {
        std::string cw(static_cast<std::size_t>(n), '0');
        for (std::size_t j = 0; j < k; ++j)
            if ((sel >> j) & 1)
                for (int i = 0; i < n; ++i)
                    cw[static_cast<std::size_t>(i)] = static_cast<char>(
                        cw[static_cast<std::size_t>(i)] ^ rows[j][static_cast<std::size_t>(i)]);
        book.insert(cw);
    }
    return book;
}

inline std::string cw_string(const rmx::BitVec& v) { return rmx::to_binary_string(v); }

// Gaussian tail by composite 16-point Gauss-Legendre quadrature of the
// defining integral, truncated 26 units past x (relative truncation error
// below exp(-26x - 338)).
inline double q_by_quadrature(double x) {
    static const double node[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                   0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                   0.9445750230732326, 0.9894009349916499};
    static const double wt[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    const double inv_sqrt_2pi = 0.39894228040143267794;
    auto f = [&](double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); };
    double total = 0.0;
    const double hi = x + 26.0;
    const double step = 0.25;
    for (double a = x; a < hi; a += step) {
        double b = std::min(a + step, hi);
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) acc += wt[i] * (f(c - h * node[i]) + f(c + h * node[i]));
        total += acc * h;
    }
    return total;
}

// Exhaustive leaf candidate list: enumerate every admissible codeword of the
// leaf, score by summed log posteriors, order by (cost desc, payload lex).
struct LeafRef {
    rmx::BitVec payload;
    rmx::BitVec codeword;
    double cost;
};

inline double ref_cost(const rmx::BitVec& cw, const std::vector<double>& eps) {
    double c = 0.0;
    for (std::size_t i = 0; i < cw.size(); ++i) c += rmx::log_posterior(eps[i], cw[i]);
    return c;
}

inline void ref_sort(std::vector<LeafRef>& v) {
    std::sort(v.begin(), v.end(), [](const LeafRef& a, const LeafRef& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        return rmx::lex_less(a.payload, b.payload);
    });
}

inline std::vector<LeafRef> ref_biorthogonal(const std::vector<double>& eps, int freeze = 0) {
    const int n = static_cast<int>(eps.size());
    int j = 0;
    while ((1 << j) < n) ++j;
    std::vector<LeafRef> out;
    for (int s = 0; s < 2; ++s) {
        if (freeze >= 1 && s == 1) continue;
        for (int a = 0; a < n; ++a) {
            if (freeze >= 2 && (a & ((1 << (freeze - 1)) - 1)) != 0) continue;
            rmx::BitVec payload(static_cast<std::size_t>(j + 1), 0);
            payload[0] = static_cast<std::uint8_t>(s);
            for (int t = 1; t <= j; ++t)
                payload[static_cast<std::size_t>(t)] =
                    static_cast<std::uint8_t>((a >> (t - 1)) & 1);
            rmx::BitVec cw(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                cw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
                    (s + __builtin_popcount(static_cast<unsigned>(a & i))) & 1);
            out.push_back({std::move(payload), cw, ref_cost(cw, eps)});
        }
    }
    ref_sort(out);
    return out;
}

inline std::vector<LeafRef> ref_spc(const std::vector<double>& eps, int freeze = 0) {
    const int n = static_cast<int>(eps.size());
    std::vector<LeafRef> out;
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << (n - 1)); ++w) {
        rmx::BitVec cw(static_cast<std::size_t>(n), 0);
        int parity = 0;
        for (int i = 0; i < n - 1; ++i) {
            cw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((w >> i) & 1);
            parity ^= cw[static_cast<std::size_t>(i)];
        }
        cw[static_cast<std::size_t>(n - 1)] = static_cast<std::uint8_t>(parity);
        bool ok = true;
        for (int i = 0; i < freeze; ++i) ok &= cw[static_cast<std::size_t>(i)] == 0;
        if (!ok) continue;
        rmx::BitVec payload(cw.begin(), cw.end() - 1);
        out.push_back({std::move(payload), cw, ref_cost(cw, eps)});
    }
    ref_sort(out);
    return out;
}

inline std::vector<LeafRef> ref_full(const std::vector<double>& eps, int freeze = 0) {
    const int n = static_cast<int>(eps.size());
    std::vector<LeafRef> out;
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << n); ++w) {
        rmx::BitVec cw(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) cw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((w >> i) & 1);
        bool ok = true;
        for (int i = 0; i < freeze; ++i) ok &= cw[static_cast<std::size_t>(i)] == 0;
        if (!ok) continue;
        out.push_back({cw, cw, ref_cost(cw, eps)});
    }
    ref_sort(out);
    return out;
}

inline int hamming(const rmx::BitVec& a, const rmx::BitVec& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace testo
