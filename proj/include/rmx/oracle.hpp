#pragma once

#include <cstdint>
#include <vector>

#include "rmx/bits.hpp"
#include "rmx/channel.hpp"
#include "rmx/code_tree.hpp"

namespace rmx {

// Exhaustively enumerated codebook of a tree with small effective dimension.
// Codeword index i encodes the info bits of i as a binary counter, MSB first,
// so numeric index order equals lexicographic info order.
struct Codebook {
    int k_eff = 0;
    std::vector<BitVec> codewords;

    BitVec info_of(std::size_t index) const {
        BitVec info(static_cast<std::size_t>(k_eff));
        for (int t = 0; t < k_eff; ++t)
            info[static_cast<std::size_t>(t)] =
                static_cast<std::uint8_t>((index >> (k_eff - 1 - t)) & 1);
        return info;
    }
};

inline constexpr int kCodebookGuard = 24;

// All 2^k_eff codewords; refuses dimensions above kCodebookGuard.
Codebook enumerate_codebook(const CodeTree& tree);

// Index of the maximum-likelihood codeword: argmax of the summed log
// posteriors, ties broken toward the lexicographically smaller info bits —
// the identical rule the list decoder applies.
std::size_t ml_decode_index(const Codebook& cb, const Evidence& ev);
const BitVec& ml_decode_exhaustive(const Codebook& cb, const Evidence& ev);

// Exact posteriors from the four equiprobable hypotheses (u, v) in {0,1}^2
// observed through two independent Gaussian channels, at the likelihood scale
// matching the evidence convention eps = tanh(2y/sigma^2) (see channel.hpp).
// p_u0_given_v0 / _v1 condition on the decided value of v.
struct PosteriorPair {
    double p_v0;
    double p_u0_given_v0;
    double p_u0_given_v1;
};
PosteriorPair bayes_posterior_pair(double y_u, double y_uv, double sigma);

// Single-observation posterior Pr{bit = 0 | y} at the same scale; the
// reference for to_evidence.
double bayes_posterior_single(double y, double sigma);

}  // namespace rmx
