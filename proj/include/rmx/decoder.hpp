#pragma once

#include <cmath>
#include <vector>

#include "rmx/bits.hpp"
#include "rmx/channel.hpp"
#include "rmx/code_tree.hpp"

namespace rmx {

// Saturation bounds used before any log/cost evaluation: evidence is clamped
// to [-1+kEpsClamp, 1-kEpsClamp] and per-symbol log posteriors are floored at
// kLogFloor, so contradictory certain observations turn into a well-defined
// worst-cost path instead of NaN/-inf propagation.
inline constexpr double kEpsClamp = 1e-15;
inline constexpr double kLogFloor = -745.0;

inline double clamp_eps(double e) {
    if (e > 1.0 - kEpsClamp) return 1.0 - kEpsClamp;
    if (e < -1.0 + kEpsClamp) return -1.0 + kEpsClamp;
    return e;
}

// log Pr{symbol = bit} for evidence eps = 2*Pr{0} - 1.
inline double log_posterior(double eps, int bit) {
    double e = clamp_eps(eps);
    double p = bit ? (1.0 - e) * 0.5 : (1.0 + e) * 0.5;
    double lp = std::log(p);
    return lp < kLogFloor ? kLogFloor : lp;
}

// Sum of per-symbol log posteriors of a codeword under the evidence. This is
// the cost every ranking in the decoder and the exhaustive oracle agrees on;
// ties are compared as exact double equality.
double likelihood_of(const BitVec& cw, const Evidence& ev);

// Evidence for v_i = u_i + (u+v)_i from the two halves: eps(v) = eps' * eps''.
Evidence combine_v(const Evidence& left, const Evidence& right);

// Evidence for u_i from both halves once v is decided. With s = (-1)^{v_i}:
//   eps(u) = (eps' + s*eps'') / (1 + s*eps'*eps'')
// which is the tanh-domain sum of the two observations' LLRs. Inputs are
// saturated so opposing certainties yield an erasure rather than 0/0.
Evidence combine_u(const Evidence& left, const Evidence& right, const BitVec& v);

struct LeafCandidate {
    BitVec payload;  // full leaf payload, frozen prefix included (zeros)
    double cost;     // sum of log posteriors of the candidate's symbols
};

// Leaf decoders return candidates sorted by cost descending, ties by
// lexicographically smaller payload. `freeze` pins that many leading payload
// bits to zero and restricts the candidate set accordingly; a fully frozen
// leaf yields exactly one (all-zero) candidate. `top_t` is clamped to the
// number of admissible codewords.
std::vector<LeafCandidate> decode_leaf_repetition(const Evidence& ev, int freeze = 0);
std::vector<LeafCandidate> decode_leaf_biorthogonal(const Evidence& ev, int top_t,
                                                    int freeze = 0);
// Best candidate is the symbol-wise hard decision; the rest follow by flipping
// least-reliable positions, emitted in descending-cost order.
std::vector<LeafCandidate> decode_leaf_full(const Evidence& ev, int top_t, int freeze = 0);
// Wagner rule: hard decision, with the least reliable bit flipped when parity
// fails (exact ML); further candidates are the next-cheapest parity-preserving
// flip sets.
std::vector<LeafCandidate> decode_leaf_spc(const Evidence& ev, int top_t, int freeze = 0);

// List decoding schedule. The survivor cap at leaf i is per_leaf[i] when set,
// else default_list. Each path expands to at most factor*cap candidates at a
// leaf (full-space leaves have their own, typically wider, factor), then the
// population is pruned back to the cap.
struct ListSchedule {
    int default_list = 1;
    std::vector<int> per_leaf;
    bool variable_threshold = false;  // caps must be non-increasing left-to-right
    int leaf_factor = 2;
    int full_leaf_factor = 2;

    int effective(int leaf_index) const {
        if (leaf_index >= 0 && static_cast<std::size_t>(leaf_index) < per_leaf.size())
            return per_leaf[static_cast<std::size_t>(leaf_index)];
        return default_list;
    }
    void validate(const CodeTree& tree) const;

    static ListSchedule uniform(int L) {
        ListSchedule s;
        s.default_list = L;
        return s;
    }
};

struct DecodeStats {
    long long leaf_expansions = 0;
    long long paths_pruned = 0;
    long long soft_ops = 0;  // combine + transform + metric operations
};

struct DecodedPath {
    BitVec info;      // effective information bits (frozen positions omitted)
    BitVec codeword;  // full-length codeword
    double cost;      // likelihood_of(codeword, ev), recomputed exactly
};

struct DecodeResult {
    BitVec info;
    BitVec codeword;
    double cost;
    std::vector<DecodedPath> list;  // survivors, best first
    DecodeStats stats;
};

// Depth-first recursive list decoding over the code tree.
//
// At a branch, every surviving path recalculates evidence with combine_v,
// resolves the v child, then conditions the halves on its decided v via
// combine_u and resolves the u child. At a leaf, each path expands into its
// candidate list and the population is pruned to the leaf's cap, ordering by
// (cost, then lexicographically smaller decided bits).
//
// Chained four-way nodes follow this fixed schedule over quarters q1..q4
// (q1=u, q2=u+w1, q3=u+w1+w2, q4=u+w1+w2+v):
//   v  : combine_v(q3, q4)
//   w2 : combine_v(q2, q3)
//   w1 : combine_v(q1, q2)
//   u  : q1 fused with q2|w1, q3|w1+w2, q4|w1+w2+v via combine_u
//
// Reported costs are recomputed as likelihood_of(codeword, ev), so the best
// cost matches the likelihood of the returned codeword exactly; with a cap
// large enough that no pruning occurs, the result is the exact ML codeword
// under the same tie rule as the exhaustive oracle.
DecodeResult list_decode(const CodeTree& tree, const Evidence& ev, const ListSchedule& sched);

}  // namespace rmx
