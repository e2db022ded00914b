#pragma once

#include "rmx/bits.hpp"
#include "rmx/code_tree.hpp"

namespace rmx {

struct EncodeStats {
    long long xors = 0;
};

// Recursive (u,u+v) encoding. `info` holds the effective information bits in
// depth-first leaf order; frozen prefixes are implicit zeros. The XOR pattern
// is shape-dependent (never data-dependent), so `stats` reproduces
// xor_count(tree) exactly.
//
// Leaf payload conventions:
//   repetition   : 1 bit, replicated
//   biorthogonal : (sign, a_1 .. a_m); symbol i = sign ^ a_1*i_1 ^ ... ^ a_m*i_m
//                  with i_t = bit t-1 of the symbol index
//   spc          : first 2^m - 1 symbols; last symbol makes overall parity even
//   full         : the 2^m symbols verbatim
BitVec encode(const CodeTree& tree, const BitVec& info, EncodeStats* stats = nullptr);

// Exact number of binary additions encode() performs for this tree shape.
long long xor_count(const CodeTree& tree);

// Codeword of a single leaf code from its full payload (frozen zeros
// included). Shared by the tree encoder and the list decoder's candidate
// materialization.
BitVec encode_leaf_payload(NodeKind kind, int m, const BitVec& payload,
                           long long* xors = nullptr);

}  // namespace rmx
