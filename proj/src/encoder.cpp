#include "rmx/encoder.hpp"

namespace rmx {

BitVec encode_leaf_payload(NodeKind kind, int m, const BitVec& payload, long long* xors) {
    const int len = 1 << m;
    if (static_cast<int>(payload.size()) != leaf_dimension(kind, m))
        throw std::invalid_argument("encode_leaf_payload: payload length mismatch");
    long long count = 0;
    BitVec cw;
    switch (kind) {
        case NodeKind::LeafRepetition:
            cw.assign(static_cast<std::size_t>(len), payload[0]);
            break;
        case NodeKind::LeafFull:
            cw = payload;
            break;
        case NodeKind::LeafBiorthogonal: {
            // Affine evaluation by doubling: after step t the first 2^t
            // symbols hold the function restricted to i_{t+1..m} = 0.
            cw.assign(static_cast<std::size_t>(len), 0);
            cw[0] = payload[0];
            for (int t = 1; t <= m; ++t) {
                int half = 1 << (t - 1);
                for (int i = 0; i < half; ++i) {
                    cw[static_cast<std::size_t>(i + half)] =
                        cw[static_cast<std::size_t>(i)] ^ payload[static_cast<std::size_t>(t)];
                    ++count;
                }
            }
            break;
        }
        case NodeKind::LeafSpc: {
            cw = payload;
            std::uint8_t parity = cw[0];
            for (int i = 1; i < len - 1; ++i) {
                parity ^= cw[static_cast<std::size_t>(i)];
                ++count;
            }
            cw.push_back(parity);
            break;
        }
        default:
            throw std::logic_error("encode_leaf_payload: not a leaf kind");
    }
    if (xors) *xors += count;
    return cw;
}

namespace {

struct Encoder {
    const CodeTree& tree;
    const BitVec& info;
    std::size_t cursor = 0;
    long long xors = 0;

    // Full payload for a leaf: frozen prefix zeros plus consumed info bits.
    BitVec take_payload(const CodeTree::Node& n) {
        BitVec payload(static_cast<std::size_t>(n.dim), 0);
        int take = n.dim - n.freeze;
        for (int i = 0; i < take; ++i)
            payload[static_cast<std::size_t>(n.freeze + i)] = info[cursor++];
        return payload;
    }

    BitVec run(int id) {
        const auto& n = tree.node(id);
        const int len = n.label.length();
        if (is_leaf(n.kind)) return encode_leaf_payload(n.kind, n.label.m, take_payload(n), &xors);
        if (n.kind == NodeKind::Branch) {
            BitVec v = run(n.child[0]);
            BitVec u = run(n.child[1]);
            BitVec cw(static_cast<std::size_t>(len));
            int half = len / 2;
            for (int i = 0; i < half; ++i) {
                cw[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
                cw[static_cast<std::size_t>(i + half)] =
                    u[static_cast<std::size_t>(i)] ^ v[static_cast<std::size_t>(i)];
                ++xors;
            }
            return cw;
        }
        // Chained quad: (u, u+w1, u+w1+w2, u+w1+w2+v).
        BitVec v = run(n.child[0]);
        BitVec w2 = run(n.child[1]);
        BitVec w1 = run(n.child[2]);
        BitVec u = run(n.child[3]);
        int q = len / 4;
        BitVec cw(static_cast<std::size_t>(len));
        for (int i = 0; i < q; ++i) {
            std::uint8_t q1 = u[static_cast<std::size_t>(i)];
            std::uint8_t q2 = q1 ^ w1[static_cast<std::size_t>(i)];
            std::uint8_t q3 = q2 ^ w2[static_cast<std::size_t>(i)];
            std::uint8_t q4 = q3 ^ v[static_cast<std::size_t>(i)];
            xors += 3;
            cw[static_cast<std::size_t>(i)] = q1;
            cw[static_cast<std::size_t>(i + q)] = q2;
            cw[static_cast<std::size_t>(i + 2 * q)] = q3;
            cw[static_cast<std::size_t>(i + 3 * q)] = q4;
        }
        return cw;
    }
};

long long xor_count_node(const CodeTree& t, int id) {
    const auto& n = t.node(id);
    const int len = n.label.length();
    switch (n.kind) {
        case NodeKind::LeafRepetition:
        case NodeKind::LeafFull: return 0;
        case NodeKind::LeafBiorthogonal: return len - 1;
        case NodeKind::LeafSpc: return len - 2;
        case NodeKind::Branch:
            return len / 2 + xor_count_node(t, n.child[0]) + xor_count_node(t, n.child[1]);
        case NodeKind::ChainedQuad: {
            long long c = 3LL * (len / 4);
            for (int ch : n.child) c += xor_count_node(t, ch);
            return c;
        }
    }
    return 0;
}

}  // namespace

BitVec encode(const CodeTree& tree, const BitVec& info, EncodeStats* stats) {
    if (static_cast<int>(info.size()) != tree.dimension_effective())
        throw std::invalid_argument("encode: info length " + std::to_string(info.size()) +
                                    " != effective dimension " +
                                    std::to_string(tree.dimension_effective()));
    Encoder enc{tree, info};
    BitVec cw = enc.run(tree.root_id());
    if (stats) stats->xors += enc.xors;
    return cw;
}

long long xor_count(const CodeTree& tree) { return xor_count_node(tree, tree.root_id()); }

}  // namespace rmx
