#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmx {

// Node label {m, r}: block length 2^m, order label r. For true RM nodes the
// label names the code; in alternating trees interior labels are edge labels
// only and `rm_shape` below is false.
struct NodeLabel {
    int m = 0;
    int r = 0;
    int length() const { return 1 << m; }
};

enum class NodeKind : std::uint8_t {
    Branch,            // (u, u+v), children [v, u]
    ChainedQuad,       // (u, u+w1, u+w1+w2, u+w1+w2+v), children [v, w2, w1, u]
    LeafRepetition,    // {j,0}
    LeafBiorthogonal,  // {j,1}
    LeafSpc,           // {j,j-1}
    LeafFull,          // {j,j}
};

inline bool is_leaf(NodeKind k) { return k != NodeKind::Branch && k != NodeKind::ChainedQuad; }

inline const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Branch: return "branch";
        case NodeKind::ChainedQuad: return "chained-quad";
        case NodeKind::LeafRepetition: return "repetition";
        case NodeKind::LeafBiorthogonal: return "biorthogonal";
        case NodeKind::LeafSpc: return "spc";
        case NodeKind::LeafFull: return "full";
    }
    return "?";
}

// Payload length of a leaf code of length 2^m.
inline int leaf_dimension(NodeKind k, int m) {
    switch (k) {
        case NodeKind::LeafRepetition: return 1;
        case NodeKind::LeafBiorthogonal: return m + 1;
        case NodeKind::LeafSpc: return (1 << m) - 1;
        case NodeKind::LeafFull: return 1 << m;
        default: throw std::logic_error("leaf_dimension: not a leaf");
    }
}

enum class Termination {
    Full,     // leaves at r=0 and r=m
    Partial,  // leaves at r<=1 and r>=m-1
};

enum class QuadOrdering {
    Standard,  // (u, u+w1, u+w2, u+w1+w2+v): two nested (u,u+v) splits
    Chained,   // (u, u+w1, u+w1+w2, u+w1+w2+v): distinct four-way node
};

// Immutable recursive code description. Nodes live in an arena; children are
// stored most-protected-first, which is also the decoding order, so the
// depth-first leaf sequence defines information-bit serialization.
class CodeTree {
  public:
    struct Node {
        NodeLabel label;
        NodeKind kind = NodeKind::LeafRepetition;
        int freeze = 0;  // leaves only: leading payload bits pinned to zero
        std::array<int, 4> child{-1, -1, -1, -1};
        bool rm_shape = true;  // subtree is exactly the RM code named by label
        int dim = 0;           // structural dimension of the subtree
        int freeze_total = 0;  // frozen bits in the subtree
        int leaf_index = -1;   // position in depth-first leaf order
    };

    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const Node& root() const { return nodes_[static_cast<std::size_t>(root_)]; }
    int root_id() const { return root_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }

    NodeLabel label() const { return root().label; }
    int length() const { return root().label.length(); }
    int dimension_structural() const { return root().dim; }
    int dimension_effective() const { return root().dim - root().freeze_total; }

    // Leaf node ids in depth-first (decoding/serialization) order.
    const std::vector<int>& leaves() const { return leaves_; }
    int num_leaves() const { return static_cast<int>(leaves_.size()); }

    bool is_rm() const { return root().rm_shape; }

    // Builder access; trees are immutable once finalize() has run.
    struct Builder;

  private:
    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<int> leaves_;

    void finalize();
    friend struct BuilderAccess;
};

struct CodeTree::Builder {
    std::vector<Node> nodes;

    int add_leaf(NodeKind kind, int m, int freeze = 0);
    int add_branch(int v_child, int u_child);
    int add_chained(int v_child, int w2_child, int w1_child, int u_child);
    int graft(const CodeTree& sub);  // append a whole tree, return its root id
    CodeTree build(int root_id) &&;
};

// RM tree {m, r} with the given termination policy.
CodeTree build_rm_tree(int m, int r, Termination termination);

// Four-way split of {m, r}. Standard ordering is realized as two nested
// Plotkin levels (it generates the identical code); Chained is the distinct
// four-way node kind. Quarters continue as RM trees under `termination`.
CodeTree build_quad_tree(int m, int r, QuadOrdering ordering,
                         Termination termination = Termination::Partial);

// Subcode: per-leaf frozen prefix lengths, in leaf order. Shorter masks are
// padded with zeros.
CodeTree apply_freezing(const CodeTree& tree, const std::vector<int>& per_leaf_prefix);

// Arbitrary (u,u+v) combination of two equal-length trees.
CodeTree make_branch(const CodeTree& v, const CodeTree& u);
CodeTree make_chained(const CodeTree& v, const CodeTree& w2, const CodeTree& w1,
                      const CodeTree& u);
CodeTree make_leaf(NodeKind kind, int m, int freeze = 0);

// Effective dimension (structural minus frozen bits).
int dimension(const CodeTree& tree);

struct DistanceBound {
    int value = 0;
    bool exact = false;  // true only for RM-shaped trees, where value = 2^(m-r)
};

// Minimum distance: exact 2^(m-r) for RM trees; a Plotkin-style bound with
// exact=false otherwise. Freezing never decreases distance, so the value
// stays valid (as a bound) for subcodes.
DistanceBound min_distance(const CodeTree& tree);

// Structural description, one line per node; used by `info`.
std::string describe(const CodeTree& tree);

}  // namespace rmx
