#include "rmx/code_tree.hpp"

#include <algorithm>
#include <sstream>

namespace rmx {

namespace {

void check_label(int m, int r) {
    if (m < 0 || m > 30 || r < 0 || r > m)
        throw std::invalid_argument("code tree: label requires 0 <= r <= m <= 30, got m=" +
                                    std::to_string(m) + " r=" + std::to_string(r));
}

int leaf_r(NodeKind kind, int m) {
    switch (kind) {
        case NodeKind::LeafRepetition: return 0;
        case NodeKind::LeafBiorthogonal: return 1;
        case NodeKind::LeafSpc: return m - 1;
        case NodeKind::LeafFull: return m;
        default: throw std::logic_error("leaf_r: not a leaf");
    }
}

}  // namespace

int CodeTree::Builder::add_leaf(NodeKind kind, int m, int freeze) {
    if (!is_leaf(kind)) throw std::invalid_argument("add_leaf: kind is not a leaf");
    if ((kind == NodeKind::LeafBiorthogonal || kind == NodeKind::LeafSpc) && m < 2)
        throw std::invalid_argument("add_leaf: biorthogonal/spc leaves need m >= 2");
    if (m < 0) throw std::invalid_argument("add_leaf: m < 0");
    int dim = leaf_dimension(kind, m);
    if (freeze < 0 || freeze > dim)
        throw std::invalid_argument("add_leaf: freeze prefix exceeds leaf dimension");
    Node n;
    n.label = {m, leaf_r(kind, m)};
    n.kind = kind;
    n.freeze = freeze;
    n.dim = dim;
    n.freeze_total = freeze;
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
}

int CodeTree::Builder::add_branch(int v_child, int u_child) {
    const Node& v = nodes.at(static_cast<std::size_t>(v_child));
    const Node& u = nodes.at(static_cast<std::size_t>(u_child));
    if (v.label.m != u.label.m)
        throw std::invalid_argument("add_branch: children must have equal length");
    Node n;
    n.label = {u.label.m + 1, u.label.r};  // r is an edge label unless rm_shape holds
    n.kind = NodeKind::Branch;
    n.child = {v_child, u_child, -1, -1};
    n.dim = v.dim + u.dim;
    n.freeze_total = v.freeze_total + u.freeze_total;
    n.rm_shape = v.rm_shape && u.rm_shape && v.label.r == u.label.r - 1;
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
}

int CodeTree::Builder::add_chained(int v_child, int w2_child, int w1_child, int u_child) {
    const Node& v = nodes.at(static_cast<std::size_t>(v_child));
    const Node& w2 = nodes.at(static_cast<std::size_t>(w2_child));
    const Node& w1 = nodes.at(static_cast<std::size_t>(w1_child));
    const Node& u = nodes.at(static_cast<std::size_t>(u_child));
    int m = u.label.m;
    if (v.label.m != m || w2.label.m != m || w1.label.m != m)
        throw std::invalid_argument("add_chained: children must have equal length");
    Node n;
    n.label = {m + 2, u.label.r};
    n.kind = NodeKind::ChainedQuad;
    n.child = {v_child, w2_child, w1_child, u_child};
    n.dim = v.dim + w2.dim + w1.dim + u.dim;
    n.freeze_total = v.freeze_total + w2.freeze_total + w1.freeze_total + u.freeze_total;
    n.rm_shape = false;  // the chained map never reproduces the RM code
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
}

int CodeTree::Builder::graft(const CodeTree& sub) {
    int offset = static_cast<int>(nodes.size());
    for (int i = 0; i < sub.num_nodes(); ++i) {
        Node n = sub.node(i);
        for (auto& c : n.child)
            if (c >= 0) c += offset;
        n.leaf_index = -1;
        nodes.push_back(n);
    }
    return offset + sub.root_id();
}

CodeTree CodeTree::Builder::build(int root_id) && {
    CodeTree t;
    t.nodes_ = std::move(nodes);
    t.root_ = root_id;
    t.finalize();
    return t;
}

void CodeTree::finalize() {
    if (root_ < 0 || root_ >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("code tree: bad root");
    leaves_.clear();
    // Iterative DFS, children in stored (decoding) order.
    std::vector<int> stack{root_};
    std::vector<int> order;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        order.push_back(id);
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        for (int i = 3; i >= 0; --i)
            if (n.child[static_cast<std::size_t>(i)] >= 0)
                stack.push_back(n.child[static_cast<std::size_t>(i)]);
    }
    for (int id : order) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (is_leaf(n.kind)) {
            n.leaf_index = static_cast<int>(leaves_.size());
            leaves_.push_back(id);
        }
    }
}

namespace {

int build_rm_into(CodeTree::Builder& b, int m, int r, Termination t) {
    if (r == 0) return b.add_leaf(NodeKind::LeafRepetition, m);
    if (r == m) return b.add_leaf(NodeKind::LeafFull, m);
    if (t == Termination::Partial) {
        if (r == 1) return b.add_leaf(NodeKind::LeafBiorthogonal, m);
        if (r == m - 1) return b.add_leaf(NodeKind::LeafSpc, m);
    }
    int v = build_rm_into(b, m - 1, r - 1, t);
    int u = build_rm_into(b, m - 1, r, t);
    return b.add_branch(v, u);
}

}  // namespace

CodeTree build_rm_tree(int m, int r, Termination termination) {
    check_label(m, r);
    CodeTree::Builder b;
    int root = build_rm_into(b, m, r, termination);
    return std::move(b).build(root);
}

CodeTree build_quad_tree(int m, int r, QuadOrdering ordering, Termination termination) {
    check_label(m, r);
    if (r < 2 || r > m - 2)
        throw std::invalid_argument("build_quad_tree: requires 2 <= r <= m-2, got m=" +
                                    std::to_string(m) + " r=" + std::to_string(r));
    CodeTree::Builder b;
    if (ordering == QuadOrdering::Standard) {
        // Two nested (u,u+v) levels over the four quarter codes.
        int vv = build_rm_into(b, m - 2, r - 2, termination);
        int vu = build_rm_into(b, m - 2, r - 1, termination);
        int v = b.add_branch(vv, vu);
        int uv = build_rm_into(b, m - 2, r - 1, termination);
        int uu = build_rm_into(b, m - 2, r, termination);
        int u = b.add_branch(uv, uu);
        int root = b.add_branch(v, u);
        return std::move(b).build(root);
    }
    int v = build_rm_into(b, m - 2, r - 2, termination);
    int w2 = build_rm_into(b, m - 2, r - 1, termination);
    int w1 = build_rm_into(b, m - 2, r - 1, termination);
    int u = build_rm_into(b, m - 2, r, termination);
    int root = b.add_chained(v, w2, w1, u);
    return std::move(b).build(root);
}

CodeTree apply_freezing(const CodeTree& tree, const std::vector<int>& per_leaf_prefix) {
    if (per_leaf_prefix.size() > tree.leaves().size())
        throw std::invalid_argument("apply_freezing: mask longer than leaf count (" +
                                    std::to_string(tree.leaves().size()) + " leaves)");
    CodeTree::Builder b;
    int root = b.graft(tree);
    for (std::size_t i = 0; i < per_leaf_prefix.size(); ++i) {
        int id = tree.leaves()[i];
        int f = per_leaf_prefix[i];
        auto& n = b.nodes[static_cast<std::size_t>(id)];
        if (f < 0 || f > n.dim)
            throw std::invalid_argument("apply_freezing: prefix " + std::to_string(f) +
                                        " exceeds leaf dimension " + std::to_string(n.dim) +
                                        " at leaf " + std::to_string(i));
        n.freeze = f;
    }
    // Recompute subtree freeze totals bottom-up (arena order is not sorted,
    // so do it recursively).
    struct Rec {
        std::vector<CodeTree::Node>& nodes;
        int run(int id) {
            auto& n = nodes[static_cast<std::size_t>(id)];
            if (is_leaf(n.kind)) {
                n.freeze_total = n.freeze;
            } else {
                n.freeze_total = 0;
                for (int c : n.child)
                    if (c >= 0) n.freeze_total += run(c);
            }
            return n.freeze_total;
        }
    };
    Rec{b.nodes}.run(root);
    return std::move(b).build(root);
}

CodeTree make_branch(const CodeTree& v, const CodeTree& u) {
    CodeTree::Builder b;
    int vi = b.graft(v);
    int ui = b.graft(u);
    int root = b.add_branch(vi, ui);
    return std::move(b).build(root);
}

CodeTree make_chained(const CodeTree& v, const CodeTree& w2, const CodeTree& w1,
                      const CodeTree& u) {
    CodeTree::Builder b;
    int vi = b.graft(v);
    int w2i = b.graft(w2);
    int w1i = b.graft(w1);
    int ui = b.graft(u);
    int root = b.add_chained(vi, w2i, w1i, ui);
    return std::move(b).build(root);
}

CodeTree make_leaf(NodeKind kind, int m, int freeze) {
    CodeTree::Builder b;
    int id = b.add_leaf(kind, m, freeze);
    return std::move(b).build(id);
}

int dimension(const CodeTree& tree) { return tree.dimension_effective(); }

namespace {

int distance_of(const CodeTree& t, int id) {
    const auto& n = t.node(id);
    switch (n.kind) {
        case NodeKind::LeafRepetition: return n.label.length();
        case NodeKind::LeafBiorthogonal: return n.label.length() / 2;
        case NodeKind::LeafSpc: return 2;
        case NodeKind::LeafFull: return 1;
        case NodeKind::Branch: {
            int dv = distance_of(t, n.child[0]);
            int du = distance_of(t, n.child[1]);
            return std::min(2 * du, dv);
        }
        case NodeKind::ChainedQuad: {
            // Plotkin-style label for the built shape (w1/w2 the same code
            // containing v); a word (0, w, 0, 0) with w = w1 = w2 shows the
            // w-code distance is attained.
            int dv = distance_of(t, n.child[0]);
            int dw2 = distance_of(t, n.child[1]);
            int dw1 = distance_of(t, n.child[2]);
            int du = distance_of(t, n.child[3]);
            return std::min(std::min(4 * du, dv), std::min(dw1, dw2));
        }
    }
    return 1;
}

}  // namespace

DistanceBound min_distance(const CodeTree& tree) {
    DistanceBound d;
    d.value = distance_of(tree, tree.root_id());
    d.exact = tree.is_rm();
    return d;
}

namespace {

void describe_node(const CodeTree& t, int id, int depth, std::ostringstream& out) {
    const auto& n = t.node(id);
    for (int i = 0; i < depth; ++i) out << "  ";
    out << "{" << n.label.m << "," << n.label.r << "} " << kind_name(n.kind);
    if (is_leaf(n.kind)) {
        out << "  leaf#" << n.leaf_index << " dim=" << n.dim;
        if (n.freeze > 0) out << " frozen=" << n.freeze;
    }
    out << "\n";
    for (int c : n.child)
        if (c >= 0) describe_node(t, c, depth + 1, out);
}

}  // namespace

std::string describe(const CodeTree& tree) {
    std::ostringstream out;
    describe_node(tree, tree.root_id(), 0, out);
    return out.str();
}

}  // namespace rmx
