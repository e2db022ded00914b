#include "rmx/decoder.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <memory>
#include <queue>

#include "rmx/encoder.hpp"

namespace rmx {

double likelihood_of(const BitVec& cw, const Evidence& ev) {
    if (cw.size() != ev.size())
        throw std::invalid_argument("likelihood_of: codeword/evidence length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < cw.size(); ++i) sum += log_posterior(ev.eps[i], cw[i]);
    return sum;
}

namespace {

std::vector<double> combine_v_raw(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

std::vector<double> combine_u_raw(const std::vector<double>& a, const std::vector<double>& b,
                                  const BitVec& v) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double e1 = clamp_eps(a[i]);
        double e2 = clamp_eps(b[i]);
        if (v[i]) e2 = -e2;
        double r = (e1 + e2) / (1.0 + e1 * e2);
        if (r > 1.0) r = 1.0;
        if (r < -1.0) r = -1.0;
        out[i] = r;
    }
    return out;
}

// In-place Walsh-Hadamard transform: a[h] = sum_i (-1)^{popcount(h&i)} a_in[i].
void fwht(std::vector<double>& a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t k = i; k < i + h; ++k) {
                double x = a[k];
                double y = a[k + h];
                a[k] = x + y;
                a[k + h] = x - y;
            }
}

int log2_exact(std::size_t n) {
    int j = 0;
    while ((std::size_t{1} << j) < n) ++j;
    if ((std::size_t{1} << j) != n) throw std::invalid_argument("leaf length must be a power of 2");
    return j;
}

struct SymbolLogs {
    std::vector<double> lp0, lp1;
    explicit SymbolLogs(const std::vector<double>& eps) : lp0(eps.size()), lp1(eps.size()) {
        for (std::size_t i = 0; i < eps.size(); ++i) {
            lp0[i] = log_posterior(eps[i], 0);
            lp1[i] = log_posterior(eps[i], 1);
        }
    }
    double at(std::size_t i, int bit) const { return bit ? lp1[i] : lp0[i]; }
};

std::vector<LeafCandidate> leaf_repetition(const std::vector<double>& eps, int freeze) {
    double c0 = 0.0, c1 = 0.0;
    for (double e : eps) {
        c0 += log_posterior(e, 0);
        c1 += log_posterior(e, 1);
    }
    std::vector<LeafCandidate> out;
    out.push_back({BitVec{0}, c0});
    if (freeze == 0) {
        out.push_back({BitVec{1}, c1});
        if (c1 > c0) std::swap(out[0], out[1]);  // tie keeps payload 0 first
    }
    return out;
}

// Payload lexicographic order for (sign, coefficient-mask) biorthogonal
// candidates: sign first, then coefficients a_1..a_j (bit t-1 of the mask).
bool bio_payload_less(int s1, std::uint32_t a1, int s2, std::uint32_t a2) {
    if (s1 != s2) return s1 < s2;
    if (a1 == a2) return false;
    std::uint32_t diff = a1 ^ a2;
    std::uint32_t low = diff & (~diff + 1);  // lowest differing coefficient decides
    return (a1 & low) == 0;
}

std::vector<LeafCandidate> leaf_biorthogonal(const std::vector<double>& eps, int top_t,
                                             int freeze) {
    const std::size_t n = eps.size();
    const int j = log2_exact(n);
    if (j < 2 || j > 20) throw std::invalid_argument("biorthogonal leaf needs 2 <= m <= 20");
    const int dim = j + 1;
    if (freeze < 0 || freeze > dim) throw std::invalid_argument("biorthogonal leaf: bad freeze");

    SymbolLogs logs(eps);
    if (freeze == dim) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += logs.lp0[i];
        return {{BitVec(static_cast<std::size_t>(dim), 0), c}};
    }

    // Rank by correlation of codeword signs with per-symbol log ratios:
    // cost(s, a) = base + (-1)^s * H[a] / 2 with H the transform of lp0-lp1.
    double base = 0.0;
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) {
        lam[i] = logs.lp0[i] - logs.lp1[i];
        base += 0.5 * (logs.lp0[i] + logs.lp1[i]);
    }
    fwht(lam);

    const int coeff_shift = freeze >= 2 ? freeze - 1 : 0;
    const std::uint32_t num_masks = std::uint32_t{1} << (j - coeff_shift);
    const bool sign_free = freeze == 0;

    struct E {
        double corr;
        std::uint32_t mask;
        std::uint8_t sign;
    };
    std::vector<E> entries;
    entries.reserve(static_cast<std::size_t>(num_masks) * (sign_free ? 2 : 1));
    for (std::uint32_t b = 0; b < num_masks; ++b) {
        std::uint32_t a = b << coeff_shift;
        entries.push_back({lam[a], a, 0});
        if (sign_free) entries.push_back({-lam[a], a, 1});
    }
    std::sort(entries.begin(), entries.end(), [](const E& x, const E& y) {
        if (x.corr != y.corr) return x.corr > y.corr;
        return bio_payload_less(x.sign, x.mask, y.sign, y.mask);
    });

    if (top_t < 1) top_t = 1;
    std::size_t keep = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(top_t));
    std::vector<LeafCandidate> out;
    out.reserve(keep);
    for (std::size_t e = 0; e < keep; ++e) {
        BitVec payload(static_cast<std::size_t>(dim), 0);
        payload[0] = entries[e].sign;
        for (int t = 1; t <= j; ++t)
            payload[static_cast<std::size_t>(t)] =
                static_cast<std::uint8_t>((entries[e].mask >> (t - 1)) & 1);
        out.push_back({std::move(payload), base + 0.5 * entries[e].corr});
    }
    return out;
}

// Lazy enumeration of flip sets in nondecreasing penalty order (penalties are
// <= 0 and sorted cheapest first). Classic scheme: a set's successors extend
// or advance its largest element, so every set is reached exactly once and
// children never precede parents.
struct FlipEnum {
    const std::vector<double>& pen;  // sorted, pen[0] cheapest (closest to 0)

    struct Node {
        double sum;
        std::vector<std::uint16_t> set;  // ascending indices into pen
    };

    // Tie order on equal sums is decided by the caller through this hook
    // (payload lexicographic order of the materialized candidates).
    using TieLess = bool (*)(const void*, const Node&, const Node&);
    const void* ctx;
    TieLess tie_less;

    struct Cmp {
        const FlipEnum* e;
        bool operator()(const Node& a, const Node& b) const {
            // priority_queue pops its "largest" element: max sum first, ties
            // by lexicographically smaller payload.
            if (a.sum != b.sum) return a.sum < b.sum;
            return e->tie_less(e->ctx, b, a);
        }
    };

    std::priority_queue<Node, std::vector<Node>, Cmp> heap;

    FlipEnum(const std::vector<double>& penalties, const void* c, TieLess t)
        : pen(penalties), ctx(c), tie_less(t), heap(Cmp{this}) {
        heap.push(Node{0.0, {}});
    }

    bool next(Node& out) {
        if (heap.empty()) return false;
        out = heap.top();
        heap.pop();
        const std::size_t f = pen.size();
        if (out.set.empty()) {
            if (f > 0) heap.push(Node{pen[0], {0}});
        } else {
            std::uint16_t last = out.set.back();
            if (last + 1u < f) {
                Node ext = out;
                ext.sum += pen[last + 1];
                ext.set.push_back(static_cast<std::uint16_t>(last + 1));
                heap.push(std::move(ext));
                Node adv = out;
                adv.sum += pen[last + 1] - pen[last];
                adv.set.back() = static_cast<std::uint16_t>(last + 1);
                heap.push(std::move(adv));
            }
        }
        return true;
    }
};

struct HardLeaf {
    // Shared scaffolding for full-space and SPC leaves.
    std::size_t n;
    int freeze;
    SymbolLogs logs;
    BitVec hard;                      // frozen prefix zeros + symbol-wise decisions
    double base = 0.0;                // cost of `hard`
    std::vector<double> pen;          // sorted flip penalties over free symbols
    std::vector<std::uint16_t> pos;   // original position of each sorted penalty

    HardLeaf(const std::vector<double>& eps, int frz)
        : n(eps.size()), freeze(frz), logs(eps), hard(n, 0) {
        struct P {
            double pen;
            std::uint16_t pos;
        };
        std::vector<P> ps;
        ps.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<int>(i) < freeze) {
                base += logs.lp0[i];
                continue;
            }
            int h = eps[i] < 0.0 ? 1 : 0;  // erasures decide 0
            hard[i] = static_cast<std::uint8_t>(h);
            base += logs.at(i, h);
            ps.push_back({logs.at(i, 1 - h) - logs.at(i, h), static_cast<std::uint16_t>(i)});
        }
        std::sort(ps.begin(), ps.end(), [](const P& a, const P& b) {
            if (a.pen != b.pen) return a.pen > b.pen;  // cheapest (closest to 0) first
            return a.pos < b.pos;
        });
        pen.reserve(ps.size());
        pos.reserve(ps.size());
        for (const auto& p : ps) {
            pen.push_back(p.pen);
            pos.push_back(p.pos);
        }
    }

    BitVec word_of(const std::vector<std::uint16_t>& set) const {
        BitVec w = hard;
        for (auto s : set) w[pos[s]] ^= 1;
        return w;
    }

    // Payload-lex comparison of two flip sets (tie hook for the enumerator).
    bool word_less(const FlipEnum::Node& a, const FlipEnum::Node& b) const {
        BitVec wa = word_of(a.set);
        BitVec wb = word_of(b.set);
        return lex_less(wa, wb);
    }

    static bool tie_hook(const void* ctx, const FlipEnum::Node& a, const FlipEnum::Node& b) {
        return static_cast<const HardLeaf*>(ctx)->word_less(a, b);
    }
};

std::vector<LeafCandidate> leaf_full(const std::vector<double>& eps, int top_t, int freeze) {
    const std::size_t n = eps.size();
    const int dim = static_cast<int>(n);
    if (freeze < 0 || freeze > dim) throw std::invalid_argument("full leaf: bad freeze");
    HardLeaf hl(eps, freeze);
    if (top_t < 1) top_t = 1;
    std::size_t limit = hl.pen.size() >= 31
                            ? std::numeric_limits<std::size_t>::max()
                            : (std::size_t{1} << hl.pen.size());
    std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(top_t), limit);

    FlipEnum en(hl.pen, &hl, &HardLeaf::tie_hook);
    std::vector<LeafCandidate> out;
    out.reserve(want);
    FlipEnum::Node node;
    while (out.size() < want && en.next(node))
        out.push_back({hl.word_of(node.set), hl.base + node.sum});
    return out;
}

std::vector<LeafCandidate> leaf_spc(const std::vector<double>& eps, int top_t, int freeze) {
    const std::size_t n = eps.size();
    log2_exact(n);
    if (n < 4) throw std::invalid_argument("spc leaf needs length >= 4");
    const int dim = static_cast<int>(n) - 1;
    if (freeze < 0 || freeze > dim) throw std::invalid_argument("spc leaf: bad freeze");

    HardLeaf hl(eps, freeze);
    int need = 0;
    for (std::size_t i = 0; i < n; ++i) need ^= hl.hard[i];

    if (top_t < 1) top_t = 1;
    std::size_t admissible = hl.pen.empty()
                                 ? 1
                                 : (hl.pen.size() - 1 >= 31
                                        ? std::numeric_limits<std::size_t>::max()
                                        : (std::size_t{1} << (hl.pen.size() - 1)));
    std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(top_t), admissible);

    FlipEnum en(hl.pen, &hl, &HardLeaf::tie_hook);
    std::vector<LeafCandidate> out;
    out.reserve(want);
    FlipEnum::Node node;
    long long pops = 0;
    while (out.size() < want && en.next(node)) {
        if (++pops > (1LL << 22))
            throw std::runtime_error("spc leaf: candidate enumeration budget exceeded");
        if (static_cast<int>(node.set.size() & 1) != need) continue;
        BitVec word = hl.word_of(node.set);
        BitVec payload(word.begin(), word.end() - 1);
        out.push_back({std::move(payload), hl.base + node.sum});
    }
    return out;
}

}  // namespace

Evidence combine_v(const Evidence& left, const Evidence& right) {
    if (left.size() != right.size())
        throw std::invalid_argument("combine_v: length mismatch");
    return Evidence(combine_v_raw(left.eps, right.eps));
}

Evidence combine_u(const Evidence& left, const Evidence& right, const BitVec& v) {
    if (left.size() != right.size() || left.size() != v.size())
        throw std::invalid_argument("combine_u: length mismatch");
    return Evidence(combine_u_raw(left.eps, right.eps, v));
}

std::vector<LeafCandidate> decode_leaf_repetition(const Evidence& ev, int freeze) {
    return leaf_repetition(ev.eps, freeze);
}
std::vector<LeafCandidate> decode_leaf_biorthogonal(const Evidence& ev, int top_t, int freeze) {
    return leaf_biorthogonal(ev.eps, top_t, freeze);
}
std::vector<LeafCandidate> decode_leaf_full(const Evidence& ev, int top_t, int freeze) {
    return leaf_full(ev.eps, top_t, freeze);
}
std::vector<LeafCandidate> decode_leaf_spc(const Evidence& ev, int top_t, int freeze) {
    return leaf_spc(ev.eps, top_t, freeze);
}

void ListSchedule::validate(const CodeTree& tree) const {
    if (default_list < 1) throw std::invalid_argument("list schedule: default L must be >= 1");
    if (leaf_factor < 1 || full_leaf_factor < 1)
        throw std::invalid_argument("list schedule: expansion factors must be >= 1");
    if (per_leaf.size() > static_cast<std::size_t>(tree.num_leaves()))
        throw std::invalid_argument("list schedule: more per-leaf entries than leaves");
    for (int L : per_leaf)
        if (L < 1) throw std::invalid_argument("list schedule: every effective L must be >= 1");
    if (variable_threshold)
        for (int i = 1; i < tree.num_leaves(); ++i)
            if (effective(i) > effective(i - 1))
                throw std::invalid_argument(
                    "list schedule: variable threshold requires non-increasing caps");
}

namespace {

struct Frame {
    std::vector<std::shared_ptr<const std::vector<double>>> parts;
    std::vector<std::shared_ptr<const BitVec>> decided;
};

struct Path {
    double cost = 0.0;
    BitVec info;  // effective bits decided so far, leaf order
    std::vector<double> ev;
    BitVec cw;
    std::vector<Frame> frames;
};

struct Run {
    const CodeTree& tree;
    const ListSchedule& sched;
    std::vector<Path> paths;
    DecodeStats stats;

    void expand_leaf(const CodeTree::Node& n) {
        const int cap = sched.effective(n.leaf_index);
        const long long factor =
            n.kind == NodeKind::LeafFull ? sched.full_leaf_factor : sched.leaf_factor;
        const int top_t = static_cast<int>(
            std::min<long long>(factor * cap, std::numeric_limits<int>::max() / 2));

        std::vector<std::vector<LeafCandidate>> cands(paths.size());
        struct Entry {
            std::uint32_t parent, cand;
            double cost;
        };
        std::vector<Entry> entries;
        for (std::size_t pi = 0; pi < paths.size(); ++pi) {
            switch (n.kind) {
                case NodeKind::LeafRepetition: cands[pi] = leaf_repetition(paths[pi].ev, n.freeze); break;
                case NodeKind::LeafBiorthogonal:
                    cands[pi] = leaf_biorthogonal(paths[pi].ev, top_t, n.freeze);
                    break;
                case NodeKind::LeafSpc: cands[pi] = leaf_spc(paths[pi].ev, top_t, n.freeze); break;
                case NodeKind::LeafFull: cands[pi] = leaf_full(paths[pi].ev, top_t, n.freeze); break;
                default: throw std::logic_error("expand_leaf: not a leaf");
            }
            stats.soft_ops += static_cast<long long>(paths[pi].ev.size());
            for (std::size_t ci = 0; ci < cands[pi].size(); ++ci)
                entries.push_back({static_cast<std::uint32_t>(pi), static_cast<std::uint32_t>(ci),
                                   paths[pi].cost + cands[pi][ci].cost});
        }

        auto better = [&](const Entry& a, const Entry& b) {
            if (a.cost != b.cost) return a.cost > b.cost;
            if (a.parent != b.parent)
                return lex_less(paths[a.parent].info, paths[b.parent].info);
            return lex_less(cands[a.parent][a.cand].payload, cands[b.parent][b.cand].payload);
        };
        std::sort(entries.begin(), entries.end(), better);
        std::size_t keep = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(cap));
        stats.paths_pruned += static_cast<long long>(entries.size() - keep);
        stats.leaf_expansions += static_cast<long long>(entries.size());

        std::vector<Path> next;
        next.reserve(keep);
        for (std::size_t e = 0; e < keep; ++e) {
            const Entry& en = entries[e];
            const LeafCandidate& c = cands[en.parent][en.cand];
            Path np = paths[en.parent];
            np.cost = en.cost;
            np.ev.clear();
            np.info.insert(np.info.end(), c.payload.begin() + n.freeze, c.payload.end());
            np.cw = encode_leaf_payload(n.kind, n.label.m, c.payload);
            next.push_back(std::move(np));
        }
        paths = std::move(next);
    }

    void decode_node(int id) {
        const auto& n = tree.node(id);
        if (is_leaf(n.kind)) {
            expand_leaf(n);
            return;
        }
        const int len = n.label.length();
        if (n.kind == NodeKind::Branch) {
            const int half = len / 2;
            for (auto& p : paths) {
                auto left = std::make_shared<std::vector<double>>(p.ev.begin(),
                                                                  p.ev.begin() + half);
                auto right = std::make_shared<std::vector<double>>(p.ev.begin() + half,
                                                                   p.ev.end());
                p.ev = combine_v_raw(*left, *right);
                p.frames.push_back(Frame{{std::move(left), std::move(right)}, {}});
                stats.soft_ops += half;
            }
            decode_node(n.child[0]);
            for (auto& p : paths) {
                auto& f = p.frames.back();
                auto v = std::make_shared<const BitVec>(std::move(p.cw));
                p.ev = combine_u_raw(*f.parts[0], *f.parts[1], *v);
                f.decided.push_back(std::move(v));
                stats.soft_ops += half;
            }
            decode_node(n.child[1]);
            for (auto& p : paths) {
                Frame f = std::move(p.frames.back());
                p.frames.pop_back();
                const BitVec& v = *f.decided[0];
                BitVec cw(static_cast<std::size_t>(len));
                for (int i = 0; i < half; ++i) {
                    cw[static_cast<std::size_t>(i)] = p.cw[static_cast<std::size_t>(i)];
                    cw[static_cast<std::size_t>(i + half)] =
                        p.cw[static_cast<std::size_t>(i)] ^ v[static_cast<std::size_t>(i)];
                }
                p.cw = std::move(cw);
            }
            return;
        }

        // Chained quad, fixed schedule (see header).
        const int q = len / 4;
        for (auto& p : paths) {
            Frame f;
            for (int k = 0; k < 4; ++k)
                f.parts.push_back(std::make_shared<std::vector<double>>(
                    p.ev.begin() + k * q, p.ev.begin() + (k + 1) * q));
            p.ev = combine_v_raw(*f.parts[2], *f.parts[3]);
            p.frames.push_back(std::move(f));
            stats.soft_ops += q;
        }
        decode_node(n.child[0]);  // v
        for (auto& p : paths) {
            auto& f = p.frames.back();
            f.decided.push_back(std::make_shared<const BitVec>(std::move(p.cw)));
            p.ev = combine_v_raw(*f.parts[1], *f.parts[2]);
            stats.soft_ops += q;
        }
        decode_node(n.child[1]);  // w2
        for (auto& p : paths) {
            auto& f = p.frames.back();
            f.decided.push_back(std::make_shared<const BitVec>(std::move(p.cw)));
            p.ev = combine_v_raw(*f.parts[0], *f.parts[1]);
            stats.soft_ops += q;
        }
        decode_node(n.child[2]);  // w1
        for (auto& p : paths) {
            auto& f = p.frames.back();
            auto w1 = std::make_shared<const BitVec>(std::move(p.cw));
            const BitVec& v = *f.decided[0];
            const BitVec& w2 = *f.decided[1];
            BitVec w1w2 = xor_bits(*w1, w2);
            BitVec w1w2v = xor_bits(w1w2, v);
            p.ev = combine_u_raw(*f.parts[0], *f.parts[1], *w1);
            p.ev = combine_u_raw(p.ev, *f.parts[2], w1w2);
            p.ev = combine_u_raw(p.ev, *f.parts[3], w1w2v);
            f.decided.push_back(std::move(w1));
            stats.soft_ops += 3 * q;
        }
        decode_node(n.child[3]);  // u
        for (auto& p : paths) {
            Frame f = std::move(p.frames.back());
            p.frames.pop_back();
            const BitVec& v = *f.decided[0];
            const BitVec& w2 = *f.decided[1];
            const BitVec& w1 = *f.decided[2];
            BitVec cw(static_cast<std::size_t>(len));
            for (int i = 0; i < q; ++i) {
                std::uint8_t q1 = p.cw[static_cast<std::size_t>(i)];
                std::uint8_t q2 = q1 ^ w1[static_cast<std::size_t>(i)];
                std::uint8_t q3 = q2 ^ w2[static_cast<std::size_t>(i)];
                std::uint8_t q4 = q3 ^ v[static_cast<std::size_t>(i)];
                cw[static_cast<std::size_t>(i)] = q1;
                cw[static_cast<std::size_t>(i + q)] = q2;
                cw[static_cast<std::size_t>(i + 2 * q)] = q3;
                cw[static_cast<std::size_t>(i + 3 * q)] = q4;
            }
            p.cw = std::move(cw);
        }
    }
};

}  // namespace

DecodeResult list_decode(const CodeTree& tree, const Evidence& ev, const ListSchedule& sched) {
    if (static_cast<int>(ev.size()) != tree.length())
        throw std::invalid_argument("list_decode: evidence length " + std::to_string(ev.size()) +
                                    " != code length " + std::to_string(tree.length()));
    sched.validate(tree);
    std::vector<double> eps = ev.eps;
    for (double& e : eps) {
        if (!(e >= -1.0 - 1e-9 && e <= 1.0 + 1e-9))
            throw std::invalid_argument("list_decode: evidence outside [-1, 1]");
        e = std::min(1.0, std::max(-1.0, e));
    }

    Run run{tree, sched, {}, {}};
    run.paths.push_back(Path{0.0, {}, std::move(eps), {}, {}});
    run.decode_node(tree.root_id());

    // Exact costs for the surviving codewords; the internally accumulated
    // metric agrees up to rounding, recomputation pins equality with
    // likelihood_of for the final report and selection.
    std::vector<double> lp0(ev.size()), lp1(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        lp0[i] = log_posterior(ev.eps[i], 0);
        lp1[i] = log_posterior(ev.eps[i], 1);
    }
    DecodeResult res;
    res.stats = run.stats;
    res.list.reserve(run.paths.size());
    for (auto& p : run.paths) {
        double exact = 0.0;
        for (std::size_t i = 0; i < p.cw.size(); ++i) exact += p.cw[i] ? lp1[i] : lp0[i];
        res.list.push_back(DecodedPath{std::move(p.info), std::move(p.cw), exact});
    }
    std::sort(res.list.begin(), res.list.end(), [](const DecodedPath& a, const DecodedPath& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        return lex_less(a.info, b.info);
    });
    res.info = res.list.front().info;
    res.codeword = res.list.front().codeword;
    res.cost = res.list.front().cost;
    return res;
}

}  // namespace rmx
