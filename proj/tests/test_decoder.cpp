#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rmx/channel.hpp"
#include "rmx/code_tree.hpp"
#include "rmx/decoder.hpp"
#include "rmx/encoder.hpp"
#include "rmx/oracle.hpp"

using namespace rmx;

namespace {

Evidence noiseless(const BitVec& cw) {
    Evidence ev;
    for (auto b : cw) ev.eps.push_back(b ? -1.0 : 1.0);
    return ev;
}

Evidence random_evidence(TrialRng& rng, std::size_t n) {
    Evidence ev;
    for (std::size_t i = 0; i < n; ++i) ev.eps.push_back(2.0 * rng.next_unit() - 1.0);
    return ev;
}

void check_matches_reference(const std::vector<LeafCandidate>& got,
                             const std::vector<testo::LeafRef>& ref, std::size_t top_t) {
    REQUIRE(got.size() == std::min(top_t, ref.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].payload == ref[i].payload);
        CHECK(got[i].cost == doctest::Approx(ref[i].cost).epsilon(1e-9));
    }
}

}  // namespace

TEST_SUITE_BEGIN("decoder");

TEST_CASE("combine_v worked example and trivia") {
    Evidence l{{0.8, 0.0}}, r{{0.8, 1.0}};
    auto v = combine_v(l, r);
    CHECK(v.eps[0] == doctest::Approx(0.64).epsilon(1e-15));
    CHECK((1.0 + v.eps[0]) / 2.0 == doctest::Approx(0.82).epsilon(1e-15));
    CHECK(v.eps[1] == 0.0);

    Evidence ones{{1.0, 1.0}};
    Evidence any{{0.37, -0.52}};
    auto w = combine_v(any, ones);  // noiseless right half passes the left through
    CHECK(w.eps[0] == any.eps[0]);
    CHECK(w.eps[1] == any.eps[1]);
    CHECK_THROWS_AS(combine_v(l, Evidence{{0.1}}), std::invalid_argument);
}

TEST_CASE("combine_u worked example and trivia") {
    Evidence l{{0.8}}, r{{0.8}};
    auto u = combine_u(l, r, BitVec{0});
    // p' = p^ = 0.9 fuses to 0.81/0.82.
    CHECK((1.0 + u.eps[0]) / 2.0 == doctest::Approx(0.81 / 0.82).epsilon(1e-14));

    Evidence erased{{0.0, 0.0}}, e2{{0.7, 0.7}};
    auto s = combine_u(erased, e2, BitVec{0, 1});
    CHECK(s.eps[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(s.eps[1] == doctest::Approx(-0.7).epsilon(1e-15));

    // Contradictory certainties become an erasure rather than an error.
    auto c = combine_u(Evidence{{1.0}}, Evidence{{-1.0}}, BitVec{0});
    CHECK(std::abs(c.eps[0]) < 1e-9);
    CHECK(std::isfinite(log_posterior(c.eps[0], 0)));
}

TEST_CASE("combines agree with the four-hypothesis Bayes oracle") {
    // Ranges keep |2y/sigma^2| <= ~4.4: within tanh's representable headroom
    // the agreement is exact to well under 1e-12. Saturated contradictory
    // pairs fundamentally cannot reach that (see the harsh-range case below).
    TrialRng rng(101, 0);
    for (int i = 0; i < 20000; ++i) {
        double yu = 4.4 * (rng.next_unit() - 0.5);
        double yuv = 4.4 * (rng.next_unit() - 0.5);
        double sigma = 1.0 + rng.next_unit();
        auto params = ChannelParams::from_sigma(sigma);
        auto ev = to_evidence({yu, yuv}, params);
        Evidence l{{ev.eps[0]}}, r{{ev.eps[1]}};

        auto oracle = bayes_posterior_pair(yu, yuv, sigma);
        double pv = (1.0 + combine_v(l, r).eps[0]) / 2.0;
        CHECK(std::abs(pv - oracle.p_v0) <= 1e-12);
        double pu0 = (1.0 + combine_u(l, r, BitVec{0}).eps[0]) / 2.0;
        double pu1 = (1.0 + combine_u(l, r, BitVec{1}).eps[0]) / 2.0;
        CHECK(std::abs(pu0 - oracle.p_u0_given_v0) <= 1e-12);
        CHECK(std::abs(pu1 - oracle.p_u0_given_v1) <= 1e-12);
    }
}

TEST_CASE("combines stay sane under near-saturated evidence") {
    TrialRng rng(103, 0);
    int mismatches = 0;
    for (int i = 0; i < 20000; ++i) {
        double yu = 8.0 * (rng.next_unit() - 0.5);
        double yuv = 8.0 * (rng.next_unit() - 0.5);
        double sigma = 0.45 + 2.0 * rng.next_unit();
        auto params = ChannelParams::from_sigma(sigma);
        auto ev = to_evidence({yu, yuv}, params);
        Evidence l{{ev.eps[0]}}, r{{ev.eps[1]}};
        auto oracle = bayes_posterior_pair(yu, yuv, sigma);
        double pv = (1.0 + combine_v(l, r).eps[0]) / 2.0;
        double pu0 = (1.0 + combine_u(l, r, BitVec{0}).eps[0]) / 2.0;
        CHECK(std::isfinite(pv));
        CHECK(std::isfinite(pu0));
        CHECK(std::abs(pv - oracle.p_v0) <= 1e-9);
        // Once both inputs saturate to +/-1 exactly, the distinction between
        // the contradictory hypotheses is gone and the combine returns an
        // erasure while the log-domain oracle still resolves it.
        if (std::abs(pu0 - oracle.p_u0_given_v0) > 1e-9) {
            ++mismatches;
            CHECK(std::min(std::abs(ev.eps[0]), std::abs(ev.eps[1])) > 1.0 - 1e-9);
        }
    }
    CHECK(mismatches < 20000 / 10);
}

TEST_CASE("combine_u equals the tanh-sum recalculation") {
    TrialRng rng(102, 0);
    for (int i = 0; i < 20000; ++i) {
        double yu = 4.4 * (rng.next_unit() - 0.5);
        double yuv = 4.4 * (rng.next_unit() - 0.5);
        double sigma = 1.0 + rng.next_unit();
        int vbit = static_cast<int>(rng.next_u64() & 1);
        auto params = ChannelParams::from_sigma(sigma);
        auto ev = to_evidence({yu, yuv}, params);
        double got =
            combine_u(Evidence{{ev.eps[0]}}, Evidence{{ev.eps[1]}}, BitVec{static_cast<std::uint8_t>(vbit)})
                .eps[0];
        double want = std::tanh(2.0 * yu / (sigma * sigma) +
                                (vbit ? -1.0 : 1.0) * 2.0 * yuv / (sigma * sigma));
        CHECK(std::abs(got - want) <= 1e-12);
    }
}

TEST_CASE("repetition leaf") {
    auto both = decode_leaf_repetition(Evidence{{0.8, 0.8}});
    REQUIRE(both.size() == 2);
    CHECK(both[0].payload == BitVec{0});
    CHECK(both[0].cost == doctest::Approx(2 * std::log(0.9)).epsilon(1e-12));
    CHECK(both[1].cost == doctest::Approx(2 * std::log(0.1)).epsilon(1e-12));

    auto tied = decode_leaf_repetition(Evidence{{0.0, 0.0, 0.0, 0.0}});
    CHECK(tied[0].payload == BitVec{0});  // tie keeps the smaller payload first
    CHECK(tied[0].cost == doctest::Approx(4 * std::log(0.5)).epsilon(1e-12));
    CHECK(tied[1].cost == tied[0].cost);

    auto certain = decode_leaf_repetition(Evidence{{1.0}});
    CHECK(certain[0].cost == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(certain[1].cost < -30.0);
    CHECK(std::isfinite(certain[1].cost));

    auto frozen = decode_leaf_repetition(Evidence{{-0.9, -0.9}}, 1);
    REQUIRE(frozen.size() == 1);
    CHECK(frozen[0].payload == BitVec{0});
}

TEST_CASE("biorthogonal leaf equals exhaustive ranking") {
    for (int j = 2; j <= 6; ++j) {
        TrialRng rng(200 + static_cast<std::uint64_t>(j), 0);
        const std::size_t n = std::size_t{1} << j;
        for (int trial = 0; trial < (j <= 4 ? 200 : 60); ++trial) {
            auto ev = random_evidence(rng, n);
            auto ref = testo::ref_biorthogonal(ev.eps);
            auto got = decode_leaf_biorthogonal(ev, static_cast<int>(2 * n));
            check_matches_reference(got, ref, 2 * n);
        }
    }
}

TEST_CASE("biorthogonal leaf edge cases") {
    auto t = make_leaf(NodeKind::LeafBiorthogonal, 3);
    BitVec payload{1, 0, 1, 1};
    auto cw = encode(t, payload);
    auto top = decode_leaf_biorthogonal(noiseless(cw), 3);
    CHECK(top[0].payload == payload);
    CHECK(top[0].cost == doctest::Approx(0.0).epsilon(1e-9));

    auto erased = decode_leaf_biorthogonal(Evidence{std::vector<double>(8, 0.0)}, 99);
    CHECK(erased.size() == 16);
    for (const auto& c : erased) CHECK(c.cost == doctest::Approx(8 * std::log(0.5)).epsilon(1e-12));
    // Ties come out in payload-lex order.
    for (std::size_t i = 1; i < erased.size(); ++i)
        CHECK(lex_less(erased[i - 1].payload, erased[i].payload));
}

TEST_CASE("biorthogonal freezing restricts to the zero-prefix coset") {
    TrialRng rng(205, 0);
    for (int freeze = 1; freeze <= 4; ++freeze) {
        auto ev = random_evidence(rng, 8);
        auto got = decode_leaf_biorthogonal(ev, 64, freeze);
        auto ref = testo::ref_biorthogonal(ev.eps, freeze);
        CHECK(got.size() == ref.size());
        check_matches_reference(got, ref, ref.size());
        for (const auto& c : got)
            for (int t = 0; t < freeze; ++t) CHECK(c.payload[static_cast<std::size_t>(t)] == 0);
    }
}

TEST_CASE("full-space leaf ordering") {
    auto got = decode_leaf_full(Evidence{{0.5, -0.2}}, 4);
    // Hand enumeration: costs log .45 > log .3 > log .15 > log .1.
    REQUIRE(got.size() == 4);
    CHECK(got[0].payload == BitVec{0, 1});
    CHECK(got[1].payload == BitVec{0, 0});
    CHECK(got[2].payload == BitVec{1, 1});
    CHECK(got[3].payload == BitVec{1, 0});
    CHECK(got[0].cost == doctest::Approx(std::log(0.75) + std::log(0.6)).epsilon(1e-12));

    CHECK(decode_leaf_full(Evidence{{0.5, -0.2}}, 1)[0].payload == BitVec{0, 1});

    TrialRng rng(207, 0);
    for (int trial = 0; trial < 100; ++trial) {
        auto ev = random_evidence(rng, 4);
        auto ref = testo::ref_full(ev.eps);
        auto got16 = decode_leaf_full(ev, 16);
        check_matches_reference(got16, ref, 16);  // exhaustive limit
    }
}

TEST_CASE("full-space leaf with freezing and erasures") {
    auto all = decode_leaf_full(Evidence{std::vector<double>(3 + 1, 0.0)}, 16, 2);
    CHECK(all.size() == 4);  // two free symbols
    for (const auto& c : all) {
        CHECK(c.payload[0] == 0);
        CHECK(c.payload[1] == 0);
    }
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(lex_less(all[i - 1].payload, all[i].payload));
}

TEST_CASE("spc leaf follows the Wagner rule") {
    // Even-parity hard decision survives unchanged.
    auto even = decode_leaf_spc(Evidence{{0.9, 0.8, -0.7, -0.6}}, 1);
    CHECK(even[0].payload == BitVec{0, 0, 1});

    // Odd parity flips the least reliable position.
    auto odd = decode_leaf_spc(Evidence{{0.9, 0.8, -0.1, 0.6}}, 1);
    CHECK(odd[0].payload == BitVec{0, 0, 0});

    TrialRng rng(211, 0);
    for (int j = 2; j <= 4; ++j) {
        const std::size_t n = std::size_t{1} << j;
        for (int trial = 0; trial < 150; ++trial) {
            auto ev = random_evidence(rng, n);
            auto ref = testo::ref_spc(ev.eps);
            auto got = decode_leaf_spc(ev, 8);
            check_matches_reference(got, ref, 8);
        }
    }
}

TEST_CASE("spc leaf full enumeration and freezing") {
    TrialRng rng(212, 0);
    auto ev = random_evidence(rng, 8);
    auto ref = testo::ref_spc(ev.eps);
    auto got = decode_leaf_spc(ev, 1 << 7);
    CHECK(got.size() == 128);  // every even-parity word of length 8
    check_matches_reference(got, ref, 128);

    auto frozen = decode_leaf_spc(ev, 64, 3);
    auto fref = testo::ref_spc(ev.eps, 3);
    CHECK(frozen.size() == 16);
    check_matches_reference(frozen, fref, 99);

    auto fully = decode_leaf_spc(ev, 8, 7);
    REQUIRE(fully.size() == 1);
    CHECK(weight(fully[0].payload) == 0);
}

TEST_CASE("likelihood_of") {
    BitVec cw{0, 1, 1, 0};
    Evidence erased{std::vector<double>(4, 0.0)};
    CHECK(likelihood_of(cw, erased) == doctest::Approx(4 * std::log(0.5)).epsilon(1e-15));
    auto clean = noiseless(cw);
    CHECK(likelihood_of(cw, clean) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(likelihood_of(BitVec{1, 1, 1, 0}, clean) < -30.0);
    CHECK_THROWS_AS(likelihood_of(BitVec{0, 1}, clean), std::invalid_argument);
}

TEST_CASE("noiseless round trip at L = 1 across tree shapes") {
    std::vector<CodeTree> trees;
    trees.push_back(build_rm_tree(4, 2, Termination::Partial));
    trees.push_back(build_rm_tree(4, 2, Termination::Full));
    trees.push_back(build_rm_tree(5, 1, Termination::Partial));
    trees.push_back(build_rm_tree(5, 4, Termination::Partial));
    trees.push_back(build_quad_tree(5, 2, QuadOrdering::Standard));
    trees.push_back(build_quad_tree(5, 2, QuadOrdering::Chained));
    trees.push_back(build_quad_tree(6, 3, QuadOrdering::Chained));
    trees.push_back(apply_freezing(build_rm_tree(5, 2, Termination::Partial), {5, 2}));
    trees.push_back(make_branch(build_rm_tree(3, 1, Termination::Partial),
                                build_rm_tree(3, 2, Termination::Partial)));
    for (const auto& t : trees) {
        TrialRng rng(300, static_cast<std::uint64_t>(t.num_nodes()));
        for (int trial = 0; trial < 20; ++trial) {
            BitVec info;
            rng.fill_bits(info, static_cast<std::size_t>(dimension(t)));
            BitVec cw = encode(t, info);
            auto res = list_decode(t, noiseless(cw), ListSchedule::uniform(1));
            CHECK(res.codeword == cw);
            CHECK(res.info == info);
            CHECK(res.cost == doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("unpruned list decoding is exact ML") {
    struct Case {
        CodeTree tree;
        int L;
        int trials;
    };
    std::vector<Case> cases;
    cases.push_back({build_rm_tree(3, 1, Termination::Partial), 16, 300});
    cases.push_back({build_rm_tree(3, 2, Termination::Partial), 128, 150});
    cases.push_back({build_rm_tree(4, 1, Termination::Partial), 32, 300});
    cases.push_back({build_rm_tree(4, 2, Termination::Full), 2048, 40});
    cases.push_back({build_quad_tree(4, 2, QuadOrdering::Standard), 2048, 40});
    cases.push_back({build_quad_tree(4, 2, QuadOrdering::Chained), 2048, 40});
    cases.push_back({apply_freezing(build_rm_tree(4, 2, Termination::Partial), {4}), 128, 150});
    cases.push_back({make_branch(build_rm_tree(3, 1, Termination::Partial),
                                 build_rm_tree(3, 2, Termination::Partial)),
                     2048, 40});
    for (const auto& c : cases) {
        auto cb = enumerate_codebook(c.tree);
        auto params = ChannelParams::from_sigma(1.0);
        const std::size_t k = static_cast<std::size_t>(dimension(c.tree));
        for (int trial = 0; trial < c.trials; ++trial) {
            TrialRng rng(400 + static_cast<std::uint64_t>(c.tree.num_nodes()),
                         static_cast<std::uint64_t>(trial));
            BitVec info;
            rng.fill_bits(info, k);
            auto y = awgn(modulate(encode(c.tree, info)), params, rng);
            auto ev = to_evidence(y, params);
            auto res = list_decode(c.tree, ev, ListSchedule::uniform(c.L));
            CHECK(res.codeword == ml_decode_exhaustive(cb, ev));
        }
    }
}

TEST_CASE("reported cost equals likelihood_of exactly") {
    auto t = build_rm_tree(4, 2, Termination::Partial);
    auto params = ChannelParams::from_sigma(1.1);
    for (int trial = 0; trial < 100; ++trial) {
        TrialRng rng(500, static_cast<std::uint64_t>(trial));
        BitVec info;
        rng.fill_bits(info, 11);
        auto y = awgn(modulate(encode(t, info)), params, rng);
        auto ev = to_evidence(y, params);
        auto res = list_decode(t, ev, ListSchedule::uniform(4));
        CHECK(res.cost == likelihood_of(res.codeword, ev));
        for (const auto& p : res.list) CHECK(p.cost == likelihood_of(p.codeword, ev));
        // List is ordered best-first.
        for (std::size_t i = 1; i < res.list.size(); ++i)
            CHECK(res.list[i - 1].cost >= res.list[i].cost);
    }
}

TEST_CASE("fully frozen code always decodes to zero") {
    auto t = build_rm_tree(4, 2, Termination::Partial);
    std::vector<int> freeze_all;
    for (int id : t.leaves()) freeze_all.push_back(t.node(id).dim);
    auto frozen = apply_freezing(t, freeze_all);
    CHECK(dimension(frozen) == 0);
    auto params = ChannelParams::from_sigma(0.8);
    for (int trial = 0; trial < 50; ++trial) {
        TrialRng rng(600, static_cast<std::uint64_t>(trial));
        auto y = awgn(std::vector<double>(16, 1.0), params, rng);
        auto res = list_decode(frozen, to_evidence(y, params), ListSchedule::uniform(4));
        CHECK(weight(res.codeword) == 0);
        CHECK(res.info.empty());
    }
}

TEST_CASE("block errors are statistically non-increasing in L") {
    auto t = build_rm_tree(4, 2, Termination::Partial);
    auto params = ChannelParams::from_sigma(0.9);
    const int trials = 12000;
    std::vector<int> ls{1, 2, 4, 8};
    std::vector<int> errors(ls.size(), 0);
    for (int trial = 0; trial < trials; ++trial) {
        TrialRng info_rng(700, static_cast<std::uint64_t>(trial));
        BitVec info;
        info_rng.fill_bits(info, 11);
        BitVec cw = encode(t, info);
        auto y = awgn(modulate(cw), params, info_rng);
        auto ev = to_evidence(y, params);
        for (std::size_t li = 0; li < ls.size(); ++li) {
            auto res = list_decode(t, ev, ListSchedule::uniform(ls[li]));
            errors[li] += res.codeword != cw;
        }
    }
    for (std::size_t li = 1; li < ls.size(); ++li) {
        double p = static_cast<double>(errors[li - 1]) / trials;
        double slack = 3.0 * std::sqrt(trials * p * (1 - p));
        CHECK(static_cast<double>(errors[li]) <= errors[li - 1] + slack);
    }
}

TEST_CASE("per-leaf caps and the variable threshold validator") {
    auto t = build_rm_tree(4, 2, Termination::Partial);
    ListSchedule s;
    s.default_list = 4;
    s.per_leaf = {8, 2};
    s.variable_threshold = true;
    CHECK_NOTHROW(s.validate(t));
    s.per_leaf = {2, 8};
    CHECK_THROWS_AS(s.validate(t), std::invalid_argument);
    s.variable_threshold = false;
    CHECK_NOTHROW(s.validate(t));
    s.per_leaf = {0};
    CHECK_THROWS_AS(s.validate(t), std::invalid_argument);
    s.per_leaf.clear();
    s.default_list = 0;
    CHECK_THROWS_AS(s.validate(t), std::invalid_argument);

    // A wider full-space expansion is accepted and harmless.
    ListSchedule wide = ListSchedule::uniform(2);
    wide.full_leaf_factor = 8;
    auto ft = build_rm_tree(3, 3, Termination::Full);
    BitVec info{1, 0, 1, 1, 0, 0, 1, 0};
    auto res = list_decode(ft, noiseless(encode(ft, info)), wide);
    CHECK(res.info == info);
}

TEST_CASE("evidence validation") {
    auto t = build_rm_tree(3, 1, Termination::Partial);
    Evidence bad{std::vector<double>(8, 1.5)};
    CHECK_THROWS_AS(list_decode(t, bad, ListSchedule::uniform(1)), std::invalid_argument);
    Evidence short_ev{std::vector<double>(4, 0.1)};
    CHECK_THROWS_AS(list_decode(t, short_ev, ListSchedule::uniform(1)), std::invalid_argument);
}

TEST_SUITE_END();
