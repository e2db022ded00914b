#include "rmx/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rmx/encoder.hpp"

namespace rmx {

double q_function(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

FirstBitEstimates theoretical_first_bits(int m, int r, double sigma) {
    if (r < 1 || r > m) throw std::invalid_argument("theoretical_first_bits: needs 1 <= r <= m");
    if (!(sigma > 0.0)) throw std::invalid_argument("theoretical_first_bits: sigma must be > 0");
    double s_half = std::pow(sigma, -std::exp2(static_cast<double>(r - 1)));
    double s_full = std::pow(sigma, -std::exp2(static_cast<double>(r)));
    FirstBitEstimates e;
    e.p1 = q_function(std::pow(2.0, 0.5 * (m - r)) * s_half);
    e.p2 = q_function(std::pow(2.0, 0.5 * (m - r + 1)) * s_half);
    e.p_old = q_function(std::pow(2.0, 0.5 * (m - r)) * s_full);
    return e;
}

const char* convention_name(SnrConvention c) {
    switch (c) {
        case SnrConvention::EbN0: return "ebno_db";
        case SnrConvention::EsN0: return "esno_db";
        case SnrConvention::Sigma: return "sigma";
    }
    return "?";
}

void SimConfig::validate() const {
    if (!tree) throw std::invalid_argument("sim: no code tree");
    if (grid.empty()) throw std::invalid_argument("sim: empty SNR grid");
    if (list_sizes.empty()) throw std::invalid_argument("sim: empty list-size set");
    for (int L : list_sizes)
        if (L < 1) throw std::invalid_argument("sim: list size must be >= 1");
    if (max_trials < 1) throw std::invalid_argument("sim: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("sim: workers must be >= 1");
    if (convention == SnrConvention::EbN0 && tree->dimension_effective() == 0)
        throw std::invalid_argument("sim: Eb/N0 grid needs k_eff > 0 (rate is zero)");
}

ChannelParams SimConfig::params_for(double grid_value) const {
    switch (convention) {
        case SnrConvention::EbN0: {
            double rate = static_cast<double>(tree->dimension_effective()) / tree->length();
            return ChannelParams::from_ebno_db(grid_value, rate);
        }
        case SnrConvention::EsN0: return ChannelParams::from_esno_db(grid_value);
        case SnrConvention::Sigma: return ChannelParams::from_sigma(grid_value);
    }
    throw std::logic_error("sim: bad convention");
}

ListSchedule SimConfig::schedule_for(int list_size) const {
    ListSchedule s;
    s.default_list = list_size;
    s.per_leaf = per_leaf_list;
    s.variable_threshold = variable_threshold;
    s.leaf_factor = leaf_factor;
    s.full_leaf_factor = full_leaf_factor;
    return s;
}

namespace {

struct Tally {
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t ml_dominance = 0;

    void operator+=(const Tally& o) {
        bit_errors += o.bit_errors;
        block_errors += o.block_errors;
        ml_dominance += o.ml_dominance;
    }
};

Tally run_trials(const SimConfig& cfg, const ChannelParams& params, const ListSchedule& sched,
                 std::uint64_t first, std::uint64_t last) {
    const CodeTree& tree = *cfg.tree;
    const std::size_t k = static_cast<std::size_t>(tree.dimension_effective());
    Tally t;
    BitVec info;
    for (std::uint64_t trial = first; trial < last; ++trial) {
        TrialRng rng(cfg.seed, trial);
        if (cfg.all_zero) info.assign(k, 0);
        else rng.fill_bits(info, k);
        BitVec cw = encode(tree, info);
        std::vector<double> y = awgn(modulate(cw), params, rng);
        Evidence ev = to_evidence(y, params);
        DecodeResult res = list_decode(tree, ev, sched);
        if (res.codeword != cw) {
            ++t.block_errors;
            for (std::size_t i = 0; i < k; ++i) t.bit_errors += info[i] ^ res.info[i];
            if (res.cost > likelihood_of(cw, ev)) ++t.ml_dominance;
        }
    }
    return t;
}

// Chunk width is fixed so the early-stop decision depends only on trial-index
// prefixes, never on the worker count.
constexpr std::uint64_t kChunk = 1024;

}  // namespace

SimRecord run_point(const SimConfig& cfg, double grid_value, int list_size) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const ChannelParams params = cfg.params_for(grid_value);
    const ListSchedule sched = cfg.schedule_for(list_size);
    sched.validate(*cfg.tree);

    Tally total;
    std::uint64_t done = 0;
    while (done < cfg.max_trials) {
        std::uint64_t end = std::min(done + kChunk, cfg.max_trials);
        if (cfg.workers == 1) {
            total += run_trials(cfg, params, sched, done, end);
        } else {
            const std::uint64_t span = end - done;
            const std::uint64_t width =
                (span + static_cast<std::uint64_t>(cfg.workers) - 1) / cfg.workers;
            std::vector<Tally> parts(static_cast<std::size_t>(cfg.workers));
            std::vector<std::thread> pool;
            for (int w = 0; w < cfg.workers; ++w) {
                std::uint64_t a = done + width * static_cast<std::uint64_t>(w);
                std::uint64_t b = std::min(a + width, end);
                if (a >= b) break;
                pool.emplace_back([&, a, b, w] {
                    parts[static_cast<std::size_t>(w)] = run_trials(cfg, params, sched, a, b);
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& p : parts) total += p;
        }
        done = end;
        if (cfg.target_block_errors > 0 && total.block_errors >= cfg.target_block_errors) break;
    }

    SimRecord rec;
    rec.code_id = cfg.code_id;
    rec.n = cfg.tree->length();
    rec.k_eff = cfg.tree->dimension_effective();
    rec.list_size = list_size;
    rec.snr_db = grid_value;
    rec.sigma = params.sigma;
    rec.ebno_db = rec.k_eff > 0
                      ? params.ebno_db(static_cast<double>(rec.k_eff) / rec.n)
                      : -std::numeric_limits<double>::infinity();
    rec.trials = done;
    rec.bit_errors = total.bit_errors;
    rec.block_errors = total.block_errors;
    rec.ml_dominance_count = total.ml_dominance;
    rec.ber = rec.k_eff > 0 ? static_cast<double>(total.bit_errors) /
                                  (static_cast<double>(done) * rec.k_eff)
                            : 0.0;
    rec.bler = static_cast<double>(total.block_errors) / static_cast<double>(done);
    rec.ml_lb_bler = static_cast<double>(total.ml_dominance) / static_cast<double>(done);
    rec.seed = cfg.seed;
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::vector<SimRecord> sweep(const SimConfig& cfg) {
    cfg.validate();
    std::vector<SimRecord> out;
    out.reserve(cfg.grid.size() * cfg.list_sizes.size());
    for (double gv : cfg.grid)
        for (int L : cfg.list_sizes) out.push_back(run_point(cfg, gv, L));
    return out;
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

std::string csv_header() {
    return "code_id,n,k_eff,L,snr_db,ebno_db,sigma,trials,bit_errors,block_errors,"
           "ml_dominance_count,ber,bler,ml_lb_bler,seed";
}

std::string csv_line(const SimRecord& r) {
    std::string s;
    s += r.code_id;
    s += ',' + std::to_string(r.n);
    s += ',' + std::to_string(r.k_eff);
    s += ',' + std::to_string(r.list_size);
    s += ',' + fmt("%.8g", r.snr_db);
    s += ',' + fmt("%.8g", r.ebno_db);
    s += ',' + fmt("%.10g", r.sigma);
    s += ',' + std::to_string(r.trials);
    s += ',' + std::to_string(r.bit_errors);
    s += ',' + std::to_string(r.block_errors);
    s += ',' + std::to_string(r.ml_dominance_count);
    s += ',' + fmt("%.10e", r.ber);
    s += ',' + fmt("%.10e", r.bler);
    s += ',' + fmt("%.10e", r.ml_lb_bler);
    s += ',' + std::to_string(r.seed);
    return s;
}

void write_csv(std::ostream& out, const SimConfig& cfg, const std::vector<SimRecord>& records,
               const std::vector<std::string>& extra_comments) {
    out << "# rmx sweep\n";
    out << "# code: " << cfg.code_id << " n=" << cfg.tree->length()
        << " k_eff=" << cfg.tree->dimension_effective() << "\n";
    out << "# snr_convention: " << convention_name(cfg.convention) << "\n";
    out << "# stop: max_trials=" << cfg.max_trials
        << " target_block_errors=" << cfg.target_block_errors << "\n";
    out << "# seed: " << cfg.seed << "\n";
    for (const auto& c : extra_comments) out << "# " << c << "\n";
    out << csv_header() << "\n";
    for (const auto& r : records) out << csv_line(r) << "\n";
}

}  // namespace rmx
