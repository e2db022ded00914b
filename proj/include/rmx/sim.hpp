#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "rmx/channel.hpp"
#include "rmx/code_tree.hpp"
#include "rmx/decoder.hpp"

namespace rmx {

// Gaussian tail Q(x) = integral_x^inf exp(-u^2/2)/sqrt(2*pi) du.
double q_function(double x);

// Asymptotic output-BER estimates for the first decoded bits of {m, r}:
//   p1    = Q(2^{(m-r)/2}   * sigma^{-2^{r-1}})   worst (leftmost) node
//   p2    = Q(2^{(m-r+1)/2} * sigma^{-2^{r-1}})   next node
//   p_old = Q(2^{(m-r)/2}   * sigma^{-2^r})       earlier recursive schemes
// Valid as m -> infinity; emitted as annotations, not fitted predictions.
struct FirstBitEstimates {
    double p1, p2, p_old;
};
FirstBitEstimates theoretical_first_bits(int m, int r, double sigma);

enum class SnrConvention { EbN0, EsN0, Sigma };
const char* convention_name(SnrConvention c);

struct SimConfig {
    std::shared_ptr<const CodeTree> tree;
    std::string code_id = "code";
    std::vector<double> grid;  // dB values, or sigma values under Sigma
    SnrConvention convention = SnrConvention::EbN0;
    std::vector<int> list_sizes{1};
    int leaf_factor = 2;
    int full_leaf_factor = 2;
    std::vector<int> per_leaf_list;
    bool variable_threshold = false;
    std::uint64_t max_trials = 10000;
    std::uint64_t target_block_errors = 100;  // 0 disables early stopping
    std::uint64_t seed = 1;
    int workers = 1;
    bool all_zero = false;  // transmit the all-zero codeword (symmetry shortcut)

    void validate() const;
    ChannelParams params_for(double grid_value) const;
    ListSchedule schedule_for(int list_size) const;
};

struct SimRecord {
    std::string code_id;
    int n = 0;
    int k_eff = 0;
    int list_size = 1;
    double snr_db = 0.0;  // the grid value (dB, or sigma under that convention)
    double ebno_db = 0.0;
    double sigma = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t ml_dominance_count = 0;  // wrong AND strictly more likely than sent
    double ber = 0.0;
    double bler = 0.0;
    double ml_lb_bler = 0.0;  // experimental lower bound on ML block error rate
    double wall_time = 0.0;   // seconds; not part of the CSV
    std::uint64_t seed = 0;
};

// One grid point. Every trial is a pure function of (seed, trial index):
// draw info bits, encode, modulate, add noise, decode, tally. Trials run in
// fixed-size chunks split across workers; early stopping is evaluated only at
// chunk boundaries on trial-index prefixes, so the result is byte-identical
// for any worker count.
SimRecord run_point(const SimConfig& cfg, double grid_value, int list_size);

// All grid points x list sizes, grid-major.
std::vector<SimRecord> sweep(const SimConfig& cfg);

// CSV with a commented preamble (code, convention, stopping rule, seed) plus
// any extra caller-supplied comment lines; deterministic byte-for-byte.
void write_csv(std::ostream& out, const SimConfig& cfg, const std::vector<SimRecord>& records,
               const std::vector<std::string>& extra_comments = {});
std::string csv_header();
std::string csv_line(const SimRecord& r);

}  // namespace rmx
