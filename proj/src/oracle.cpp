#include "rmx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rmx/decoder.hpp"
#include "rmx/encoder.hpp"

namespace rmx {

Codebook enumerate_codebook(const CodeTree& tree) {
    const int k = tree.dimension_effective();
    if (k > kCodebookGuard)
        throw std::invalid_argument("enumerate_codebook: effective dimension " +
                                    std::to_string(k) + " exceeds the guard of " +
                                    std::to_string(kCodebookGuard) +
                                    "; refusing to enumerate 2^" + std::to_string(k) +
                                    " codewords");
    Codebook cb;
    cb.k_eff = k;
    const std::size_t total = std::size_t{1} << k;
    cb.codewords.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx)
        cb.codewords.push_back(encode(tree, cb.info_of(idx)));
    return cb;
}

std::size_t ml_decode_index(const Codebook& cb, const Evidence& ev) {
    if (cb.codewords.empty()) throw std::invalid_argument("ml_decode_index: empty codebook");
    const std::size_t n = ev.size();
    if (cb.codewords[0].size() != n)
        throw std::invalid_argument("ml_decode_index: evidence length mismatch");
    std::vector<double> lp0(n), lp1(n);
    for (std::size_t i = 0; i < n; ++i) {
        lp0[i] = log_posterior(ev.eps[i], 0);
        lp1[i] = log_posterior(ev.eps[i], 1);
    }
    std::size_t best = 0;
    double best_cost = 0.0;
    for (std::size_t idx = 0; idx < cb.codewords.size(); ++idx) {
        const BitVec& cw = cb.codewords[idx];
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) cost += cw[i] ? lp1[i] : lp0[i];
        // Strictly-better wins; on an exact tie the earlier index stays, and
        // index order is info-lex order.
        if (idx == 0 || cost > best_cost) {
            best = idx;
            best_cost = cost;
        }
    }
    return best;
}

const BitVec& ml_decode_exhaustive(const Codebook& cb, const Evidence& ev) {
    return cb.codewords[ml_decode_index(cb, ev)];
}

namespace {

// Likelihood scale matching eps = tanh(2y/sigma^2): Gaussian with variance
// sigma^2/2 around +/-1.
inline double log_lik(double y, int bit, double sigma) {
    double s = bit ? -1.0 : 1.0;
    return -(y - s) * (y - s) / (sigma * sigma);
}

}  // namespace

PosteriorPair bayes_posterior_pair(double y_u, double y_uv, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("bayes_posterior_pair: sigma must be > 0");
    // Joint weights of the four hypotheses, normalized via the max exponent.
    double w[2][2];  // [u][v]
    double mx = -std::numeric_limits<double>::infinity();
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
            w[u][v] = log_lik(y_u, u, sigma) + log_lik(y_uv, u ^ v, sigma);
            mx = std::max(mx, w[u][v]);
        }
    double z = 0.0;
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
            w[u][v] = std::exp(w[u][v] - mx);
            z += w[u][v];
        }
    PosteriorPair out;
    out.p_v0 = (w[0][0] + w[1][0]) / z;
    out.p_u0_given_v0 = w[0][0] / (w[0][0] + w[1][0]);
    out.p_u0_given_v1 = w[0][1] / (w[0][1] + w[1][1]);
    return out;
}

double bayes_posterior_single(double y, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("bayes_posterior_single: sigma must be > 0");
    double l0 = log_lik(y, 0, sigma);
    double l1 = log_lik(y, 1, sigma);
    double mx = std::max(l0, l1);
    double e0 = std::exp(l0 - mx);
    double e1 = std::exp(l1 - mx);
    return e0 / (e0 + e1);
}

}  // namespace rmx
