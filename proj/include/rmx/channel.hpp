#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rmx/bits.hpp"
#include "rmx/rng.hpp"

namespace rmx {

// Per-symbol soft reliability in the tanh domain:
//   eps_i = 2*Pr{bit_i = 0 | observation} - 1, in [-1, 1].
// +1 means certainly 0, -1 certainly 1, 0 an erasure.
struct Evidence {
    std::vector<double> eps;

    Evidence() = default;
    explicit Evidence(std::vector<double> e) : eps(std::move(e)) {}
    std::size_t size() const { return eps.size(); }
    double operator[](std::size_t i) const { return eps[i]; }
};

// Antipodal signaling with unit symbol energy over AWGN of variance sigma^2.
// With code rate R: Eb/N0 = 1/(2*R*sigma^2), Es/N0 = 1/(2*sigma^2).
struct ChannelParams {
    double sigma = 1.0;

    static ChannelParams from_sigma(double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("channel: sigma must be > 0");
        return ChannelParams{sigma};
    }
    static ChannelParams from_ebno_db(double ebno_db, double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("channel: Eb/N0 needs rate > 0");
        double ebno = std::pow(10.0, ebno_db / 10.0);
        return from_sigma(std::sqrt(1.0 / (2.0 * rate * ebno)));
    }
    static ChannelParams from_esno_db(double esno_db) {
        double esno = std::pow(10.0, esno_db / 10.0);
        return from_sigma(std::sqrt(1.0 / (2.0 * esno)));
    }
    double esno_db() const { return 10.0 * std::log10(1.0 / (2.0 * sigma * sigma)); }
    double ebno_db(double rate) const {
        return 10.0 * std::log10(1.0 / (2.0 * rate * sigma * sigma));
    }
};

// bit 0 -> +1.0, bit 1 -> -1.0
std::vector<double> modulate(const BitVec& cw);

// y_i = x_i + z_i with z_i i.i.d. N(0, sigma^2) drawn from the trial stream.
std::vector<double> awgn(const std::vector<double>& x, const ChannelParams& params,
                         TrialRng& rng);

// eps_i = tanh(2*y_i / sigma^2).
//
// Note on scale: this is the convention the whole recursion is built on.  It
// equals the exact bit posterior for Gaussian noise of variance sigma^2/2;
// for actual variance sigma^2 it doubles every log-likelihood ratio, which
// leaves all decoding decisions and likelihood comparisons unchanged (argmax
// and sign are invariant under a common positive LLR scale).  The Bayes
// reference in the oracle module uses the matching scale so the algebraic
// identities hold exactly.
Evidence to_evidence(const std::vector<double>& y, const ChannelParams& params);

// Binary symmetric channel evidence: p is the probability the received symbol
// is correct; eps_i = +(2p-1) for a received 0, -(2p-1) for a received 1.
Evidence bsc_evidence(double p, const BitVec& received);

}  // namespace rmx
