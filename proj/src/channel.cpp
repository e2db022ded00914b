#include "rmx/channel.hpp"

namespace rmx {

std::vector<double> modulate(const BitVec& cw) {
    std::vector<double> x(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i) x[i] = cw[i] ? -1.0 : 1.0;
    return x;
}

std::vector<double> awgn(const std::vector<double>& x, const ChannelParams& params,
                         TrialRng& rng) {
    if (!(params.sigma > 0.0)) throw std::invalid_argument("awgn: sigma must be > 0");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + params.sigma * rng.next_gaussian();
    return y;
}

Evidence to_evidence(const std::vector<double>& y, const ChannelParams& params) {
    if (!(params.sigma > 0.0)) throw std::invalid_argument("to_evidence: sigma must be > 0");
    const double scale = 2.0 / (params.sigma * params.sigma);
    Evidence ev;
    ev.eps.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ev.eps[i] = std::tanh(scale * y[i]);
    return ev;
}

Evidence bsc_evidence(double p, const BitVec& received) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc_evidence: p must be in [0,1]");
    const double mag = 2.0 * p - 1.0;
    Evidence ev;
    ev.eps.resize(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) ev.eps[i] = received[i] ? -mag : mag;
    return ev;
}

}  // namespace rmx
