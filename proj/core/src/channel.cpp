#include "icm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace icm {

std::vector<cplx> draw_channel(int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("draw_channel: n >= 1");
    std::vector<cplx> h(n);
    for (auto& g : h) g = rng.next_cgauss(1.0);
    return h;
}

std::vector<cplx> transmit(const Codeword& cw, const ChannelRealization& ch,
                           RngStream& rng) {
    const std::size_t n = cw.symbols.size();
    if (ch.gains.size() != n) throw std::invalid_argument("transmit: dimension mismatch");
    if (ch.noise_var < 0) throw std::invalid_argument("transmit: negative noise variance");
    std::vector<cplx> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = cw.symbols[j] * ch.gains[j];
        if (ch.noise_var > 0) y[j] += rng.next_cgauss(ch.noise_var);
    }
    return y;
}

double n0_from_snr(const IcmParams& p, const SnrSpec& s) {
    const double lin = std::pow(10.0, -s.value_db / 10.0);  // 0 for +inf dB
    if (s.reference == SnrRef::per_symbol)
        return (p.total_energy / p.n) * lin;
    const int f = bit_budget(p).f;
    if (f == 0) throw std::invalid_argument("n0_from_snr: per-bit reference needs f > 0");
    return (p.total_energy / f) * lin;
}

}  // namespace icm
