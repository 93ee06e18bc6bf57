#ifndef ICM_CHANNEL_HPP
#define ICM_CHANNEL_HPP

#include <span>
#include <vector>

#include "icm/codec.hpp"
#include "icm/rng.hpp"

namespace icm {

/// One frequency-domain block channel: per-subcarrier gains plus the
/// complex-noise variance N0. noise_var == 0 means noiseless.
struct ChannelRealization {
    std::vector<cplx> gains;
    double noise_var = 0.0;
};

enum class SnrRef {
    per_symbol,  ///< Es/N0 with Es the average subcarrier energy
    per_bit,     ///< Eb/N0 with Eb = E_T / f
};

struct SnrSpec {
    double value_db = 0.0;
    SnrRef reference = SnrRef::per_symbol;
};

/// i.i.d. unit-variance Rayleigh-fading gains (CN(0,1) per subcarrier).
std::vector<cplx> draw_channel(int n, RngStream& rng);

/// y = diag(x) h + n with n i.i.d. CN(0, noise_var); no noise drawn when
/// noise_var == 0.
std::vector<cplx> transmit(const Codeword& cw, const ChannelRealization& ch,
                           RngStream& rng);

/// Noise variance realizing the requested SNR for these block parameters.
/// An infinite SNR maps to N0 = 0.
double n0_from_snr(const IcmParams& p, const SnrSpec& s);

}  // namespace icm

#endif
