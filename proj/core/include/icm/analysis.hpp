#ifndef ICM_ANALYSIS_HPP
#define ICM_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "icm/channel.hpp"
#include "icm/codec.hpp"

namespace icm {

/// One ordered pairwise error event, transmitting word_i and deciding word_j.
struct PairwiseTerm {
    std::uint64_t word_i = 0;
    std::uint64_t word_j = 0;
    double pep = 0.0;
    int bit_diff = 0;
};

/// BER bound evaluated on an SNR grid.
struct BoundCurve {
    std::vector<double> snr_db;
    std::vector<double> ber;
};

/// Rayleigh-average pairwise error probability in closed form, using the
/// two-exponential upper approximation of the Gaussian tail:
///   (1/12) prod_n (1 + d_n/(4 N0))^-1 + (1/4) prod_n (1 + d_n/(3 N0))^-1
/// with d_n = |x_i(n) - x_j(n)|^2. Requires N0 > 0.
double pep_closed_form(std::span<const cplx> xi, std::span<const cplx> xj,
                       double n0);
double pep_closed_form(const Codeword& a, const Codeword& b, double n0);

/// Same quantity estimated by averaging Q(sqrt(||diag(xi-xj) h||^2/(2 N0)))
/// over `trials` independent channel draws.
double pep_monte_carlo(std::span<const cplx> xi, std::span<const cplx> xj,
                       double n0, std::uint64_t trials, std::uint64_t seed);

/// Union bound on the average BER: (1/(f 2^f)) sum_{i != j} PEP(i->j) D(i->j),
/// clipped to 0.5. Exhaustive over the used codebook, so f is capped at 14.
BoundCurve union_bound_ber(const IcmParams& p, const std::vector<double>& snr_db,
                           SnrRef reference);

/// Every ordered pairwise term at one noise level. Exhaustive; f capped at 8.
std::vector<PairwiseTerm> pairwise_terms(const IcmParams& p, double n0);

}  // namespace icm

#endif
