#include "icm/seopt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "icm/combin.hpp"

namespace icm {

namespace {

void check_m(int m) {
    if (m < 2 || !std::has_single_bit(static_cast<unsigned>(m)))
        throw std::invalid_argument("seopt: PSK order must be a power of two >= 2");
}

double xlog2(double x) { return x == 0.0 ? 0.0 : x * std::log2(x); }

}  // namespace

void SeProblem::validate() const {
    check_m(m);
    if (n < 1) throw std::invalid_argument("seopt: need n >= 1");
    if (!(beta > 0)) throw std::invalid_argument("seopt: need beta > 0");
}

double se_asymptotic(double alpha, double beta, int m) {
    check_m(m);
    if (!(beta > 0)) throw std::invalid_argument("seopt: need beta > 0");
    if (alpha < 0 || alpha > 1 || alpha > beta)
        throw std::invalid_argument("seopt: need 0 <= alpha <= min(1, beta)");
    const double entropy = -xlog2(alpha) - xlog2(1.0 - alpha);
    const double comp_bits = xlog2(beta) - xlog2(alpha) - xlog2(beta - alpha);
    return entropy + comp_bits +
           alpha * floor_log2(static_cast<std::uint64_t>(m));
}

double alpha_star(double beta, int m) {
    check_m(m);
    if (!(beta > 0)) throw std::invalid_argument("seopt: need beta > 0");
    const double md = m;
    const double disc = md * md * (beta - 1.0) * (beta - 1.0) + 4.0 * md * beta;
    const double a = (md * (beta + 1.0) - std::sqrt(disc)) / (2.0 * (md - 1.0));
    return std::clamp(a, 0.0, std::min(1.0, beta));
}

double se_exact(const IcmParams& p) { return spectral_efficiency(p); }

KStarResult k_star(const SeProblem& prob) {
    prob.validate();
    KStarResult res;
    res.i = static_cast<int>(std::llround(prob.beta * prob.n));
    if (res.i < 1)
        throw std::invalid_argument("seopt: beta * n rounds to an empty energy budget");

    const int k_max = std::min(prob.n, res.i);
    const int bits_per_symbol = floor_log2(static_cast<std::uint64_t>(prob.m));
    int best_f = -1;
    for (int k = 1; k <= k_max; ++k) {
        const int f = floor_log2_binom(prob.n, k) +
                      floor_log2_binom(res.i - 1, k - 1) + k * bits_per_symbol;
        if (f > best_f) {  // ties keep the smaller k
            best_f = f;
            res.k = k;
        }
    }
    res.se = static_cast<double>(best_f) / prob.n;
    res.alpha = alpha_star(static_cast<double>(res.i) / prob.n, prob.m);
    res.k_seed = std::clamp(static_cast<int>(std::llround(res.alpha * prob.n)),
                            1, k_max);
    return res;
}

}  // namespace icm
