#ifndef ICM_SEOPT_HPP
#define ICM_SEOPT_HPP

#include "icm/codec.hpp"

namespace icm {

/// Block-sizing problem in ratio form: activity ratio alpha = k/n is the free
/// variable, beta = i/n fixes the energy budget, and the payload is M-PSK.
struct SeProblem {
    double beta = 0.0;
    int m = 0;
    int n = 0;

    void validate() const;
};

/// Large-n spectral efficiency (bits per subcarrier) at activity ratio alpha.
/// Requires 0 <= alpha <= min(1, beta).
double se_asymptotic(double alpha, double beta, int m);

/// Closed-form maximizer of se_asymptotic over alpha, clamped into the
/// feasible interval.
double alpha_star(double beta, int m);

/// Exact per-block spectral efficiency f/n.
double se_exact(const IcmParams& p);

struct KStarResult {
    int k = 0;       ///< exact argmax of f/n over feasible k (smallest on ties)
    int i = 0;       ///< energy budget round(beta * n) actually used
    double se = 0.0; ///< f/n achieved at k
    int k_seed = 0;  ///< rounded continuous maximizer alpha_star * n
    double alpha = 0.0;  ///< continuous maximizer for the effective beta i/n
};

/// Discretizes the sizing problem at finite n: i = round(beta * n), then an
/// exhaustive scan of k in [1, min(n, i)] for the largest bit budget.
KStarResult k_star(const SeProblem& prob);

}  // namespace icm

#endif
