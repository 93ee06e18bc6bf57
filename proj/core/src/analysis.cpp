#include "icm/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "icm/rng.hpp"

namespace icm {

namespace {

double gaussian_tail(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

void check_pair(std::span<const cplx> xi, std::span<const cplx> xj, double n0) {
    if (xi.size() != xj.size())
        throw std::invalid_argument("pep: codeword lengths differ");
    if (!(n0 > 0))
        throw std::invalid_argument("pep: noise variance must be > 0");
}

/// Closed form over the nonzero squared symbol differences.
double pep_from_diffs(const double* d, int count, double n0) {
    double p4 = 1.0, p3 = 1.0;
    for (int t = 0; t < count; ++t) {
        p4 /= 1.0 + d[t] / (4.0 * n0);
        p3 /= 1.0 + d[t] / (3.0 * n0);
    }
    return p4 / 12 + p3 / 4;
}

}  // namespace

double pep_closed_form(std::span<const cplx> xi, std::span<const cplx> xj,
                       double n0) {
    check_pair(xi, xj, n0);
    std::vector<double> d;
    d.reserve(xi.size());
    for (std::size_t t = 0; t < xi.size(); ++t) {
        const double dn = std::norm(xi[t] - xj[t]);
        if (dn > 0) d.push_back(dn);
    }
    return pep_from_diffs(d.data(), static_cast<int>(d.size()), n0);
}

double pep_closed_form(const Codeword& a, const Codeword& b, double n0) {
    return pep_closed_form(std::span<const cplx>(a.symbols),
                           std::span<const cplx>(b.symbols), n0);
}

double pep_monte_carlo(std::span<const cplx> xi, std::span<const cplx> xj,
                       double n0, std::uint64_t trials, std::uint64_t seed) {
    check_pair(xi, xj, n0);
    if (trials == 0) throw std::invalid_argument("pep_monte_carlo: need trials > 0");
    RngStream rng(seed, StreamPurpose::pep, 0);
    long double acc = 0.0L;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double e = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j)
            e += std::norm((xi[j] - xj[j]) * rng.next_cgauss(1.0));
        acc += gaussian_tail(std::sqrt(e / (2.0 * n0)));
    }
    return static_cast<double>(acc / trials);
}

BoundCurve union_bound_ber(const IcmParams& p, const std::vector<double>& snr_db,
                           SnrRef reference) {
    const BitBudget b = bit_budget(p);
    if (b.f > 14)
        throw std::invalid_argument("union_bound_ber: exhaustive bound capped at f <= 14");
    const std::uint64_t words = std::uint64_t{1} << b.f;

    std::vector<std::vector<cplx>> symbols(words);
    for (std::uint64_t w = 0; w < words; ++w)
        symbols[w] = encode_block(p, w).symbols;

    const std::size_t points = snr_db.size();
    std::vector<double> inv4(points), inv3(points);
    std::vector<bool> noiseless(points);
    for (std::size_t s = 0; s < points; ++s) {
        const double n0 = n0_from_snr(p, SnrSpec{snr_db[s], reference});
        noiseless[s] = n0 == 0.0;
        inv4[s] = noiseless[s] ? 0.0 : 1.0 / (4.0 * n0);
        inv3[s] = noiseless[s] ? 0.0 : 1.0 / (3.0 * n0);
    }

    std::vector<long double> acc(points, 0.0L);
    std::vector<double> d(p.n);
    for (std::uint64_t i = 0; i < words; ++i) {
        for (std::uint64_t j = i + 1; j < words; ++j) {
            int nd = 0;
            for (int t = 0; t < p.n; ++t) {
                const double dn = std::norm(symbols[i][t] - symbols[j][t]);
                if (dn > 0) d[nd++] = dn;
            }
            // PEP and Hamming weight are symmetric, so each unordered pair
            // contributes twice.
            const double weight = 2.0 * std::popcount(i ^ j);
            for (std::size_t s = 0; s < points; ++s) {
                if (noiseless[s]) continue;
                double p4 = 1.0, p3 = 1.0;
                for (int t = 0; t < nd; ++t) {
                    p4 /= 1.0 + d[t] * inv4[s];
                    p3 /= 1.0 + d[t] * inv3[s];
                }
                acc[s] += weight * (p4 / 12 + p3 / 4);
            }
        }
    }

    BoundCurve curve;
    curve.snr_db = snr_db;
    curve.ber.resize(points);
    const long double denom =
        static_cast<long double>(b.f) * static_cast<long double>(words);
    for (std::size_t s = 0; s < points; ++s)
        curve.ber[s] = static_cast<double>(std::min(acc[s] / denom, 0.5L));
    return curve;
}

std::vector<PairwiseTerm> pairwise_terms(const IcmParams& p, double n0) {
    const BitBudget b = bit_budget(p);
    if (b.f > 8)
        throw std::invalid_argument("pairwise_terms: exhaustive listing capped at f <= 8");
    const std::uint64_t words = std::uint64_t{1} << b.f;
    std::vector<std::vector<cplx>> symbols(words);
    for (std::uint64_t w = 0; w < words; ++w)
        symbols[w] = encode_block(p, w).symbols;

    std::vector<PairwiseTerm> terms;
    terms.reserve(words * (words - 1));
    for (std::uint64_t i = 0; i < words; ++i)
        for (std::uint64_t j = 0; j < words; ++j) {
            if (i == j) continue;
            PairwiseTerm t;
            t.word_i = i;
            t.word_j = j;
            t.pep = pep_closed_form(std::span<const cplx>(symbols[i]),
                                    std::span<const cplx>(symbols[j]), n0);
            t.bit_diff = std::popcount(i ^ j);
            terms.push_back(t);
        }
    return terms;
}

}  // namespace icm
