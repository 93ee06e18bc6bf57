#include "icm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace icm {

namespace {

void check_inputs(const IcmParams& p, std::span<const cplx> y,
                  std::span<const cplx> h, double n0) {
    if (static_cast<int>(y.size()) != p.n || static_cast<int>(h.size()) != p.n)
        throw std::invalid_argument("detect: y and h must have length n");
    if (n0 < 0 || std::isnan(n0))
        throw std::invalid_argument("detect: noise variance must be >= 0");
}

std::uint64_t pack_word(const BitBudget& b, std::uint64_t index_rank,
                        std::uint64_t comp_rank, const std::vector<int>& psk_ranks,
                        int bits_per_symbol) {
    std::uint64_t word = (index_rank << (b.f2 + b.f3)) | (comp_rank << b.f3);
    for (std::size_t j = 0; j < psk_ranks.size(); ++j)
        word |= gray_encode(static_cast<std::uint64_t>(psk_ranks[j]))
                << (b.f3 - static_cast<int>(j + 1) * bits_per_symbol);
    return word;
}

}  // namespace

MlDetector::MlDetector(const IcmParams& p) : params_(p), budget_(bit_budget(p)) {
    if (budget_.f > 24)
        throw std::invalid_argument("MlDetector: codebook too large for exhaustive search");
    const std::uint64_t words = std::uint64_t{1} << budget_.f;
    codebook_.reserve(words);
    for (std::uint64_t w = 0; w < words; ++w)
        codebook_.push_back(encode_block(params_, w));
}

DetectionResult MlDetector::detect(std::span<const cplx> y,
                                   std::span<const cplx> h) const {
    check_inputs(params_, y, h, 0.0);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_word = 0;
    for (std::uint64_t w = 0; w < codebook_.size(); ++w) {
        const Codeword& cw = codebook_[w];
        double metric = 0.0;
        for (int j = 0; j < params_.n; ++j)
            metric += std::norm(y[j] - cw.symbols[j] * h[j]);
        if (metric < best) {  // ties keep the lowest data word
            best = metric;
            best_word = w;
        }
    }
    const Codeword& cw = codebook_[best_word];
    DetectionResult res;
    res.index_set = cw.index_set;
    res.composition = cw.composition;
    res.psk_ranks = cw.psk_ranks;
    res.bits = best_word;
    res.metric_evals = codebook_.size();
    return res;
}

struct LcmlDetector::Workspace {
    std::vector<double> y2;      // |y(n)|^2
    std::vector<double> dist;    // [n][level][psk] candidate distances
    std::vector<double> best_d;  // [n][level] min over PSK hypotheses
    std::vector<int> best_r;     // [n][level] argmin, lowest rank on ties
    std::vector<double> llr;
};

LcmlDetector::LcmlDetector(const IcmParams& p, LlrMode llr_mode)
    : params_(p),
      budget_(bit_budget(p)),
      llr_mode_(llr_mode),
      levels_(p.energy_levels()),
      m_eff_(p.mode == Mode::payload ? p.m : 1) {
    legal_sets_.reserve(std::size_t{1} << budget_.f1);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << budget_.f1); ++r)
        legal_sets_.push_back(unrank_combination(p.n, p.k, r));
    points_.resize(static_cast<std::size_t>(levels_) * m_eff_);
    const double unit = p.total_energy / p.i;
    for (int l = 0; l < levels_; ++l) {
        const int part = l + 1;
        const double amp = std::sqrt(part * unit);
        for (int r = 0; r < m_eff_; ++r)
            points_[static_cast<std::size_t>(l) * m_eff_ + r] =
                params_.mode == Mode::payload
                    ? amp * psk_point(params_.m, r)
                    : std::polar(amp, 2.0 * std::numbers::pi * part / levels_);
    }
}

void LcmlDetector::fill_distances(std::span<const cplx> y, std::span<const cplx> h,
                                  Workspace& ws) const {
    const int per_sub = levels_ * m_eff_;
    ws.y2.resize(params_.n);
    ws.dist.resize(static_cast<std::size_t>(params_.n) * per_sub);
    ws.best_d.assign(static_cast<std::size_t>(params_.n) * levels_,
                     std::numeric_limits<double>::infinity());
    ws.best_r.assign(static_cast<std::size_t>(params_.n) * levels_, 0);
    for (int j = 0; j < params_.n; ++j) {
        ws.y2[j] = std::norm(y[j]);
        for (int l = 0; l < levels_; ++l) {
            double* lvl_best = &ws.best_d[static_cast<std::size_t>(j) * levels_ + l];
            int* lvl_arg = &ws.best_r[static_cast<std::size_t>(j) * levels_ + l];
            for (int r = 0; r < m_eff_; ++r) {
                const double d =
                    std::norm(y[j] - points_[static_cast<std::size_t>(l) * m_eff_ + r] * h[j]);
                ws.dist[(static_cast<std::size_t>(j) * levels_ + l) * m_eff_ + r] = d;
                if (d < *lvl_best) {
                    *lvl_best = d;
                    *lvl_arg = r;
                }
            }
        }
    }
}

void LcmlDetector::compute_llr_values(double n0, Workspace& ws) const {
    ws.llr.resize(params_.n);
    for (int j = 0; j < params_.n; ++j) {
        const double* lvl = &ws.best_d[static_cast<std::size_t>(j) * levels_];
        const double dmin = *std::min_element(lvl, lvl + levels_);
        if (n0 == 0.0) {
            // Noiseless limit: both variants degenerate to the unscaled gap
            // between the null hypothesis and the best active hypothesis.
            ws.llr[j] = ws.y2[j] - dmin;
        } else if (llr_mode_ == LlrMode::approx) {
            ws.llr[j] = (ws.y2[j] - dmin) / n0;
        } else {
            const double* d = &ws.dist[static_cast<std::size_t>(j) * levels_ * m_eff_];
            double sum = 0.0;
            for (int c = 0; c < levels_ * m_eff_; ++c)
                sum += std::exp(-(d[c] - dmin) / n0);
            ws.llr[j] = (ws.y2[j] - dmin) / n0 + std::log(sum);
        }
    }
}

LlrVector LcmlDetector::llr(std::span<const cplx> y, std::span<const cplx> h,
                            double n0) const {
    check_inputs(params_, y, h, n0);
    Workspace ws;
    fill_distances(y, h, ws);
    compute_llr_values(n0, ws);
    return LlrVector{std::move(ws.llr)};
}

DetectionResult LcmlDetector::detect(std::span<const cplx> y,
                                     std::span<const cplx> h, double n0) const {
    check_inputs(params_, y, h, n0);
    Workspace ws;
    fill_distances(y, h, ws);
    compute_llr_values(n0, ws);

    DetectionResult res;
    res.metric_evals =
        static_cast<std::uint64_t>(params_.n) * levels_ * m_eff_;

    // Activate the k subcarriers with the largest LLR; stable sort keeps the
    // lower subcarrier index on ties.
    std::vector<int> order(params_.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&ws](int a, int b) { return ws.llr[a] > ws.llr[b]; });
    std::vector<int> active(order.begin(), order.begin() + params_.k);
    std::sort(active.begin(), active.end());
    IndexSet detected;
    detected.indices.resize(params_.k);
    for (int t = 0; t < params_.k; ++t) detected.indices[t] = active[t] + 1;

    std::uint64_t index_rank = rank_combination(params_.n, params_.k, detected);
    if (index_rank >> budget_.f1) {
        // The pattern has no bit label; fall back to the addressable set with
        // the largest summed LLR (lowest rank on ties).
        double best_score = -std::numeric_limits<double>::infinity();
        std::uint64_t best_rank = 0;
        for (std::uint64_t rk = 0; rk < legal_sets_.size(); ++rk) {
            double score = 0.0;
            for (int idx : legal_sets_[rk].indices) score += ws.llr[idx - 1];
            if (score > best_score) {
                best_score = score;
                best_rank = rk;
            }
        }
        index_rank = best_rank;
        detected = legal_sets_[best_rank];
        for (int t = 0; t < params_.k; ++t) active[t] = detected.indices[t] - 1;
        res.index_repaired = true;
        res.repair_evals += legal_sets_.size();
    }

    // Assign energy levels and symbols greedily in decreasing channel-gain
    // order, spending the remaining energy budget; the last subcarrier takes
    // whatever is left so the parts always sum to i.
    std::vector<int> gain_order = active;
    std::stable_sort(gain_order.begin(), gain_order.end(), [&h](int a, int b) {
        return std::norm(h[a]) > std::norm(h[b]);
    });
    std::vector<int> part_of(params_.n, 0);
    std::vector<int> rank_of(params_.n, 0);
    int remaining = params_.i;
    for (int t = 0; t < params_.k; ++t) {
        const int j = gain_order[t];
        const int lo = t + 1 == params_.k ? remaining : 1;
        const int hi = t + 1 == params_.k ? remaining
                                          : remaining - (params_.k - 1 - t);
        double best = std::numeric_limits<double>::infinity();
        int best_part = lo;
        for (int part = lo; part <= hi; ++part) {
            const double d = ws.best_d[static_cast<std::size_t>(j) * levels_ + part - 1];
            if (d < best) {
                best = d;
                best_part = part;
            }
        }
        part_of[j] = best_part;
        rank_of[j] = ws.best_r[static_cast<std::size_t>(j) * levels_ + best_part - 1];
        remaining -= best_part;
    }

    Composition comp;
    comp.parts.resize(params_.k);
    std::vector<int> psk_ranks(params_.mode == Mode::payload ? params_.k : 0);
    for (int t = 0; t < params_.k; ++t) {
        comp.parts[t] = part_of[active[t]];
        if (params_.mode == Mode::payload) psk_ranks[t] = rank_of[active[t]];
    }

    std::uint64_t comp_rank = rank_composition(params_.i, params_.k, comp);
    if (comp_rank >> budget_.f2) {
        // Unlabeled composition: rescore every addressable one against the
        // cached distances, keeping the detected constellation points.
        double best = std::numeric_limits<double>::infinity();
        std::uint64_t best_rank = 0;
        Composition best_comp;
        for (std::uint64_t rk = 0; rk < (std::uint64_t{1} << budget_.f2); ++rk) {
            Composition cand = unrank_composition(params_.i, params_.k, rk);
            double metric = 0.0;
            for (int t = 0; t < params_.k; ++t) {
                const int j = active[t];
                metric += ws.dist[(static_cast<std::size_t>(j) * levels_ +
                                   cand.parts[t] - 1) * m_eff_ + rank_of[j]];
            }
            if (metric < best) {
                best = metric;
                best_rank = rk;
                best_comp = std::move(cand);
            }
        }
        comp_rank = best_rank;
        comp = std::move(best_comp);
        res.composition_repaired = true;
        res.repair_evals += std::uint64_t{1} << budget_.f2;
    }

    res.index_set = std::move(detected);
    res.composition = std::move(comp);
    res.bits = pack_word(budget_, index_rank, comp_rank, psk_ranks,
                         params_.bits_per_psk_symbol());
    res.psk_ranks = std::move(psk_ranks);
    return res;
}

DetectionResult detect_ml(const IcmParams& p, std::span<const cplx> y,
                          std::span<const cplx> h, double n0) {
    (void)n0;  // the minimum-distance rule does not depend on the noise level
    return MlDetector(p).detect(y, h);
}

DetectionResult detect_lcml(const IcmParams& p, std::span<const cplx> y,
                            std::span<const cplx> h, double n0) {
    return LcmlDetector(p).detect(y, h, n0);
}

LlrVector compute_llr(const IcmParams& p, std::span<const cplx> y,
                      std::span<const cplx> h, double n0, bool exact) {
    return LcmlDetector(p, exact ? LlrMode::exact : LlrMode::approx).llr(y, h, n0);
}

}  // namespace icm
