#ifndef ICM_DETECT_HPP
#define ICM_DETECT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "icm/codec.hpp"

namespace icm {

/// Decoded block plus complexity accounting. metric_evals counts the
/// squared-Euclidean-distance computations of the detection rule itself:
/// one vector distance per candidate codeword for ML, and the
/// n*(i-k+1)*m per-subcarrier distances of the LLR stage for LC-ML (whose
/// later steps reuse that cache). repair_evals counts the extra candidate
/// metrics evaluated when an illegal index set or composition is repaired.
struct DetectionResult {
    IndexSet index_set;
    Composition composition;
    std::vector<int> psk_ranks;
    std::uint64_t bits = 0;
    std::uint64_t metric_evals = 0;
    std::uint64_t repair_evals = 0;
    bool index_repaired = false;
    bool composition_repaired = false;
};

/// Per-subcarrier log-odds of "active with some (symbol, energy)" versus
/// "inactive".
struct LlrVector {
    std::vector<double> values;
};

enum class LlrMode { exact, approx };

/// Exhaustive minimum-distance search over the used sub-codebook.
class MlDetector {
public:
    explicit MlDetector(const IcmParams& p);

    DetectionResult detect(std::span<const cplx> y, std::span<const cplx> h) const;
    std::uint64_t codebook_entries() const { return codebook_.size(); }

private:
    IcmParams params_;
    BitBudget budget_;
    std::vector<Codeword> codebook_;  // indexed by data word
};

/// LLR-ranked low-complexity detector: scores subcarriers, activates the
/// k best, then assigns energies and symbols greedily in channel-gain
/// order under the remaining-energy budget. Outputs are always legal
/// (decodable) codewords.
class LcmlDetector {
public:
    explicit LcmlDetector(const IcmParams& p, LlrMode llr_mode = LlrMode::exact);

    DetectionResult detect(std::span<const cplx> y, std::span<const cplx> h,
                           double n0) const;
    LlrVector llr(std::span<const cplx> y, std::span<const cplx> h, double n0) const;

private:
    struct Workspace;
    void fill_distances(std::span<const cplx> y, std::span<const cplx> h,
                        Workspace& ws) const;
    void compute_llr_values(double n0, Workspace& ws) const;

    IcmParams params_;
    BitBudget budget_;
    LlrMode llr_mode_;
    int levels_;   // distinct energy levels i-k+1
    int m_eff_;    // PSK hypotheses per level (1 in diversity mode)
    std::vector<IndexSet> legal_sets_;  // the 2^f1 addressable index sets
    std::vector<cplx> points_;          // candidate symbol values, [level][psk]
};

DetectionResult detect_ml(const IcmParams& p, std::span<const cplx> y,
                          std::span<const cplx> h, double n0);
DetectionResult detect_lcml(const IcmParams& p, std::span<const cplx> y,
                            std::span<const cplx> h, double n0);
LlrVector compute_llr(const IcmParams& p, std::span<const cplx> y,
                      std::span<const cplx> h, double n0, bool exact);

}  // namespace icm

#endif
