#ifndef ICM_HARNESS_HPP
#define ICM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icm/analysis.hpp"
#include "icm/channel.hpp"
#include "icm/codec.hpp"
#include "icm/detect.hpp"

namespace icm {

enum class DetectorKind { ml, lcml };
enum class BaselineKind { ofdm_im, ofdm };
enum class StopReason { error_target, bit_budget };
enum class EmitFormat { csv, json };

/// Full description of one Monte Carlo sweep. Two configs with equal fields
/// (workers aside) produce byte-identical CSV output.
struct SimConfig {
    IcmParams params;
    DetectorKind detector = DetectorKind::ml;
    LlrMode llr_mode = LlrMode::exact;  ///< used by the lcml detector only
    std::vector<double> snr_db;
    SnrRef snr_reference = SnrRef::per_symbol;
    std::uint64_t min_bit_errors = 100;  ///< a point stops once it has this many
    std::uint64_t max_bits = 1'000'000;  ///< hard per-point bit budget
    std::uint64_t seed = 1;
    std::uint64_t blocks_per_batch = 256;  ///< deterministic work unit
    int workers = 1;                       ///< 0 = all hardware threads
    std::string scheme;                    ///< row label; empty = derived from params

    void validate() const;
};

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t metric_evals_total = 0;
    double elapsed_seconds = 0.0;
    StopReason stop_reason = StopReason::bit_budget;  ///< which rule bound
};

struct SweepResult {
    SimConfig config;
    std::vector<BerPoint> points;
    std::string source = "sim";  ///< "sim" or "bound"
    std::uint64_t config_hash = 0;
    std::string version;
};

/// One CSV record, typed for lossless round-trips.
struct CsvRow {
    std::string scheme;
    int n = 0;
    int k = 0;
    int i = 0;
    int m = 0;
    std::string mode;
    std::string detector;
    double snr_db = 0.0;
    std::string snr_ref;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t seed = 0;
    std::string source;

    bool operator==(const CsvRow&) const = default;
};

std::string scheme_label(const IcmParams& p);
std::string detector_name(DetectorKind d);
std::string mode_name(Mode m);
std::string snr_ref_name(SnrRef r);

/// Accepts "start:step:stop" (inclusive, dB), a single value, or "inf".
std::vector<double> parse_snr_grid(const std::string& text);

/// FNV-1a over the canonical config serialization. The worker count is
/// excluded because it cannot change the results.
std::uint64_t config_hash(const SimConfig& cfg);

std::string library_version();

/// Monte Carlo BER sweep: per SNR point, draw f-bit words, encode, push
/// through fading + noise, detect, and count errors until a stopping rule
/// fires. Deterministic for a fixed (config, seed) at any worker count.
SweepResult run_sweep(const SimConfig& cfg);

/// The same engine on the collapsed parameterizations i=k (subset modulation
/// only) or i=k=n (every subcarrier active).
SweepResult run_baselines(const SimConfig& cfg, BaselineKind kind);

/// Union-bound BER curve packaged in the sweep schema (source = "bound").
SweepResult run_bound(const SimConfig& cfg);

std::vector<CsvRow> to_csv_rows(const SweepResult& r);
std::string emit_csv(const SweepResult& r);
std::string emit_json(const SweepResult& r);
void emit(const SweepResult& r, EmitFormat format, const std::string& path);
std::vector<CsvRow> parse_sweep_csv(const std::string& text);

}  // namespace icm

#endif
