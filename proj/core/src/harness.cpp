#include "icm/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "icm/rng.hpp"
#include "json.hpp"

namespace icm {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kCsvHeader =
    "scheme,n,k,i,m,mode,detector,snr_db,snr_ref,bits,bit_errors,ber,blocks,"
    "block_errors,seed,source";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const char* stop_reason_name(StopReason r) {
    return r == StopReason::error_target ? "error_target" : "bit_budget";
}

std::string effective_scheme(const SimConfig& cfg) {
    return cfg.scheme.empty() ? scheme_label(cfg.params) : cfg.scheme;
}

struct BatchTally {
    std::uint64_t blocks = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t metric_evals = 0;
};

}  // namespace

std::string scheme_label(const IcmParams& p) {
    char buf[64];
    if (p.mode == Mode::payload)
        std::snprintf(buf, sizeof buf, "icm_n%d_k%d_i%d_m%d", p.n, p.k, p.i, p.m);
    else
        std::snprintf(buf, sizeof buf, "icm_n%d_k%d_i%d_div", p.n, p.k, p.i);
    return buf;
}

std::string detector_name(DetectorKind d) {
    return d == DetectorKind::ml ? "ml" : "lcml";
}

std::string mode_name(Mode m) {
    return m == Mode::payload ? "payload" : "diversity";
}

std::string snr_ref_name(SnrRef r) {
    return r == SnrRef::per_symbol ? "es" : "eb";
}

std::vector<double> parse_snr_grid(const std::string& text) {
    const auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("snr grid: cannot parse '" + s + "'");
        }
        if (used != s.size())
            throw std::invalid_argument("snr grid: cannot parse '" + s + "'");
        return v;
    };
    if (text == "inf")
        return {std::numeric_limits<double>::infinity()};
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return {to_double(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw std::invalid_argument("snr grid: expected start:step:stop");
    const double start = to_double(text.substr(0, c1));
    const double step = to_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double stop = to_double(text.substr(c2 + 1));
    if (!(step > 0)) throw std::invalid_argument("snr grid: step must be > 0");
    if (stop < start) throw std::invalid_argument("snr grid: stop is below start");
    std::vector<double> grid;
    for (int t = 0;; ++t) {
        const double v = start + t * step;
        if (v > stop + step * 1e-9) break;
        grid.push_back(v);
    }
    return grid;
}

void SimConfig::validate() const {
    params.validate();
    const BitBudget b = bit_budget(params);
    if (b.f < 1)
        throw std::invalid_argument("config: parameters carry no information bits");
    if (snr_db.empty()) throw std::invalid_argument("config: SNR grid is empty");
    if (min_bit_errors < 1)
        throw std::invalid_argument("config: min_bit_errors must be >= 1");
    if (max_bits < static_cast<std::uint64_t>(b.f))
        throw std::invalid_argument("config: max_bits must cover at least one block");
    if (blocks_per_batch < 1)
        throw std::invalid_argument("config: blocks_per_batch must be >= 1");
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
    if (detector == DetectorKind::ml && b.f > 24)
        throw std::invalid_argument("config: codebook too large for the ml detector");
    for (double v : snr_db)
        if (std::isnan(v)) throw std::invalid_argument("config: SNR grid contains NaN");
}

std::uint64_t config_hash(const SimConfig& cfg) {
    std::ostringstream os;
    const IcmParams& p = cfg.params;
    os << 'v' << kVersion << ";scheme=" << effective_scheme(cfg) << ";n=" << p.n
       << ";k=" << p.k << ";i=" << p.i << ";m=" << p.m
       << ";et=" << fmt_double(p.total_energy) << ";mode=" << mode_name(p.mode)
       << ";det=" << detector_name(cfg.detector)
       << ";llr=" << (cfg.llr_mode == LlrMode::exact ? "exact" : "approx")
       << ";ref=" << snr_ref_name(cfg.snr_reference) << ";snr=";
    for (double v : cfg.snr_db) os << fmt_double(v) << ',';
    os << ";minerr=" << cfg.min_bit_errors << ";maxbits=" << cfg.max_bits
       << ";batch=" << cfg.blocks_per_batch << ";seed=" << cfg.seed;
    return fnv1a64(os.str());
}

std::string library_version() { return kVersion; }

SweepResult run_sweep(const SimConfig& cfg) {
    cfg.validate();
    const IcmParams& p = cfg.params;
    const BitBudget budget = bit_budget(p);
    const std::uint64_t f = budget.f;

    // The encoder table and both detectors are immutable after construction
    // and shared read-only across worker threads.
    std::vector<Codeword> table;
    if (f <= 16) {
        table.reserve(std::uint64_t{1} << f);
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << f); ++w)
            table.push_back(encode_block(p, w));
    }
    const MlDetector* ml = nullptr;
    const LcmlDetector* lc = nullptr;
    std::unique_ptr<MlDetector> ml_store;
    std::unique_ptr<LcmlDetector> lc_store;
    if (cfg.detector == DetectorKind::ml) {
        ml_store = std::make_unique<MlDetector>(p);
        ml = ml_store.get();
    } else {
        lc_store = std::make_unique<LcmlDetector>(p, cfg.llr_mode);
        lc = lc_store.get();
    }

    const std::uint64_t cap_blocks = cfg.max_bits / f;  // >= 1 by validation
    const std::uint64_t batch_size = cfg.blocks_per_batch;
    const std::uint64_t n_batches = (cap_blocks + batch_size - 1) / batch_size;
    if (n_batches >> 32)
        throw std::invalid_argument("config: bit budget needs too many batches");
    int workers = cfg.workers == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : cfg.workers;
    if (workers < 1) workers = 1;

    SweepResult result;
    result.config = cfg;
    result.config_hash = config_hash(cfg);
    result.version = kVersion;
    result.points.reserve(cfg.snr_db.size());

    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const double n0 = n0_from_snr(p, SnrSpec{cfg.snr_db[s], cfg.snr_reference});
        const auto t0 = std::chrono::steady_clock::now();

        const auto run_batch = [&](std::uint64_t batch_idx) {
            const std::uint64_t first = batch_idx * batch_size;
            const std::uint64_t count = std::min(batch_size, cap_blocks - first);
            RngStream rng(cfg.seed, StreamPurpose::sweep,
                          (static_cast<std::uint64_t>(s) << 32) | batch_idx);
            BatchTally tally;
            for (std::uint64_t blk = 0; blk < count; ++blk) {
                const std::uint64_t word = rng.next_bits(static_cast<int>(f));
                const Codeword cw =
                    table.empty() ? encode_block(p, word) : table[word];
                std::vector<cplx> h = draw_channel(p.n, rng);
                ChannelRealization ch{std::move(h), n0};
                const std::vector<cplx> y = transmit(cw, ch, rng);
                const DetectionResult det =
                    ml ? ml->detect(y, ch.gains) : lc->detect(y, ch.gains, n0);
                const int errs = std::popcount(word ^ det.bits);
                tally.blocks += 1;
                tally.bit_errors += errs;
                tally.block_errors += errs > 0;
                tally.metric_evals += det.metric_evals;
            }
            return tally;
        };

        BerPoint pt;
        pt.snr_db = cfg.snr_db[s];
        std::uint64_t next = 0;
        bool stopped = false;
        while (!stopped && next < n_batches) {
            const int lanes = static_cast<int>(
                std::min<std::uint64_t>(workers, n_batches - next));
            std::vector<BatchTally> outs(lanes);
            if (lanes == 1) {
                outs[0] = run_batch(next);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(lanes);
                for (int t = 0; t < lanes; ++t)
                    pool.emplace_back(
                        [&outs, &run_batch, next, t] { outs[t] = run_batch(next + t); });
                for (auto& th : pool) th.join();
            }
            // Reduce in batch order; once a batch crosses a stopping rule the
            // rest of the round is discarded, so results do not depend on the
            // worker count.
            for (int t = 0; t < lanes && !stopped; ++t) {
                pt.blocks += outs[t].blocks;
                pt.bit_errors += outs[t].bit_errors;
                pt.block_errors += outs[t].block_errors;
                pt.metric_evals_total += outs[t].metric_evals;
                stopped = pt.bit_errors >= cfg.min_bit_errors || pt.blocks >= cap_blocks;
            }
            next += lanes;
        }
        pt.bits = pt.blocks * f;
        pt.ber = static_cast<double>(pt.bit_errors) / static_cast<double>(pt.bits);
        pt.stop_reason = pt.bit_errors >= cfg.min_bit_errors
                             ? StopReason::error_target
                             : StopReason::bit_budget;
        pt.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        result.points.push_back(pt);
    }
    return result;
}

SweepResult run_baselines(const SimConfig& cfg, BaselineKind kind) {
    SimConfig c = cfg;
    if (kind == BaselineKind::ofdm) c.params.k = c.params.n;
    c.params.i = c.params.k;
    c.params.validate();
    return run_sweep(c);
}

SweepResult run_bound(const SimConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const BoundCurve curve =
        union_bound_ber(cfg.params, cfg.snr_db, cfg.snr_reference);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
        static_cast<double>(curve.snr_db.size());
    SweepResult result;
    result.config = cfg;
    result.source = "bound";
    result.config_hash = config_hash(cfg);
    result.version = kVersion;
    for (std::size_t s = 0; s < curve.snr_db.size(); ++s) {
        BerPoint pt;
        pt.snr_db = curve.snr_db[s];
        pt.ber = curve.ber[s];
        pt.elapsed_seconds = elapsed;
        result.points.push_back(pt);
    }
    return result;
}

std::vector<CsvRow> to_csv_rows(const SweepResult& r) {
    const IcmParams& p = r.config.params;
    std::vector<CsvRow> rows;
    rows.reserve(r.points.size());
    for (const BerPoint& pt : r.points) {
        CsvRow row;
        row.scheme = effective_scheme(r.config);
        row.n = p.n;
        row.k = p.k;
        row.i = p.i;
        row.m = p.m;
        row.mode = mode_name(p.mode);
        row.detector = r.source == "bound" ? "none" : detector_name(r.config.detector);
        row.snr_db = pt.snr_db;
        row.snr_ref = snr_ref_name(r.config.snr_reference);
        row.bits = pt.bits;
        row.bit_errors = pt.bit_errors;
        row.ber = pt.ber;
        row.blocks = pt.blocks;
        row.block_errors = pt.block_errors;
        row.seed = r.config.seed;
        row.source = r.source;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_csv(const SweepResult& r) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const CsvRow& row : to_csv_rows(r)) {
        os << row.scheme << ',' << row.n << ',' << row.k << ',' << row.i << ','
           << row.m << ',' << row.mode << ',' << row.detector << ','
           << fmt_double(row.snr_db) << ',' << row.snr_ref << ',' << row.bits
           << ',' << row.bit_errors << ',' << fmt_double(row.ber) << ','
           << row.blocks << ',' << row.block_errors << ',' << row.seed << ','
           << row.source << '\n';
    }
    return os.str();
}

std::string emit_json(const SweepResult& r) {
    nlohmann::json j;
    j["version"] = r.version;
    j["config_hash"] = r.config_hash;
    j["source"] = r.source;
    const SimConfig& cfg = r.config;
    j["config"] = {
        {"scheme", effective_scheme(cfg)},
        {"n", cfg.params.n},
        {"k", cfg.params.k},
        {"i", cfg.params.i},
        {"m", cfg.params.m},
        {"total_energy", cfg.params.total_energy},
        {"mode", mode_name(cfg.params.mode)},
        {"detector", detector_name(cfg.detector)},
        {"llr_mode", cfg.llr_mode == LlrMode::exact ? "exact" : "approx"},
        {"snr_db", cfg.snr_db},
        {"snr_ref", snr_ref_name(cfg.snr_reference)},
        {"min_bit_errors", cfg.min_bit_errors},
        {"max_bits", cfg.max_bits},
        {"blocks_per_batch", cfg.blocks_per_batch},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const BerPoint& pt : r.points)
        rows.push_back({
            {"snr_db", pt.snr_db},
            {"bits", pt.bits},
            {"bit_errors", pt.bit_errors},
            {"ber", pt.ber},
            {"blocks", pt.blocks},
            {"block_errors", pt.block_errors},
            {"metric_evals_total", pt.metric_evals_total},
            {"elapsed_seconds", pt.elapsed_seconds},
            {"stop_reason", stop_reason_name(pt.stop_reason)},
        });
    j["points"] = std::move(rows);
    return j.dump(2) + "\n";
}

void emit(const SweepResult& r, EmitFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    out << (format == EmitFormat::csv ? emit_csv(r) : emit_json(r));
    out.flush();
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

std::vector<CsvRow> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("parse_sweep_csv: missing or wrong header");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 16)
            throw std::invalid_argument("parse_sweep_csv: expected 16 columns");
        CsvRow row;
        row.scheme = fields[0];
        row.n = std::stoi(fields[1]);
        row.k = std::stoi(fields[2]);
        row.i = std::stoi(fields[3]);
        row.m = std::stoi(fields[4]);
        row.mode = fields[5];
        row.detector = fields[6];
        row.snr_db = std::stod(fields[7]);
        row.snr_ref = fields[8];
        row.bits = std::stoull(fields[9]);
        row.bit_errors = std::stoull(fields[10]);
        row.ber = std::stod(fields[11]);
        row.blocks = std::stoull(fields[12]);
        row.block_errors = std::stoull(fields[13]);
        row.seed = std::stoull(fields[14]);
        row.source = fields[15];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace icm
