// Command line front end for the icm core library: Monte Carlo BER sweeps,
// union-bound curves, block-sizing optimization, and codebook dumps.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "icm/codec.hpp"
#include "icm/harness.hpp"
#include "icm/seopt.hpp"

namespace {

struct SweepOptions {
    int n = 4;
    int k = 0;
    int i = 0;
    int m = 0;
    double total_energy = -1.0;
    std::string mode = "payload";
    std::string detector = "ml";
    std::string llr = "exact";
    std::string snr = "0:5:40";
    std::string snr_ref = "es";
    std::uint64_t min_errors = 100;
    std::uint64_t max_bits = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string scheme;
    std::string baseline;
    std::string out;
    std::string format = "csv";
};

void add_block_options(CLI::App& cmd, SweepOptions& o) {
    cmd.add_option("--n", o.n, "subcarriers per block")->capture_default_str();
    cmd.add_option("--k", o.k, "active subcarriers");
    cmd.add_option("--i", o.i, "energy units per block");
    cmd.add_option("--m", o.m, "PSK order (payload mode only)");
    cmd.add_option("--total-energy", o.total_energy, "block energy budget (default: n)");
    cmd.add_option("--mode", o.mode, "payload|diversity")
        ->check(CLI::IsMember({"payload", "diversity"}))
        ->capture_default_str();
}

void add_grid_options(CLI::App& cmd, SweepOptions& o) {
    cmd.add_option("--snr-db", o.snr, "SNR grid in dB: start:step:stop, one value, or inf")
        ->capture_default_str();
    cmd.add_option("--snr-ref", o.snr_ref, "es (per subcarrier) | eb (per information bit)")
        ->check(CLI::IsMember({"es", "eb"}))
        ->capture_default_str();
}

void add_out_options(CLI::App& cmd, SweepOptions& o) {
    cmd.add_option("--out", o.out, "output path (default: stdout)");
    cmd.add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

icm::IcmParams make_params(const SweepOptions& o) {
    if (o.mode == "diversity") {
        if (o.m != 0)
            throw std::invalid_argument(
                "--m applies to payload mode; diversity blocks carry no PSK symbols");
        return icm::IcmParams::diversity(o.n, o.k, o.i, o.total_energy);
    }
    return icm::IcmParams::payload(o.n, o.k, o.i, o.m, o.total_energy);
}

icm::SimConfig make_config(SweepOptions o) {
    if (o.baseline == "ofdm") {
        o.k = o.n;
        o.i = o.n;
    } else if (o.baseline == "ofdm-im") {
        o.i = o.k;
    }
    icm::SimConfig c;
    c.params = make_params(o);
    c.detector = o.detector == "lcml" ? icm::DetectorKind::lcml : icm::DetectorKind::ml;
    c.llr_mode = o.llr == "approx" ? icm::LlrMode::approx : icm::LlrMode::exact;
    c.snr_db = icm::parse_snr_grid(o.snr);
    c.snr_reference = o.snr_ref == "eb" ? icm::SnrRef::per_bit : icm::SnrRef::per_symbol;
    c.min_bit_errors = o.min_errors;
    c.max_bits = o.max_bits;
    c.seed = o.seed;
    c.workers = o.workers;
    c.scheme = o.scheme;
    c.validate();
    return c;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool flag_true(const std::string& v) {
    return v == "1" || v == "true" || v == "on" || v == "yes";
}

bool flag_false(const std::string& v) {
    return v == "0" || v == "false" || v == "off" || v == "no";
}

/// Turns a flat key=value config file into flags of the chosen subcommand,
/// injected after the subcommand token. Keys whose flag already appears on
/// the command line are skipped, so explicit flags win.
std::vector<std::string> expand_config_tokens(const CLI::App& app,
                                              std::vector<std::string> args) {
    std::string path;
    for (std::size_t a = 0; a < args.size(); ++a) {
        if (args[a] == "--config" && a + 1 < args.size())
            path = args[a + 1];
        else if (args[a].rfind("--config=", 0) == 0)
            path = args[a].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    const CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args.front());
    } catch (const CLI::OptionNotFound&) {
        return args;  // let the normal parse report the bad subcommand
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::vector<std::string> inject;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto mark = line.find_first_of("#;");
        if (mark != std::string::npos) line.erase(mark);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config " + path + ":" +
                                        std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config") continue;
        const std::string flag = "--" + key;
        bool overridden = false;
        for (const std::string& t : args)
            if (t == flag || t.rfind(flag + "=", 0) == 0) {
                overridden = true;
                break;
            }
        if (overridden) continue;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr)
            throw std::invalid_argument("config " + path + ": unknown key '" + key + "'");
        if (opt->get_expected_min() == 0) {
            if (flag_true(value))
                inject.push_back(flag);
            else if (!flag_false(value))
                throw std::invalid_argument("config " + path + ": flag '" + key +
                                            "' wants true or false");
            continue;
        }
        if (value.empty())
            throw std::invalid_argument("config " + path + ": key '" + key +
                                        "' has no value");
        inject.push_back(flag);
        std::istringstream split(value);
        for (std::string tok; split >> tok;) inject.push_back(tok);
    }
    args.insert(args.begin() + 1, inject.begin(), inject.end());
    return args;
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_result(const icm::SweepResult& r, const SweepOptions& o) {
    const icm::EmitFormat fmt =
        o.format == "json" ? icm::EmitFormat::json : icm::EmitFormat::csv;
    if (o.out.empty()) {
        std::fputs((fmt == icm::EmitFormat::csv ? icm::emit_csv(r) : icm::emit_json(r)).c_str(),
                   stdout);
        return;
    }
    icm::emit(r, fmt, o.out);
}

std::string seopt_csv(const std::vector<int>& ns, const std::vector<double>& betas,
                      const std::vector<int>& ms) {
    std::string text = "n,beta,m,alpha_star,k_star,se_exact,se_asymptotic\n";
    char line[192];
    for (int n : ns)
        for (double beta : betas)
            for (int m : ms) {
                icm::SeProblem prob;
                prob.beta = beta;
                prob.m = m;
                prob.n = n;
                const icm::KStarResult best = icm::k_star(prob);
                const double alpha = icm::alpha_star(beta, m);
                std::snprintf(line, sizeof line, "%d,%.17g,%d,%.17g,%d,%.17g,%.17g\n", n,
                              beta, m, alpha, best.k, best.se,
                              icm::se_asymptotic(alpha, beta, m));
                text += line;
            }
    return text;
}

std::string codebook_text(const icm::IcmParams& p, bool used_only) {
    const std::vector<icm::Codeword> book = icm::enumerate_codebook(p, used_only);
    std::string text;
    char buf[64];
    for (const icm::Codeword& cw : book) {
        std::snprintf(buf, sizeof buf, "idx=%llu comp=%llu",
                      static_cast<unsigned long long>(
                          icm::rank_combination(p.n, p.k, cw.index_set)),
                      static_cast<unsigned long long>(
                          icm::rank_composition(p.i, p.k, cw.composition)));
        text += buf;
        if (!cw.psk_ranks.empty()) {
            text += " psk=";
            for (std::size_t s = 0; s < cw.psk_ranks.size(); ++s) {
                std::snprintf(buf, sizeof buf, "%s%d", s ? "," : "", cw.psk_ranks[s]);
                text += buf;
            }
        }
        text += " set=";
        for (std::size_t s = 0; s < cw.index_set.indices.size(); ++s) {
            std::snprintf(buf, sizeof buf, "%s%d", s ? "," : "", cw.index_set.indices[s]);
            text += buf;
        }
        text += " nu=";
        for (std::size_t s = 0; s < cw.composition.parts.size(); ++s) {
            std::snprintf(buf, sizeof buf, "%s%d", s ? "," : "", cw.composition.parts[s]);
            text += buf;
        }
        for (const icm::cplx& sym : cw.symbols) {
            std::snprintf(buf, sizeof buf, " (%.17g,%.17g)", sym.real(), sym.imag());
            text += buf;
        }
        text += '\n';
    }
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM index-and-composition modulation toolkit"};
    app.require_subcommand(1);
    const char* config_help = "flat key=value file mirroring the flags; command line wins";
    std::string config_file;

    SweepOptions sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo BER sweep");
    sim->add_option("--config", config_file, config_help);
    add_block_options(*sim, sim_opts);
    sim->add_option("--detector", sim_opts.detector, "ml|lcml")
        ->check(CLI::IsMember({"ml", "lcml"}))
        ->capture_default_str();
    sim->add_option("--llr", sim_opts.llr, "lcml LLR flavor: exact|approx")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->capture_default_str();
    add_grid_options(*sim, sim_opts);
    sim->add_option("--min-errors", sim_opts.min_errors, "bit errors to collect per point")
        ->capture_default_str();
    sim->add_option("--max-bits", sim_opts.max_bits, "bit budget per point")
        ->capture_default_str();
    sim->add_option("--seed", sim_opts.seed, "RNG seed")->capture_default_str();
    sim->add_option("--workers", sim_opts.workers, "worker threads; 0 = all cores")
        ->capture_default_str();
    sim->add_option("--scheme", sim_opts.scheme, "row label override");
    sim->add_option("--baseline", sim_opts.baseline,
                    "collapse the block: ofdm-im (i=k) or ofdm (i=k=n)")
        ->check(CLI::IsMember({"ofdm-im", "ofdm"}));
    add_out_options(*sim, sim_opts);

    SweepOptions bound_opts;
    CLI::App* bnd = app.add_subcommand("bound", "union-bound BER curve");
    bnd->add_option("--config", config_file, config_help);
    add_block_options(*bnd, bound_opts);
    add_grid_options(*bnd, bound_opts);
    bnd->add_option("--seed", bound_opts.seed, "seed recorded in the rows")
        ->capture_default_str();
    bnd->add_option("--scheme", bound_opts.scheme, "row label override");
    add_out_options(*bnd, bound_opts);

    std::vector<int> se_n;
    std::vector<double> se_beta;
    std::vector<int> se_m;
    std::string se_out;
    CLI::App* seo = app.add_subcommand("seopt", "spectral-efficiency block sizing");
    seo->add_option("--config", config_file, config_help);
    seo->add_option("--n", se_n, "block sizes to solve")->required();
    seo->add_option("--beta", se_beta, "energy ratios i/n")->required();
    seo->add_option("--m", se_m, "PSK orders")->required();
    seo->add_option("--out", se_out, "output path (default: stdout)");

    SweepOptions cb_opts;
    bool cb_all = false;
    std::string cb_out;
    CLI::App* cb = app.add_subcommand("codebook", "dump block codewords, one per line");
    cb->add_option("--config", config_file, config_help);
    add_block_options(*cb, cb_opts);
    cb->add_flag("--all", cb_all, "include codewords beyond the bit-addressable set");
    cb->add_option("--out", cb_out, "output path (default: stdout)");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_tokens(app, std::move(args));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "icm: %s\n", e.what());
        return 2;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) {
            const icm::SimConfig cfg = make_config(sim_opts);
            icm::SweepResult result;
            if (sim_opts.baseline == "ofdm")
                result = icm::run_baselines(cfg, icm::BaselineKind::ofdm);
            else if (sim_opts.baseline == "ofdm-im")
                result = icm::run_baselines(cfg, icm::BaselineKind::ofdm_im);
            else
                result = icm::run_sweep(cfg);
            write_result(result, sim_opts);
        } else if (bnd->parsed()) {
            write_result(icm::run_bound(make_config(bound_opts)), bound_opts);
        } else if (seo->parsed()) {
            write_text(seopt_csv(se_n, se_beta, se_m), se_out);
        } else if (cb->parsed()) {
            write_text(codebook_text(make_params(cb_opts), !cb_all), cb_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "icm: %s\n", e.what());
        return 2;
    }
    return 0;
}
