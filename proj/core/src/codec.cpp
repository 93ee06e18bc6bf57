#include "icm/codec.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace icm {

namespace {

constexpr std::uint64_t kMaxEnumerated = std::uint64_t{1} << 24;

std::uint64_t mask(int bits) {
    return bits == 0 ? 0 : (~std::uint64_t{0} >> (64 - bits));
}

}  // namespace

IcmParams IcmParams::payload(int n, int k, int i, int m, double total_energy) {
    IcmParams p{n, k, i, m, total_energy < 0 ? static_cast<double>(n) : total_energy,
                Mode::payload};
    p.validate();
    return p;
}

IcmParams IcmParams::diversity(int n, int k, int i, double total_energy) {
    IcmParams p{n, k, i, 0, total_energy < 0 ? static_cast<double>(n) : total_energy,
                Mode::diversity};
    p.validate();
    return p;
}

void IcmParams::validate() const {
    if (k < 1 || k > n) throw std::invalid_argument("params: need 1 <= K <= N");
    if (i < k) throw std::invalid_argument("params: need I >= K");
    if (!(total_energy > 0)) throw std::invalid_argument("params: need E_T > 0");
    if (mode == Mode::payload) {
        if (m < 2 || !std::has_single_bit(static_cast<unsigned>(m)))
            throw std::invalid_argument("params: PSK order must be a power of two >= 2");
    } else if (m != 0) {
        throw std::invalid_argument("params: diversity mode carries no PSK order");
    }
}

int IcmParams::bits_per_psk_symbol() const {
    return mode == Mode::payload ? floor_log2(static_cast<std::uint64_t>(m)) : 0;
}

BitBudget bit_budget(const IcmParams& p) {
    p.validate();
    BitBudget b;
    b.f1 = floor_log2_binom(p.n, p.k);
    b.f2 = floor_log2_binom(p.i - 1, p.k - 1);
    b.f3 = p.k * p.bits_per_psk_symbol();
    b.f = b.f1 + b.f2 + b.f3;
    return b;
}

double spectral_efficiency(const IcmParams& p) {
    return static_cast<double>(bit_budget(p).f) / p.n;
}

std::uint64_t gray_encode(std::uint64_t r) { return r ^ (r >> 1); }

std::uint64_t gray_decode(std::uint64_t g) {
    std::uint64_t r = g;
    while (g >>= 1) r ^= g;
    return r;
}

cplx psk_point(int m, int r) {
    return std::polar(1.0, 2.0 * std::numbers::pi * r / m);
}

Codeword make_codeword(const IcmParams& p, std::uint64_t index_rank,
                       std::uint64_t comp_rank, const std::vector<int>& psk_ranks) {
    Codeword cw;
    cw.index_set = unrank_combination(p.n, p.k, index_rank);
    cw.composition = unrank_composition(p.i, p.k, comp_rank);
    cw.symbols.assign(p.n, cplx{0.0, 0.0});
    const double unit = p.total_energy / p.i;
    if (p.mode == Mode::payload) {
        if (static_cast<int>(psk_ranks.size()) != p.k)
            throw std::invalid_argument("make_codeword: need one PSK rank per active subcarrier");
        cw.psk_ranks = psk_ranks;
    } else if (!psk_ranks.empty()) {
        throw std::invalid_argument("make_codeword: diversity mode takes no PSK ranks");
    }
    for (int j = 0; j < p.k; ++j) {
        const int part = cw.composition.parts[j];
        const double amp = std::sqrt(part * unit);
        cplx sym;
        if (p.mode == Mode::payload) {
            const int r = psk_ranks[j];
            if (r < 0 || r >= p.m) throw std::invalid_argument("make_codeword: PSK rank out of range");
            sym = amp * psk_point(p.m, r);
        } else {
            // Energy levels are separated in phase as well as amplitude.
            sym = std::polar(amp, 2.0 * std::numbers::pi * part / p.energy_levels());
        }
        cw.symbols[cw.index_set.indices[j] - 1] = sym;
    }
    return cw;
}

Codeword encode_block(const IcmParams& p, std::uint64_t word) {
    const BitBudget b = bit_budget(p);
    if (b.f > 62) throw std::invalid_argument("encode_block: bit budget too large");
    if (word >> b.f)
        throw std::invalid_argument("encode_block: word has more than f bits");
    const std::uint64_t index_rank = word >> (b.f2 + b.f3);
    const std::uint64_t comp_rank = (word >> b.f3) & mask(b.f2);
    std::vector<int> psk_ranks;
    if (p.mode == Mode::payload) {
        const int bps = p.bits_per_psk_symbol();
        psk_ranks.resize(p.k);
        for (int j = 0; j < p.k; ++j) {
            const std::uint64_t g = (word >> (b.f3 - (j + 1) * bps)) & mask(bps);
            psk_ranks[j] = static_cast<int>(gray_decode(g));
        }
    }
    return make_codeword(p, index_rank, comp_rank, psk_ranks);
}

std::uint64_t decode_block(const IcmParams& p, const Codeword& cw) {
    const BitBudget b = bit_budget(p);
    const std::uint64_t index_rank = rank_combination(p.n, p.k, cw.index_set);
    if (index_rank >> b.f1)
        throw std::domain_error("decode_block: index pattern outside the used sub-codebook");
    const std::uint64_t comp_rank = rank_composition(p.i, p.k, cw.composition);
    if (comp_rank >> b.f2)
        throw std::domain_error("decode_block: composition outside the used sub-codebook");
    std::uint64_t word = (index_rank << (b.f2 + b.f3)) | (comp_rank << b.f3);
    if (p.mode == Mode::payload) {
        if (static_cast<int>(cw.psk_ranks.size()) != p.k)
            throw std::invalid_argument("decode_block: missing PSK ranks");
        const int bps = p.bits_per_psk_symbol();
        for (int j = 0; j < p.k; ++j) {
            const int r = cw.psk_ranks[j];
            if (r < 0 || r >= p.m) throw std::invalid_argument("decode_block: PSK rank out of range");
            word |= gray_encode(static_cast<std::uint64_t>(r))
                    << (b.f3 - (j + 1) * bps);
        }
    }
    return word;
}

std::uint64_t codebook_size(const IcmParams& p, bool used_only) {
    const BitBudget b = bit_budget(p);
    if (used_only) {
        if (b.f > 62) throw std::overflow_error("codebook_size: 2^f exceeds the count budget");
        return std::uint64_t{1} << b.f;
    }
    std::uint64_t count = binom(p.n, p.k);
    const std::uint64_t comps = binom(p.i - 1, p.k - 1);
    if (count > std::numeric_limits<std::uint64_t>::max() / comps)
        throw std::overflow_error("codebook_size: count exceeds 64 bits");
    count *= comps;
    for (int j = 0; j < p.k && p.mode == Mode::payload; ++j) {
        if (count > std::numeric_limits<std::uint64_t>::max() / p.m)
            throw std::overflow_error("codebook_size: count exceeds 64 bits");
        count *= static_cast<unsigned>(p.m);
    }
    return count;
}

std::vector<Codeword> enumerate_codebook(const IcmParams& p, bool used_only) {
    const BitBudget b = bit_budget(p);
    const std::uint64_t total = codebook_size(p, used_only);
    if (total > kMaxEnumerated)
        throw std::overflow_error("enumerate_codebook: codebook too large to materialize");
    const std::uint64_t n_comp =
        used_only ? std::uint64_t{1} << b.f2 : binom(p.i - 1, p.k - 1);
    const std::uint64_t n_idx =
        used_only ? std::uint64_t{1} << b.f1 : binom(p.n, p.k);
    const std::uint64_t n_pay = p.mode == Mode::payload
                                    ? total / (n_comp * n_idx)
                                    : 1;
    std::vector<Codeword> book;
    book.reserve(total);
    std::vector<int> psk(p.mode == Mode::payload ? p.k : 0, 0);
    for (std::uint64_t c = 0; c < n_comp; ++c)
        for (std::uint64_t s = 0; s < n_idx; ++s)
            for (std::uint64_t t = 0; t < n_pay; ++t) {
                std::uint64_t rest = t;
                for (int j = p.k; j-- > 0 && p.mode == Mode::payload;) {
                    psk[j] = static_cast<int>(rest % p.m);
                    rest /= p.m;
                }
                book.push_back(make_codeword(p, s, c, psk));
            }
    return book;
}

}  // namespace icm
