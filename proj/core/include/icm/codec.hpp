#ifndef ICM_CODEC_HPP
#define ICM_CODEC_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "icm/combin.hpp"

namespace icm {

using cplx = std::complex<double>;

/// Payload blocks carry M-PSK symbols on the active subcarriers; diversity
/// blocks instead derive each active symbol's phase from its energy level.
enum class Mode { payload, diversity };

struct IcmParams {
    int n = 0;  ///< subcarriers per block
    int k = 0;  ///< active subcarriers
    int i = 0;  ///< composition total (energy units per block)
    int m = 0;  ///< PSK order; 0 in diversity mode
    double total_energy = 0.0;  ///< E_T, defaults to n
    Mode mode = Mode::payload;

    static IcmParams payload(int n, int k, int i, int m, double total_energy = -1.0);
    static IcmParams diversity(int n, int k, int i, double total_energy = -1.0);

    void validate() const;
    int bits_per_psk_symbol() const;  ///< log2(m); 0 in diversity mode
    int energy_levels() const { return i - k + 1; }
    bool operator==(const IcmParams&) const = default;
};

/// Per-block bit split: f1 index bits, f2 composition bits, f3 payload bits.
struct BitBudget {
    int f1 = 0;
    int f2 = 0;
    int f3 = 0;
    int f = 0;
};

struct Codeword {
    std::vector<cplx> symbols;  ///< length n, zero on inactive subcarriers
    IndexSet index_set;
    Composition composition;
    std::vector<int> psk_ranks;  ///< constellation point per active subcarrier; empty in diversity mode
};

BitBudget bit_budget(const IcmParams& p);

/// Bits-per-subcarrier f/n.
double spectral_efficiency(const IcmParams& p);

/// Gray label of constellation point r, and its inverse.
std::uint64_t gray_encode(std::uint64_t r);
std::uint64_t gray_decode(std::uint64_t g);

/// Unit-energy M-PSK point r (phase 2*pi*r/m).
cplx psk_point(int m, int r);

/// Builds the block codeword for a data word of exactly f bits, consumed as
/// [f1 index bits | f2 composition bits | f3 payload bits], each field
/// most-significant-first. Only ranks below 2^f1 / 2^f2 are reachable.
Codeword encode_block(const IcmParams& p, std::uint64_t word);

/// Inverse of encode_block. Throws std::domain_error for codewords outside
/// the used sub-codebook (index or composition rank past the bit budget).
std::uint64_t decode_block(const IcmParams& p, const Codeword& cw);

/// Assembles a codeword from its ranks without going through a bit word;
/// ranks may address the full codebook including unused patterns.
Codeword make_codeword(const IcmParams& p, std::uint64_t index_rank,
                       std::uint64_t comp_rank, const std::vector<int>& psk_ranks);

/// Codebook size C(n,k)*C(i-1,k-1)*m^k (the PSK factor is absent in
/// diversity mode). Throws std::overflow_error if it exceeds 64 bits.
std::uint64_t codebook_size(const IcmParams& p, bool used_only);

/// Lists codewords with composition rank outermost, then index rank, then
/// the PSK pattern (most significant digit on the first active subcarrier).
/// used_only keeps the 2^f addressable codewords.
std::vector<Codeword> enumerate_codebook(const IcmParams& p, bool used_only);

}  // namespace icm

#endif
