#include "icm/combin.hpp"

#include <array>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace icm {

namespace {

/// 256-bit little-endian accumulator for exact products of small factors.
struct WideUint {
    std::array<std::uint32_t, 8> limb{};

    void mul_small(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (std::uint32_t& l : limb) {
            const std::uint64_t t = static_cast<std::uint64_t>(l) * m + carry;
            l = static_cast<std::uint32_t>(t);
            carry = t >> 32;
        }
    }

    /// Exact division by a small divisor (the caller guarantees divisibility).
    void div_small(std::uint32_t d) {
        std::uint64_t rem = 0;
        for (int j = 8; j-- > 0;) {
            const std::uint64_t t = (rem << 32) | limb[j];
            limb[j] = static_cast<std::uint32_t>(t / d);
            rem = t % d;
        }
    }

    int bit_width() const {
        for (int j = 8; j-- > 0;)
            if (limb[j]) return 32 * j + std::bit_width(limb[j]);
        return 0;
    }
};

}  // namespace

int Composition::total() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

std::uint64_t binom(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("binom: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    // r * (n-k+j) is always divisible by j, so the running value stays integral.
    unsigned __int128 r = 1;
    for (int j = 1; j <= k; ++j) {
        r = r * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
        if (r > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("binom: C(" + std::to_string(n) + "," +
                                      std::to_string(k) + ") exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

int floor_log2(std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("floor_log2: zero");
    return std::bit_width(x) - 1;
}

int floor_log2_binom(int n, int k) {
    if (n < 0 || k < 0 || k > n)
        throw std::invalid_argument("floor_log2_binom: C(n,k) < 1");
    if (n > 128)
        throw std::overflow_error("floor_log2_binom: n > 128 unsupported");
    if (k > n - k) k = n - k;
    // The running value peaks at C(128,64) * 128 < 2^132 between the multiply
    // and the exact divide, so a 128-bit accumulator is not wide enough.
    WideUint r;
    r.limb[0] = 1;
    for (int j = 1; j <= k; ++j) {
        r.mul_small(static_cast<std::uint32_t>(n - k + j));
        r.div_small(static_cast<std::uint32_t>(j));
    }
    return r.bit_width() - 1;
}

void validate_index_set(const IndexSet& s, int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("index set: need 1 <= k <= n");
    if (static_cast<int>(s.indices.size()) != k)
        throw std::invalid_argument("index set: wrong size");
    int prev = 0;
    for (int v : s.indices) {
        if (v <= prev || v > n)
            throw std::invalid_argument("index set: not strictly increasing in [1,n]");
        prev = v;
    }
}

void validate_composition(const Composition& c, int i, int k) {
    if (k < 1 || i < k) throw std::invalid_argument("composition: need i >= k >= 1");
    if (static_cast<int>(c.parts.size()) != k)
        throw std::invalid_argument("composition: wrong part count");
    for (int p : c.parts)
        if (p < 1 || p > i - k + 1)
            throw std::invalid_argument("composition: part outside [1, i-k+1]");
    if (c.total() != i)
        throw std::invalid_argument("composition: parts do not sum to i");
}

IndexSet unrank_combination(int n, int k, std::uint64_t rank) {
    if (k < 1 || k > n) throw std::invalid_argument("unrank_combination: need 1 <= k <= n");
    if (rank >= binom(n, k)) throw std::out_of_range("unrank_combination: rank out of range");
    IndexSet s;
    s.indices.reserve(k);
    int v = 1;
    for (int slot = 0; slot < k; ++slot) {
        // Count combinations that fix this slot to each candidate value in turn.
        for (;; ++v) {
            std::uint64_t below = binom(n - v, k - slot - 1);
            if (rank < below) break;
            rank -= below;
        }
        s.indices.push_back(v);
        ++v;
    }
    return s;
}

std::uint64_t rank_combination(int n, int k, const IndexSet& s) {
    validate_index_set(s, n, k);
    std::uint64_t rank = 0;
    int prev = 0;
    for (int slot = 0; slot < k; ++slot) {
        for (int v = prev + 1; v < s.indices[slot]; ++v)
            rank += binom(n - v, k - slot - 1);
        prev = s.indices[slot];
    }
    return rank;
}

Composition unrank_composition(int i, int k, std::uint64_t rank) {
    if (k < 1 || i < k) throw std::invalid_argument("unrank_composition: need i >= k >= 1");
    if (rank >= binom(i - 1, k - 1))
        throw std::out_of_range("unrank_composition: rank out of range");
    Composition c;
    c.parts.reserve(k);
    if (k == 1) {
        c.parts.push_back(i);
        return c;
    }
    IndexSet cuts = unrank_combination(i - 1, k - 1, rank);
    int prev = 0;
    for (int cut : cuts.indices) {
        c.parts.push_back(cut - prev);
        prev = cut;
    }
    c.parts.push_back(i - prev);
    return c;
}

std::uint64_t rank_composition(int i, int k, const Composition& c) {
    validate_composition(c, i, k);
    if (k == 1) return 0;
    IndexSet cuts;
    cuts.indices.reserve(k - 1);
    int acc = 0;
    for (int j = 0; j < k - 1; ++j) {
        acc += c.parts[j];
        cuts.indices.push_back(acc);
    }
    return rank_combination(i - 1, k - 1, cuts);
}

}  // namespace icm
