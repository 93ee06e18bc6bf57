#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "icm/codec.hpp"

using namespace icm;

namespace {

constexpr double kPi = std::numbers::pi;

// Fold-based Gray decode written from the definition, not shared with the
// library implementation.
std::uint64_t gray_to_binary(std::uint64_t g) {
    std::uint64_t r = 0;
    for (std::uint64_t x = g; x; x >>= 1) r ^= x;
    return r;
}

std::vector<std::pair<double, double>> flatten(const std::vector<cplx>& v) {
    std::vector<std::pair<double, double>> out;
    out.reserve(v.size());
    for (const cplx& s : v) out.emplace_back(s.real(), s.imag());
    return out;
}

// Stand-alone OFDM-IM encoder for the equal-energy case (all active
// subcarriers at energy E_T/K, index field plain binary, PSK fields
// Gray-labelled most-significant-first).  The 4-choose-2 pattern table is
// hardcoded so nothing is shared with the library's unranking.
std::vector<cplx> im_encode_4c2_qpsk(std::uint64_t word, double total_energy) {
    static const int kPatterns[6][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    const std::uint64_t idx = word >> 4;
    const double amp = std::sqrt(total_energy / 2.0);
    std::vector<cplx> out(4, cplx{0.0, 0.0});
    for (int j = 0; j < 2; ++j) {
        const std::uint64_t g = (word >> (2 * (1 - j))) & 0x3u;
        const auto r = static_cast<double>(gray_to_binary(g));
        out[kPatterns[idx][j] - 1] = amp * std::polar(1.0, 2.0 * kPi * r / 4.0);
    }
    return out;
}

int count_diffs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    int d = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] != b[j]) ++d;
    return d;
}

}  // namespace

TEST_CASE("parameter factories fill defaults and validate") {
    const IcmParams p = IcmParams::payload(4, 2, 5, 2);
    CHECK(p.n == 4);
    CHECK(p.k == 2);
    CHECK(p.i == 5);
    CHECK(p.m == 2);
    CHECK(p.total_energy == 4.0);
    CHECK(p.mode == Mode::payload);
    CHECK(p.energy_levels() == 4);
    CHECK(p.bits_per_psk_symbol() == 1);

    const IcmParams d = IcmParams::diversity(4, 3, 8, 2.5);
    CHECK(d.m == 0);
    CHECK(d.total_energy == 2.5);
    CHECK(d.mode == Mode::diversity);
    CHECK(d.energy_levels() == 6);
    CHECK(d.bits_per_psk_symbol() == 0);

    CHECK(IcmParams::payload(4, 3, 4, 8).bits_per_psk_symbol() == 3);

    CHECK_THROWS_AS(IcmParams::payload(4, 0, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::payload(4, 5, 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::payload(4, 2, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::payload(4, 2, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::payload(4, 2, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::payload(4, 2, 5, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(IcmParams::diversity(4, 2, 1), std::invalid_argument);

    IcmParams bad{4, 2, 5, 4, 4.0, Mode::diversity};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bit budgets and spectral efficiency for reference setups") {
    const BitBudget a = bit_budget(IcmParams::payload(4, 3, 4, 2));
    CHECK(a.f1 == 2);
    CHECK(a.f2 == 1);
    CHECK(a.f3 == 3);
    CHECK(a.f == 6);
    CHECK(spectral_efficiency(IcmParams::payload(4, 3, 4, 2)) == doctest::Approx(1.5));

    const BitBudget b = bit_budget(IcmParams::payload(4, 3, 8, 4));
    CHECK(b.f1 == 2);
    CHECK(b.f2 == 4);
    CHECK(b.f3 == 6);
    CHECK(b.f == 12);
    CHECK(spectral_efficiency(IcmParams::payload(4, 3, 8, 4)) == doctest::Approx(3.0));

    const BitBudget c = bit_budget(IcmParams::payload(4, 4, 4, 2));
    CHECK(c.f1 == 0);
    CHECK(c.f2 == 0);
    CHECK(c.f3 == 4);
    CHECK(c.f == 4);

    const BitBudget d = bit_budget(IcmParams::payload(4, 2, 5, 2));
    CHECK(d.f1 == 2);
    CHECK(d.f2 == 2);
    CHECK(d.f3 == 2);
    CHECK(d.f == 6);

    const BitBudget e = bit_budget(IcmParams::diversity(4, 3, 8));
    CHECK(e.f1 == 2);
    CHECK(e.f2 == 4);
    CHECK(e.f3 == 0);
    CHECK(e.f == 6);
    CHECK(spectral_efficiency(IcmParams::diversity(4, 3, 8)) == doctest::Approx(1.5));
}

TEST_CASE("Gray labelling is the reflected code with unit adjacency") {
    const std::uint64_t expected[8] = {0, 1, 3, 2, 6, 7, 5, 4};
    for (std::uint64_t r = 0; r < 8; ++r) CHECK(gray_encode(r) == expected[r]);
    for (std::uint64_t r = 0; r < 256; ++r) {
        CHECK(gray_decode(gray_encode(r)) == r);
        CHECK(gray_encode(r) == gray_to_binary(gray_encode(gray_encode(r))));
        const std::uint64_t next = (r + 1) % 256;
        CHECK(std::popcount(gray_encode(r) ^ gray_encode(next)) == 1);
    }
}

TEST_CASE("PSK points sit on the unit circle with counter-clockwise ranks") {
    CHECK(psk_point(2, 0).real() == doctest::Approx(1.0));
    CHECK(psk_point(2, 1).real() == doctest::Approx(-1.0));
    CHECK(psk_point(4, 1).real() == doctest::Approx(0.0));
    CHECK(psk_point(4, 1).imag() == doctest::Approx(1.0));
    CHECK(psk_point(4, 3).imag() == doctest::Approx(-1.0));
    const double s = std::sqrt(0.5);
    CHECK(psk_point(8, 1).real() == doctest::Approx(s));
    CHECK(psk_point(8, 1).imag() == doctest::Approx(s));
    for (int r = 0; r < 8; ++r) CHECK(std::abs(psk_point(8, r)) == doctest::Approx(1.0));
}

TEST_CASE("three-subcarrier diversity codebook matches the expected amplitudes") {
    const IcmParams p = IcmParams::diversity(3, 2, 3);  // E_T defaults to N = I = 3
    CHECK(codebook_size(p, false) == 6);
    CHECK(codebook_size(p, true) == 4);
    const std::vector<Codeword> book = enumerate_codebook(p, false);
    REQUIRE(book.size() == 6);

    const double r2 = std::sqrt(2.0);
    const double expected[6][3] = {
        {1.0, r2, 0.0}, {1.0, 0.0, r2}, {0.0, 1.0, r2},
        {r2, 1.0, 0.0}, {r2, 0.0, 1.0}, {0.0, r2, 1.0},
    };
    for (int w = 0; w < 6; ++w) {
        REQUIRE(book[w].symbols.size() == 3);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(book[w].symbols[j]) == doctest::Approx(expected[w][j]).epsilon(1e-12));
    }
}

TEST_CASE("diversity symbols carry the level-indexed phase") {
    for (const IcmParams& p :
         {IcmParams::diversity(3, 2, 3), IcmParams::diversity(4, 3, 8, 2.0)}) {
        for (const Codeword& cw : enumerate_codebook(p, false)) {
            for (int j = 0; j < p.k; ++j) {
                const cplx s = cw.symbols[cw.index_set.indices[j] - 1];
                const int part = cw.composition.parts[j];
                const cplx dir = std::polar(1.0, 2.0 * kPi * part / p.energy_levels());
                CHECK(std::abs(s / std::abs(s) - dir) < 1e-12);
            }
        }
    }
}

TEST_CASE("four-subcarrier diversity word map lists the eight used energy vectors") {
    const IcmParams p = IcmParams::diversity(4, 3, 4);  // E_T defaults to N = I = 4
    const BitBudget b = bit_budget(p);
    REQUIRE(b.f1 == 2);
    REQUIRE(b.f2 == 1);
    REQUIRE(b.f == 3);

    const double expected[8][4] = {
        {1, 1, 2, 0}, {1, 2, 1, 0}, {1, 1, 0, 2}, {1, 2, 0, 1},
        {1, 0, 1, 2}, {1, 0, 2, 1}, {0, 1, 1, 2}, {0, 1, 2, 1},
    };
    for (std::uint64_t w = 0; w < 8; ++w) {
        const Codeword cw = encode_block(p, w);
        for (int j = 0; j < 4; ++j)
            CHECK(std::norm(cw.symbols[j]) == doctest::Approx(expected[w][j]).epsilon(1e-12));
        CHECK(decode_block(p, cw) == w);
    }

    // The third composition of 4 into 3 parts, (2,1,1), lies past the one
    // composition bit and is unreachable from any data word.
    const Composition leftover = unrank_composition(4, 3, 2);
    CHECK(leftover.parts == std::vector<int>{2, 1, 1});
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        const Codeword cw = make_codeword(p, idx, 2, {});
        CHECK_THROWS_AS(decode_block(p, cw), std::domain_error);
    }
}

TEST_CASE("encode and decode are inverse over every addressable word") {
    const std::vector<IcmParams> configs = {
        IcmParams::payload(4, 3, 4, 2), IcmParams::payload(4, 2, 5, 2),
        IcmParams::payload(4, 3, 8, 4), IcmParams::payload(4, 4, 4, 2),
        IcmParams::payload(6, 3, 6, 2), IcmParams::diversity(4, 3, 8),
        IcmParams::diversity(3, 2, 3),
    };
    for (const IcmParams& p : configs) {
        const std::uint64_t words = codebook_size(p, true);
        for (std::uint64_t w = 0; w < words; ++w) {
            const Codeword cw = encode_block(p, w);
            REQUIRE(decode_block(p, cw) == w);
        }
    }
}

TEST_CASE("codeword energies follow the composition and sum to the block energy") {
    for (const IcmParams& p :
         {IcmParams::payload(4, 2, 5, 2), IcmParams::payload(4, 2, 5, 2, 7.5),
          IcmParams::payload(4, 3, 8, 4), IcmParams::diversity(4, 3, 8, 2.0)}) {
        const double unit = p.total_energy / p.i;
        for (const Codeword& cw : enumerate_codebook(p, true)) {
            double sum = 0.0;
            std::vector<bool> active(p.n, false);
            for (int j = 0; j < p.k; ++j) {
                const int pos = cw.index_set.indices[j] - 1;
                active[pos] = true;
                const double e = std::norm(cw.symbols[pos]);
                CHECK(e == doctest::Approx(cw.composition.parts[j] * unit).epsilon(1e-12));
                sum += e;
            }
            for (int j = 0; j < p.n; ++j)
                if (!active[j]) CHECK(cw.symbols[j] == cplx{0.0, 0.0});
            CHECK(sum == doctest::Approx(p.total_energy).epsilon(1e-12));
            CHECK(cw.composition.total() == p.i);
        }
    }
}

TEST_CASE("codebook sizes and enumeration orders are consistent") {
    const IcmParams p = IcmParams::payload(4, 2, 5, 2);
    CHECK(codebook_size(p, false) == 96);
    CHECK(codebook_size(p, true) == 64);
    CHECK(enumerate_codebook(p, false).size() == 96);

    CHECK(codebook_size(IcmParams::diversity(4, 2, 2), false) == 6);
    CHECK(codebook_size(IcmParams::diversity(4, 2, 2), true) == 4);
    CHECK(codebook_size(IcmParams::diversity(4, 3, 4), false) == 12);

    // The used enumeration hits every data word exactly once, with the
    // composition rank as the outermost counter.
    for (const IcmParams& q :
         {IcmParams::payload(4, 2, 5, 2), IcmParams::payload(4, 3, 8, 4),
          IcmParams::diversity(4, 3, 8)}) {
        const std::vector<Codeword> book = enumerate_codebook(q, true);
        REQUIRE(book.size() == codebook_size(q, true));
        std::set<std::uint64_t> seen;
        for (const Codeword& cw : book) seen.insert(decode_block(q, cw));
        CHECK(seen.size() == book.size());
        CHECK(*seen.rbegin() == book.size() - 1);
        const BitBudget b = bit_budget(q);
        CHECK(decode_block(q, book[0]) == 0);
        if (b.f2 > 0) {
            // One step of the outer counter flips exactly the composition field.
            const std::uint64_t stride = book.size() >> b.f2;
            CHECK(decode_block(q, book[stride]) == (std::uint64_t{1} << b.f3));
        }
    }
}

TEST_CASE("distinct ranks produce distinct codewords") {
    for (const IcmParams& p :
         {IcmParams::diversity(3, 2, 3), IcmParams::diversity(4, 3, 4),
          IcmParams::payload(4, 2, 5, 2)}) {
        const std::vector<Codeword> book = enumerate_codebook(p, false);
        std::set<std::vector<std::pair<double, double>>> seen;
        for (const Codeword& cw : book) seen.insert(flatten(cw.symbols));
        CHECK(seen.size() == book.size());
    }
}

TEST_CASE("diversity codewords differ in at least two subcarriers") {
    const IcmParams p = IcmParams::diversity(4, 3, 8);
    const std::vector<Codeword> book = enumerate_codebook(p, true);
    REQUIRE(book.size() == 64);
    for (std::size_t a = 0; a < book.size(); ++a)
        for (std::size_t b = a + 1; b < book.size(); ++b)
            CHECK(count_diffs(book[a].symbols, book[b].symbols) >= 2);
}

TEST_CASE("unit-composition case reduces to plain index modulation bit-for-bit") {
    const IcmParams p = IcmParams::payload(4, 2, 2, 4);
    const BitBudget b = bit_budget(p);
    REQUIRE(b.f1 == 2);
    REQUIRE(b.f2 == 0);
    REQUIRE(b.f3 == 4);
    for (std::uint64_t w = 0; w < 64; ++w) {
        const Codeword cw = encode_block(p, w);
        const std::vector<cplx> ref = im_encode_4c2_qpsk(w, p.total_energy);
        for (int j = 0; j < 4; ++j) {
            CHECK(cw.symbols[j].real() == ref[j].real());
            CHECK(cw.symbols[j].imag() == ref[j].imag());
        }
        CHECK(cw.composition.parts == std::vector<int>{1, 1});
    }
}

TEST_CASE("all-active unit-composition case is per-subcarrier BPSK") {
    const IcmParams p = IcmParams::payload(4, 4, 4, 2);
    for (std::uint64_t w = 0; w < 16; ++w) {
        const Codeword cw = encode_block(p, w);
        for (int j = 0; j < 4; ++j) {
            const int bit = static_cast<int>((w >> (3 - j)) & 1u);
            CHECK(cw.symbols[j].real() == doctest::Approx(bit ? -1.0 : 1.0));
            CHECK(cw.symbols[j].imag() == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("encode, decode, and assembly reject malformed input") {
    const IcmParams p = IcmParams::payload(4, 2, 5, 2);
    CHECK_THROWS_AS(encode_block(p, std::uint64_t{1} << 6), std::invalid_argument);
    CHECK_NOTHROW(encode_block(p, (std::uint64_t{1} << 6) - 1));

    CHECK_THROWS_AS(make_codeword(p, 0, 0, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_codeword(p, 0, 0, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(make_codeword(p, 6, 0, {0, 0}), std::out_of_range);
    CHECK_THROWS_AS(make_codeword(p, 0, 4, {0, 0}), std::out_of_range);
    CHECK_THROWS_AS(make_codeword(IcmParams::diversity(4, 3, 4), 0, 0, {0}),
                    std::invalid_argument);

    Codeword cw = encode_block(p, 0);
    cw.psk_ranks.clear();
    CHECK_THROWS_AS(decode_block(p, cw), std::invalid_argument);

    // Wide setups keep their exact bit budget but refuse word encoding and
    // codebook materialization.
    const IcmParams wide = IcmParams::payload(64, 32, 64, 2);
    CHECK(bit_budget(wide).f > 62);
    CHECK_THROWS_AS(encode_block(wide, 0), std::invalid_argument);
    CHECK_THROWS_AS(codebook_size(wide, true), std::overflow_error);

    const IcmParams big = IcmParams::payload(32, 16, 16, 2);
    CHECK(bit_budget(big).f == 45);
    CHECK_THROWS_AS(enumerate_codebook(big, true), std::overflow_error);
}
