#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "icm/codec.hpp"
#include "icm/seopt.hpp"

using namespace icm;

namespace {

// Additive Pascal triangle in unsigned 128-bit; every C(n,k) with n <= 128
// stays below 2^125, so the rows never wrap.
struct PascalOracle {
    std::vector<std::vector<unsigned __int128>> c;

    PascalOracle() : c(129) {
        for (int n = 0; n <= 128; ++n) {
            c[n].assign(n + 1, 1);
            for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }

    int flb(int n, int k) const {
        unsigned __int128 v = c[n][k];
        int bits = -1;
        while (v) {
            v >>= 1;
            ++bits;
        }
        return bits;
    }
};

int oracle_bits_per_symbol(int m) {
    int b = 0;
    for (int v = m; v > 1; v >>= 1) ++b;
    return b;
}

struct OracleBest {
    int k = 0;
    int f = -1;
    int i = 0;
};

OracleBest oracle_kstar(int n, double beta, int m, const PascalOracle& po) {
    OracleBest best;
    best.i = static_cast<int>(std::llround(beta * n));
    const int bps = oracle_bits_per_symbol(m);
    for (int k = 1; k <= std::min(n, best.i); ++k) {
        const int f = po.flb(n, k) + po.flb(best.i - 1, k - 1) + k * bps;
        if (f > best.f) {
            best.f = f;
            best.k = k;
        }
    }
    return best;
}

double grid_argmax(double beta, int m, double step) {
    const double hi = std::min(1.0, beta);
    double best_a = 0.0, best_v = se_asymptotic(0.0, beta, m);
    for (double a = step; a <= hi; a += step) {
        const double v = se_asymptotic(std::min(a, hi), beta, m);
        if (v > best_v) {
            best_v = v;
            best_a = a;
        }
    }
    return best_a;
}

}  // namespace

TEST_CASE("closed-form activity ratio matches the quadratic root") {
    CHECK(alpha_star(1.0, 2) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(alpha_star(0.5, 2) ==
          doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(alpha_star(0.5, 4) ==
          doctest::Approx((6.0 - std::sqrt(12.0)) / 6.0).epsilon(1e-12));
    CHECK(alpha_star(2.0, 2) == doctest::Approx(3.0 - std::sqrt(5.0)).epsilon(1e-12));

    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        for (int m : {2, 4, 8, 16, 64}) {
            const double a = alpha_star(beta, m);
            CHECK(a >= 0.0);
            CHECK(a <= std::min(1.0, beta) + 1e-12);
        }
    }
}

TEST_CASE("closed-form ratio agrees with a fine grid search") {
    for (double beta : {0.5, 1.0, 2.0}) {
        for (int m : {2, 4, 8}) {
            const double fine = grid_argmax(beta, m, 1e-5);
            CHECK(std::abs(alpha_star(beta, m) - fine) < 1e-4);
        }
    }
    // One extra-fine spot check.
    CHECK(std::abs(alpha_star(1.0, 2) - grid_argmax(1.0, 2, 1e-6)) < 2e-6);
}

TEST_CASE("asymptotic efficiency has the expected closed values") {
    CHECK(se_asymptotic(0.5, 0.5, 4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(se_asymptotic(0.5, 1.0, 2) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(se_asymptotic(1.0, 2.0, 2) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(se_asymptotic(0.0, 0.7, 4) == doctest::Approx(0.0));
    CHECK(se_asymptotic(0.25, 0.25, 2) ==
          doctest::Approx(-0.25 * std::log2(0.25) - 0.75 * std::log2(0.75) + 0.25)
              .epsilon(1e-12));

    CHECK_THROWS_AS(se_asymptotic(-0.1, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(se_asymptotic(0.6, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(se_asymptotic(1.1, 2.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(se_asymptotic(0.5, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(se_asymptotic(0.5, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(se_asymptotic(0.5, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(alpha_star(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(alpha_star(0.0, 2), std::invalid_argument);
}

TEST_CASE("the closed-form ratio is a local and grid maximum") {
    for (double beta : {0.5, 1.0, 2.0}) {
        for (int m : {2, 4, 8}) {
            const double a = alpha_star(beta, m);
            const double v = se_asymptotic(a, beta, m);
            for (double d : {-1e-3, 1e-3}) {
                const double p = a + d;
                if (p >= 0.0 && p <= std::min(1.0, beta))
                    CHECK(v >= se_asymptotic(p, beta, m));
            }
        }
    }
}

TEST_CASE("discrete sizing picks the documented blocks") {
    const KStarResult r = k_star(SeProblem{0.5, 4, 8});
    CHECK(r.k == 4);
    CHECK(r.i == 4);
    CHECK(r.se == doctest::Approx(1.75));
    CHECK(r.k_seed == 3);
    CHECK(r.alpha == doctest::Approx(alpha_star(0.5, 4)));

    CHECK(k_star(SeProblem{1.0, 2, 1}).k == 1);
    CHECK(k_star(SeProblem{1.0, 2, 1}).se == doctest::Approx(1.0));

    // Both block shapes reach two bits on N = 2; the scan keeps the smaller.
    const KStarResult tie = k_star(SeProblem{1.0, 2, 2});
    CHECK(tie.k == 1);
    CHECK(tie.se == doctest::Approx(1.0));

    CHECK_THROWS_AS(k_star(SeProblem{0.1, 2, 4}), std::invalid_argument);
    CHECK_THROWS_AS(k_star(SeProblem{0.5, 3, 8}), std::invalid_argument);
    CHECK_THROWS_AS(k_star(SeProblem{0.5, 1, 8}), std::invalid_argument);
    CHECK_THROWS_AS(k_star(SeProblem{0.0, 2, 8}), std::invalid_argument);
    CHECK_THROWS_AS(k_star(SeProblem{0.5, 2, 0}), std::invalid_argument);
}

TEST_CASE("discrete sizing equals an exhaustive oracle over the whole grid") {
    const PascalOracle po;
    for (int n = 1; n <= 64; ++n) {
        for (double beta : {0.5, 1.0, 2.0}) {
            for (int m : {2, 4, 8}) {
                const OracleBest want = oracle_kstar(n, beta, m, po);
                if (want.i < 1) continue;
                const KStarResult got = k_star(SeProblem{beta, m, n});
                REQUIRE(got.i == want.i);
                REQUIRE(got.k == want.k);
                REQUIRE(got.se == doctest::Approx(static_cast<double>(want.f) / n));
                CHECK(got.k_seed >= 1);
                CHECK(got.k_seed <= std::min(n, want.i));

                // The chosen block really achieves the reported efficiency.
                CHECK(se_exact(IcmParams::payload(n, got.k, got.i, m)) ==
                      doctest::Approx(got.se));
            }
        }
    }
}

TEST_CASE("finite blocks never beat the asymptotic envelope") {
    for (int n : {4, 8, 16, 32}) {
        const int i = n / 2;
        for (int k = 1; k <= i; ++k) {
            const IcmParams p{n, k, i, 4, static_cast<double>(n), Mode::payload};
            const double env = se_asymptotic(static_cast<double>(k) / n, 0.5, 4);
            CHECK(se_exact(p) <= env + 1e-12);
        }
    }
}

TEST_CASE("efficiency grows with the constellation order") {
    double prev = 0.0;
    for (int m : {2, 4, 8, 16}) {
        const double se = k_star(SeProblem{0.5, m, 8}).se;
        CHECK(se >= prev);
        prev = se;
    }
}

TEST_CASE("small blocks recover the documented share of the asymptotic rate") {
    struct Cell {
        int n;
        int m;
        double percent;
    };
    const std::vector<Cell> cells = {
        {4, 4, 70.14}, {4, 8, 77.60}, {4, 16, 82.20},
        {8, 4, 81.82}, {8, 8, 87.30}, {8, 16, 90.41},
    };
    for (const Cell& c : cells) {
        const KStarResult r = k_star(SeProblem{0.5, c.m, c.n});
        const double envelope = se_asymptotic(alpha_star(0.5, c.m), 0.5, c.m);
        const double ratio = 100.0 * r.se / envelope;
        CHECK(std::abs(ratio - c.percent) < 0.5);
    }
}
