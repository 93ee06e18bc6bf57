#include "icm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace icm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, StreamPurpose purpose,
                     std::uint64_t counter)
    : engine_(splitmix64(
          splitmix64(splitmix64(master_seed) ^ static_cast<std::uint64_t>(purpose)) ^
          counter)) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_bits(int bits) {
    if (bits < 0 || bits > 63) throw std::invalid_argument("next_bits: bits in [0,63]");
    if (bits == 0) return 0;
    return engine_() >> (64 - bits);
}

std::complex<double> RngStream::next_cgauss(double variance) {
    // Box-Muller on explicit uniforms keeps draws engine-exact and portable.
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(variance * 0.5);
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace icm
