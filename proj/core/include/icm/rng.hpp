#ifndef ICM_RNG_HPP
#define ICM_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace icm {

/// Purpose tag separating independent stream families under one seed.
enum class StreamPurpose : std::uint64_t {
    sweep = 1,
    channel_probe = 2,
    pep = 3,
    test = 4,
};

/// Deterministic stream keyed by (master seed, purpose, counter). Streams
/// with distinct keys are statistically independent; the same key always
/// reproduces the same draw sequence.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t counter);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double next_unit();

    /// Top `bits` bits of one engine draw as an unsigned word; bits in [0, 63].
    std::uint64_t next_bits(int bits);

    /// Circularly symmetric complex Gaussian, zero mean, E|z|^2 = variance.
    std::complex<double> next_cgauss(double variance);

private:
    std::mt19937_64 engine_;
};

}  // namespace icm

#endif
