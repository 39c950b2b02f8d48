#pragma once

#include <cstdint>

namespace pwlab {

// Deterministic, platform-independent random streams. Everything downstream
// (simulation, benchmarks) must reproduce bit-identically from a seed, so no
// std:: distributions are used anywhere: the algorithms are pinned here.
//
//   state:      xoshiro256++ (Blackman & Vigna), seeded with four
//               consecutive splitmix64 outputs
//   uniform:    53-bit mantissa draws
//   normal:     Box-Muller, two uniforms per pair, cosine branch first
//   exponential: inversion, -ln(u)/rate
//   gamma:      Marsaglia-Tsang squeeze; shape < 1 boosted via U^(1/shape)

// One splitmix64 step: advances state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// The (index+1)-th output of the splitmix64 sequence started at seed, in
// O(1). Used to key independent substreams (one per replicate).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // uniform on [0, 1), 53 random bits
    double uniform();
    // uniform on (0, 1], safe as a log argument
    double uniform_pos();

    double normal();
    double exponential(double rate);
    double gamma(double shape, double rate);

private:
    std::uint64_t s_[4];
    double spare_normal_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pwlab
