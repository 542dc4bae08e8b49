#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "povs/sample.hpp"

namespace povs {

// MT19937 (Matsumoto & Nishimura 1998), 32-bit output.
class Mt19937 {
public:
    static constexpr std::uint32_t kDefaultSeed = 5489u;

    explicit Mt19937(std::uint32_t seed = kDefaultSeed) { seed_with(seed); }

    void seed_with(std::uint32_t seed);
    std::uint32_t next_u32();

    friend bool operator==(const Mt19937&, const Mt19937&) = default;

private:
    void twist();

    std::array<std::uint32_t, 624> state_{};
    std::size_t index_ = 624;
};

// Uniform and normal deviates drawn from one MT19937 stream. Normals come
// from the Box-Muller transform of consecutive uniform pairs; the second
// normal of each pair is cached.
class DeviateStream {
public:
    explicit DeviateStream(std::uint32_t seed) : engine_(seed) {}

    /// (u32 + 0.5) / 2^32, strictly inside (0, 1).
    double next_uniform();
    double next_std_normal();

    std::uint64_t uniforms_drawn() const { return uniforms_drawn_; }

    friend bool operator==(const DeviateStream&, const DeviateStream&) = default;

private:
    Mt19937 engine_;
    std::optional<double> spare_;
    std::uint64_t uniforms_drawn_ = 0;
};

/// Seed for replicate `replicate` of design cell `cell`:
/// low 32 bits of (master * 0x9E3779B97F4A7C15) ^ (cell * 0xBF58476D1CE4E5B9) ^ replicate,
/// with wrapping 64-bit multiplication.
std::uint32_t substream_seed(std::uint64_t master_seed, std::uint64_t cell_index,
                             std::uint64_t replicate_index);

enum class DistributionKind { Normal, Gumbel, Exponential, Lognormal };

inline constexpr std::array<DistributionKind, 4> kAllDistributions{
    DistributionKind::Normal, DistributionKind::Gumbel, DistributionKind::Exponential,
    DistributionKind::Lognormal};

struct ReferenceMoments {
    double skewness;
    double kurtosis;
};

// Skewness and (non-excess) kurtosis as tabulated for the transformed deviates.
ReferenceMoments reference_moments(DistributionKind d);

std::string_view to_string(DistributionKind d);  // "normal", "gumbel", ...
std::optional<DistributionKind> parse_distribution(std::string_view name);

/// Pair with correlation rho and standard normal marginals from two
/// independent standard normals. Throws std::domain_error for |rho| > 1.
std::pair<double, double> correlated_pair(double z1, double z2, double rho);

/// Maps a standard normal deviate through the distribution's transform:
/// identity, -log(-log U), -log(U) - 1 or exp(z), with U = Phi(z).
double transform_deviate(double z, DistributionKind d);

struct CellParams {
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::size_t n_c = 0;
    double rho = 0.0;
    DistributionKind dist = DistributionKind::Normal;
    double delta = 0.0;  // added to every Sample 2 value after the transform

    friend bool operator==(const CellParams&, const CellParams&) = default;
};

/// Draws one simulated sample. Draw order: n_c pairs (two normals each),
/// then n_a normals for unpaired_a, then n_b normals for unpaired_b.
PartiallyOverlappingSample gen_cell_sample(const CellParams& p, DeviateStream& stream);

}  // namespace povs
