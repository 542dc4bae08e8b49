#include "povs/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "povs/special_functions.hpp"

namespace povs {

void Mt19937::seed_with(std::uint32_t seed) {
    state_[0] = seed;
    for (std::size_t i = 1; i < state_.size(); ++i) {
        state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                    static_cast<std::uint32_t>(i);
    }
    index_ = state_.size();
}

void Mt19937::twist() {
    constexpr std::size_t n = 624;
    constexpr std::size_t m = 397;
    constexpr std::uint32_t upper = 0x80000000u;
    constexpr std::uint32_t lower = 0x7fffffffu;
    constexpr std::uint32_t matrix_a = 0x9908b0dfu;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t y = (state_[i] & upper) | (state_[(i + 1) % n] & lower);
        state_[i] = state_[(i + m) % n] ^ (y >> 1) ^ ((y & 1u) ? matrix_a : 0u);
    }
    index_ = 0;
}

std::uint32_t Mt19937::next_u32() {
    if (index_ >= state_.size()) twist();
    std::uint32_t y = state_[index_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
}

double DeviateStream::next_uniform() {
    ++uniforms_drawn_;
    return (static_cast<double>(engine_.next_u32()) + 0.5) / 4294967296.0;
}

double DeviateStream::next_std_normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

std::uint32_t substream_seed(std::uint64_t master_seed, std::uint64_t cell_index,
                             std::uint64_t replicate_index) {
    const std::uint64_t mixed = (master_seed * 0x9E3779B97F4A7C15ull) ^
                                (cell_index * 0xBF58476D1CE4E5B9ull) ^ replicate_index;
    return static_cast<std::uint32_t>(mixed & 0xffffffffull);
}

ReferenceMoments reference_moments(DistributionKind d) {
    switch (d) {
        case DistributionKind::Normal: return {0.000, 3.000};
        case DistributionKind::Gumbel: return {1.140, 5.400};
        case DistributionKind::Exponential: return {2.004, 9.000};
        case DistributionKind::Lognormal: return {6.145, 107.256};
    }
    return {0.0, 0.0};
}

std::string_view to_string(DistributionKind d) {
    switch (d) {
        case DistributionKind::Normal: return "normal";
        case DistributionKind::Gumbel: return "gumbel";
        case DistributionKind::Exponential: return "exponential";
        case DistributionKind::Lognormal: return "lognormal";
    }
    return "?";
}

std::optional<DistributionKind> parse_distribution(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (DistributionKind d : kAllDistributions)
        if (to_string(d) == lower) return d;
    return std::nullopt;
}

std::pair<double, double> correlated_pair(double z1, double z2, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw std::domain_error("correlated_pair: |rho| must not exceed 1, got " +
                                std::to_string(rho));
    }
    const double common = std::sqrt((1.0 + rho) / 2.0) * z1;
    const double opposed = std::sqrt((1.0 - rho) / 2.0) * z2;
    return {common + opposed, common - opposed};
}

double transform_deviate(double z, DistributionKind d) {
    // log U with U = Phi(z); the complement form avoids U rounding to 1.
    const auto log_u = [](double x) {
        return x > 0.0 ? std::log1p(-normal_sf(x)) : std::log(normal_cdf(x));
    };
    switch (d) {
        case DistributionKind::Normal: return z;
        case DistributionKind::Gumbel: return -std::log(-log_u(z));
        case DistributionKind::Exponential: return -log_u(z) - 1.0;
        case DistributionKind::Lognormal: return std::exp(z);
    }
    return z;
}

PartiallyOverlappingSample gen_cell_sample(const CellParams& p, DeviateStream& stream) {
    PartiallyOverlappingSample s;
    s.paired.reserve(p.n_c);
    s.unpaired_a.reserve(p.n_a);
    s.unpaired_b.reserve(p.n_b);
    for (std::size_t i = 0; i < p.n_c; ++i) {
        const double z1 = stream.next_std_normal();
        const double z2 = stream.next_std_normal();
        const auto [x1, x2] = correlated_pair(z1, z2, p.rho);
        s.paired.push_back({transform_deviate(x1, p.dist), transform_deviate(x2, p.dist) + p.delta});
    }
    for (std::size_t i = 0; i < p.n_a; ++i)
        s.unpaired_a.push_back(transform_deviate(stream.next_std_normal(), p.dist));
    for (std::size_t i = 0; i < p.n_b; ++i)
        s.unpaired_b.push_back(transform_deviate(stream.next_std_normal(), p.dist) + p.delta);
    return s;
}

}  // namespace povs
