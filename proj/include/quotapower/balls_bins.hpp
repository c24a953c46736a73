#pragma once

#include "quotapower/numeric.hpp"

#include <cstdint>
#include <vector>

namespace quotapower {

// splitmix64 step (Steele, Lea, Vigna). Used to turn a user seed plus a
// trial index into a well-mixed engine seed, so per-trial streams stay
// decorrelated even for adjacent seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Engine seed for trial `trial` of a run keyed by `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(seed ^ trial);
}

struct BallsBinsConfig {
    int n = 0;                 // bins
    std::int64_t m = 0;        // balls
    std::vector<BigRat> probs; // length n, non-negative, sums to 1
    std::uint64_t seed = 0;

    // Throws invalid_argument unless n >= 1, m >= 0, probs has length n,
    // entries are non-negative and sum to 1 within 1e-12. The stored vector
    // is renormalized to sum to exactly 1.
    void validate_and_normalize();
};

struct SampledWeights {
    std::vector<std::int64_t> sorted; // non-decreasing
    std::vector<std::int64_t> raw;    // bin order, kept for diagnostics
    std::uint64_t seed = 0;

    std::int64_t total() const;
};

// Equal probabilities 1/n.
std::vector<BigRat> uniform_probs(int n);

// p_i proportional to rho^(n-i), normalized exactly: the last bin is the
// heaviest. Requires 0 < rho < 1/2.
std::vector<BigRat> exponential_probs(int n, const BigRat& rho);

// Multinomial draw of m balls over the configured bins, by sequential
// binomial conditioning: bin i receives Binomial(m_left, p_i / tail_i) and
// the last bin takes the remainder. Binomials are sampled by geometric
// skips between successes, so the cost is O(m + n) per call. Deterministic
// in config.seed; the only platform-dependent ingredient is libm rounding
// in log/log1p.
SampledWeights sample_weights(const BallsBinsConfig& config);

// Two-sided concentration test for the minimum weight of a uniform sample:
// sqrt(m ln n / (3n)) <= m/n - w1 <= sqrt(4 m ln n / n), natural log.
bool min_weight_in_bounds(int n, std::int64_t m, std::int64_t w1);

// Ball count ceil(C rho^(-n) (1-2 rho)^(-2) ln n) past which an exponential
// sample is super-increasing with high probability. C is a tunable knob;
// 8 is enough for the statistical checks in this repo.
std::int64_t si_sample_threshold(int n, const BigRat& rho, double C = 8.0);

}  // namespace quotapower
