#include "quotapower/balls_bins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace quotapower {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

// Uniform in (0, 1]; the shift keeps the low, weaker bits out of the
// mantissa and the +1 excludes zero so logs stay finite.
double uniform_unit(std::mt19937_64& rng) {
    return double((rng() >> 11) + 1) * 0x1p-53;
}

// Binomial(t, r) by skipping over failures: gaps between successes are
// geometric, so the expected number of draws is t*r + 1.
std::int64_t binomial_sample(std::int64_t t, double r, std::mt19937_64& rng) {
    if (t <= 0 || r <= 0.0) return 0;
    if (r >= 1.0) return t;
    const double denom = std::log1p(-r);
    std::int64_t count = 0, pos = 0;
    while (true) {
        const double gap = std::floor(std::log(uniform_unit(rng)) / denom);
        if (gap >= double(t - pos)) break;  // next success lands past the end
        pos += std::int64_t(gap) + 1;
        if (pos > t) break;
        ++count;
    }
    return count;
}

}  // namespace

void BallsBinsConfig::validate_and_normalize() {
    if (n < 1) throw std::invalid_argument("balls and bins: need at least one bin");
    if (m < 0) throw std::invalid_argument("balls and bins: ball count must be non-negative");
    if (int(probs.size()) != n)
        throw std::invalid_argument("balls and bins: probability vector length must equal n");
    BigRat sum = 0;
    for (const auto& p : probs) {
        if (p < 0) throw std::invalid_argument("balls and bins: probabilities must be non-negative");
        sum += p;
    }
    BigRat err = sum - 1;
    if (err < 0) err = -err;
    if (err > BigRat(BigInt(1), BigInt(1000000000000ll)))
        throw std::invalid_argument("balls and bins: probabilities must sum to 1");
    for (auto& p : probs) p /= sum;
}

std::int64_t SampledWeights::total() const {
    return std::accumulate(sorted.begin(), sorted.end(), std::int64_t(0));
}

std::vector<BigRat> uniform_probs(int n) {
    if (n < 1) throw std::invalid_argument("uniform_probs: need at least one bin");
    return std::vector<BigRat>(n, BigRat(1, n));
}

std::vector<BigRat> exponential_probs(int n, const BigRat& rho) {
    if (n < 1) throw std::invalid_argument("exponential_probs: need at least one bin");
    if (rho <= 0 || rho * 2 >= 1)
        throw std::invalid_argument("exponential_probs: rho must lie in (0, 1/2)");
    std::vector<BigRat> p(n);
    BigRat power = 1, sum = 0;
    for (int i = n - 1; i >= 0; --i) {  // p[i] = rho^(n-1-i)
        p[i] = power;
        sum += power;
        power *= rho;
    }
    for (auto& x : p) x /= sum;
    return p;
}

SampledWeights sample_weights(const BallsBinsConfig& config) {
    BallsBinsConfig c = config;
    c.validate_and_normalize();

    std::mt19937_64 rng(splitmix64(c.seed));
    SampledWeights out;
    out.seed = c.seed;
    out.raw.assign(c.n, 0);

    BigRat tail = 1;
    std::int64_t left = c.m;
    for (int i = 0; i < c.n - 1 && left > 0; ++i) {
        const BigRat cond = c.probs[i] / tail;
        const std::int64_t k = binomial_sample(left, cond.convert_to<double>(), rng);
        out.raw[i] = k;
        left -= k;
        tail -= c.probs[i];
        if (tail <= 0) break;  // remaining bins have probability zero
    }
    if (c.n > 0) out.raw[c.n - 1] += left;

    out.sorted = out.raw;
    std::stable_sort(out.sorted.begin(), out.sorted.end());
    return out;
}

bool min_weight_in_bounds(int n, std::int64_t m, std::int64_t w1) {
    if (n < 1 || m < 1) throw std::invalid_argument("min_weight_in_bounds: need n, m >= 1");
    const double gap = double(m) / double(n) - double(w1);
    const double mln = double(m) * std::log(double(n));
    return std::sqrt(mln / (3.0 * n)) <= gap && gap <= std::sqrt(4.0 * mln / n);
}

std::int64_t si_sample_threshold(int n, const BigRat& rho, double C) {
    if (n < 1) throw std::invalid_argument("si_sample_threshold: need at least one bin");
    if (rho <= 0 || rho * 2 >= 1)
        throw std::invalid_argument("si_sample_threshold: rho must lie in (0, 1/2)");
    if (C <= 0) throw std::invalid_argument("si_sample_threshold: constant must be positive");
    BigRat base = 1;
    for (int i = 0; i < n; ++i) base /= rho;  // rho^(-n), exact
    const BigRat margin = 1 - rho * 2;
    base /= margin * margin;
    const double value = C * base.convert_to<double>() * std::log(double(n));
    return std::int64_t(std::ceil(value));
}

}  // namespace quotapower
