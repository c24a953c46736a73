#pragma once

#include "quotapower/balls_bins.hpp"
#include "quotapower/game.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace quotapower {

// One Monte Carlo trial. `measured` is the report-friendly double view of a
// quantity that was computed exactly; `note` carries failure reasons such
// as "not-SI".
struct TrialRecord {
    std::uint64_t seed = 0;
    std::uint64_t weights_digest = 0;
    double measured = 0.0;
    bool success = false;
    std::string note;
};

struct ExperimentReport {
    std::string tag;  // which claim the run exercises
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<TrialRecord> trials;

    int trial_count = 0;
    double mean = 0.0;    // of measured
    double stddev = 0.0;  // sample standard deviation of measured
    double success_fraction = 0.0;
    std::string tolerance_note;  // calibration bands that are not paper constants

    // Fills the aggregate fields from `trials`.
    void finalize();
};

// Uniform weights, quotas held away from every multiple of m/n; checks that
// every Shapley value equals exactly 1/n at each configured quota.
struct EqualPowerConfig {
    int n = 0;
    std::int64_t m = 0;      // balls; must be a multiple of n and >= 3n^3
    std::vector<BigRat> quotas;  // empty: midpoints (l + 1/2) m/n, l < n
    int trials = 0;
    std::uint64_t seed = 0;
};
ExperimentReport run_equal_power(const EqualPowerConfig& cfg);

// Uniform weights at quota ell*m/n; measures the power of the lightest
// agent exactly, per trial.
struct MinShapleyConfig {
    int n = 0;
    std::int64_t m = 0;  // multiple of n
    int ell = 0;         // 1..n-1
    int trials = 0;
    std::uint64_t seed = 0;
};
ExperimentReport run_min_shapley(const MinShapleyConfig& cfg);

// Exponential weights: compares the sampled game's exact power at quota m*T
// with the closed form evaluated on the exact probability vector at T.
struct ExponentialMatchConfig {
    int n = 0;
    BigRat rho;                 // in (0, 1/2)
    std::int64_t m = 0;         // >= si_sample_threshold(n, rho, C)
    std::vector<BigRat> T_values;  // probability-scale quotas in (0, 1]
    int trials = 0;
    std::uint64_t seed = 0;
    double C = 8.0;  // threshold constant knob
};
ExperimentReport run_exponential_match(const ExponentialMatchConfig& cfg);

// Midpoints of `count` distinct probability-scale intervals, drawn without
// replacement among the intervals wide enough that their midpoint clears
// the margin sqrt(ln(n m)/m) required by run_exponential_match.
std::vector<BigRat> exponential_interval_midpoints(int n, const BigRat& rho,
                                                   std::int64_t m, int count,
                                                   std::uint64_t seed);

struct GridSpec {
    enum class Kind {
        explicit_list,              // use `points`
        linspace,                   // `count` points from `lo` to `hi` inclusive
        breakpoints,                // all w(P), needs super-increasing weights, n <= 20
        breakpoints_and_midpoints,  // breakpoints plus each interval midpoint
    };
    Kind kind = Kind::explicit_list;
    std::vector<BigRat> points;
    BigRat lo, hi;
    int count = 0;
};

struct SweepCurve {
    std::vector<BigRat> quotas;            // ascending, deduplicated
    std::vector<int> agents;               // 1-based
    std::vector<std::vector<BigRat>> values;  // values[a][k]: agents[a] at quotas[k]
    std::uint64_t game_digest = 0;
};

// Exact power values over a quota grid, one counting table for the whole
// sweep. `agents` empty means all agents.
SweepCurve quota_sweep(const Game& game, const GridSpec& grid,
                       std::vector<int> agents = {});

}  // namespace quotapower
