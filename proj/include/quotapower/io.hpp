#pragma once

#include "quotapower/experiments.hpp"
#include "quotapower/game.hpp"
#include "quotapower/numeric.hpp"
#include "quotapower/super_increasing.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quotapower {

struct SampledWeights;

// Parsed form of a game document:
//   {"weights": [4, 2, 1], "quota": {"num": 3, "den": 1}}
// The sampler's output ({"weights": ..., "m": ..., "n": ..., "seed": ...})
// parses with the same reader, quota absent.
struct GameDocument {
    std::vector<std::int64_t> weights;
    std::optional<BigRat> quota;
};

GameDocument read_game_document(std::istream& in);

// Builds the game, with `override_quota` taking precedence over the
// document's quota. Throws std::invalid_argument when neither is present.
Game make_game(const GameDocument& doc, const std::optional<BigRat>& override_quota);

// One value per line, "a/b" or decimal, exact; blank lines and lines
// starting with '#' are skipped.
std::vector<BigRat> read_rational_lines(std::istream& in);

// CSV: agent_index, value_num, value_den, value_float (17 significant digits).
void write_power_csv(std::ostream& out, const PowerVector& power);

// JSON: {"weights": [...], "m": ..., "n": ..., "seed": ...} with ascending
// weights, directly consumable as a game document.
void write_sample_json(std::ostream& out, const SampledWeights& sample);

// CSV: quota_num, quota_den, agent, phi_num, phi_den, phi_float; quotas
// ascending in the outer loop, agents ascending in the inner one.
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);

// CSV over all 2^n - 1 pivotal sets in beta order: beta, pset (comma-joined,
// quoted), lower_num, lower_den, upper_num, upper_den, then one phi{i}_num,
// phi{i}_den pair per agent. Requires n <= 20.
void write_breakpoints_csv(std::ostream& out, const SIWeights& w);

// Report as a JSON object with config, per-trial records, and aggregates;
// key order fixed, no timestamps, so identical runs serialize identically.
void write_report_json(std::ostream& out, const ExperimentReport& report);

// Flat per-trial CSV: trial, seed, weights_digest, measured, success, note.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace quotapower
