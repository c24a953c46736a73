#pragma once

#include "quotapower/numeric.hpp"

#include <cstdint>
#include <vector>

namespace quotapower {

// Agent indices in all public APIs are 1-based (agents 1..n), matching the
// CSV/JSON surfaces. Vectors are positional: values[k] belongs to agent k+1.

enum class WeightOrder { non_decreasing, non_increasing, unordered };

WeightOrder detect_order(const std::vector<std::int64_t>& weights);

// Weighted voting game [q; w_1..w_n]. A coalition S wins iff w(S) >= q.
// Weights are non-negative integers; 0 < q <= w(N). For integer coalition
// sums the winning test reduces to w(S) >= ceil(q), exposed as threshold().
class Game {
  public:
    Game(std::vector<std::int64_t> weights, BigRat quota);

    const std::vector<std::int64_t>& weights() const { return weights_; }
    const BigRat& quota() const { return quota_; }
    std::int64_t threshold() const { return threshold_; }  // ceil(quota)
    std::int64_t total_weight() const { return total_; }
    int n() const { return static_cast<int>(weights_.size()); }
    std::int64_t weight_of(int agent) const;  // agent in 1..n
    WeightOrder order() const { return order_; }

  private:
    std::vector<std::int64_t> weights_;
    BigRat quota_;
    std::int64_t threshold_;
    std::int64_t total_;
    WeightOrder order_;
};

// Exact power vector; values sum to 1 for any valid game.
struct PowerVector {
    std::vector<BigRat> values;

    BigRat sum() const;
    bool operator==(const PowerVector&) const = default;
};

// Cumulative subset-sum counting table over a pool of weights:
// cum(s, v) = number of size-s subsets of the active pool with sum <= v.
// The insert/remove recurrences are linear, so the cumulative form supports
// the same O(pool * total) updates as plain counts while making every
// half-open range query O(1). remove/restore let one table built over N
// serve all the leave-one-out pools; the table never depends on any quota.
class CoalitionCountTable {
  public:
    explicit CoalitionCountTable(std::vector<std::int64_t> pool);

    void remove(int pool_index);   // deactivate one item (0-based position)
    void restore(int pool_index);  // exact inverse of remove

    int active_size() const { return active_; }
    std::int64_t total_sum() const { return total_; }

    // Number of size-s active subsets with sum in [lo, hi); bounds clamped.
    BigInt count_in(int s, std::int64_t lo, std::int64_t hi) const;
    // Number of size-s active subsets with sum <= v.
    BigInt count_le(int s, std::int64_t v) const;

  private:
    void insert_weight(std::int64_t w);
    void remove_weight(std::int64_t w);

    std::vector<std::int64_t> pool_;
    std::vector<bool> active_flags_;
    std::vector<std::vector<BigInt>> cum_;  // cum_[s][v]
    std::int64_t total_;
    int active_;
};

// phi_i = (1/n) sum_l Pr_{S in C(N\{i}, l)}[ q - w_i <= w(S) < q ].
BigRat shapley_exact(const Game& game, int agent);

// Same quantity read off a table whose active pool is the n-1 other
// weights. Lets one table serve many (agent, quota) pairs; the table is
// quota independent, so sweeps reuse it across the whole grid.
BigRat shapley_from_loo(const CoalitionCountTable& table, int n,
                        std::int64_t w_agent, const BigRat& quota);

// All agents via one table and leave-one-out updates; O(n^2 * w(N)) total.
PowerVector shapley_all(const Game& game);

// Permutation enumeration, refused for n > 10. Independent of the counting
// path: walks all n! orders and tallies the unique pivot of each.
BigRat shapley_oracle(const Game& game, int agent);
PowerVector shapley_oracle_all(const Game& game);

// |phi_j - phi_i| without computing either value: the difference collapses
// to one subset-count per cardinality over N\{i,j}.
BigRat shapley_diff(const Game& game, int agent_i, int agent_j);

// True iff every Shapley value equals 1/n: no pair (i,j) admits S, disjoint
// from both, with q in (w(S)+w_i, w(S)+w_j]. Decided by subset-sum
// reachability bitsets per pair, never by enumeration of coalitions.
bool all_equal_criterion(const Game& game);

// p_k = Pr_{A in C(N\{i}, k)}[ q - w_i <= w(A) < q ].
BigRat exact_pk(const Game& game, int agent, int k);

}  // namespace quotapower
