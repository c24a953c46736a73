#pragma once

#include "quotapower/game.hpp"
#include "quotapower/numeric.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace quotapower {

// Closed-form Shapley machinery for super-increasing weights. The native
// convention here is decreasing: w_1 > w_2 > ... > w_n > 0 with the strict
// dominance w_i > w_{i+1} + ... + w_n; agents and pivotal-set members are
// 1-based. Weights are big integers so geometric families (d^(n-1), ..., 1)
// stay exact at any depth. An increasing-convention entry point remaps
// agent i <-> n+1-i onto the same engine.

bool is_super_increasing_decreasing(std::span<const BigInt> w);
bool is_super_increasing_increasing(std::span<const BigInt> w);
bool is_super_increasing_increasing(std::span<const std::int64_t> w);

class SIWeights {
  public:
    // Requires the strict decreasing-convention dominance; equality at any
    // step is rejected.
    explicit SIWeights(std::vector<BigInt> decreasing);

    // (d^{n-1}, ..., d, 1) for d >= 2.
    static SIWeights powers(int d, int n);

    int n() const { return static_cast<int>(w_.size()); }
    const std::vector<BigInt>& weights() const { return w_; }
    const BigInt& weight(int agent) const;  // agent in 1..n
    const BigInt& total() const { return suffix_[0]; }
    // w({from, ..., n}); from in 1..n+1, the empty suffix summing to 0.
    const BigInt& suffix_sum(int from) const;

  private:
    std::vector<BigInt> w_;
    std::vector<BigInt> suffix_;  // suffix_[k] = w_{k+1} + ... + w_n
};

// Pivotal set: strictly increasing 1-based members, possibly empty only
// where a predecessor is taken.
struct PSet {
    std::vector<int> members;
    int n = 0;

    bool contains(int agent) const;
    bool operator==(const PSet&) const = default;
};

// beta(P) = sum over members of 2^{n-i}; the subset-sum order of any
// super-increasing vector coincides with the order of beta.
BigInt beta(const PSet& p);
PSet pset_from_beta(const BigInt& b, int n);  // b in 0..2^n-1
PSet predecessor(const PSet& p);              // beta decremented by one

BigInt si_weight_sum(const SIWeights& w, const PSet& p);

// The unique P with q in (w(P^-), w(P)]: greedy scan, O(n) comparisons.
PSet find_pset(const SIWeights& w, const BigRat& q);

// Digit rule for w_i = d^{n-i}: read ceil(q) in base d and either take the
// 0/1 digit positions directly or truncate at the first digit above 1.
PSet pset_dary(int d, int n, const BigRat& q);

struct QuotaInterval {
    BigRat lower;  // exclusive
    BigRat upper;  // inclusive
    PSet pset;
};

// The half-open quota interval (w(P^-), w(P)] on which A(q) = P.
QuotaInterval si_interval(const SIWeights& w, const PSet& p);

// The closed form, evaluated straight from a pivotal set; this is also the
// limit value at the breakpoint w(P) of an infinite sequence.
BigRat pset_formula(const PSet& p, int agent);

BigRat si_shapley(const SIWeights& w, const BigRat& q, int agent);
PowerVector si_shapley_all(const SIWeights& w, const BigRat& q);

// Increasing-convention entry (weights w_1 <= ... <= w_n super-increasing in
// the prefix sense, agent labeled in that order).
BigRat si_shapley_increasing(const std::vector<BigInt>& increasing, const BigRat& q, int agent);

enum class AdjacentRelation { equal, strictly_greater };

// Relation of phi_agent(q) to phi_{agent+1}(q), decided from membership of
// the two agents in A(q) alone; phi never increases with the index.
AdjacentRelation adjacent_relation(const SIWeights& w, const BigRat& q, int agent);

// phi_agent(w(P)) - phi_agent(w(P^-)), with phi(0) = 0 when P^- is empty.
BigRat jump_delta(const SIWeights& w, const PSet& p, int agent);

// 1/(p*C(p-1,t)) - sum_{l=1}^{k} 1/((p+l)*C(p+l-1, t+l-1)); requires
// p > t >= 0. Telescopes to 1/((p+k)*C(p+k-1, t+k)).
BigRat combinatorial_tail(std::int64_t p, std::int64_t t, std::int64_t k);

// Depth-limited evaluation of the infinite geometric family w_i = d^{-i}.
struct LimitSpec {
    int d = 2;
    int depth = 32;  // prefix length K
    BigRat q;        // in (0, 1/(d-1))
};

struct LimitValue {
    BigRat value;
    BigRat error_bound;  // 0 when A(q) provably stabilized below the depth
};

LimitValue limit_shapley(const LimitSpec& spec, int agent);

// phi on the m-prefix of d^{-i} equals phi on a deeper prefix at the
// remapped quota w(A|_m(q)); q is given in the m-prefix integer scale.
bool prefix_consistency(int d, int m, const BigRat& q);

}  // namespace quotapower
