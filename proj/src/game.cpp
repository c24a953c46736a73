#include "quotapower/game.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace quotapower {

WeightOrder detect_order(const std::vector<std::int64_t>& weights) {
    bool nondec = true, noninc = true;
    for (std::size_t i = 1; i < weights.size(); ++i) {
        if (weights[i - 1] > weights[i]) nondec = false;
        if (weights[i - 1] < weights[i]) noninc = false;
    }
    if (nondec) return WeightOrder::non_decreasing;
    if (noninc) return WeightOrder::non_increasing;
    return WeightOrder::unordered;
}

Game::Game(std::vector<std::int64_t> weights, BigRat quota)
    : weights_(std::move(weights)), quota_(std::move(quota)) {
    if (weights_.empty()) throw std::invalid_argument("game: no agents");
    BigInt total = 0;
    for (std::int64_t w : weights_) {
        if (w < 0) throw std::invalid_argument("game: negative weight");
        total += w;
    }
    total_ = to_int64_checked(total);
    if (quota_ <= 0) throw std::invalid_argument("game: quota must be positive");
    if (quota_ > total) throw std::invalid_argument("game: quota exceeds total weight");
    threshold_ = to_int64_checked(ceil_rat(quota_));
    order_ = detect_order(weights_);
}

std::int64_t Game::weight_of(int agent) const {
    if (agent < 1 || agent > n()) throw std::out_of_range("agent index out of range");
    return weights_[agent - 1];
}

BigRat PowerVector::sum() const {
    BigRat s = 0;
    for (const auto& v : values) s += v;
    return s;
}

CoalitionCountTable::CoalitionCountTable(std::vector<std::int64_t> pool)
    : pool_(std::move(pool)), active_flags_(pool_.size(), false), total_(0), active_(0) {
    BigInt total = 0;
    for (std::int64_t w : pool_) {
        if (w < 0) throw std::invalid_argument("count table: negative weight");
        total += w;
    }
    total_ = to_int64_checked(total);
    cum_.resize(pool_.size() + 1);
    cum_[0].assign(static_cast<std::size_t>(total_) + 1, BigInt(1));
    for (std::size_t s = 1; s < cum_.size(); ++s)
        cum_[s].assign(static_cast<std::size_t>(total_) + 1, BigInt(0));
    for (int i = 0; i < static_cast<int>(pool_.size()); ++i) restore(i);
}

void CoalitionCountTable::insert_weight(std::int64_t w) {
    // Rows read one level down, so descending s sees pre-insert values.
    for (int s = active_ + 1; s >= 1; --s) {
        auto& dst = cum_[s];
        const auto& src = cum_[s - 1];
        for (std::int64_t v = total_; v >= w; --v) dst[v] += src[v - w];
    }
}

void CoalitionCountTable::remove_weight(std::int64_t w) {
    // Ascending s: row s-1 is already downdated, which is exactly what the
    // inverse recurrence needs.
    for (int s = 1; s <= active_; ++s) {
        auto& dst = cum_[s];
        const auto& src = cum_[s - 1];
        for (std::int64_t v = w; v <= total_; ++v) dst[v] -= src[v - w];
    }
}

void CoalitionCountTable::remove(int pool_index) {
    if (pool_index < 0 || pool_index >= static_cast<int>(pool_.size()))
        throw std::out_of_range("count table: bad pool index");
    if (!active_flags_[pool_index]) throw std::logic_error("count table: item already removed");
    remove_weight(pool_[pool_index]);
    active_flags_[pool_index] = false;
    --active_;
}

void CoalitionCountTable::restore(int pool_index) {
    if (pool_index < 0 || pool_index >= static_cast<int>(pool_.size()))
        throw std::out_of_range("count table: bad pool index");
    if (active_flags_[pool_index]) throw std::logic_error("count table: item already present");
    insert_weight(pool_[pool_index]);
    active_flags_[pool_index] = true;
    ++active_;
}

BigInt CoalitionCountTable::count_le(int s, std::int64_t v) const {
    if (s < 0 || s > active_ || v < 0) return 0;
    if (v > total_) v = total_;
    return cum_[s][v];
}

BigInt CoalitionCountTable::count_in(int s, std::int64_t lo, std::int64_t hi) const {
    if (hi <= lo) return 0;
    return count_le(s, hi - 1) - count_le(s, lo - 1);
}

BigRat shapley_from_loo(const CoalitionCountTable& table, int n,
                        std::int64_t w_agent, const BigRat& quota) {
    const std::int64_t qs = to_int64_checked(ceil_rat(quota));
    BigRat phi = 0;
    for (int l = 0; l <= n - 1; ++l) {
        BigInt cnt = table.count_in(l, qs - w_agent, qs);
        if (cnt != 0) phi += BigRat(cnt, binomial(n - 1, l));
    }
    return phi / n;
}

namespace {

// phi for one agent given a table whose active pool is N\{agent}.
BigRat shapley_from_loo_table(const CoalitionCountTable& t, const Game& game, int agent) {
    return shapley_from_loo(t, game.n(), game.weight_of(agent), game.quota());
}

}  // namespace

BigRat shapley_exact(const Game& game, int agent) {
    game.weight_of(agent);  // range check
    CoalitionCountTable t(game.weights());
    t.remove(agent - 1);
    return shapley_from_loo_table(t, game, agent);
}

PowerVector shapley_all(const Game& game) {
    CoalitionCountTable t(game.weights());
    PowerVector out;
    out.values.reserve(game.n());
    for (int agent = 1; agent <= game.n(); ++agent) {
        t.remove(agent - 1);
        out.values.push_back(shapley_from_loo_table(t, game, agent));
        t.restore(agent - 1);
    }
    return out;
}

PowerVector shapley_oracle_all(const Game& game) {
    const int n = game.n();
    if (n > 10)
        throw std::invalid_argument("shapley_oracle: refused for n > 10 (n! permutations)");
    const auto& w = game.weights();
    const std::int64_t qs = game.threshold();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::int64_t> pivots(n, 0);
    std::int64_t perms = 0;
    do {
        std::int64_t cumw = 0;
        for (int idx : order) {
            cumw += w[idx];
            if (cumw >= qs) {  // idx turns the growing coalition winning
                ++pivots[idx];
                break;
            }
        }
        ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    PowerVector out;
    out.values.reserve(n);
    for (int i = 0; i < n; ++i) out.values.emplace_back(BigInt(pivots[i]), BigInt(perms));
    return out;
}

BigRat shapley_oracle(const Game& game, int agent) {
    game.weight_of(agent);
    return shapley_oracle_all(game).values[agent - 1];
}

BigRat shapley_diff(const Game& game, int agent_i, int agent_j) {
    const std::int64_t wi = game.weight_of(agent_i);
    const std::int64_t wj = game.weight_of(agent_j);
    if (agent_i == agent_j) throw std::invalid_argument("shapley_diff: agents must differ");
    const int n = game.n();
    std::vector<std::int64_t> pool;
    pool.reserve(n - 2);
    for (int a = 1; a <= n; ++a)
        if (a != agent_i && a != agent_j) pool.push_back(game.weights()[a - 1]);
    CoalitionCountTable t(pool);
    const std::int64_t qs = game.threshold();
    const std::int64_t lo = qs - std::max(wi, wj);
    const std::int64_t hi = qs - std::min(wi, wj);
    BigRat d = 0;
    for (int l = 0; l <= n - 2; ++l) {
        BigInt cnt = t.count_in(l, lo, hi);
        if (cnt != 0) d += BigRat(cnt, binomial(n - 2, l));
    }
    return d / (n - 1);
}

namespace {

// bits |= bits << w, over a fixed-width word array.
void or_shift_left(std::vector<std::uint64_t>& bits, std::int64_t w) {
    const auto nw = static_cast<std::int64_t>(bits.size());
    const std::int64_t word_shift = w / 64;
    const int bit_shift = static_cast<int>(w % 64);
    for (std::int64_t k = nw - 1; k >= word_shift; --k) {
        std::uint64_t v = bits[k - word_shift] << bit_shift;
        if (bit_shift != 0 && k - word_shift - 1 >= 0)
            v |= bits[k - word_shift - 1] >> (64 - bit_shift);
        bits[k] |= v;
    }
}

bool any_bit_in(const std::vector<std::uint64_t>& bits, std::int64_t lo, std::int64_t hi) {
    if (lo < 0) lo = 0;
    const auto top = static_cast<std::int64_t>(bits.size()) * 64;
    if (hi > top) hi = top;
    for (std::int64_t v = lo; v < hi; ++v) {
        if (v % 64 == 0 && hi - v >= 64) {  // whole-word fast path
            if (bits[v / 64] != 0) return true;
            v += 63;
            continue;
        }
        if (bits[v / 64] >> (v % 64) & 1u) return true;
    }
    return false;
}

}  // namespace

bool all_equal_criterion(const Game& game) {
    const int n = game.n();
    const auto& w = game.weights();
    const std::int64_t qs = game.threshold();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (w[i] == w[j]) continue;  // empty witness interval
            const std::int64_t lo = qs - std::max(w[i], w[j]);
            const std::int64_t hi = qs - std::min(w[i], w[j]);
            if (hi <= 0) continue;
            std::int64_t pool_sum = 0;
            for (int a = 0; a < n; ++a)
                if (a != i && a != j) pool_sum += w[a];
            std::vector<std::uint64_t> reach(static_cast<std::size_t>(pool_sum / 64) + 1, 0);
            reach[0] = 1;  // the empty coalition
            for (int a = 0; a < n; ++a)
                if (a != i && a != j && w[a] > 0) or_shift_left(reach, w[a]);
            if (any_bit_in(reach, lo, hi)) return false;
        }
    }
    return true;
}

BigRat exact_pk(const Game& game, int agent, int k) {
    const std::int64_t wi = game.weight_of(agent);
    const int n = game.n();
    if (k < 0 || k > n - 1) throw std::out_of_range("exact_pk: k must lie in 0..n-1");
    std::vector<std::int64_t> pool;
    pool.reserve(n - 1);
    for (int a = 1; a <= n; ++a)
        if (a != agent) pool.push_back(game.weights()[a - 1]);
    CoalitionCountTable t(pool);
    const std::int64_t qs = game.threshold();
    return BigRat(t.count_in(k, qs - wi, qs), binomial(n - 1, k));
}

}  // namespace quotapower
