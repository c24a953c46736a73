#include "quotapower/super_increasing.hpp"

#include <algorithm>
#include <stdexcept>

namespace quotapower {

namespace {

// Strict dominance over the running tail; positivity falls out of the last
// step's empty tail.
template <class It>
bool si_scan(It begin, It end) {
    if (begin == end) return false;
    BigInt tail = 0;
    for (It it = begin; it != end; ++it) {
        if (BigInt(*it) <= tail) return false;
        tail += *it;
    }
    return true;
}

}  // namespace

bool is_super_increasing_decreasing(std::span<const BigInt> w) {
    return si_scan(w.rbegin(), w.rend());
}

bool is_super_increasing_increasing(std::span<const BigInt> w) {
    return si_scan(w.begin(), w.end());
}

bool is_super_increasing_increasing(std::span<const std::int64_t> w) {
    return si_scan(w.begin(), w.end());
}

SIWeights::SIWeights(std::vector<BigInt> decreasing) : w_(std::move(decreasing)) {
    if (w_.empty()) throw std::invalid_argument("si weights: no agents");
    const int n = static_cast<int>(w_.size());
    suffix_.assign(n + 1, BigInt(0));
    for (int k = n - 1; k >= 0; --k) suffix_[k] = suffix_[k + 1] + w_[k];
    for (int i = 1; i <= n; ++i)
        if (w_[i - 1] <= suffix_[i])
            throw std::invalid_argument(
                "si weights: w_" + std::to_string(i) +
                " must strictly exceed the sum of all later weights");
}

SIWeights SIWeights::powers(int d, int n) {
    if (d < 2) throw std::invalid_argument("si weights: base must be at least 2");
    if (n < 1) throw std::invalid_argument("si weights: need at least one agent");
    std::vector<BigInt> w(n);
    BigInt p = 1;
    for (int i = n; i >= 1; --i) {
        w[i - 1] = p;
        p *= d;
    }
    return SIWeights(std::move(w));
}

const BigInt& SIWeights::weight(int agent) const {
    if (agent < 1 || agent > n()) throw std::out_of_range("si weights: agent out of range");
    return w_[agent - 1];
}

const BigInt& SIWeights::suffix_sum(int from) const {
    if (from < 1 || from > n() + 1) throw std::out_of_range("si weights: bad suffix start");
    return suffix_[from - 1];
}

bool PSet::contains(int agent) const {
    return std::binary_search(members.begin(), members.end(), agent);
}

namespace {

void validate_pset(const PSet& p) {
    if (p.n < 0) throw std::invalid_argument("pset: negative n");
    int prev = 0;
    for (int m : p.members) {
        if (m <= prev || m > p.n)
            throw std::invalid_argument("pset: members must be strictly increasing within 1..n");
        prev = m;
    }
}

}  // namespace

BigInt beta(const PSet& p) {
    validate_pset(p);
    BigInt b = 0;
    for (int m : p.members) boost::multiprecision::bit_set(b, static_cast<unsigned>(p.n - m));
    return b;
}

PSet pset_from_beta(const BigInt& b, int n) {
    if (n < 0 || b < 0 || b >= BigInt(1) << n)
        throw std::invalid_argument("pset_from_beta: value out of range");
    PSet p;
    p.n = n;
    for (int i = 1; i <= n; ++i)
        if (boost::multiprecision::bit_test(b, static_cast<unsigned>(n - i))) p.members.push_back(i);
    return p;
}

PSet predecessor(const PSet& p) {
    BigInt b = beta(p);
    if (b == 0) throw std::invalid_argument("predecessor: the empty set has none");
    return pset_from_beta(b - 1, p.n);
}

BigInt si_weight_sum(const SIWeights& w, const PSet& p) {
    validate_pset(p);
    if (p.n != w.n()) throw std::invalid_argument("si_weight_sum: pset built for a different n");
    BigInt s = 0;
    for (int m : p.members) s += w.weight(m);
    return s;
}

PSet find_pset(const SIWeights& w, const BigRat& q) {
    if (q <= 0 || q > BigRat(w.total()))
        throw std::invalid_argument("find_pset: quota must lie in (0, w(N)]");
    const BigInt& qn = boost::multiprecision::numerator(q);
    const BigInt& qd = boost::multiprecision::denominator(q);
    const bool integral = qd == 1;
    PSet p;
    p.n = w.n();
    BigInt cur = 0;  // weight of the members chosen so far
    for (int i = 1; i <= w.n(); ++i) {
        // Take i exactly when q exceeds everything attainable without it.
        BigInt without_i = cur + w.suffix_sum(i + 1);
        const bool take = integral ? qn > without_i : qn > without_i * qd;
        if (take) {
            p.members.push_back(i);
            cur += w.weight(i);
        }
    }
    return p;  // non-empty: the last step compares against cur alone
}

PSet pset_dary(int d, int n, const BigRat& q) {
    if (d < 2) throw std::invalid_argument("pset_dary: base must be at least 2");
    if (n < 1) throw std::invalid_argument("pset_dary: need at least one agent");
    BigInt total = ((BigInt(1) * boost::multiprecision::pow(BigInt(d), n)) - 1) / (d - 1);
    if (q <= 0 || q > BigRat(total))
        throw std::invalid_argument("pset_dary: quota must lie in (0, w(N)]");
    BigInt rest = ceil_rat(q);
    std::vector<int> digits(n + 1, 0);  // digits[1..n], most significant first
    for (int pos = n; pos >= 1; --pos) {
        digits[pos] = static_cast<int>(rest % d);
        rest /= d;
    }
    PSet p;
    p.n = n;
    int first_big = 0;
    for (int i = 1; i <= n && first_big == 0; ++i)
        if (digits[i] > 1) first_big = i;
    if (first_big == 0) {
        for (int i = 1; i <= n; ++i)
            if (digits[i] == 1) p.members.push_back(i);
        return p;
    }
    int k = 0;
    for (int i = first_big - 1; i >= 1; --i)
        if (digits[i] == 0) {
            k = i;
            break;
        }
    if (k == 0) throw std::logic_error("pset_dary: no zero digit before the first digit above 1");
    for (int i = 1; i < k; ++i)
        if (digits[i] == 1) p.members.push_back(i);
    p.members.push_back(k);
    return p;
}

QuotaInterval si_interval(const SIWeights& w, const PSet& p) {
    if (p.members.empty()) throw std::invalid_argument("si_interval: pset must be non-empty");
    PSet pre = predecessor(p);
    QuotaInterval iv;
    iv.lower = BigRat(si_weight_sum(w, pre));
    iv.upper = BigRat(si_weight_sum(w, p));
    iv.pset = p;
    return iv;
}

BigRat pset_formula(const PSet& p, int agent) {
    validate_pset(p);
    if (agent < 1) throw std::invalid_argument("pset_formula: agent must be positive");
    const auto& a = p.members;
    const auto pos = std::lower_bound(a.begin(), a.end(), agent) - a.begin();
    const bool member = pos < static_cast<std::ptrdiff_t>(a.size()) && a[pos] == agent;
    BigRat phi = 0;
    if (member) {
        const auto s = pos;
        phi = BigRat(BigInt(1), BigInt(agent) * binomial(agent - 1, s));
        for (std::size_t t = s + 1; t < a.size(); ++t)
            phi -= BigRat(BigInt(1), BigInt(a[t]) * binomial(a[t] - 1, static_cast<std::int64_t>(t) - 1));
    } else {
        for (std::size_t t = pos; t < a.size(); ++t)  // exactly the members above agent
            phi += BigRat(BigInt(1), BigInt(a[t]) * binomial(a[t] - 1, static_cast<std::int64_t>(t)));
    }
    return phi;
}

BigRat si_shapley(const SIWeights& w, const BigRat& q, int agent) {
    if (agent < 1 || agent > w.n()) throw std::out_of_range("si_shapley: agent out of range");
    return pset_formula(find_pset(w, q), agent);
}

PowerVector si_shapley_all(const SIWeights& w, const BigRat& q) {
    PSet p = find_pset(w, q);
    PowerVector out;
    out.values.reserve(w.n());
    for (int agent = 1; agent <= w.n(); ++agent) out.values.push_back(pset_formula(p, agent));
    return out;
}

BigRat si_shapley_increasing(const std::vector<BigInt>& increasing, const BigRat& q, int agent) {
    if (!is_super_increasing_increasing(std::span<const BigInt>(increasing)))
        throw std::invalid_argument("si_shapley_increasing: weights are not super-increasing");
    const int n = static_cast<int>(increasing.size());
    if (agent < 1 || agent > n) throw std::out_of_range("si_shapley_increasing: agent out of range");
    std::vector<BigInt> dec(increasing.rbegin(), increasing.rend());
    return si_shapley(SIWeights(std::move(dec)), q, n + 1 - agent);
}

AdjacentRelation adjacent_relation(const SIWeights& w, const BigRat& q, int agent) {
    if (agent < 1 || agent >= w.n())
        throw std::out_of_range("adjacent_relation: needs agents agent and agent+1");
    PSet p = find_pset(w, q);
    const bool here = p.contains(agent);
    const bool next = p.contains(agent + 1);
    if (here == next) return AdjacentRelation::equal;
    if (!here && next)
        return agent + 1 == p.members.back() ? AdjacentRelation::equal
                                             : AdjacentRelation::strictly_greater;
    return AdjacentRelation::strictly_greater;
}

BigRat jump_delta(const SIWeights& w, const PSet& p, int agent) {
    if (p.members.empty()) throw std::invalid_argument("jump_delta: pset must be non-empty");
    if (p.n != w.n()) throw std::invalid_argument("jump_delta: pset built for a different n");
    if (agent < 1 || agent > w.n()) throw std::out_of_range("jump_delta: agent out of range");
    validate_pset(p);
    BigRat hi = pset_formula(p, agent);
    PSet pre = predecessor(p);
    BigRat lo = pre.members.empty() ? BigRat(0) : pset_formula(pre, agent);
    return hi - lo;
}

BigRat combinatorial_tail(std::int64_t p, std::int64_t t, std::int64_t k) {
    if (t < 0 || p <= t) throw std::invalid_argument("combinatorial_tail: requires p > t >= 0");
    if (k < 0) throw std::invalid_argument("combinatorial_tail: requires k >= 0");
    BigRat acc(BigInt(1), BigInt(p) * binomial(p - 1, t));
    for (std::int64_t l = 1; l <= k; ++l)
        acc -= BigRat(BigInt(1), BigInt(p + l) * binomial(p + l - 1, t + l - 1));
    return acc;
}

LimitValue limit_shapley(const LimitSpec& spec, int agent) {
    if (spec.d < 2) throw std::invalid_argument("limit_shapley: base must be at least 2");
    if (spec.depth < 2) throw std::invalid_argument("limit_shapley: depth must be at least 2");
    if (agent < 1 || agent >= spec.depth)
        throw std::invalid_argument("limit_shapley: agent must satisfy 1 <= agent < depth");
    if (spec.q <= 0 || spec.q * (spec.d - 1) >= 1)
        throw std::invalid_argument("limit_shapley: q must lie in (0, 1/(d-1))");

    const int K = spec.depth;
    SIWeights pw = SIWeights::powers(spec.d, K);
    const BigInt scale = boost::multiprecision::pow(BigInt(spec.d), K);
    BigRat scaled = spec.q * BigRat(scale);
    if (scaled > BigRat(pw.total())) scaled = BigRat(pw.total());  // q above the prefix top
    PSet p = find_pset(pw, scaled);

    LimitValue out;
    out.value = pset_formula(p, agent);
    out.error_bound = BigRat(1, K - 1);
    const int a_r = p.members.back();
    if (a_r < K) {
        // Exact when q falls inside the infinite-sequence interval of P:
        // ( w(P) - d^{-a_r} (d-2)/(d-1), w(P) ] as fractions of the total.
        // The upper endpoint stabilizes at every depth, so it is exact even
        // for d = 2 where the open part of the interval is empty.
        BigRat w_frac(si_weight_sum(pw, p), scale);
        BigRat slack(BigInt(spec.d - 2),
                     boost::multiprecision::pow(BigInt(spec.d), a_r) * (spec.d - 1));
        if (spec.q == w_frac || (spec.q <= w_frac && spec.q > w_frac - slack))
            out.error_bound = 0;
    }
    return out;
}

bool prefix_consistency(int d, int m, const BigRat& q) {
    if (d < 2) throw std::invalid_argument("prefix_consistency: base must be at least 2");
    if (m < 1) throw std::invalid_argument("prefix_consistency: need at least one agent");
    SIWeights prefix = SIWeights::powers(d, m);
    if (q <= 0 || q > BigRat(prefix.total()))
        throw std::invalid_argument("prefix_consistency: quota must lie in (0, w(N)]");
    PSet a = find_pset(prefix, q);
    const int deeper = m + 3;
    SIWeights ext = SIWeights::powers(d, deeper);
    PSet a_ext{a.members, deeper};
    const BigRat remapped(si_weight_sum(ext, a_ext));
    for (int i = 1; i <= m; ++i)
        if (si_shapley(prefix, q, i) != si_shapley(ext, remapped, i)) return false;
    return true;
}

}  // namespace quotapower
