#include "quotapower/experiments.hpp"

#include "quotapower/super_increasing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace quotapower {

namespace {

std::string join_rationals(const std::vector<BigRat>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ";";
        out += format_rational(xs[i]);
    }
    return out;
}

// Exact power values for each (agent, quota) pair off one shared table.
std::vector<std::vector<BigRat>> loo_matrix(CoalitionCountTable& table,
                                            const std::vector<std::int64_t>& weights,
                                            const std::vector<int>& agents,
                                            const std::vector<BigRat>& quotas) {
    const int n = int(weights.size());
    std::vector<std::vector<BigRat>> out(agents.size());
    for (size_t a = 0; a < agents.size(); ++a) {
        const int agent = agents[a];
        table.remove(agent - 1);
        out[a].reserve(quotas.size());
        for (const auto& q : quotas)
            out[a].push_back(shapley_from_loo(table, n, weights[agent - 1], q));
        table.restore(agent - 1);
    }
    return out;
}

std::vector<int> all_agents(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    return v;
}

// Integer weight vector proportional to the exponential probabilities:
// with rho = a/b in lowest terms, u_i = a^(n-i) b^(i-1) is increasing and
// super-increasing, and u_i / u(N) = p_i exactly.
std::vector<BigInt> scaled_exponential_weights(int n, const BigRat& rho) {
    const BigInt a = boost::multiprecision::numerator(rho);
    const BigInt b = boost::multiprecision::denominator(rho);
    std::vector<BigInt> u(n);
    BigInt pa = 1, pb = 1;
    for (int i = n - 1; i >= 0; --i) {  // pa = a^(n-1-i)
        u[i] = pa;
        pa *= a;
    }
    for (int i = 0; i < n; ++i) {
        u[i] *= pb;
        pb *= b;
    }
    return u;
}

}  // namespace

void ExperimentReport::finalize() {
    trial_count = int(trials.size());
    mean = stddev = success_fraction = 0.0;
    if (trial_count == 0) return;
    double sum = 0.0;
    int ok = 0;
    for (const auto& t : trials) {
        sum += t.measured;
        ok += t.success;
    }
    mean = sum / trial_count;
    success_fraction = double(ok) / trial_count;
    if (trial_count > 1) {
        double ss = 0.0;
        for (const auto& t : trials) ss += (t.measured - mean) * (t.measured - mean);
        stddev = std::sqrt(ss / (trial_count - 1));
    }
}

ExperimentReport run_equal_power(const EqualPowerConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("equal-power: need at least two agents");
    if (cfg.trials < 1) throw std::invalid_argument("equal-power: need at least one trial");
    if (cfg.m % cfg.n != 0)
        throw std::invalid_argument("equal-power: m must be a multiple of n so quotas stay integral");
    const std::int64_t n3 = std::int64_t(cfg.n) * cfg.n * cfg.n;
    if (cfg.m < 3 * n3)
        throw std::invalid_argument("equal-power: m must be at least 3n^3");

    const BigRat step(cfg.m, cfg.n);
    std::vector<BigRat> quotas = cfg.quotas;
    if (quotas.empty())
        for (int l = 0; l < cfg.n; ++l) quotas.push_back(step * l + step / 2);

    // Every quota must stay further than (m/n)/sqrt(M), M = m/(3n^3), from
    // each multiple of m/n; squaring gives the exact test dist^2 > 3 n m.
    const BigRat dist2_floor = BigRat(3) * cfg.n * cfg.m;
    for (const auto& q : quotas) {
        if (q <= 0 || q > cfg.m)
            throw std::invalid_argument("equal-power: quota outside (0, m]");
        const BigInt nearest = floor_rat(q / step + BigRat(1, 2));
        for (BigInt l = nearest - 1; l <= nearest + 1; ++l) {
            if (l < 0 || l > cfg.n) continue;
            BigRat dist = q - step * BigRat(l);
            if (dist < 0) dist = -dist;
            if (dist * dist <= dist2_floor) {
                const double bound =
                    to_double(step) / std::sqrt(to_double(BigRat(cfg.m) / (3 * n3)));
                std::ostringstream msg;
                msg << "equal-power: quota " << format_rational(q)
                    << " is within " << bound << " of multiple "
                    << format_rational(step * BigRat(l))
                    << " of m/n; the equal-power guarantee needs more distance";
                throw std::invalid_argument(msg.str());
            }
        }
    }

    ExperimentReport rep;
    rep.tag = "equal-power";
    rep.config = {{"n", std::to_string(cfg.n)},
                  {"m", std::to_string(cfg.m)},
                  {"quotas", join_rationals(quotas)},
                  {"trials", std::to_string(cfg.trials)},
                  {"seed", std::to_string(cfg.seed)}};

    const BigRat uniform(1, cfg.n);
    const auto agents = all_agents(cfg.n);
    BallsBinsConfig bb;
    bb.n = cfg.n;
    bb.m = cfg.m;
    bb.probs = uniform_probs(cfg.n);
    for (int t = 0; t < cfg.trials; ++t) {
        bb.seed = stream_seed(cfg.seed, std::uint64_t(t));
        SampledWeights s = sample_weights(bb);
        CoalitionCountTable table(s.sorted);
        auto values = loo_matrix(table, s.sorted, agents, quotas);
        bool equal = true;
        for (const auto& row : values)
            for (const auto& v : row) equal = equal && v == uniform;
        rep.trials.push_back({bb.seed, fnv1a64(s.sorted), equal ? 1.0 : 0.0, equal, ""});
    }
    rep.finalize();
    return rep;
}

ExperimentReport run_min_shapley(const MinShapleyConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("min-power: need at least two agents");
    if (cfg.trials < 1) throw std::invalid_argument("min-power: need at least one trial");
    if (cfg.m < 1 || cfg.m % cfg.n != 0)
        throw std::invalid_argument("min-power: m must be a positive multiple of n");
    if (cfg.ell < 1 || cfg.ell >= cfg.n)
        throw std::invalid_argument("min-power: quota multiplier must lie in 1..n-1");

    const BigRat q = BigRat(cfg.m, cfg.n) * cfg.ell;
    ExperimentReport rep;
    rep.tag = "min-power";
    rep.config = {{"n", std::to_string(cfg.n)},
                  {"m", std::to_string(cfg.m)},
                  {"ell", std::to_string(cfg.ell)},
                  {"quota", format_rational(q)},
                  {"trials", std::to_string(cfg.trials)},
                  {"seed", std::to_string(cfg.seed)}};

    BallsBinsConfig bb;
    bb.n = cfg.n;
    bb.m = cfg.m;
    bb.probs = uniform_probs(cfg.n);
    for (int t = 0; t < cfg.trials; ++t) {
        bb.seed = stream_seed(cfg.seed, std::uint64_t(t));
        SampledWeights s = sample_weights(bb);
        Game game(s.sorted, q);
        const BigRat phi1 = shapley_exact(game, 1);
        rep.trials.push_back({bb.seed, fnv1a64(s.sorted), to_double(phi1), true, ""});
    }
    rep.finalize();
    std::ostringstream note;
    note << "mean phi_1 with 95% normal-approximation radius "
         << (rep.trial_count > 1
                 ? 1.96 * rep.stddev / std::sqrt(double(rep.trial_count))
                 : 0.0)
         << "; expectation bands for finite n are calibration choices";
    rep.tolerance_note = note.str();
    return rep;
}

std::vector<BigRat> exponential_interval_midpoints(int n, const BigRat& rho,
                                                   std::int64_t m, int count,
                                                   std::uint64_t seed) {
    if (n < 1 || n > 20)
        throw std::invalid_argument("interval midpoints: interval enumeration needs 1 <= n <= 20");
    if (count < 1) throw std::invalid_argument("interval midpoints: need a positive count");
    std::vector<BigInt> u = scaled_exponential_weights(n, rho);
    std::vector<BigInt> dec(u.rbegin(), u.rend());
    SIWeights w(dec);
    const BigRat total(w.total());
    const double margin = std::sqrt(std::log(double(n) * double(m)) / double(m));

    std::vector<std::pair<BigRat, BigInt>> eligible;  // midpoint, beta
    for (BigInt b = 1; b < BigInt(1) << n; ++b) {
        QuotaInterval iv = si_interval(w, pset_from_beta(b, n));
        const BigRat width = (iv.upper - iv.lower) / total;
        if (to_double(width) >= 2.0 * margin)
            eligible.push_back({(iv.lower + iv.upper) / (total * 2), b});
    }
    if (int(eligible.size()) < count) {
        std::ostringstream msg;
        msg << "interval midpoints: only " << eligible.size()
            << " intervals are wider than twice the margin " << margin;
        throw std::invalid_argument(msg.str());
    }
    std::mt19937_64 rng(stream_seed(seed, 0x6d6964706f696e74ull));
    std::shuffle(eligible.begin(), eligible.end(), rng);
    eligible.resize(count);
    std::vector<BigRat> out;
    for (const auto& e : eligible) out.push_back(e.first);
    std::sort(out.begin(), out.end());
    return out;
}

ExperimentReport run_exponential_match(const ExponentialMatchConfig& cfg) {
    if (cfg.n < 2) throw std::invalid_argument("exponential-match: need at least two agents");
    if (cfg.trials < 1) throw std::invalid_argument("exponential-match: need at least one trial");
    if (cfg.rho <= 0 || cfg.rho * 2 >= 1)
        throw std::invalid_argument("exponential-match: rho must lie in (0, 1/2)");
    const std::int64_t m_min = si_sample_threshold(cfg.n, cfg.rho, cfg.C);
    if (cfg.m < m_min) {
        std::ostringstream msg;
        msg << "exponential-match: m must be at least the super-increasing threshold "
            << m_min;
        throw std::invalid_argument(msg.str());
    }

    std::vector<BigRat> Ts = cfg.T_values;
    if (Ts.empty())
        Ts = exponential_interval_midpoints(cfg.n, cfg.rho, cfg.m, 10, cfg.seed);

    // Margin validation: every T must clear the breakpoints of its own
    // probability-scale interval by sqrt(ln(n m)/m).
    std::vector<BigInt> u = scaled_exponential_weights(cfg.n, cfg.rho);
    std::vector<BigInt> dec(u.rbegin(), u.rend());
    SIWeights pw(dec);
    const BigRat total(pw.total());
    const double margin = std::sqrt(std::log(double(cfg.n) * double(cfg.m)) / double(cfg.m));
    const BigInt full_beta = (BigInt(1) << cfg.n) - 1;
    for (const auto& T : Ts) {
        if (T <= 0 || T > 1)
            throw std::invalid_argument("exponential-match: T must lie in (0, 1]");
        PSet p = find_pset(pw, T * total);
        QuotaInterval iv = si_interval(pw, p);
        const double lo_gap = to_double(T - iv.lower / total);
        const double hi_gap = to_double(iv.upper / total - T);
        if (lo_gap < margin || (beta(p) != full_beta && hi_gap < margin)) {
            const BigRat offender =
                lo_gap < margin ? iv.lower / total : iv.upper / total;
            std::ostringstream msg;
            msg << "exponential-match: T = " << format_rational(T)
                << " is within margin " << margin << " of breakpoint "
                << format_rational(offender);
            throw std::invalid_argument(msg.str());
        }
    }

    ExperimentReport rep;
    rep.tag = "exponential-match";
    rep.config = {{"n", std::to_string(cfg.n)},
                  {"rho", format_rational(cfg.rho)},
                  {"m", std::to_string(cfg.m)},
                  {"T", join_rationals(Ts)},
                  {"trials", std::to_string(cfg.trials)},
                  {"seed", std::to_string(cfg.seed)},
                  {"C", std::to_string(cfg.C)}};

    // Closed-form values on the exact probability vector, once per T.
    std::vector<std::vector<BigRat>> expected(Ts.size());
    for (size_t k = 0; k < Ts.size(); ++k) {
        expected[k].reserve(cfg.n);
        for (int agent = 1; agent <= cfg.n; ++agent)
            expected[k].push_back(si_shapley_increasing(u, Ts[k] * total, agent));
    }

    std::vector<BigRat> sample_quotas;
    for (const auto& T : Ts) sample_quotas.push_back(T * cfg.m);

    const auto agents = all_agents(cfg.n);
    BallsBinsConfig bb;
    bb.n = cfg.n;
    bb.m = cfg.m;
    bb.probs = exponential_probs(cfg.n, cfg.rho);
    for (int t = 0; t < cfg.trials; ++t) {
        bb.seed = stream_seed(cfg.seed, std::uint64_t(t));
        SampledWeights s = sample_weights(bb);
        TrialRecord rec{bb.seed, fnv1a64(s.sorted), 0.0, false, ""};
        if (!is_super_increasing_increasing(std::span<const std::int64_t>(s.sorted))) {
            rec.note = "not-SI";
        } else {
            CoalitionCountTable table(s.sorted);
            auto values = loo_matrix(table, s.sorted, agents, sample_quotas);
            int matched = 0;
            for (size_t k = 0; k < Ts.size(); ++k) {
                bool ok = true;
                for (int a = 0; a < cfg.n; ++a) ok = ok && values[a][k] == expected[k][a];
                matched += ok;
                if (!ok && rec.note.empty())
                    rec.note = "mismatch at T=" + format_rational(Ts[k]);
            }
            rec.measured = double(matched) / double(Ts.size());
            rec.success = matched == int(Ts.size());
        }
        rep.trials.push_back(rec);
    }
    rep.finalize();
    return rep;
}

SweepCurve quota_sweep(const Game& game, const GridSpec& grid, std::vector<int> agents) {
    const int n = game.n();
    if (agents.empty()) agents = all_agents(n);
    for (int a : agents) game.weight_of(a);  // range check

    const BigRat top(game.total_weight());
    std::vector<BigRat> quotas;
    switch (grid.kind) {
        case GridSpec::Kind::explicit_list:
            quotas = grid.points;
            break;
        case GridSpec::Kind::linspace: {
            if (grid.count < 1) throw std::invalid_argument("sweep: need at least one grid point");
            if (grid.count == 1) {
                quotas.push_back(grid.lo);
            } else {
                const BigRat step = (grid.hi - grid.lo) / (grid.count - 1);
                for (int k = 0; k < grid.count; ++k) quotas.push_back(grid.lo + step * k);
            }
            break;
        }
        case GridSpec::Kind::breakpoints:
        case GridSpec::Kind::breakpoints_and_midpoints: {
            if (n > 20)
                throw std::invalid_argument("sweep: breakpoint enumeration needs n <= 20");
            std::vector<BigInt> w(game.weights().begin(), game.weights().end());
            if (detect_order(game.weights()) == WeightOrder::non_decreasing)
                std::reverse(w.begin(), w.end());
            SIWeights si(w);  // throws unless super-increasing
            BigRat prev = 0;
            for (BigInt b = 1; b < BigInt(1) << n; ++b) {
                const BigRat at(si_weight_sum(si, pset_from_beta(b, n)));
                if (grid.kind == GridSpec::Kind::breakpoints_and_midpoints)
                    quotas.push_back((prev + at) / 2);
                quotas.push_back(at);
                prev = at;
            }
            break;
        }
    }
    if (quotas.empty()) throw std::invalid_argument("sweep: empty quota grid");
    std::sort(quotas.begin(), quotas.end());
    quotas.erase(std::unique(quotas.begin(), quotas.end()), quotas.end());
    for (const auto& q : quotas)
        if (q <= 0 || q > top)
            throw std::invalid_argument("sweep: quota outside (0, w(N)]");

    SweepCurve curve;
    curve.quotas = std::move(quotas);
    curve.agents = std::move(agents);
    curve.game_digest = fnv1a64(game.weights());
    CoalitionCountTable table(game.weights());
    curve.values = loo_matrix(table, game.weights(), curve.agents, curve.quotas);
    return curve;
}

}  // namespace quotapower
