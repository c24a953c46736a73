#include "quotapower/verify.hpp"

#include "quotapower/game.hpp"
#include "quotapower/numeric.hpp"
#include "quotapower/super_increasing.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace quotapower {

namespace {

BigRat inv(const BigInt& v) { return BigRat(BigInt(1), v); }

}  // namespace

VerifyResult verify_identities(std::int64_t p_max, std::int64_t k_max) {
    VerifyResult result;
    if (p_max < 1) {
        result.failure = "p_max must be at least 1";
        return result;
    }
    if (k_max < 0) {
        result.failure = "k_max must be nonnegative";
        return result;
    }

    for (std::int64_t p = 2; p <= p_max; ++p) {
        for (std::int64_t t = 1; t < p; ++t) {
            const BigRat lhs =
                inv(BigInt(p) * binomial(p - 1, t)) + inv(BigInt(p) * binomial(p - 1, t - 1));
            const BigRat rhs = inv(BigInt(p - 1) * binomial(p - 2, t - 1));
            ++result.checks;
            if (lhs != rhs) {
                std::ostringstream msg;
                msg << "pair identity fails at p=" << p << " t=" << t << ": "
                    << format_rational(lhs) << " != " << format_rational(rhs);
                result.failure = msg.str();
                return result;
            }
        }
    }

    for (std::int64_t p = 1; p <= p_max; ++p) {
        for (std::int64_t t = 0; t < p; ++t) {
            for (std::int64_t k = 0; k <= k_max; ++k) {
                const BigRat lhs = combinatorial_tail(p, t, k);
                const BigRat rhs = inv(BigInt(p + k) * binomial(p + k - 1, t + k));
                ++result.checks;
                if (lhs != rhs) {
                    std::ostringstream msg;
                    msg << "telescoping tail fails at p=" << p << " t=" << t << " k=" << k
                        << ": " << format_rational(lhs) << " != " << format_rational(rhs);
                    result.failure = msg.str();
                    return result;
                }
            }
        }
    }
    return result;
}

VerifyResult verify_oracle(int games, std::uint64_t seed) {
    VerifyResult result;
    if (games < 1) {
        result.failure = "games must be at least 1";
        return result;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_n(2, 8);
    std::uniform_int_distribution<std::int64_t> pick_w(1, 20);
    std::uniform_int_distribution<std::int64_t> pick_den(1, 7);

    for (int g = 0; g < games; ++g) {
        const int n = pick_n(rng);
        std::vector<std::int64_t> weights(n);
        std::int64_t total = 0;
        for (auto& w : weights) {
            w = pick_w(rng);
            total += w;
        }
        const std::int64_t den = pick_den(rng);
        std::uniform_int_distribution<std::int64_t> pick_num(1, total * den);
        const BigRat quota(BigInt(pick_num(rng)), BigInt(den));
        Game game(weights, quota);

        const PowerVector fast = shapley_all(game);
        const PowerVector slow = shapley_oracle_all(game);
        ++result.checks;
        if (fast != slow) {
            std::ostringstream msg;
            msg << "power mismatch on game " << g << " (n=" << n
                << ", quota=" << format_rational(quota) << ")";
            result.failure = msg.str();
            return result;
        }

        std::uniform_int_distribution<int> pick_agent(1, n);
        const int i = pick_agent(rng);
        int j = pick_agent(rng);
        if (j == i) j = j % n + 1;
        const BigRat expected = fast.values[j - 1] - fast.values[i - 1];
        const BigRat direct = shapley_diff(game, i, j);
        ++result.checks;
        if (direct != (expected < 0 ? BigRat(-expected) : expected)) {
            std::ostringstream msg;
            msg << "difference mismatch on game " << g << " (i=" << i << ", j=" << j << ")";
            result.failure = msg.str();
            return result;
        }
    }
    return result;
}

}  // namespace quotapower
