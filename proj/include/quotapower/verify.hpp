#pragma once

#include <cstdint>
#include <string>

namespace quotapower {

struct VerifyResult {
    long long checks = 0;
    std::string failure;  // empty when every check passed; else the first counterexample

    bool ok() const { return failure.empty(); }
};

// Exact checks of the two binomial identities behind the closed-form values:
//   1/(p*C(p-1,t)) + 1/(p*C(p-1,t-1)) = 1/((p-1)*C(p-2,t-1))   for p > t >= 1
//   1/(p*C(p-1,t)) - sum_{l=1..k} 1/((p+l)*C(p+l-1,t+l-1))
//                                = 1/((p+k)*C(p+k-1,t+k))      for p > t >= 0
// over all p <= p_max, valid t, and k <= k_max.
VerifyResult verify_identities(std::int64_t p_max, std::int64_t k_max);

// Random small games (n in 2..8, weights in 1..20, rational quotas): the
// counting evaluator, the permutation oracle, and the pairwise difference
// formula must agree exactly.
VerifyResult verify_oracle(int games, std::uint64_t seed);

}  // namespace quotapower
