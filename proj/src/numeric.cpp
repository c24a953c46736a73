#include "quotapower/numeric.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace quotapower {

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;  // exact: r is C(n-k+i, i) after this step
    }
    return r;
}

BigInt factorial(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigInt r = 1;
    for (std::int64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt ceil_rat(const BigRat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);  // > 0 by normalization
    BigInt q = num / den;                                // truncates toward zero
    if (num % den != 0 && num > 0) ++q;
    return q;
}

BigInt floor_rat(const BigRat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

BigRat parse_rational(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw std::invalid_argument("parse_rational: empty value: '" + text + "'");

    BigRat result;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("parse_rational: malformed fraction: '" + text + "'");
        BigInt d(den);
        if (d == 0) throw std::invalid_argument("parse_rational: zero denominator: '" + text + "'");
        result = BigRat(BigInt(num), d);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac))
            throw std::invalid_argument("parse_rational: malformed decimal: '" + text + "'");
        BigInt den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        result = BigRat(BigInt(whole) * den + BigInt(frac), den);
    } else {
        if (!all_digits(s))
            throw std::invalid_argument("parse_rational: malformed integer: '" + text + "'");
        result = BigRat(BigInt(s));
    }
    return neg ? BigRat(-result) : result;
}

std::string format_rational(const BigRat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

double to_double(const BigRat& r) { return r.convert_to<double>(); }

std::string format_double17(const BigRat& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", to_double(r));
    return buf;
}

std::int64_t to_int64_checked(const BigInt& v) {
    if (v < std::numeric_limits<std::int64_t>::min() ||
        v > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("value does not fit in int64: " + v.str());
    return v.convert_to<std::int64_t>();
}

std::uint64_t fnv1a64(std::span<const std::int64_t> values) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::int64_t v : values) {
        auto u = static_cast<std::uint64_t>(v);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (u >> (8 * byte)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace quotapower
