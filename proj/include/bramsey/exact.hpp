#pragma once

// Exact integer/rational arithmetic shared by every module, plus the two
// error types used across the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bramsey {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// Bad caller input (out-of-range parameters, malformed codes, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal identity that must hold failed; signals a formula bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline BigInt ipow(const BigInt& base, unsigned exponent) {
    return boost::multiprecision::pow(base, exponent);
}

/// base^exponent for a possibly negative exponent.
inline Rational rpow(const Rational& base, long exponent) {
    if (exponent >= 0) {
        return Rational(boost::multiprecision::pow(numerator(base), static_cast<unsigned>(exponent)),
                        boost::multiprecision::pow(denominator(base), static_cast<unsigned>(exponent)));
    }
    if (base == 0) throw InputError("zero raised to a negative power");
    const auto e = static_cast<unsigned>(-exponent);
    return Rational(boost::multiprecision::pow(denominator(base), e),
                    boost::multiprecision::pow(numerator(base), e));
}

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
    if (is_integer(x)) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

/// Parses "a", "-a" or "a/b".
inline Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("not a rational number: '" + text + "'");
    }
}

/// Exact rationals travel as ["numerator", "denominator"] string pairs.
inline nlohmann::json rational_json(const Rational& x) {
    return nlohmann::json::array({numerator(x).str(), denominator(x).str()});
}

inline nlohmann::json rational_vector_json(const RationalVector& v) {
    auto out = nlohmann::json::array();
    for (const auto& x : v) out.push_back(rational_json(x));
    return out;
}

/// Integers that fit in int64 become JSON numbers, larger ones strings.
inline nlohmann::json bigint_json(const BigInt& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(x);
    }
    return x.str();
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace bramsey
