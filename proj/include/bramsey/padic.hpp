#pragma once

// Cartan coordinates of invertible rational matrices at a prime p: the
// p-valuations of the elementary divisors over the localization Z_(p),
// listed non-increasingly. Two routes are provided: valuation-pivot
// elimination and cumulative minima over k x k minors.

#include "exact.hpp"
#include "linalg.hpp"
#include "root_system.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bramsey::padic {

inline constexpr long long kTrialDivisionBound = 1'000'000;

/// Trial division up to 10^6, then 25 Miller-Rabin rounds with a fixed seed.
inline bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p && d <= kTrialDivisionBound; ++d)
        if (p % d == 0) return p == d;
    if (p <= kTrialDivisionBound * kTrialDivisionBound) return true;
    boost::random::mt19937 gen(0x5eed);
    return boost::multiprecision::miller_rabin_test(BigInt(p), 25, gen);
}

inline void check_prime(long long p) {
    if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
}

/// v_p of a nonzero integer.
inline long long valuation(BigInt x, long long p) {
    if (x == 0) throw InputError("valuation of zero");
    if (x < 0) x = -x;
    long long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

/// v_p of a nonzero rational.
inline long long valuation(const Rational& x, long long p) {
    return valuation(numerator(x), p) - valuation(denominator(x), p);
}

inline Rational determinant(RationalMatrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

struct PAdicMatrix {
    RationalMatrix entries;
    long long p = 2;

    std::size_t size() const { return entries.size(); }

    void validate() const {
        check_prime(p);
        if (entries.empty()) throw InputError("matrix must be non-empty");
        for (const auto& row : entries)
            if (row.size() != entries.size()) throw InputError("matrix must be square");
        if (determinant(entries) == 0) throw InputError("matrix is singular");
    }

    /// Rows of integers or "a/b" strings.
    static RationalMatrix parse_entries(const nlohmann::json& j) {
        if (!j.is_array() || j.empty()) throw InputError("matrix: expected a non-empty array of rows");
        RationalMatrix m;
        for (std::size_t r = 0; r < j.size(); ++r) {
            if (!j[r].is_array()) throw InputError("matrix: row " + std::to_string(r) + " is not an array");
            RationalVector row;
            for (std::size_t c = 0; c < j[r].size(); ++c) {
                const auto& e = j[r][c];
                if (e.is_number_integer()) row.emplace_back(e.get<long long>());
                else if (e.is_string()) row.push_back(parse_rational(e.get<std::string>()));
                else throw InputError("matrix: entry [" + std::to_string(r) + "][" + std::to_string(c) +
                                      "] must be an integer or a fraction string");
            }
            m.push_back(std::move(row));
        }
        return m;
    }
};

/// Non-increasing Cartan coordinates with the total v_p(det).
struct CartanCoord {
    std::vector<long long> lambda;

    long long total() const {
        long long s = 0;
        for (long long x : lambda) s += x;
        return s;
    }
    friend bool operator==(const CartanCoord&, const CartanCoord&) = default;
};

/// Valuation-pivot elimination: move an entry of least valuation to the
/// corner, clear its row and column with p-integral multipliers, recurse.
inline CartanCoord cartan_coordinates(const RationalMatrix& m, long long p) {
    PAdicMatrix{m, p}.validate();
    RationalMatrix a = m;
    const std::size_t n = a.size();
    std::vector<long long> vals;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t br = n, bc = n;
        long long best = std::numeric_limits<long long>::max();
        for (std::size_t r = k; r < n; ++r)
            for (std::size_t c = k; c < n; ++c)
                if (a[r][c] != 0) {
                    const long long v = valuation(a[r][c], p);
                    if (v < best) {
                        best = v;
                        br = r;
                        bc = c;
                    }
                }
        if (br == n) throw ConsistencyError("elimination lost rank on an invertible matrix");
        std::swap(a[k], a[br]);
        for (auto& row : a) std::swap(row[k], row[bc]);
        for (std::size_t r = k + 1; r < n; ++r) {
            if (a[r][k] == 0) continue;
            const Rational f = a[r][k] / a[k][k];
            for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
        }
        for (std::size_t c = k + 1; c < n; ++c) a[k][c] = 0;  // column operations with p-integral multipliers
        vals.push_back(best);
    }
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return {vals};
}

/// Same multiset from minors: with m_k the least valuation of a nonzero k x k
/// minor, the ascending divisors are m_k - m_{k-1}.
inline CartanCoord cartan_by_minors(const RationalMatrix& m, long long p) {
    PAdicMatrix{m, p}.validate();
    const std::size_t n = m.size();
    std::vector<long long> mins(n + 1, 0);
    auto subsets = [&](std::size_t k) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (cur.size() == k) {
                out.push_back(cur);
                return;
            }
            for (std::size_t i = from; i < n; ++i) {
                cur.push_back(i);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
        return out;
    };
    for (std::size_t k = 1; k <= n; ++k) {
        const auto sets = subsets(k);
        std::optional<long long> best;
        for (const auto& rs : sets)
            for (const auto& cs : sets) {
                RationalMatrix sub(k, RationalVector(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[rs[i]][cs[j]];
                const Rational det = determinant(sub);
                if (det == 0) continue;
                const long long v = valuation(det, p);
                if (!best || v < *best) best = v;
            }
        if (!best) throw ConsistencyError("no nonzero minor of size " + std::to_string(k));
        mins[k] = *best;
    }
    std::vector<long long> vals;
    for (std::size_t k = 1; k <= n; ++k) vals.push_back(mins[k] - mins[k - 1]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return {vals};
}

/// Cartan coordinates of g^{-1} h.
inline CartanCoord vector_distance_cosets(const RationalMatrix& g, const RationalMatrix& h, long long p) {
    PAdicMatrix{g, p}.validate();
    PAdicMatrix{h, p}.validate();
    if (g.size() != h.size()) throw InputError("matrices have different sizes");
    return cartan_coordinates(multiply(*inverse(g), h), p);
}

struct CartanReport {
    CartanCoord lambda;
    long long det_valuation = 0;
    bool oracle_agrees = false;

    nlohmann::json to_json() const {
        return {{"lambda", lambda.lambda}, {"det_valuation", det_valuation}, {"oracle_agrees", oracle_agrees}};
    }
};

inline CartanReport cartan_report(const RationalMatrix& m, long long p) {
    CartanReport r;
    r.lambda = cartan_coordinates(m, p);
    r.det_valuation = valuation(determinant(m), p);
    r.oracle_agrees = r.lambda == cartan_by_minors(m, p) && r.lambda.total() == r.det_valuation;
    return r;
}

// ------------------------------------------------- corollary hypotheses

struct CorollaryDiagnostics {
    std::string type;
    bool minus_one_type = false;
    bool all_even = false;
    bool chain_ok = false;
    std::vector<Coweight> omega;   // dominant coweights lambda(g_j) in the w-basis
    std::vector<std::string> messages;
    std::optional<std::vector<Coweight>> spec_lambdas;  // lambda(g_j) / 2, each with r = 1

    bool pass() const { return minus_one_type && all_even && chain_ok; }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["type"] = type;
        out["minus_one_type"] = minus_one_type;
        out["all_even"] = all_even;
        out["chain_ok"] = chain_ok;
        auto om = nlohmann::json::array();
        for (const auto& c : omega) om.push_back(c.coords());
        out["omega_coordinates"] = om;
        out["messages"] = messages;
        if (spec_lambdas) {
            auto ls = nlohmann::json::array();
            for (const auto& c : *spec_lambdas) ls.push_back(c.coords());
            out["star_spec"] = {{"lambdas", ls}, {"r", std::vector<int>(spec_lambdas->size(), 1)}};
        }
        out["status"] = pass() ? "pass" : "fail";
        return out;
    }
};

/// Cartan coordinates to w-coordinates. Type A_{n-1}: lambda in Z^n, projected
/// to the trace-zero hyperplane. Type C_m: either m coordinates or the full
/// 2m symplectic list (x_1..x_m, -x_m..-x_1).
inline Coweight cartan_to_coweight(const RootDatum& d, const std::vector<long long>& lambda) {
    const int n = d.rank();
    RationalVector v;
    if (d.type.family == Family::A) {
        if (static_cast<int>(lambda.size()) != n + 1)
            throw InputError("type " + d.type.str() + " expects " + std::to_string(n + 1) + " Cartan coordinates");
        Rational mean = 0;
        for (long long x : lambda) mean += x;
        mean /= static_cast<long long>(lambda.size());
        for (long long x : lambda) v.push_back(Rational(x) - mean);
    } else if (d.type.family == Family::C) {
        std::vector<long long> half(lambda.begin(), lambda.end());
        if (static_cast<int>(lambda.size()) == 2 * n) {
            for (int i = 0; i < n; ++i)
                if (lambda[static_cast<std::size_t>(2 * n - 1 - i)] != -lambda[static_cast<std::size_t>(i)])
                    throw InputError("symplectic Cartan coordinates must have the form (x, -reverse(x))");
            half.resize(static_cast<std::size_t>(n));
        } else if (static_cast<int>(lambda.size()) != n) {
            throw InputError("type " + d.type.str() + " expects " + std::to_string(n) + " or " + std::to_string(2 * n) +
                             " Cartan coordinates");
        }
        for (long long x : half) v.emplace_back(x);
    } else {
        throw InputError("corollary check supports types A and C only");
    }
    return ambient_to_coweight(d, v);
}

/// Hypotheses lambda(g_j) in 2P and N rho << lambda(g_1) << ... << lambda(g_r).
inline CorollaryDiagnostics corollary_hypothesis_check(const RootDatum& d, const std::vector<CartanCoord>& coords,
                                                       long long N = 0) {
    if (coords.empty()) throw InputError("need at least one Cartan coordinate");
    CorollaryDiagnostics out;
    out.type = d.type.str();
    out.minus_one_type = is_minus_one_type(d);
    if (!out.minus_one_type) out.messages.push_back("datum not (-1)-type; the corollary does not apply");
    out.all_even = true;
    out.chain_ok = true;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        auto lambda = coords[j].lambda;
        std::sort(lambda.begin(), lambda.end(), std::greater<>());
        const auto c = cartan_to_coweight(d, lambda);
        if (!c.is_dominant()) throw InputError("Cartan coordinate " + std::to_string(j + 1) + " is not dominant");
        out.omega.push_back(c);
        if (std::any_of(c.coords().begin(), c.coords().end(), [](auto x) { return x % 2 != 0; })) {
            out.all_even = false;
            out.messages.push_back("lambda(g_" + std::to_string(j + 1) + ") not in 2P");
        }
        const auto below = j == 0 ? N * Coweight::rho(d.rank()) : out.omega[j - 1];
        if (!strongly_below(below, c)) {
            out.chain_ok = false;
            out.messages.push_back("<< fails at index " + std::to_string(j + 1));
        }
    }
    if (out.all_even) {
        std::vector<Coweight> halves;
        for (const auto& c : out.omega) {
            auto h = c.coords();
            for (auto& x : h) x /= 2;
            halves.emplace_back(h);
        }
        out.spec_lambdas = halves;
    }
    return out;
}

}  // namespace bramsey::padic
