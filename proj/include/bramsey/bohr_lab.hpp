#pragma once

// Bohr sets A = {n : {n sqrt(D)} < eps}, the exact double-difference sumset
// (A-A)+(A-A) of a truncation, the pruned binary tree T_A that branches at
// member levels, and the avoidance report for the set X of full spheres of
// T_A at member levels.
//
// Fractional parts use 128-bit fixed point: F = floor(frac(sqrt D) * 2^128)
// from an exact integer square root, so n F mod 2^128 underestimates
// {n sqrt D} * 2^128 by less than n units. Decisions closer than that to a
// threshold are reported as uncertain instead of guessed.

#include "exact.hpp"
#include "parallel.hpp"
#include "random.hpp"

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bramsey::bohr {

using u128 = unsigned __int128;

inline constexpr u128 kU128Max = ~static_cast<u128>(0);

enum class Membership : std::uint8_t { Out = 0, In = 1, Uncertain = 2 };

/// Fixed-point model of theta = sqrt(D) for a non-square D >= 2.
class QuadraticIrrational {
public:
    explicit QuadraticIrrational(long long radicand = 2) : radicand_(radicand) {
        if (radicand < 2) throw InputError("theta: radicand must be at least 2");
        const BigInt root = boost::multiprecision::sqrt(BigInt(radicand));
        if (root * root == radicand) throw InputError("theta: radicand must not be a perfect square");
        const BigInt scaled = boost::multiprecision::sqrt(BigInt(radicand) << 256);
        frac_ = to_u128(scaled - (root << 128));
    }

    long long radicand() const { return radicand_; }

    /// floor(frac(sqrt D) * 2^128).
    u128 frac_scaled() const { return frac_; }

    /// n F mod 2^128 for n >= 0; the true scaled fractional part lies in [x, x + n).
    u128 approx(std::uint64_t n) const { return static_cast<u128>(n) * frac_; }

    static u128 to_u128(const BigInt& x) {
        const BigInt mask = (BigInt(1) << 64) - 1;
        const auto hi = static_cast<std::uint64_t>((x >> 64) & mask);
        const auto lo = static_cast<std::uint64_t>(x & mask);
        return (static_cast<u128>(hi) << 64) | lo;
    }

    /// floor(r * 2^128) for 0 <= r < 1.
    static u128 scale(const Rational& r) {
        if (r < 0 || r >= 1) throw InputError("scale: value must lie in [0,1)");
        return to_u128((numerator(r) << 128) / denominator(r));
    }

    static double to_double(u128 x) { return std::ldexp(static_cast<double>(x), -128); }

private:
    long long radicand_;
    u128 frac_ = 0;
};

/// floor(eps 2^128) and whether it is exact, computed once per threshold.
struct Threshold {
    u128 below = 0;
    bool exact = false;

    explicit Threshold(const Rational& eps)
        : below(QuadraticIrrational::scale(eps)), exact(Rational(below) == eps * Rational(BigInt(1) << 128)) {}
};

/// Membership of n in {m : {m theta} < eps} from the fixed-point value.
inline Membership classify(const QuadraticIrrational& theta, const Threshold& eps, long long n) {
    const u128 below = eps.below;
    const std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
    if (m == 0) return Membership::In;
    const u128 x = theta.approx(m);
    const u128 band = m;
    if (x > kU128Max - band) return Membership::Uncertain;  // may wrap past an integer
    if (n > 0) {
        // y in [x, x+m): y < eps certain if x + m <= floor(eps); y >= eps certain if x >= ceil(eps).
        const u128 ceil_eps = eps.exact ? below : below + 1;
        if (below >= band && x <= below - band) return Membership::In;
        if (x >= ceil_eps) return Membership::Out;
        return Membership::Uncertain;
    }
    // {-m theta} = 1 - y; member iff y > 1 - eps.
    const u128 one_minus = kU128Max - below + 1;  // 2^128 - floor(eps 2^128) >= (1-eps) 2^128
    if (x >= one_minus) return Membership::In;
    if (x + band <= (eps.exact ? one_minus : one_minus - 1)) return Membership::Out;
    return Membership::Uncertain;
}

inline Membership classify(const QuadraticIrrational& theta, const Rational& eps, long long n) {
    return classify(theta, Threshold(eps), n);
}

/// True iff ||m theta|| >= bound is certified (distance to the nearest integer).
inline bool certified_far_from_integers(const QuadraticIrrational& theta, long long m, const Rational& bound) {
    if (bound <= 0) return true;
    if (bound >= Rational(1, 2)) return false;
    const std::uint64_t a = static_cast<std::uint64_t>(m < 0 ? -m : m);
    if (a == 0) return false;
    const u128 x = theta.approx(a);
    const u128 need = QuadraticIrrational::scale(bound) + 1;  // > bound * 2^128
    const u128 band = a;
    if (x < need) return false;
    if (x > kU128Max - band) return false;
    // y in [x, x+a) and 2^128 - y > 2^128 - x - a >= need.
    const u128 upper_room = kU128Max - (x + band - 1);  // 2^128 - 1 - (x + a - 1)
    return upper_room >= need;
}

struct BohrSet {
    Rational epsilon;
    long long radicand = 2;
    long long horizon = 0;            // N; memberships cover [-N, N]
    std::vector<Membership> states;   // index n + N
    std::size_t uncertain_count = 0;  // over [-N, N]

    Membership at(long long n) const {
        if (n < -horizon || n > horizon) throw InputError("Bohr set queried outside its horizon");
        return states[static_cast<std::size_t>(n + horizon)];
    }
    bool member(long long n) const { return at(n) == Membership::In; }

    /// Indicator of certified members of A ∩ [0, N].
    std::vector<std::uint8_t> nonnegative_indicator() const {
        std::vector<std::uint8_t> out(static_cast<std::size_t>(horizon) + 1);
        for (long long n = 0; n <= horizon; ++n) out[n] = member(n) ? 1 : 0;
        return out;
    }
};

/// Certified membership on [-N, N].
inline BohrSet bohr_membership(const Rational& eps, long long N, long long radicand = 2, int threads = 1) {
    if (eps <= 0 || eps >= Rational(1, 4)) throw InputError("epsilon must lie strictly between 0 and 1/4");
    if (N < 1) throw InputError("N must be at least 1");
    if (N > (1LL << 40)) throw InputError("N above 2^40 is outside the certified range");
    const QuadraticIrrational theta(radicand);
    const Threshold threshold(eps);
    BohrSet A{eps, radicand, N, std::vector<Membership>(static_cast<std::size_t>(2 * N + 1)), 0};
    parallel_for(static_cast<std::size_t>(2 * N + 1), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) A.states[i] = classify(theta, threshold, static_cast<long long>(i) - N);
    });
    A.uncertain_count = static_cast<std::size_t>(std::count(A.states.begin(), A.states.end(), Membership::Uncertain));
    return A;
}

// ------------------------------------------------------------- densities

struct DyadicEntry {
    long long window;  // n: the window is [-n, n] or [0, n]
    double density;
};

struct DensityEstimate {
    std::size_t members = 0;
    std::size_t decided = 0;  // window size minus uncertain entries
    double estimate = 0;
    std::vector<DyadicEntry> dyadic;
    /// Largest |density(window) - estimate| over dyadic windows at least half the final one.
    double tail_spread = 0;

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["members"] = members;
        out["decided"] = decided;
        out["estimate"] = estimate;
        out["tail_spread"] = tail_spread;
        auto arr = nlohmann::json::array();
        for (const auto& d : dyadic) arr.push_back({{"window", d.window}, {"density", d.density}});
        out["dyadic"] = arr;
        return out;
    }
};

/// Density of an indicator over [-n, n] (symmetric = true, with `center` the
/// index of 0) or [0, n], plus the same ratio on dyadic sub-windows. Entries
/// equal to 2 (uncertain) are dropped from numerator and denominator.
inline DensityEstimate natural_density(const std::vector<std::uint8_t>& indicator, std::size_t center, long long n,
                                       bool symmetric) {
    if (n < 0) throw InputError("natural_density: window must be non-negative");
    if (center + static_cast<std::size_t>(n) >= indicator.size() || (symmetric && center < static_cast<std::size_t>(n)))
        throw InputError("natural_density: window exceeds the indicator");
    // prefix counts over the window, growing outward from 0
    DensityEstimate est;
    std::size_t members = 0, decided = 0;
    auto absorb = [&](std::uint8_t v) {
        if (v == 2) return;
        ++decided;
        members += v;
    };
    long long next_dyadic = 1;
    absorb(indicator[center]);
    for (long long m = 1; m <= n; ++m) {
        absorb(indicator[center + static_cast<std::size_t>(m)]);
        if (symmetric) absorb(indicator[center - static_cast<std::size_t>(m)]);
        if (m == next_dyadic || m == n) {
            est.dyadic.push_back({m, decided ? static_cast<double>(members) / static_cast<double>(decided) : 0.0});
            if (m == next_dyadic) next_dyadic *= 2;
        }
    }
    est.members = members;
    est.decided = decided;
    est.estimate = decided ? static_cast<double>(members) / static_cast<double>(decided) : 0.0;
    for (const auto& d : est.dyadic)
        if (2 * d.window >= n) est.tail_spread = std::max(est.tail_spread, std::abs(d.density - est.estimate));
    return est;
}

inline DensityEstimate density_of(const BohrSet& A) {
    std::vector<std::uint8_t> ind(A.states.size());
    for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = static_cast<std::uint8_t>(A.states[i]);
    return natural_density(ind, static_cast<std::size_t>(A.horizon), A.horizon, true);
}

// --------------------------------------------------------------- sumsets

namespace detail {

inline constexpr std::uint32_t kMod = 998244353;  // 119 * 2^23 + 1
inline constexpr std::uint32_t kRoot = 3;
inline constexpr std::size_t kMaxTransform = std::size_t{1} << 23;

inline std::uint32_t power_mod(std::uint64_t base, std::uint64_t e) {
    std::uint64_t r = 1;
    base %= kMod;
    while (e) {
        if (e & 1) r = r * base % kMod;
        base = base * base % kMod;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline void ntt(std::vector<std::uint32_t>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::uint32_t> roots(n / 2 + 1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t w = power_mod(kRoot, (kMod - 1) / len);
        if (inverse) w = power_mod(w, kMod - 2);
        const std::size_t half = len / 2;
        roots[0] = 1;
        for (std::size_t k = 1; k < half; ++k) roots[k] = static_cast<std::uint32_t>(roots[k - 1] * w % kMod);
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                const std::uint32_t u = a[i + k];
                const std::uint32_t v = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i + k + half]) * roots[k] % kMod);
                a[i + k] = u + v >= kMod ? u + v - kMod : u + v;
                a[i + k + half] = u >= v ? u - v : u + kMod - v;
            }
    }
    if (inverse) {
        const std::uint64_t inv_n = power_mod(n, kMod - 2);
        for (auto& x : a) x = static_cast<std::uint32_t>(x * inv_n % kMod);
    }
}

/// Support of the convolution of two 0/1 sequences. Exact as long as every
/// coefficient of the true convolution is below the modulus, which holds when
/// min(|a|, |b|) < kMod.
inline std::vector<std::uint8_t> boolean_convolution(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    if (std::min(a.size(), b.size()) >= kMod) throw InputError("sumset: inputs too long for exact convolution");
    std::size_t n = 1;
    while (n < out_len) n <<= 1;
    if (n > kMaxTransform) throw InputError("sumset: window too large for the transform");
    std::vector<std::uint32_t> fa(n, 0), fb;
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] ? 1 : 0;
    const bool square = &a == &b;
    ntt(fa, false);
    if (!square) {
        fb.assign(n, 0);
        for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] ? 1 : 0;
        ntt(fb, false);
    }
    const auto& other = square ? fa : fb;
    for (std::size_t i = 0; i < n; ++i) fa[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(fa[i]) * other[i] % kMod);
    ntt(fa, true);
    std::vector<std::uint8_t> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i] != 0 ? 1 : 0;
    return out;
}

}  // namespace detail

/// Indicator of a set of integers on [-offset, length - 1 - offset].
struct IntegerIndicator {
    long long offset = 0;
    std::vector<std::uint8_t> bits;

    long long min() const { return -offset; }
    long long max() const { return static_cast<long long>(bits.size()) - 1 - offset; }
    bool contains(long long m) const { return m >= min() && m <= max() && bits[static_cast<std::size_t>(m + offset)]; }

    /// Runs of ones as [start, length] pairs.
    nlohmann::json to_rle_json() const {
        auto runs = nlohmann::json::array();
        for (std::size_t i = 0; i < bits.size();) {
            if (!bits[i]) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < bits.size() && bits[j]) ++j;
            runs.push_back({static_cast<long long>(i) - offset, static_cast<long long>(j - i)});
            i = j;
        }
        return {{"min", min()}, {"max", max()}, {"runs", runs}};
    }

    static IntegerIndicator from_rle_json(const nlohmann::json& j) {
        IntegerIndicator out;
        const long long lo = j.at("min").get<long long>();
        const long long hi = j.at("max").get<long long>();
        if (hi < lo) throw InputError("indicator: max below min");
        out.offset = -lo;
        out.bits.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (const auto& run : j.at("runs")) {
            const long long s = run.at(0).get<long long>();
            const long long len = run.at(1).get<long long>();
            if (len < 0 || s < lo || s + len - 1 > hi) throw InputError("indicator: run outside [min, max]");
            for (long long m = s; m < s + len; ++m) out.bits[static_cast<std::size_t>(m - lo)] = 1;
        }
        return out;
    }
};

/// (S - S) + (S - S) for S ⊆ [0, M] given by an indicator of length M + 1;
/// the result is exact on [-2M, 2M].
inline IntegerIndicator double_difference_sumset(const std::vector<std::uint8_t>& indicator) {
    if (indicator.empty()) throw InputError("sumset: empty indicator");
    const long long M = static_cast<long long>(indicator.size()) - 1;
    std::vector<std::uint8_t> reversed(indicator.rbegin(), indicator.rend());
    // difference set on [-M, M]: index i <-> i - M
    const auto diff = detail::boolean_convolution(indicator, reversed);
    // sum of two differences on [-2M, 2M]: index i <-> i - 2M
    const auto sum = detail::boolean_convolution(diff, diff);
    return {2 * M, sum};
}

/// A - A for S ⊆ [0, M].
inline IntegerIndicator difference_set(const std::vector<std::uint8_t>& indicator) {
    const long long M = static_cast<long long>(indicator.size()) - 1;
    std::vector<std::uint8_t> reversed(indicator.rbegin(), indicator.rend());
    return {M, detail::boolean_convolution(indicator, reversed)};
}

/// Density of the indicator on [-W, W].
inline DensityEstimate window_density(const IntegerIndicator& s, long long W) {
    if (W > s.max() || -W < s.min()) throw InputError("window exceeds the computed sumset range");
    return natural_density(s.bits, static_cast<std::size_t>(s.offset), W, true);
}

struct UniformityRow {
    int k = 0;
    int residue = 0;
    double ratio = 0;  // density of B within m + kZ on the window
};

struct UniformityReport {
    double base_density = 0;
    std::vector<UniformityRow> rows;
    double max_deviation = 0;

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back({{"k", r.k}, {"residue", r.residue}, {"density", r.ratio}});
        return {{"base_density", base_density}, {"rows", arr}, {"max_deviation", max_deviation}};
    }
};

/// For each k <= k_max and residue m, the share of B among window points
/// congruent to m mod k, against the overall share.
inline UniformityReport uniformity_check(const IntegerIndicator& B, long long W, int k_max) {
    UniformityReport rep;
    rep.base_density = window_density(B, W).estimate;
    for (int k = 1; k <= k_max; ++k)
        for (int m = 0; m < k; ++m) {
            std::size_t hits = 0, total = 0;
            for (long long x = -W; x <= W; ++x) {
                if (((x % k) + k) % k != m) continue;
                ++total;
                hits += B.contains(x);
            }
            const double ratio = total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
            rep.rows.push_back({k, m, ratio});
            rep.max_deviation = std::max(rep.max_deviation, std::abs(ratio - rep.base_density));
        }
    return rep;
}

// --------------------------------------------------------- pruned trees

/// The subtree T_A of the rooted binary tree: a level-n vertex has two
/// children when n ∈ A and one child otherwise. Vertex codes use '0'/'1' at
/// branching levels and '0' elsewhere, so distances are LCP arithmetic.
class PrunedTree {
public:
    explicit PrunedTree(std::vector<std::uint8_t> branching) : branching_(std::move(branching)) {
        prefix_.assign(branching_.size() + 1, 0);
        for (std::size_t i = 0; i < branching_.size(); ++i) prefix_[i + 1] = prefix_[i] + (branching_[i] ? 1 : 0);
    }

    long long horizon() const { return static_cast<long long>(branching_.size()) - 1; }
    bool branches_at(long long n) const { return branching_.at(static_cast<std::size_t>(n)) != 0; }

    /// log_2 |S_n(T_A)| = |A ∩ [0, n)|.
    long long log2_sphere_size(long long n) const {
        if (n < 0 || n > horizon() + 1) throw InputError("pruned tree: level outside the horizon");
        return prefix_[static_cast<std::size_t>(n)];
    }

    /// log_2 |S_n| / n, the finite proxy for the boundary dimension.
    double dimension_estimate(long long n) const {
        if (n < 1) throw InputError("pruned tree: dimension estimate needs n >= 1");
        return static_cast<double>(log2_sphere_size(n)) / static_cast<double>(n);
    }

    /// S_n(T_A) as codes, built level by level.
    std::vector<std::string> sphere(long long n, std::size_t limit = 5'000'000) const {
        if (n < 0 || n > horizon() + 1) throw InputError("pruned tree: level outside the horizon");
        if (log2_sphere_size(n) > 40 || (std::size_t{1} << log2_sphere_size(n)) > limit)
            throw InputError("pruned tree: sphere too large to enumerate");
        std::vector<std::string> level{""};
        for (long long m = 0; m < n; ++m) {
            std::vector<std::string> next;
            for (const auto& v : level) {
                next.push_back(v + '0');
                if (branches_at(m)) next.push_back(v + '1');
            }
            level = std::move(next);
        }
        return level;
    }

private:
    std::vector<std::uint8_t> branching_;
    std::vector<long long> prefix_;
};

struct Counterexample {
    PrunedTree tree;
    std::vector<long long> x_levels;  // A ∩ [0, N]: X is the union of these spheres
    double lower_density = 0;         // Cesàro mean of |X ∩ S_n| / |S_n| over 1..N
    double lower_density_tail_min = 0;  // smallest Cesàro mean over n in [N/2, N]
    double density_A = 0;
};

/// T_A and X = union of S_n(T_A) over n ∈ A ∩ [0, N]. Each sphere is either
/// entirely inside X or disjoint from it, so the per-sphere ratio is the
/// indicator of A and its Cesàro mean is the lower-density proxy.
inline Counterexample build_counterexample(const BohrSet& A) {
    for (long long n = 0; n <= A.horizon; ++n)
        if (A.at(n) == Membership::Uncertain)
            throw ConsistencyError("membership of level " + std::to_string(n) + " is not certified");
    auto ind = A.nonnegative_indicator();
    Counterexample c{PrunedTree(ind), {}, 0, 0, 0};
    for (long long n = 0; n <= A.horizon; ++n)
        if (ind[n]) c.x_levels.push_back(n);
    double running = 0;
    double tail_min = 1;
    for (long long n = 1; n <= A.horizon; ++n) {
        running += ind[n];
        const double mean = running / static_cast<double>(n);
        if (2 * n >= A.horizon) tail_min = std::min(tail_min, mean);
    }
    c.lower_density = running / static_cast<double>(A.horizon);
    c.lower_density_tail_min = tail_min;
    c.density_A = density_of(A).estimate;
    return c;
}

// -------------------------------------------------------------- avoidance

struct Witness {
    int k = 0;
    long long t = 0;
    bool found = false;
    bool certified_far = false;  // ||k t theta|| >= 2 eps, so kt avoids the untruncated sumset too
};

struct PairSample {
    long long a = 0, b = 0, split = 0, distance = 0;
};

struct AvoidanceReport {
    Rational epsilon;
    long long N = 0;
    long long window = 0;
    std::size_t uncertain_count = 0;
    DensityEstimate density_A;
    DensityEstimate density_sumset;
    std::vector<Witness> witnesses;
    std::size_t sampled_pairs = 0;
    std::size_t sampled_failures = 0;
    std::vector<PairSample> failing_samples;
    std::size_t exhaustive_pairs = 0;
    std::size_t exhaustive_failures = 0;
    long long exhaustive_level = 0;
    UniformityReport uniformity;

    bool all_witnesses_found() const {
        return std::all_of(witnesses.begin(), witnesses.end(), [](const Witness& w) { return w.found; });
    }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["epsilon"] = rational_json(epsilon);
        out["N"] = N;
        out["window"] = window;
        out["uncertain_count"] = uncertain_count;
        out["density_A"] = density_A.estimate;
        out["density_sumset"] = density_sumset.estimate;
        out["density_A_dyadic"] = density_A.to_json()["dyadic"];
        out["density_sumset_dyadic"] = density_sumset.to_json()["dyadic"];
        auto ws = nlohmann::json::array();
        for (const auto& w : witnesses) {
            nlohmann::json e{{"k", w.k}, {"found", w.found}};
            if (w.found) {
                e["t"] = w.t;
                e["certified_far"] = w.certified_far;
            } else {
                e["status"] = "not found in window";
            }
            ws.push_back(e);
        }
        out["witnesses"] = ws;
        out["sampled_pairs"] = sampled_pairs;
        out["sampled_failures"] = sampled_failures;
        out["exhaustive_level"] = exhaustive_level;
        out["exhaustive_pairs"] = exhaustive_pairs;
        out["exhaustive_failures"] = exhaustive_failures;
        out["uniformity"] = uniformity.to_json();
        return out;
    }
};

struct AvoidanceOptions {
    Rational epsilon{1, 5};
    long long N = 1'000'000;
    long long radicand = 2;
    int k_max = 4;
    long long K = 1000;
    /// Central window [-W, W] for the sumset density; 0 means N/2.
    long long window = 0;
    std::size_t samples = 10'000;
    /// Levels up to this bound are checked on every pair of explicit X vertices.
    long long exhaustive_level = 40;
    std::uint64_t seed = 1;
    int threads = 1;
    int uniformity_k = 4;
};

namespace detail {

/// Distance between uniformly random vertices of S_a(T_A) and S_b(T_A): their
/// paths agree until the first branching level below min(a, b) at which the
/// two fair coins differ.
inline PairSample sample_pair(const std::vector<long long>& levels, const std::vector<long long>& branch_levels,
                              Rng& rng) {
    PairSample s;
    s.a = levels[uniform_int(rng, 0, static_cast<std::int64_t>(levels.size()) - 1)];
    s.b = levels[uniform_int(rng, 0, static_cast<std::int64_t>(levels.size()) - 1)];
    const long long low = std::min(s.a, s.b);
    s.split = low;
    for (long long m : branch_levels) {
        if (m >= low) break;
        if (bernoulli(rng, 0.5)) {
            s.split = m;
            break;
        }
    }
    s.distance = (s.a - s.split) + (s.b - s.split);
    return s;
}

}  // namespace detail

inline AvoidanceReport verify_avoidance(const AvoidanceOptions& opt) {
    if (opt.k_max < 1) throw InputError("k_max must be positive");
    if (opt.K < 1) throw InputError("K must be positive");
    const long long W = opt.window > 0 ? opt.window : opt.N / 2;
    if (W > 2 * opt.N) throw InputError("window exceeds the sumset range [-2N, 2N]");
    if (opt.K * opt.k_max > 2 * opt.N) throw InputError("K * k_max exceeds the sumset range");

    const auto A = bohr_membership(opt.epsilon, opt.N, opt.radicand, opt.threads);
    const QuadraticIrrational theta(opt.radicand);
    AvoidanceReport rep;
    rep.epsilon = opt.epsilon;
    rep.N = opt.N;
    rep.window = W;
    rep.uncertain_count = A.uncertain_count;
    rep.density_A = density_of(A);

    const auto indicator = A.nonnegative_indicator();
    const auto sumset = double_difference_sumset(indicator);
    rep.density_sumset = window_density(sumset, W);

    for (int k = 1; k <= opt.k_max; ++k) {
        Witness w{k, 0, false, false};
        for (long long t = opt.K; k * t <= sumset.max(); ++t) {
            if (!sumset.contains(k * t)) {
                w.t = t;
                w.found = true;
                w.certified_far = certified_far_from_integers(theta, k * t, 2 * opt.epsilon);
                break;
            }
        }
        rep.witnesses.push_back(w);
    }

    const auto ce = build_counterexample(A);
    std::vector<long long> branch_levels = ce.x_levels;  // branching happens exactly at member levels
    Rng rng = make_rng(opt.seed);
    for (std::size_t i = 0; i < opt.samples; ++i) {
        const auto s = detail::sample_pair(ce.x_levels, branch_levels, rng);
        ++rep.sampled_pairs;
        if (!sumset.contains(s.distance)) {
            ++rep.sampled_failures;
            if (rep.failing_samples.size() < 10) rep.failing_samples.push_back(s);
        }
    }

    // Every pair of explicit X vertices up to the exhaustive level.
    rep.exhaustive_level = std::min(opt.exhaustive_level, opt.N);
    std::vector<std::string> xs;
    for (long long n : ce.x_levels) {
        if (n > rep.exhaustive_level) break;
        const auto level = ce.tree.sphere(n);
        xs.insert(xs.end(), level.begin(), level.end());
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i; j < xs.size(); ++j) {
            std::size_t m = 0;
            while (m < xs[i].size() && m < xs[j].size() && xs[i][m] == xs[j][m]) ++m;
            const long long d = static_cast<long long>(xs[i].size() + xs[j].size() - 2 * m);
            ++rep.exhaustive_pairs;
            if (!sumset.contains(d)) ++rep.exhaustive_failures;
        }

    rep.uniformity = uniformity_check(sumset, W, opt.uniformity_k);
    return rep;
}

}  // namespace bramsey::bohr
