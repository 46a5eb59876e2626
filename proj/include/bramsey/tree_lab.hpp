#pragma once

// Finite balls of the homogeneous tree T_q of degree q+1 rooted at o.
//
// Vertex coding: o is the empty string, a level-1 vertex is one digit in
// 0..q and every deeper digit is in 1..q. Equal-level codes compare
// lexicographically, the distance is LCP arithmetic and C(v,k) is the set of
// level(v)+k codes having v as a prefix, so every subtree count is a binary
// search in a sorted per-level vector.

#include "exact.hpp"
#include "parallel.hpp"
#include "random.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bramsey::tree {

/// Largest vertex list any enumeration is allowed to materialize.
inline constexpr std::size_t kMaxEnumeration = 50'000'000;

class TreeBall {
public:
    TreeBall(int q, int depth) : q_(q), depth_(depth) {
        if (q < 2 || q > 9) throw InputError("q must lie in 2..9 (one digit per letter)");
        if (depth < 1 || depth > 4096) throw InputError("depth must lie in 1..4096");
    }

    int q() const { return q_; }
    int depth() const { return depth_; }

    /// |S_n| = (q+1) q^{n-1} for n >= 1.
    BigInt sphere_size(int n) const {
        check_level(n);
        if (n == 0) return 1;
        return BigInt(q_ + 1) * ipow(BigInt(q_), static_cast<unsigned>(n - 1));
    }

    /// |C(v,k)|; the root has q+1 children, everything else q.
    BigInt children_count(const std::string& v, int k) const {
        check(v);
        if (k < 0 || level(v) + k > depth_) throw InputError("children: level(v)+k exceeds the depth");
        if (k == 0) return 1;
        if (v.empty()) return sphere_size(k);
        return ipow(BigInt(q_), static_cast<unsigned>(k));
    }

    static int level(std::string_view code) { return static_cast<int>(code.size()); }

    bool valid(std::string_view code) const {
        if (static_cast<int>(code.size()) > depth_) return false;
        for (std::size_t i = 0; i < code.size(); ++i) {
            const int letter = code[i] - '0';
            if (letter < (i == 0 ? 0 : 1) || letter > q_) return false;
        }
        return true;
    }

    void check(std::string_view code) const {
        if (!valid(code))
            throw InputError("invalid vertex code '" + std::string(code) + "' for q=" + std::to_string(q_) +
                             ", depth=" + std::to_string(depth_));
    }

    void check_level(int n) const {
        if (n < 0 || n > depth_) throw InputError("level " + std::to_string(n) + " outside 0.." + std::to_string(depth_));
    }

    char first_letter(int position) const { return position == 0 ? '0' : '1'; }
    char last_letter() const { return static_cast<char>('0' + q_); }

    /// C(v,k) in lexicographic order.
    std::vector<std::string> children(const std::string& v, int k) const {
        const BigInt count = children_count(v, k);
        if (count > kMaxEnumeration) throw InputError("children: too many vertices to enumerate");
        std::vector<std::string> out{v};
        for (int step = 0; step < k; ++step) {
            std::vector<std::string> next;
            next.reserve(out.size() * static_cast<std::size_t>(q_ + 1));
            for (const auto& code : out) {
                for (char c = first_letter(static_cast<int>(code.size())); c <= last_letter(); ++c) next.push_back(code + c);
            }
            out = std::move(next);
        }
        return out;
    }

    std::vector<std::string> sphere(int n) const {
        check_level(n);
        return children("", n);
    }

private:
    int q_;
    int depth_;
};

inline int lcp_level(std::string_view x, std::string_view y) {
    const std::size_t m = std::min(x.size(), y.size());
    std::size_t i = 0;
    while (i < m && x[i] == y[i]) ++i;
    return static_cast<int>(i);
}

inline int distance(std::string_view x, std::string_view y) {
    const int m = lcp_level(x, y);
    return static_cast<int>(x.size()) + static_cast<int>(y.size()) - 2 * m;
}

inline int distance(const TreeBall& ball, const std::string& x, const std::string& y) {
    ball.check(x);
    ball.check(y);
    return distance(x, y);
}

/// A subset of the ball stored as sorted, deduplicated code lists per level.
class VertexSet {
public:
    explicit VertexSet(const TreeBall& ball) : ball_(ball), levels_(static_cast<std::size_t>(ball.depth()) + 1) {}

    template <class Range>
    static VertexSet from_codes(const TreeBall& ball, const Range& codes) {
        VertexSet s(ball);
        for (const auto& c : codes) s.add_unsorted(std::string(c));
        s.normalize();
        return s;
    }

    const TreeBall& ball() const { return ball_; }
    const std::vector<std::string>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
    int depth() const { return ball_.depth(); }

    std::size_t size() const {
        std::size_t total = 0;
        for (const auto& l : levels_) total += l.size();
        return total;
    }
    bool empty() const { return size() == 0; }

    bool contains(const std::string& code) const {
        if (static_cast<int>(code.size()) > ball_.depth()) return false;
        const auto& l = levels_[code.size()];
        return std::binary_search(l.begin(), l.end(), code);
    }

    /// Elements of level n having the given prefix, as an index range into level(n).
    std::pair<std::size_t, std::size_t> prefix_range(int n, std::string_view prefix) const {
        const auto& l = levels_.at(static_cast<std::size_t>(n));
        const auto lo = std::lower_bound(l.begin(), l.end(), prefix,
                                         [](const std::string& a, std::string_view b) { return std::string_view(a) < b; });
        std::string upper(prefix);
        upper.push_back('~');  // sorts after every digit
        const auto hi = std::lower_bound(lo, l.end(), upper);
        return {static_cast<std::size_t>(lo - l.begin()), static_cast<std::size_t>(hi - l.begin())};
    }

    /// |X ∩ C(prefix, n - |prefix|)|.
    std::size_t count_prefix(int n, std::string_view prefix) const {
        const auto [lo, hi] = prefix_range(n, prefix);
        return hi - lo;
    }

    void add_unsorted(std::string code) {
        ball_.check(code);
        levels_[code.size()].push_back(std::move(code));
    }

    void normalize() {
        for (auto& l : levels_) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }

    void insert(const std::string& code) {
        ball_.check(code);
        auto& l = levels_[code.size()];
        const auto it = std::lower_bound(l.begin(), l.end(), code);
        if (it == l.end() || *it != code) l.insert(it, code);
    }

    /// {"q": int, "depth": int, "levels": {"n": ["code", ...]}}; empty levels omitted.
    nlohmann::json to_json() const {
        nlohmann::json out;
        out["q"] = ball_.q();
        out["depth"] = ball_.depth();
        out["levels"] = nlohmann::json::object();
        for (std::size_t n = 0; n < levels_.size(); ++n)
            if (!levels_[n].empty()) out["levels"][std::to_string(n)] = levels_[n];
        return out;
    }

    static VertexSet from_json(const nlohmann::json& j) {
        auto field = [&](const char* name) -> const nlohmann::json& {
            if (!j.is_object() || !j.contains(name)) throw InputError(std::string("vertex set: missing field '") + name + "'");
            return j.at(name);
        };
        const auto& qj = field("q");
        const auto& dj = field("depth");
        if (!qj.is_number_integer()) throw InputError("vertex set: field 'q' must be an integer");
        if (!dj.is_number_integer()) throw InputError("vertex set: field 'depth' must be an integer");
        const TreeBall ball(qj.get<int>(), dj.get<int>());
        VertexSet s(ball);
        const auto& levels = field("levels");
        if (!levels.is_object()) throw InputError("vertex set: field 'levels' must be an object");
        for (const auto& [key, codes] : levels.items()) {
            int n = -1;
            try {
                std::size_t used = 0;
                n = std::stoi(key, &used);
                if (used != key.size()) n = -1;
            } catch (const std::exception&) {
            }
            if (n < 0 || n > ball.depth()) throw InputError("vertex set: field 'levels' has bad level key '" + key + "'");
            if (!codes.is_array()) throw InputError("vertex set: field 'levels." + key + "' must be an array");
            for (const auto& c : codes) {
                if (!c.is_string()) throw InputError("vertex set: field 'levels." + key + "' must contain strings");
                const auto code = c.get<std::string>();
                if (static_cast<int>(code.size()) != n)
                    throw InputError("vertex set: code '" + code + "' listed under level " + key);
                s.add_unsorted(code);
            }
        }
        s.normalize();
        return s;
    }

private:
    TreeBall ball_;
    std::vector<std::vector<std::string>> levels_;
};

/// The whole sphere S_n as a vertex set.
inline VertexSet full_sphere(const TreeBall& ball, int n) { return VertexSet::from_codes(ball, ball.sphere(n)); }

/// Every vertex of the ball.
inline VertexSet full_ball(const TreeBall& ball) {
    VertexSet s(ball);
    for (int n = 0; n <= ball.depth(); ++n)
        for (auto& c : ball.sphere(n)) s.add_unsorted(std::move(c));
    s.normalize();
    return s;
}

// ------------------------------------------------------------------ atoms

struct Atom {
    std::string projection;  // v in S_{n-t}
    BigInt size;             // |C(v,t)|
};

struct AtomPartition {
    int n = 0;
    int t = 0;
    std::vector<Atom> atoms;

    BigInt total() const {
        BigInt s = 0;
        for (const auto& a : atoms) s += a.size;
        return s;
    }
};

/// A_{n,t} = {C(v,t) : v in S_{n-t}}. For t = n the single atom is C(o,n) = S_n.
inline AtomPartition atoms(const TreeBall& ball, int n, int t) {
    ball.check_level(n);
    if (t < 0 || t > n) throw InputError("atoms: need 0 <= t <= n");
    AtomPartition p{n, t, {}};
    for (auto& v : ball.sphere(n - t)) {
        BigInt size = ball.children_count(v, t);
        p.atoms.push_back({std::move(v), std::move(size)});
    }
    return p;
}

// ---------------------------------------------------------------- density

struct DensityReport {
    std::vector<Rational> ratios;     // a_n = |X ∩ S_n| / |S_n|
    std::vector<Rational> tail_sups;  // b_n = max_{n <= m <= N} a_m
    Rational estimate;                // inf_n b_n over the ball, the finite stand-in for limsup

    nlohmann::json to_json() const {
        nlohmann::json out;
        auto seq = [](const std::vector<Rational>& v) {
            auto arr = nlohmann::json::array();
            for (const auto& x : v) arr.push_back(rational_json(x));
            return arr;
        };
        out["a"] = seq(ratios);
        out["b"] = seq(tail_sups);
        out["estimate"] = rational_json(estimate);
        out["estimate_float"] = static_cast<double>(estimate);
        return out;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "n,a_n,b_n\n";
        for (std::size_t n = 0; n < ratios.size(); ++n)
            os << n << ',' << static_cast<double>(ratios[n]) << ',' << static_cast<double>(tail_sups[n]) << '\n';
        return os.str();
    }
};

inline DensityReport upper_density(const VertexSet& X) {
    const auto& ball = X.ball();
    DensityReport r;
    for (int n = 0; n <= ball.depth(); ++n)
        r.ratios.push_back(Rational(BigInt(X.level(n).size()), ball.sphere_size(n)));
    r.tail_sups.resize(r.ratios.size());
    Rational running = 0;
    for (std::size_t i = r.ratios.size(); i-- > 0;) {
        running = std::max(running, r.ratios[i]);
        r.tail_sups[i] = running;
    }
    r.estimate = *std::min_element(r.tail_sups.begin(), r.tail_sups.end());
    return r;
}

// ------------------------------------------------------- equidistant pairs

struct VertexPair {
    std::string x;
    std::string y;
    friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

/// Two elements of X on a common sphere at distance exactly 2t. Levels are
/// scanned upwards (or only `level` if given); within a level the pair with
/// the lexicographically smallest x, then smallest y, is returned.
inline std::optional<VertexPair> equidistant_pair_exists(const VertexSet& X, int t, std::optional<int> level = {}) {
    if (t < 1) throw InputError("equidistant_pair_exists: t must be positive");
    const auto& ball = X.ball();
    int lo = t, hi = ball.depth();
    if (level) {
        ball.check_level(*level);
        lo = hi = *level;
    }
    for (int n = std::max(lo, t); n <= hi; ++n) {
        const auto& l = X.level(n);
        const std::size_t cut = static_cast<std::size_t>(n - t);
        for (std::size_t i = 0; i < l.size();) {
            // Group sharing the level-(n-t) ancestor; its letters at position n-t are sorted.
            std::size_t j = i + 1;
            while (j < l.size() && l[j].compare(0, cut, l[i], 0, cut) == 0) ++j;
            std::size_t b = i + 1;
            while (b < j && l[b][cut] == l[i][cut]) ++b;
            if (b < j) return VertexPair{l[i], l[b]};
            i = j;
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------------ stars

/// (k, t, r): t strictly increasing positive, r positive.
struct StarSpec {
    std::vector<int> t;
    std::vector<int> r;

    int k() const { return static_cast<int>(t.size()); }
    int r_max() const { return r.empty() ? 0 : *std::max_element(r.begin(), r.end()); }
    long long members() const {
        long long s = 1;
        for (int x : r) s += x;
        return s;
    }

    void validate() const {
        if (t.empty()) throw InputError("star spec: k must be positive");
        if (t.size() != r.size()) throw InputError("star spec: t and r must have the same length");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < 1) throw InputError("star spec: entries of t must be positive");
            if (i && t[i] <= t[i - 1]) throw InputError("star spec: t must be strictly increasing");
            if (r[i] < 1) throw InputError("star spec: entries of r must be positive");
        }
    }

    nlohmann::json to_json() const { return {{"k", k()}, {"t", t}, {"r", r}}; }
};

struct Star {
    int level = 0;
    std::string center;
    std::vector<std::vector<std::string>> groups;  // Y_1..Y_k

    nlohmann::json to_json() const { return {{"level", level}, {"center", center}, {"groups", groups}}; }
};

/// Independent re-check of a star: membership, common level, centre distances,
/// group sizes, distinctness and the cross-group distances d(x,y) = 2 t_j for
/// x in Y_i, y in Y_j, i < j.
inline bool verify_star(const VertexSet& X, const StarSpec& spec, const Star& star) {
    if (static_cast<int>(star.groups.size()) != spec.k()) return false;
    std::vector<std::string> all{star.center};
    if (!X.contains(star.center) || TreeBall::level(star.center) != star.level) return false;
    for (int i = 0; i < spec.k(); ++i) {
        const auto& g = star.groups[i];
        if (static_cast<int>(g.size()) != spec.r[i]) return false;
        for (const auto& y : g) {
            if (!X.contains(y) || TreeBall::level(y) != star.level) return false;
            if (distance(star.center, y) != 2 * spec.t[i]) return false;
            all.push_back(y);
        }
    }
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (int i = 0; i < spec.k(); ++i)
        for (int j = i + 1; j < spec.k(); ++j)
            for (const auto& x : star.groups[i])
                for (const auto& y : star.groups[j])
                    if (distance(x, y) != 2 * spec.t[j]) return false;
    return true;
}

struct StarSearchOptions {
    std::optional<int> level;
    int threads = 1;
};

namespace detail {

/// Elements of level n under `outer` but not under `inner`, in order, at most `limit`.
inline std::vector<std::string> collect_outside(const VertexSet& X, int n, std::string_view outer, std::string_view inner,
                                                std::size_t limit) {
    std::vector<std::string> out;
    const auto [lo, hi] = X.prefix_range(n, outer);
    const auto [skip_lo, skip_hi] = X.prefix_range(n, inner);
    const auto& l = X.level(n);
    for (std::size_t i = lo; i < hi && out.size() < limit; ++i) {
        if (i >= skip_lo && i < skip_hi) {
            i = skip_hi - 1;
            continue;
        }
        out.push_back(l[i]);
    }
    return out;
}

}  // namespace detail

/// Exact search for a balanced (k, t, r)-star in X.
///
/// The vertices at distance 2 t_i from a centre v0 on S_n are exactly those of
/// C(x_i, t_i) outside the child subtree of x_i containing v0, where x_i is the
/// level-(n - t_i) ancestor of v0. These regions are disjoint and any two of
/// their elements are automatically at distance 2 t_j (j the larger index), so
/// a star with centre v0 exists iff each region holds at least r_i elements of
/// X. Levels are scanned upwards and centres lexicographically; each Y_i takes
/// the lexicographically first r_i elements of its region.
inline std::optional<Star> find_balanced_star(const VertexSet& X, const StarSpec& spec, StarSearchOptions options = {}) {
    spec.validate();
    const auto& ball = X.ball();
    const int t_max = spec.t.back();
    int lo = t_max, hi = ball.depth();
    if (options.level) {
        ball.check_level(*options.level);
        lo = hi = *options.level;
    }
    for (int n = std::max(lo, t_max); n <= hi; ++n) {
        const auto& l = X.level(n);
        if (static_cast<long long>(l.size()) < spec.members()) continue;
        auto is_centre = [&](std::size_t idx) {
            const std::string_view v0 = l[idx];
            for (int i = 0; i < spec.k(); ++i) {
                const std::size_t cut = static_cast<std::size_t>(n - spec.t[i]);
                const std::size_t outer = X.count_prefix(n, v0.substr(0, cut));
                const std::size_t inner = X.count_prefix(n, v0.substr(0, cut + 1));
                if (outer - inner < static_cast<std::size_t>(spec.r[i])) return false;
            }
            return true;
        };
        const auto found = parallel_find_first(l.size(), options.threads, is_centre);
        if (!found) continue;
        Star star{n, l[*found], {}};
        for (int i = 0; i < spec.k(); ++i) {
            const std::size_t cut = static_cast<std::size_t>(n - spec.t[i]);
            const std::string_view v0 = star.center;
            star.groups.push_back(
                detail::collect_outside(X, n, v0.substr(0, cut), v0.substr(0, cut + 1), static_cast<std::size_t>(spec.r[i])));
        }
        if (!verify_star(X, spec, star)) throw ConsistencyError("assembled star failed re-verification");
        return star;
    }
    return std::nullopt;
}

enum class VertexType { A, B };

inline const char* to_string(VertexType t) { return t == VertexType::A ? "A" : "B"; }

/// x on S_{n-s} has type A iff at least two children y satisfy |X ∩ C(y, s-1)| >= r.
inline VertexType classify_type_AB(const VertexSet& X, const std::string& x, int s, int r) {
    const auto& ball = X.ball();
    ball.check(x);
    if (s < 1) throw InputError("classify_type_AB: s must be positive");
    const int n = TreeBall::level(x) + s;
    if (n > ball.depth()) throw InputError("classify_type_AB: level(x)+s exceeds the depth");
    int qualifying = 0;
    for (char c = ball.first_letter(static_cast<int>(x.size())); c <= ball.last_letter(); ++c) {
        if (X.count_prefix(n, x + c) >= static_cast<std::size_t>(std::max(r, 0))) ++qualifying;
        if (qualifying >= 2) return VertexType::A;
    }
    return VertexType::B;
}

namespace detail {

/// Distinct length-`len` prefixes of level-n elements under `under`, in order.
inline std::vector<std::string> distinct_prefixes(const VertexSet& X, int n, std::string_view under, std::size_t len) {
    std::vector<std::string> out;
    const auto [lo, hi] = X.prefix_range(n, under);
    const auto& l = X.level(n);
    for (std::size_t i = lo; i < hi; ++i) {
        std::string p = l[i].substr(0, len);
        if (out.empty() || out.back() != p) out.push_back(std::move(p));
    }
    return out;
}

/// Qualifying children of x (|X ∩ C(y, n-level(y))| >= r), in order.
inline std::vector<std::string> qualifying_children(const VertexSet& X, int n, const std::string& x, int r) {
    std::vector<std::string> out;
    const auto& ball = X.ball();
    for (char c = ball.first_letter(static_cast<int>(x.size())); c <= ball.last_letter(); ++c)
        if (X.count_prefix(n, x + c) >= static_cast<std::size_t>(r)) out.push_back(x + c);
    return out;
}

}  // namespace detail

/// Star assembled from a chain x_k, ..., x_1 of type-A ancestors (x_j on
/// S_{n-t_j}, each below the previous), as in the proof that a star-free set
/// has few heavy atoms. Returns the first chain in lexicographic order. This is
/// a sufficient condition only: its absence does not rule out a star.
inline std::optional<Star> find_star_via_type_a_chain(const VertexSet& X, const StarSpec& spec, int n) {
    spec.validate();
    const auto& ball = X.ball();
    ball.check_level(n);
    if (n < spec.t.back()) return std::nullopt;
    const int r = spec.r_max();
    const int k = spec.k();
    std::vector<std::string> chain(k);  // chain[i] = x_{i+1}

    std::function<std::optional<Star>(int, const std::string&)> descend =
        [&](int i, const std::string& under) -> std::optional<Star> {
        const std::size_t len = static_cast<std::size_t>(n - spec.t[i]);
        for (const auto& x : detail::distinct_prefixes(X, n, under, len)) {
            if (classify_type_AB(X, x, spec.t[i], r) != VertexType::A) continue;
            chain[i] = x;
            if (i > 0) {
                if (auto s = descend(i - 1, x)) return s;
                continue;
            }
            // Assemble: v0 under the first qualifying child y_1 of x_1, Y_1 under a second one.
            const auto ys = detail::qualifying_children(X, n, chain[0], r);
            Star star{n, X.level(n)[X.prefix_range(n, ys[0]).first], {}};
            auto take = [&](const std::string& y, int count) {
                const auto [lo, hi] = X.prefix_range(n, y);
                std::vector<std::string> g;
                for (std::size_t idx = lo; idx < hi && static_cast<int>(g.size()) < count; ++idx) g.push_back(X.level(n)[idx]);
                return g;
            };
            star.groups.push_back(take(ys[1], spec.r[0]));
            for (int j = 1; j < k; ++j) {
                const std::string toward = star.center.substr(0, chain[j].size() + 1);
                const auto yj = detail::qualifying_children(X, n, chain[j], r);
                const auto other = std::find_if(yj.begin(), yj.end(), [&](const auto& y) { return y != toward; });
                star.groups.push_back(take(*other, spec.r[j]));
            }
            if (!verify_star(X, spec, star)) throw ConsistencyError("type-A chain star failed re-verification");
            return star;
        }
        return std::nullopt;
    };
    return descend(k - 1, "");
}

// --------------------------------------------------------- proof checks

struct Claim1Result {
    bool applicable = true;
    std::string reason;
    std::optional<VertexPair> violating_pair;
    std::size_t atoms_total = 0;
    std::size_t atoms_hit = 0;
    Rational proportion = 0;
    Rational bound = 0;
    bool pass = true;

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["applicable"] = applicable;
        out["status"] = applicable ? (pass ? "pass" : "fail") : "not_applicable";
        if (!reason.empty()) out["reason"] = reason;
        if (violating_pair) out["violating_pair"] = {violating_pair->x, violating_pair->y};
        out["atoms_total"] = atoms_total;
        out["atoms_hit"] = atoms_hit;
        out["proportion"] = rational_json(proportion);
        out["bound"] = rational_json(bound);
        out["pass"] = pass;
        return out;
    }
};

/// Proportion of the F_{n,t1-1} atoms inside C(v,t) that meet X, for X with
/// no pair on S_n at distance 2 t1. The bound is 1/q.
inline Claim1Result verify_claim1(const VertexSet& X, int t1, const std::string& v, int t, int n) {
    const auto& ball = X.ball();
    ball.check(v);
    ball.check_level(n);
    if (t1 < 1 || t < t1 || n <= t) throw InputError("verify_claim1: need n > t >= t1 >= 1");
    if (TreeBall::level(v) != n - t) throw InputError("verify_claim1: v must lie on S_{n-t}");
    Claim1Result res;
    res.bound = Rational(1, ball.q());
    if (auto pair = equidistant_pair_exists(X, t1, n)) {
        res.applicable = false;
        res.reason = "hypothesis fails: X has an equidistant pair at distance 2*t1 on S_n; the claim is not applicable";
        res.violating_pair = pair;
        return res;
    }
    const std::size_t len = static_cast<std::size_t>(n - t1 + 1);
    res.atoms_total = static_cast<std::size_t>(ball.children_count(v, t - t1 + 1));
    res.atoms_hit = detail::distinct_prefixes(X, n, v, len).size();
    res.proportion = Rational(static_cast<long long>(res.atoms_hit), static_cast<long long>(res.atoms_total));
    res.pass = res.proportion <= res.bound;
    return res;
}

struct Lemma2Result {
    bool applicable = true;
    std::string reason;
    std::optional<Star> violating_star;
    Rational lhs = 0;
    Rational rhs = 0;
    bool pass = true;

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["applicable"] = applicable;
        out["status"] = applicable ? (pass ? "pass" : "fail") : "not_applicable";
        if (!reason.empty()) out["reason"] = reason;
        if (violating_star) out["violating_star"] = violating_star->to_json();
        out["lhs"] = rational_json(lhs);
        out["rhs"] = rational_json(rhs);
        out["lhs_float"] = static_cast<double>(lhs);
        out["rhs_float"] = static_cast<double>(rhs);
        out["pass"] = pass;
        return out;
    }
};

/// |X ∩ S_n| / |S_n| against q^{-l} + r q^{1 - t_{1,1}} for l chains t_j
/// (chains[j] = t_{j+1}) with t_{k,j} < t_{1,j+1}. The star-free hypothesis is
/// checked on S_n, which is all the counting argument uses.
inline Lemma2Result verify_lemma2_bound(const VertexSet& X, const std::vector<std::vector<int>>& chains,
                                        const std::vector<int>& r, int n, int threads = 1) {
    const auto& ball = X.ball();
    ball.check_level(n);
    if (chains.empty()) throw InputError("verify_lemma2_bound: need at least one chain");
    for (std::size_t j = 0; j < chains.size(); ++j) {
        StarSpec{chains[j], r}.validate();
        if (j + 1 < chains.size() && chains[j].back() >= chains[j + 1].front())
            throw InputError("verify_lemma2_bound: chains must satisfy t_{k,j} < t_{1,j+1}");
    }
    if (n <= chains.back().back()) throw InputError("verify_lemma2_bound: need n > t_{k,l}");
    Lemma2Result res;
    const int q = ball.q();
    const int r_max = *std::max_element(r.begin(), r.end());
    res.lhs = Rational(BigInt(X.level(n).size()), ball.sphere_size(n));
    res.rhs = rpow(Rational(q), -static_cast<long>(chains.size())) + r_max * rpow(Rational(q), 1 - chains[0][0]);
    for (std::size_t j = 0; j < chains.size(); ++j) {
        if (auto star = find_balanced_star(X, StarSpec{chains[j], r}, {n, threads})) {
            res.applicable = false;
            res.reason = "hypothesis fails: X contains a balanced star for chain " + std::to_string(j + 1);
            res.violating_star = star;
            return res;
        }
    }
    res.pass = res.lhs < res.rhs;
    return res;
}

// ----------------------------------------------------- weighted embeddings

/// Finite rooted tree on 0..N (root 0) with a positive weight on each edge,
/// stored on the lower endpoint: weight[j] is the weight of the edge to parent[j].
struct WeightedTree {
    std::vector<int> parent;  // parent[0] = -1
    std::vector<int> weight;  // weight[0] unused

    std::size_t size() const { return parent.size(); }

    std::vector<int> depths() const {
        std::vector<int> d(parent.size(), -1);
        d[0] = 0;
        for (std::size_t pass = 0; pass < parent.size(); ++pass)
            for (std::size_t j = 1; j < parent.size(); ++j)
                if (d[j] < 0 && d[parent[j]] >= 0) d[j] = d[parent[j]] + 1;
        return d;
    }

    void validate() const {
        if (parent.empty() || parent[0] != -1) throw InputError("weighted tree: vertex 0 must be the root (parent -1)");
        if (weight.size() != parent.size()) throw InputError("weighted tree: parent and weight lengths differ");
        for (std::size_t j = 1; j < parent.size(); ++j) {
            if (parent[j] < 0 || parent[j] >= static_cast<int>(parent.size()) || parent[j] == static_cast<int>(j))
                throw InputError("weighted tree: bad parent for vertex " + std::to_string(j));
            if (weight[j] < 1) throw InputError("weighted tree: weights must be positive");
        }
        const auto d = depths();
        if (std::any_of(d.begin(), d.end(), [](int x) { return x < 0; }))
            throw InputError("weighted tree: parent links do not form a tree rooted at 0");
        for (std::size_t i = 1; i < size(); ++i)
            for (std::size_t j = 1; j < size(); ++j)
                if (d[i] < d[j] && weight[i] >= weight[j])
                    throw InputError("weighted tree: weights are not well ordered (vertex " + std::to_string(i) +
                                     " is shallower than vertex " + std::to_string(j) + " but not lighter)");
    }

    static WeightedTree from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("parent") || !j.contains("weight"))
            throw InputError("weighted tree: expected fields 'parent' and 'weight'");
        WeightedTree t;
        try {
            t.parent = j.at("parent").get<std::vector<int>>();
            t.weight = j.at("weight").get<std::vector<int>>();
        } catch (const nlohmann::json::exception&) {
            throw InputError("weighted tree: fields 'parent' and 'weight' must be integer arrays");
        }
        return t;
    }

    /// Distinct weights ascending with their multiplicities.
    StarSpec to_star_spec() const {
        std::map<int, int> mult;
        for (std::size_t j = 1; j < size(); ++j) ++mult[weight[j]];
        StarSpec s;
        for (const auto& [w, m] : mult) {
            s.t.push_back(w);
            s.r.push_back(m);
        }
        return s;
    }
};

struct Embedding {
    StarSpec spec;
    Star star;
    std::vector<std::string> assignment;  // v_0..v_N

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["spec"] = spec.to_json();
        out["star"] = star.to_json();
        out["assignment"] = assignment;
        return out;
    }
};

/// True iff all v_j share a level and d(v_i, v_j) = 2 wt(j) whenever i is strictly shallower than j.
inline bool verify_embedding(const VertexSet& X, const WeightedTree& tree, const std::vector<std::string>& v) {
    if (v.size() != tree.size()) return false;
    const auto d = tree.depths();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!X.contains(v[i]) || v[i].size() != v[0].size()) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (v[i] == v[j]) return false;
    }
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 1; j < v.size(); ++j)
            if (d[i] < d[j] && distance(v[i], v[j]) != 2 * tree.weight[j]) return false;
    return true;
}

/// Embeds a well-ordered weighted tree: the distinct weights and their
/// multiplicities form a star spec, the star centre becomes v_0 and each v_j is
/// taken, in index order, from the group whose radius is wt(j).
inline std::optional<Embedding> embed_weighted_tree(const VertexSet& X, const WeightedTree& tree,
                                                    StarSearchOptions options = {}) {
    tree.validate();
    const auto spec = tree.to_star_spec();
    if (tree.size() == 1) {
        for (int n = 0; n <= X.depth(); ++n)
            if (!X.level(n).empty()) return Embedding{spec, {n, X.level(n).front(), {}}, {X.level(n).front()}};
        return std::nullopt;
    }
    auto star = find_balanced_star(X, spec, options);
    if (!star) return std::nullopt;
    Embedding e{spec, *star, std::vector<std::string>(tree.size())};
    e.assignment[0] = star->center;
    std::vector<std::size_t> used(spec.t.size(), 0);
    for (std::size_t j = 1; j < tree.size(); ++j) {
        const auto cls = static_cast<std::size_t>(
            std::lower_bound(spec.t.begin(), spec.t.end(), tree.weight[j]) - spec.t.begin());
        e.assignment[j] = star->groups[cls][used[cls]++];
    }
    if (!verify_embedding(X, tree, e.assignment)) throw ConsistencyError("embedding failed distance re-verification");
    return e;
}

// -------------------------------------------------------------- derived sets

/// X^t = {x in X : some y in X has d(x,y) = t}, over the whole ball.
inline VertexSet derived_set(const VertexSet& X, int t) {
    if (t < 0) throw InputError("derived_set: t must be non-negative");
    if (t == 0) return X;
    const auto& ball = X.ball();
    VertexSet out(ball);
    for (int a = 0; a <= ball.depth(); ++a) {
        for (const auto& x : X.level(a)) {
            bool hit = false;
            for (int b = std::max(0, a - t); b <= std::min(ball.depth(), a + t) && !hit; ++b) {
                if ((a + b - t) % 2 != 0) continue;
                const int m = (a + b - t) / 2;  // level of the common ancestor
                if (m < 0 || m > std::min(a, b)) continue;
                const std::string_view xv = x;
                if (m == a) {
                    hit = X.count_prefix(b, xv) > 0;  // descendant of x at depth t below
                } else if (m == b) {
                    hit = X.contains(x.substr(0, static_cast<std::size_t>(b)));  // ancestor of x
                } else {
                    hit = X.count_prefix(b, xv.substr(0, m)) > X.count_prefix(b, xv.substr(0, m + 1));
                }
            }
            if (hit) out.add_unsorted(x);
        }
    }
    out.normalize();
    return out;
}

// ---------------------------------------------------- adversarial generators

struct AdversarialOptions {
    /// Levels m at which every surviving vertex keeps exactly one child.
    std::vector<int> single_child_levels;
    /// Probability that any other child subtree is dropped (at least one child always survives).
    double branch_drop = 0.0;
    /// Probability that a surviving level-n vertex is kept.
    double leaf_keep = 1.0;
};

/// A subset of S_n in which every vertex on a designated level m has
/// descendants in at most one child subtree. Designating m = n - t rules out
/// equidistant pairs at distance 2t on S_n, and with it every balanced star
/// whose radii include t.
inline VertexSet star_free_level_set(const TreeBall& ball, int n, const AdversarialOptions& options, Rng& rng) {
    ball.check_level(n);
    std::vector<bool> single(static_cast<std::size_t>(n) + 1, false);
    for (int m : options.single_child_levels) {
        if (m < 0 || m >= n) throw InputError("star_free_level_set: designated levels must lie in 0..n-1");
        single[m] = true;
    }
    std::vector<std::string> frontier{""};
    for (int m = 0; m < n; ++m) {
        std::vector<std::string> next;
        for (const auto& v : frontier) {
            const char first = ball.first_letter(m);
            const int choices = ball.last_letter() - first + 1;
            if (single[m]) {
                next.push_back(v + static_cast<char>(first + uniform_int(rng, 0, choices - 1)));
                continue;
            }
            const std::size_t before = next.size();
            for (char c = first; c <= ball.last_letter(); ++c)
                if (!bernoulli(rng, options.branch_drop)) next.push_back(v + c);
            if (next.size() == before) next.push_back(v + static_cast<char>(first + uniform_int(rng, 0, choices - 1)));
        }
        frontier = std::move(next);
        if (frontier.size() > kMaxEnumeration) throw InputError("star_free_level_set: set too large");
    }
    VertexSet out(ball);
    for (auto& v : frontier)
        if (bernoulli(rng, options.leaf_keep)) out.add_unsorted(std::move(v));
    out.normalize();
    return out;
}

/// Uniformly random subset of S_n with each vertex kept with probability p.
inline VertexSet random_level_set(const TreeBall& ball, int n, double p, Rng& rng) {
    VertexSet out(ball);
    for (auto& v : ball.sphere(n))
        if (bernoulli(rng, p)) out.add_unsorted(std::move(v));
    out.normalize();
    return out;
}

}  // namespace bramsey::tree
