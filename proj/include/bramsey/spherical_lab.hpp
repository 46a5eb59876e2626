#pragma once

// The two smallest thick rank-2 spherical buildings at q = 2 as flag
// complexes: the Fano plane (type A2, 21 chambers) and the duad-syntheme
// generalized quadrangle GQ(2,2) (type C2, 45 chambers). Chambers are
// incident point-line flags; ~0 changes the point and ~1 changes the line,
// spelling the simple reflections s_1 and s_2.

#include "exact.hpp"
#include "parallel.hpp"
#include "root_system.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bramsey::spherical {

struct FlagComplex {
    std::string weyl_type;  // "A2" or "C2"
    int q = 2;
    std::vector<std::string> points;
    std::vector<std::string> lines;
    std::vector<std::vector<int>> line_points;
    std::vector<std::vector<int>> point_lines;
    /// Chambers as (point, line), sorted.
    std::vector<std::pair<int, int>> chambers;
    /// panel[i][c]: the other chambers of c's i-panel.
    std::array<std::vector<std::vector<int>>, 2> panel;

    std::size_t size() const { return chambers.size(); }

    std::string chamber_label(int c) const {
        const auto& [p, l] = chambers.at(static_cast<std::size_t>(c));
        return points[p] + "|" + lines[l];
    }

    /// Typed adjacency: c ~i d.
    bool adjacent(int c, int d, int i) const {
        const auto& nb = panel.at(static_cast<std::size_t>(i))[static_cast<std::size_t>(c)];
        return std::find(nb.begin(), nb.end(), d) != nb.end();
    }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["type"] = weyl_type;
        out["q"] = q;
        out["points"] = points;
        auto ls = nlohmann::json::array();
        for (std::size_t l = 0; l < lines.size(); ++l) {
            auto pts = nlohmann::json::array();
            for (int p : line_points[l]) pts.push_back(points[p]);
            ls.push_back({{"label", lines[l]}, {"points", pts}});
        }
        out["lines"] = ls;
        auto cs = nlohmann::json::array();
        for (const auto& [p, l] : chambers) cs.push_back({points[p], lines[l]});
        out["chambers"] = cs;
        return out;
    }
};

namespace detail {

/// Fills point_lines, chambers and the two panel maps from line_points.
inline void finish(FlagComplex& fc) {
    fc.point_lines.assign(fc.points.size(), {});
    for (std::size_t l = 0; l < fc.lines.size(); ++l)
        for (int p : fc.line_points[l]) fc.point_lines[static_cast<std::size_t>(p)].push_back(static_cast<int>(l));
    for (std::size_t p = 0; p < fc.points.size(); ++p)
        for (int l : fc.point_lines[p]) fc.chambers.emplace_back(static_cast<int>(p), l);
    std::sort(fc.chambers.begin(), fc.chambers.end());
    std::map<std::pair<int, int>, int> index;
    for (std::size_t c = 0; c < fc.chambers.size(); ++c) index[fc.chambers[c]] = static_cast<int>(c);
    for (auto& side : fc.panel) side.assign(fc.chambers.size(), {});
    for (std::size_t c = 0; c < fc.chambers.size(); ++c) {
        const auto [p, l] = fc.chambers[c];
        for (int p2 : fc.line_points[static_cast<std::size_t>(l)])
            if (p2 != p) fc.panel[0][c].push_back(index.at({p2, l}));
        for (int l2 : fc.point_lines[static_cast<std::size_t>(p)])
            if (l2 != l) fc.panel[1][c].push_back(index.at({p, l2}));
    }
}

}  // namespace detail

/// Points: nonzero vectors of F_2^3 as masks 1..7. Line n: {p : p·n = 0}.
inline FlagComplex build_fano() {
    FlagComplex fc;
    fc.weyl_type = "A2";
    for (int p = 1; p <= 7; ++p) fc.points.push_back("p" + std::to_string(p));
    for (int n = 1; n <= 7; ++n) {
        fc.lines.push_back("L" + std::to_string(n));
        std::vector<int> pts;
        for (int p = 1; p <= 7; ++p)
            if (std::popcount(static_cast<unsigned>(p & n)) % 2 == 0) pts.push_back(p - 1);
        fc.line_points.push_back(pts);
    }
    detail::finish(fc);
    return fc;
}

/// Points: the 15 duads of {1..6}; lines: the 15 synthemes (perfect matchings).
inline FlagComplex build_gq22() {
    FlagComplex fc;
    fc.weyl_type = "C2";
    std::map<std::pair<int, int>, int> duad_index;
    for (int a = 1; a <= 6; ++a)
        for (int b = a + 1; b <= 6; ++b) {
            duad_index[{a, b}] = static_cast<int>(fc.points.size());
            fc.points.push_back(std::to_string(a) + std::to_string(b));
        }
    for (int b = 2; b <= 6; ++b) {
        std::vector<int> rest;
        for (int x = 2; x <= 6; ++x)
            if (x != b) rest.push_back(x);
        // rest has 4 elements; pair rest[0] with each of the other three
        for (int j = 1; j <= 3; ++j) {
            std::vector<int> others;
            for (int i = 1; i <= 3; ++i)
                if (i != j) others.push_back(rest[static_cast<std::size_t>(i)]);
            const std::pair<int, int> d1{1, b}, d2{rest[0], rest[static_cast<std::size_t>(j)]}, d3{others[0], others[1]};
            fc.lines.push_back(fc.points[duad_index[d1]] + "/" + fc.points[duad_index[d2]] + "/" + fc.points[duad_index[d3]]);
            fc.line_points.push_back({duad_index[d1], duad_index[d2], duad_index[d3]});
        }
    }
    detail::finish(fc);
    return fc;
}

inline FlagComplex build_complex(const std::string& name) {
    if (name == "fano" || name == "A2") return build_fano();
    if (name == "gq22" || name == "C2") return build_gq22();
    throw InputError("complex: expected fano or gq22, got '" + name + "'");
}

/// Every panel lies in exactly q + 1 chambers.
inline bool check_thickness(const FlagComplex& fc) {
    for (const auto& side : fc.panel)
        for (const auto& nb : side)
            if (static_cast<int>(nb.size()) != fc.q) return false;
    return true;
}

/// Numerical and Weyl distances between all chambers by typed-gallery BFS.
/// Each BFS extends every minimal gallery by one letter; a chamber reached by
/// two minimal galleries spelling different Weyl elements is recorded.
struct DistanceTable {
    RootDatum datum;
    std::size_t n = 0;
    std::vector<int> dist;              // n * n
    std::vector<WeylElement> delta;     // n * n
    bool gallery_independent = true;
    int diameter = 0;

    int distance(int c, int d) const { return dist[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(d)]; }
    const WeylElement& weyl(int c, int d) const { return delta[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(d)]; }
};

inline DistanceTable distance_table(const FlagComplex& fc, int threads = 1) {
    DistanceTable t{build_root_datum(fc.weyl_type), fc.size(), {}, {}, true, 0};
    t.dist.assign(t.n * t.n, -1);
    t.delta.assign(t.n * t.n, WeylElement{});
    const std::array<WeylElement, 2> gens{weyl_element_from_word(t.datum, {1}), weyl_element_from_word(t.datum, {2})};
    std::vector<std::uint8_t> consistent(t.n, 1);
    parallel_for(t.n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t src = lo; src < hi; ++src) {
            int* dist = &t.dist[src * t.n];
            WeylElement* delta = &t.delta[src * t.n];
            dist[src] = 0;
            delta[src] = identity_element(t.datum);
            std::queue<int> todo;
            todo.push(static_cast<int>(src));
            while (!todo.empty()) {
                const int c = todo.front();
                todo.pop();
                for (int i = 0; i < 2; ++i)
                    for (int d : fc.panel[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) {
                        const auto w = multiply(t.datum, delta[c], gens[static_cast<std::size_t>(i)]);
                        if (dist[d] < 0) {
                            dist[d] = dist[c] + 1;
                            delta[d] = w;
                            todo.push(d);
                        } else if (dist[d] == dist[c] + 1 && !delta[d].same_element(w)) {
                            consistent[src] = 0;
                        }
                    }
            }
        }
    });
    t.gallery_independent = std::all_of(consistent.begin(), consistent.end(), [](auto x) { return x != 0; });
    t.diameter = *std::max_element(t.dist.begin(), t.dist.end());
    return t;
}

inline const WeylElement& weyl_distance(const DistanceTable& t, int c, int d) { return t.weyl(c, d); }

/// Type sequences of all minimal galleries from c to d.
inline std::vector<std::vector<int>> minimal_galleries(const FlagComplex& fc, const DistanceTable& t, int c, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    auto rec = [&](auto&& self, int x) -> void {
        if (x == d) {
            out.push_back(word);
            return;
        }
        for (int i = 0; i < 2; ++i)
            for (int y : fc.panel[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)])
                if (t.distance(y, d) == t.distance(x, d) - 1) {
                    word.push_back(i + 1);
                    self(self, y);
                    word.pop_back();
                }
    };
    rec(rec, c);
    return out;
}

inline int longest_length(const DistanceTable& t) { return longest_element(t.datum).length(); }

/// |{d : delta(c, d) = w_0}|.
inline long long opposite_count(const DistanceTable& t, int c) {
    const auto w0 = longest_element(t.datum);
    long long count = 0;
    for (std::size_t d = 0; d < t.n; ++d)
        if (t.weyl(c, static_cast<int>(d)).same_element(w0)) ++count;
    return count;
}

/// |{c : dist(c1, c) = dist(c2, c) = l(w_0)}| for an opposite pair.
inline long long double_opposite_count(const DistanceTable& t, int c1, int c2) {
    const int L = longest_length(t);
    if (!t.weyl(c1, c2).same_element(longest_element(t.datum)))
        throw InputError("double_opposite_count: chambers " + std::to_string(c1) + " and " + std::to_string(c2) +
                         " are not opposite");
    long long count = 0;
    for (std::size_t c = 0; c < t.n; ++c)
        if (t.distance(c1, static_cast<int>(c)) == L && t.distance(c2, static_cast<int>(c)) == L) ++count;
    return count;
}

/// The i-neighbours of c at distance l(w_0) - 1 from c' (c and c' opposite).
inline std::vector<int> projection_candidates(const FlagComplex& fc, const DistanceTable& t, int c, int c_opp, int i) {
    const int L = longest_length(t);
    if (t.distance(c, c_opp) != L) throw InputError("projection: chambers are not opposite");
    std::vector<int> out;
    for (int d : fc.panel.at(static_cast<std::size_t>(i))[static_cast<std::size_t>(c)])
        if (t.distance(d, c_opp) == L - 1) out.push_back(d);
    return out;
}

struct NoiseRow {
    int c1 = 0, c2 = 0;
    long long count = 0;
};

struct NoiseReport {
    std::string weyl_type;
    int q = 2;
    int longest = 0;
    long long expected_opposites = 0;     // q^{l(w_0)}
    long long bound = 0;                  // (q-1)^{l(w_0)}
    std::vector<long long> opposite_counts;
    std::vector<NoiseRow> rows;
    long long min_count = 0, max_count = 0;
    bool thick = false;
    bool gallery_independent = false;
    bool projections_unique = false;
    int diameter = 0;

    bool opposites_pass() const {
        return std::all_of(opposite_counts.begin(), opposite_counts.end(),
                           [&](long long c) { return c == expected_opposites; });
    }
    bool bound_pass() const { return !rows.empty() && min_count >= bound; }
    bool pass() const { return thick && gallery_independent && projections_unique && opposites_pass() && bound_pass(); }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["type"] = weyl_type;
        out["q"] = q;
        out["chambers"] = opposite_counts.size();
        out["longest_length"] = longest;
        out["diameter"] = diameter;
        out["expected_opposites"] = expected_opposites;
        out["opposites_pass"] = opposites_pass();
        out["opposite_pairs"] = rows.size();
        out["bound"] = bound;
        out["min_double_opposite"] = min_count;
        out["max_double_opposite"] = max_count;
        out["thick"] = thick;
        out["gallery_independent"] = gallery_independent;
        out["projections_unique"] = projections_unique;
        out["status"] = pass() ? "pass" : "fail";
        return out;
    }

    std::string to_csv(const FlagComplex& fc) const {
        std::ostringstream os;
        os << "c1,c2,double_opposite_count\n";
        for (const auto& r : rows) os << fc.chamber_label(r.c1) << ',' << fc.chamber_label(r.c2) << ',' << r.count << '\n';
        return os.str();
    }
};

/// Exhaustive check over all chambers and ordered opposite pairs.
inline NoiseReport noise_check(const FlagComplex& fc, int threads = 1) {
    const auto t = distance_table(fc, threads);
    NoiseReport rep;
    rep.weyl_type = fc.weyl_type;
    rep.q = fc.q;
    rep.longest = longest_length(t);
    rep.expected_opposites = ipow(BigInt(fc.q), static_cast<unsigned>(rep.longest)).convert_to<long long>();
    rep.bound = ipow(BigInt(fc.q - 1), static_cast<unsigned>(rep.longest)).convert_to<long long>();
    rep.thick = check_thickness(fc);
    rep.gallery_independent = t.gallery_independent;
    rep.diameter = t.diameter;
    rep.projections_unique = true;
    for (std::size_t c = 0; c < t.n; ++c) rep.opposite_counts.push_back(opposite_count(t, static_cast<int>(c)));
    for (std::size_t a = 0; a < t.n; ++a)
        for (std::size_t b = 0; b < t.n; ++b) {
            if (t.distance(static_cast<int>(a), static_cast<int>(b)) != rep.longest) continue;
            const long long count = double_opposite_count(t, static_cast<int>(a), static_cast<int>(b));
            rep.rows.push_back({static_cast<int>(a), static_cast<int>(b), count});
            for (int i = 0; i < 2; ++i)
                if (projection_candidates(fc, t, static_cast<int>(a), static_cast<int>(b), i).size() != 1)
                    rep.projections_unique = false;
        }
    if (!rep.rows.empty()) {
        const auto [lo, hi] = std::minmax_element(rep.rows.begin(), rep.rows.end(),
                                                  [](const NoiseRow& x, const NoiseRow& y) { return x.count < y.count; });
        rep.min_count = lo->count;
        rep.max_count = hi->count;
    }
    return rep;
}

}  // namespace bramsey::spherical
