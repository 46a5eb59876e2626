#pragma once

// Test-only reference implementations. Each one takes a deliberately
// different route from the library code it checks: explicit graphs and BFS
// instead of prefix arithmetic, ambient reflections instead of coweight
// matrices, backtracking over tuples instead of subtree counts,
// high-precision floats instead of fixed-point integers.

#include "bramsey/root_system.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bramsey::oracle {

// ---------------------------------------------------------------- root data

/// W_0-orbit of an ambient vector under the simple reflections, computed with
/// rational reflection formulas x - <x,a> a^v.
inline std::set<RationalVector> ambient_orbit(const RootDatum& d, const RationalVector& start) {
    std::set<RationalVector> seen{start};
    std::queue<RationalVector> todo;
    todo.push(start);
    while (!todo.empty()) {
        auto x = todo.front();
        todo.pop();
        for (const auto& alpha : d.simple_roots) {
            const auto coroot = coroot_of(alpha);
            const Rational p = dot(x, alpha);
            RationalVector y = x;
            for (std::size_t a = 0; a < y.size(); ++a) y[a] -= p * coroot[a];
            if (seen.insert(y).second) todo.push(y);
        }
    }
    return seen;
}

/// Length generating function of W_0 via the orbit of rho: l(w) is the number
/// of positive roots pairing negatively with w(rho).
inline std::vector<int> length_counts_via_orbit(const RootDatum& d) {
    const auto rho = d.coweight_to_ambient(Coweight::rho(d.rank()));
    std::vector<int> counts;
    for (const auto& x : ambient_orbit(d, rho)) {
        int len = 0;
        for (const auto& alpha : d.positive_roots)
            if (dot(x, alpha) < 0) ++len;
        if (len >= static_cast<int>(counts.size())) counts.resize(len + 1, 0);
        ++counts[len];
    }
    return counts;
}

// ---------------------------------------------------------------- trees

/// Explicit finite ball of the homogeneous tree with adjacency lists; vertex 0
/// is the root. Codes are recorded so results can be compared to the library.
struct ExplicitTree {
    int q = 2;
    int depth = 1;
    std::vector<std::vector<int>> adjacency;
    std::vector<std::string> codes;
    std::map<std::string, int> index;

    ExplicitTree(int q_, int depth_) : q(q_), depth(depth_) {
        add("", -1);
        std::vector<int> frontier{0};
        for (int level = 1; level <= depth; ++level) {
            std::vector<int> next;
            for (int parent : frontier) {
                const int first = level == 1 ? 0 : 1;
                for (int letter = first; letter <= q; ++letter) {
                    next.push_back(add(codes[parent] + static_cast<char>('0' + letter), parent));
                }
            }
            frontier = std::move(next);
        }
    }

    int add(const std::string& code, int parent) {
        const int id = static_cast<int>(codes.size());
        codes.push_back(code);
        index[code] = id;
        adjacency.emplace_back();
        if (parent >= 0) {
            adjacency[id].push_back(parent);
            adjacency[parent].push_back(id);
        }
        return id;
    }

    std::vector<int> bfs_from(int source) const {
        std::vector<int> dist(codes.size(), -1);
        std::queue<int> todo;
        dist[source] = 0;
        todo.push(source);
        while (!todo.empty()) {
            const int v = todo.front();
            todo.pop();
            for (int w : adjacency[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    todo.push(w);
                }
        }
        return dist;
    }

    int bfs_distance(const std::string& a, const std::string& b) const { return bfs_from(index.at(a))[index.at(b)]; }

    std::vector<long long> sphere_counts() const {
        std::vector<long long> counts(depth + 1, 0);
        for (int d : bfs_from(0)) ++counts[d];
        return counts;
    }
};

/// Distance by walking both codes up to their common ancestor, one edge at a time.
inline int walk_distance(std::string a, std::string b) {
    int steps = 0;
    while (a != b) {
        if (a.size() >= b.size()) {
            a.pop_back();
        } else {
            b.pop_back();
        }
        ++steps;
    }
    return steps;
}

/// Backtracking search over tuples (v0, Y_1, ..., Y_k) inside one level, checking
/// every pairwise distance of the configuration explicitly.
inline bool star_exists_by_tuples(const std::vector<std::string>& level_vertices, const std::vector<int>& t,
                                  const std::vector<int>& r) {
    const std::size_t k = t.size();
    for (const auto& v0 : level_vertices) {
        std::vector<std::vector<std::string>> candidates(k);
        bool hopeless = false;
        for (std::size_t i = 0; i < k && !hopeless; ++i) {
            for (const auto& y : level_vertices)
                if (walk_distance(v0, y) == 2 * t[i]) candidates[i].push_back(y);
            hopeless = static_cast<int>(candidates[i].size()) < r[i];
        }
        if (hopeless) continue;

        std::vector<std::string> chosen;
        std::vector<int> chosen_class;
        std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t cls, std::size_t from) -> bool {
            if (cls == k) return true;
            const std::size_t need = static_cast<std::size_t>(r[cls]);
            std::size_t have = 0;
            for (std::size_t c = 0; c < chosen.size(); ++c)
                if (chosen_class[c] == static_cast<int>(cls)) ++have;
            if (have == need) return extend(cls + 1, 0);
            for (std::size_t idx = from; idx < candidates[cls].size(); ++idx) {
                const auto& y = candidates[cls][idx];
                bool ok = true;
                for (std::size_t c = 0; c < chosen.size() && ok; ++c) {
                    if (chosen[c] == y) ok = false;
                    else if (chosen_class[c] != static_cast<int>(cls) &&
                             walk_distance(chosen[c], y) != 2 * t[std::max<std::size_t>(cls, chosen_class[c])])
                        ok = false;
                }
                if (!ok) continue;
                chosen.push_back(y);
                chosen_class.push_back(static_cast<int>(cls));
                if (extend(cls, idx + 1)) return true;
                chosen.pop_back();
                chosen_class.pop_back();
            }
            return false;
        };
        if (extend(0, 0)) return true;
    }
    return false;
}

// ---------------------------------------------------------------- Bohr sets

using Float = boost::multiprecision::cpp_dec_float_100;

/// {n sqrt(D)} evaluated with 100 significant decimal digits.
inline Float fractional_part_sqrt(long long n, long long radicand = 2) {
    const Float x = Float(n) * boost::multiprecision::sqrt(Float(radicand));
    return x - boost::multiprecision::floor(x);
}

// ---------------------------------------------------------------- p-adic

/// Invariant factors of a nonsingular integer matrix by Smith normal form over Z
/// (extended-gcd row and column operations), as p-valuations sorted descending.
inline std::vector<long long> smith_valuations(std::vector<std::vector<BigInt>> a, long long p) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (;;) {
            // smallest nonzero absolute value in the trailing block goes to the corner
            std::size_t br = n, bc = n;
            for (std::size_t r = k; r < n; ++r)
                for (std::size_t c = k; c < n; ++c)
                    if (a[r][c] != 0 && (br == n || abs(a[r][c]) < abs(a[br][bc]))) {
                        br = r;
                        bc = c;
                    }
            std::swap(a[k], a[br]);
            for (auto& row : a) std::swap(row[k], row[bc]);
            bool clean = true;
            for (std::size_t r = k + 1; r < n; ++r) {
                const BigInt f = a[r][k] / a[k][k];
                for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
                clean = clean && a[r][k] == 0;
            }
            for (std::size_t c = k + 1; c < n; ++c) {
                const BigInt f = a[k][c] / a[k][k];
                for (std::size_t r = k; r < n; ++r) a[r][c] -= f * a[r][k];
                clean = clean && a[k][c] == 0;
            }
            if (!clean) continue;
            // the corner must divide the rest of the block
            std::size_t bad = n;
            for (std::size_t r = k + 1; r < n && bad == n; ++r)
                for (std::size_t c = k + 1; c < n; ++c)
                    if (a[r][c] % a[k][k] != 0) {
                        bad = r;
                        break;
                    }
            if (bad == n) break;
            for (std::size_t c = k; c < n; ++c) a[k][c] += a[bad][c];
        }
    }
    std::vector<long long> out;
    for (std::size_t k = 0; k < n; ++k) {
        BigInt x = abs(a[k][k]);
        long long v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        out.push_back(v);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace bramsey::oracle
