#pragma once

// Irreducible crystallographic root data, their finite Weyl groups, the
// lattices Q (coroots) and P (coweights), dominance orders and the sphere
// cardinality formula for affine buildings.
//
// Conventions
// -----------
// Roots live in an ambient Euclidean space with the standard inner product
// and Bourbaki coordinates. Coweights are written in the basis of
// fundamental coweights w_i (<w_i, a_j> = delta_ij), so a Coweight is an
// integer vector c with lambda = sum c_i w_i and <lambda, a_j> = c_j.
// Weyl group elements are stored as integer matrices acting on these
// coordinates: s_j(c)_i = c_i - c_j * <a_j^v, a_i>.

#include "exact.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bramsey {

enum class Family { A, B, C, D, E, F, G };

struct TypeLabel {
    Family family = Family::A;
    int rank = 1;

    std::string str() const {
        static constexpr char letters[] = "ABCDEFG";
        return std::string(1, letters[static_cast<int>(family)]) + std::to_string(rank);
    }

    /// Accepts labels such as "A1", "C2", "E8" (case-insensitive letter).
    static TypeLabel parse(const std::string& text) {
        if (text.size() < 2) throw InputError("unsupported root system type '" + text + "'");
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        if (letter < 'A' || letter > 'G') throw InputError("unsupported root system type '" + text + "'");
        int rank = 0;
        for (std::size_t i = 1; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw InputError("unsupported root system type '" + text + "'");
            rank = rank * 10 + (text[i] - '0');
            if (rank > 99) break;
        }
        TypeLabel label{static_cast<Family>(letter - 'A'), rank};
        if (!label.supported()) throw InputError("unsupported root system type '" + text + "'");
        return label;
    }

    bool supported() const {
        if (rank < 1 || rank > 8) return false;
        switch (family) {
            case Family::A: return true;
            case Family::B:
            case Family::C: return rank >= 2;
            case Family::D: return rank >= 4;
            case Family::E: return rank >= 6;
            case Family::F: return rank == 4;
            case Family::G: return rank == 2;
        }
        return false;
    }

    friend bool operator==(const TypeLabel&, const TypeLabel&) = default;
};

/// lambda = sum c_i w_i in the fundamental-coweight basis.
class Coweight {
public:
    Coweight() = default;
    explicit Coweight(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}

    static Coweight zero(int rank) { return Coweight(std::vector<std::int64_t>(rank, 0)); }
    static Coweight rho(int rank) { return Coweight(std::vector<std::int64_t>(rank, 1)); }
    /// w_i with 1-based i.
    static Coweight fundamental(int rank, int i) {
        std::vector<std::int64_t> c(rank, 0);
        c.at(i - 1) = 1;
        return Coweight(std::move(c));
    }

    const std::vector<std::int64_t>& coords() const { return coords_; }
    int rank() const { return static_cast<int>(coords_.size()); }
    std::int64_t operator[](std::size_t i) const { return coords_[i]; }

    bool is_dominant() const {
        return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c >= 0; });
    }
    bool is_strongly_dominant() const {
        return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c > 0; });
    }
    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
    }

    friend Coweight operator+(const Coweight& a, const Coweight& b) {
        check_same_rank(a, b);
        auto c = a.coords_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
        return Coweight(std::move(c));
    }
    friend Coweight operator-(const Coweight& a, const Coweight& b) {
        check_same_rank(a, b);
        auto c = a.coords_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
        return Coweight(std::move(c));
    }
    friend Coweight operator-(const Coweight& a) {
        auto c = a.coords_;
        for (auto& x : c) x = -x;
        return Coweight(std::move(c));
    }
    friend Coweight operator*(std::int64_t k, const Coweight& a) {
        auto c = a.coords_;
        for (auto& x : c) x *= k;
        return Coweight(std::move(c));
    }
    friend bool operator==(const Coweight&, const Coweight&) = default;
    friend auto operator<=>(const Coweight&, const Coweight&) = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(coords_[i]);
        }
        return s + ")";
    }

private:
    static void check_same_rank(const Coweight& a, const Coweight& b) {
        if (a.coords_.size() != b.coords_.size()) throw InputError("coweight rank mismatch");
    }

    std::vector<std::int64_t> coords_;
};

/// mu <= lambda iff lambda - mu is dominant.
inline bool dominated_by(const Coweight& mu, const Coweight& lambda) { return (lambda - mu).is_dominant(); }

/// mu << lambda iff lambda - mu is strongly dominant.
inline bool strongly_below(const Coweight& mu, const Coweight& lambda) {
    return (lambda - mu).is_strongly_dominant();
}

struct RootDatum {
    TypeLabel type;
    int ambient_dim = 0;
    std::vector<RationalVector> simple_roots;
    /// Positive roots, ambient coordinates and simple-root coordinates (same order).
    std::vector<RationalVector> positive_roots;
    std::vector<std::vector<int>> positive_root_coords;
    std::vector<RationalVector> positive_coroots;
    RationalVector highest_root;
    std::vector<int> marks;
    std::vector<RationalVector> fundamental_coweights;
    /// cartan[i][j] = <a_i^v, a_j>.
    std::vector<std::vector<int>> cartan;

    int rank() const { return type.rank; }
    std::size_t num_positive_roots() const { return positive_roots.size(); }

    RationalVector coweight_to_ambient(const Coweight& lambda) const {
        RationalVector v(ambient_dim, Rational(0));
        for (int i = 0; i < rank(); ++i)
            for (int a = 0; a < ambient_dim; ++a) v[a] += lambda[i] * fundamental_coweights[i][a];
        return v;
    }
};

inline RationalVector coroot_of(const RationalVector& alpha) {
    const Rational norm = dot(alpha, alpha);
    RationalVector out(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = 2 * alpha[i] / norm;
    return out;
}

namespace detail {

inline RationalVector unit(int dim, int i, Rational scale = 1) {
    RationalVector v(dim, Rational(0));
    v[i] = scale;
    return v;
}

inline RationalVector diff_unit(int dim, int i, int j) {
    RationalVector v(dim, Rational(0));
    v[i] = 1;
    v[j] = -1;
    return v;
}

inline std::vector<RationalVector> e8_simple_roots() {
    const Rational h(1, 2);
    std::vector<RationalVector> roots;
    roots.push_back({h, -h, -h, -h, -h, -h, -h, h});
    RationalVector a2(8, Rational(0));
    a2[0] = 1;
    a2[1] = 1;
    roots.push_back(a2);
    for (int i = 1; i <= 6; ++i) roots.push_back(diff_unit(8, i, i - 1));
    return roots;
}

/// Bourbaki simple roots for the supported types.
inline std::pair<int, std::vector<RationalVector>> bourbaki_simple_roots(const TypeLabel& t) {
    const int n = t.rank;
    std::vector<RationalVector> roots;
    switch (t.family) {
        case Family::A:
            for (int i = 0; i < n; ++i) roots.push_back(diff_unit(n + 1, i, i + 1));
            return {n + 1, roots};
        case Family::B:
            for (int i = 0; i + 1 < n; ++i) roots.push_back(diff_unit(n, i, i + 1));
            roots.push_back(unit(n, n - 1));
            return {n, roots};
        case Family::C:
            for (int i = 0; i + 1 < n; ++i) roots.push_back(diff_unit(n, i, i + 1));
            roots.push_back(unit(n, n - 1, 2));
            return {n, roots};
        case Family::D: {
            for (int i = 0; i + 1 < n; ++i) roots.push_back(diff_unit(n, i, i + 1));
            RationalVector last(n, Rational(0));
            last[n - 2] = 1;
            last[n - 1] = 1;
            roots.push_back(last);
            return {n, roots};
        }
        case Family::E: {
            auto all = e8_simple_roots();
            all.resize(n);
            return {8, all};
        }
        case Family::F: {
            const Rational h(1, 2);
            roots.push_back(diff_unit(4, 1, 2));
            roots.push_back(diff_unit(4, 2, 3));
            roots.push_back(unit(4, 3));
            roots.push_back({h, -h, -h, -h});
            return {4, roots};
        }
        case Family::G:
            roots.push_back({Rational(1), Rational(-1), Rational(0)});
            roots.push_back({Rational(-2), Rational(1), Rational(1)});
            return {3, roots};
    }
    throw InputError("unsupported root system type");
}

struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace detail

/// Builds the root datum of an irreducible type of rank <= 8.
inline RootDatum build_root_datum(const TypeLabel& type) {
    if (!type.supported()) throw InputError("unsupported root system type '" + type.str() + "'");
    RootDatum d;
    d.type = type;
    auto [dim, simple] = detail::bourbaki_simple_roots(type);
    d.ambient_dim = dim;
    d.simple_roots = std::move(simple);
    const int n = type.rank;

    d.cartan.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rational a = 2 * dot(d.simple_roots[i], d.simple_roots[j]) / dot(d.simple_roots[i], d.simple_roots[i]);
            if (!is_integer(a)) throw ConsistencyError("non-integral Cartan entry for " + type.str());
            d.cartan[i][j] = static_cast<int>(numerator(a));
        }

    // Close the simple roots under simple reflections, keeping the positive half.
    std::vector<std::vector<int>> found;
    std::deque<std::vector<int>> queue;
    auto seen = [&](const std::vector<int>& r) { return std::find(found.begin(), found.end(), r) != found.end(); };
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        found.push_back(e);
        queue.push_back(e);
    }
    while (!queue.empty()) {
        auto beta = queue.front();
        queue.pop_front();
        for (int j = 0; j < n; ++j) {
            int pairing = 0;  // <beta, a_j^v>
            for (int m = 0; m < n; ++m) pairing += beta[m] * d.cartan[j][m];
            if (pairing == 0) continue;
            auto image = beta;
            image[j] -= pairing;
            if (std::any_of(image.begin(), image.end(), [](int x) { return x < 0; })) continue;
            if (!seen(image)) {
                found.push_back(image);
                queue.push_back(image);
            }
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        const int ha = std::accumulate(a.begin(), a.end(), 0);
        const int hb = std::accumulate(b.begin(), b.end(), 0);
        return ha < hb;
    });
    d.positive_root_coords = found;
    for (const auto& coords : found) {
        RationalVector v(dim, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < dim; ++a) v[a] += coords[i] * d.simple_roots[i][a];
        d.positive_roots.push_back(v);
        d.positive_coroots.push_back(coroot_of(v));
    }

    d.marks = found.back();
    d.highest_root = d.positive_roots.back();
    const int top = std::accumulate(d.marks.begin(), d.marks.end(), 0);
    const auto tops = std::count_if(found.begin(), found.end(), [&](const auto& r) {
        return std::accumulate(r.begin(), r.end(), 0) == top;
    });
    if (tops != 1) throw ConsistencyError("highest root is not unique for " + type.str());

    // w_i = sum_j (G^-1)_ij a_j keeps the coweights inside the span of the roots.
    RationalMatrix gram(n, RationalVector(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram[i][j] = dot(d.simple_roots[i], d.simple_roots[j]);
    const auto gram_inv = inverse(gram);
    if (!gram_inv) throw ConsistencyError("simple roots are linearly dependent");
    for (int i = 0; i < n; ++i) {
        RationalVector w(dim, Rational(0));
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < dim; ++a) w[a] += (*gram_inv)[i][j] * d.simple_roots[j][a];
        d.fundamental_coweights.push_back(w);
    }
    return d;
}

inline RootDatum build_root_datum(const std::string& label) { return build_root_datum(TypeLabel::parse(label)); }

/// An element of W_0 acting on fundamental-coweight coordinates.
struct WeylElement {
    int rank = 0;
    std::vector<std::int64_t> matrix;  // row-major rank x rank
    std::vector<int> word;             // reduced word, 1-based generators, read left to right

    int length() const { return static_cast<int>(word.size()); }
    std::int64_t at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * rank + j]; }

    Coweight apply(const Coweight& lambda) const {
        std::vector<std::int64_t> out(rank, 0);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) out[i] += at(i, j) * lambda[j];
        return Coweight(std::move(out));
    }

    bool is_identity() const {
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (at(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    bool is_minus_identity() const {
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (at(i, j) != (i == j ? -1 : 0)) return false;
        return true;
    }

    /// Equality of group elements (words may differ).
    bool same_element(const WeylElement& other) const { return matrix == other.matrix; }
};

namespace detail {

inline std::vector<std::int64_t> reflection_matrix(const RootDatum& d, int j) {
    const int n = d.rank();
    std::vector<std::int64_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1;
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + j] -= d.cartan[j][i];
    return m;
}

inline std::vector<std::int64_t> matmul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, int n) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const auto aik = a[static_cast<std::size_t>(i) * n + k];
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i) * n + j] += aik * b[static_cast<std::size_t>(k) * n + j];
        }
    return c;
}

inline std::vector<std::int64_t> matrix_of_word(const RootDatum& d, const std::vector<int>& word) {
    const int n = d.rank();
    std::vector<std::int64_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1;
    for (int g : word) {
        if (g < 1 || g > n) throw InputError("generator index out of range");
        m = matmul(m, reflection_matrix(d, g - 1), n);
    }
    return m;
}

/// Applies s_j (0-based) to a coweight coordinate vector in place.
inline void reflect(const RootDatum& d, std::vector<std::int64_t>& c, int j) {
    const auto cj = c[j];
    if (cj == 0) return;
    for (int i = 0; i < d.rank(); ++i) c[i] -= cj * d.cartan[j][i];
}

}  // namespace detail

/// Builds the element from its matrix, attaching a canonical reduced word
/// obtained by walking w(rho) back to the dominant chamber.
inline WeylElement weyl_element_from_matrix(const RootDatum& d, std::vector<std::int64_t> matrix) {
    WeylElement w{d.rank(), std::move(matrix), {}};
    auto v = w.apply(Coweight::rho(d.rank())).coords();
    for (;;) {
        int j = -1;
        for (int i = 0; i < d.rank(); ++i)
            if (v[i] < 0) {
                j = i;
                break;
            }
        if (j < 0) break;
        detail::reflect(d, v, j);
        w.word.push_back(j + 1);
    }
    if (v != Coweight::rho(d.rank()).coords()) throw ConsistencyError("matrix is not a Weyl group element");
    return w;
}

inline WeylElement weyl_element_from_word(const RootDatum& d, const std::vector<int>& word) {
    return weyl_element_from_matrix(d, detail::matrix_of_word(d, word));
}

inline WeylElement multiply(const RootDatum& d, const WeylElement& a, const WeylElement& b) {
    return weyl_element_from_matrix(d, detail::matmul(a.matrix, b.matrix, d.rank()));
}

inline WeylElement identity_element(const RootDatum& d) { return weyl_element_from_word(d, {}); }

/// The longest element w_0, found by descending from rho to -rho; works at every
/// supported rank without enumerating W_0.
inline WeylElement longest_element(const RootDatum& d) {
    auto v = Coweight::rho(d.rank()).coords();
    std::vector<int> word;
    for (;;) {
        int j = -1;
        for (int i = 0; i < d.rank(); ++i)
            if (v[i] > 0) {
                j = i;
                break;
            }
        if (j < 0) break;
        detail::reflect(d, v, j);
        word.push_back(j + 1);
    }
    std::reverse(word.begin(), word.end());
    WeylElement w{d.rank(), detail::matrix_of_word(d, word), word};
    return w;
}

/// Rational matrix of w on the ambient space (product of reflections along the word).
inline RationalMatrix ambient_matrix(const RootDatum& d, const WeylElement& w) {
    RationalMatrix m = identity_matrix(d.ambient_dim);
    for (int g : w.word) {
        const auto& alpha = d.simple_roots[g - 1];
        const auto coroot = coroot_of(alpha);
        RationalMatrix s = identity_matrix(d.ambient_dim);
        for (int a = 0; a < d.ambient_dim; ++a)
            for (int b = 0; b < d.ambient_dim; ++b) s[a][b] -= coroot[a] * alpha[b];
        m = multiply(m, s);
    }
    return m;
}

/// Image of a root (simple-root coordinates) under w.
inline std::vector<int> apply_to_root(const RootDatum& d, const WeylElement& w, std::vector<int> beta) {
    for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
        const int j = *it - 1;
        int pairing = 0;
        for (int m = 0; m < d.rank(); ++m) pairing += beta[m] * d.cartan[j][m];
        beta[j] -= pairing;
    }
    return beta;
}

/// Number of positive roots sent to negative roots.
inline int inversion_count(const RootDatum& d, const WeylElement& w) {
    int count = 0;
    for (const auto& beta : d.positive_root_coords) {
        const auto image = apply_to_root(d, w, beta);
        if (std::any_of(image.begin(), image.end(), [](int x) { return x < 0; })) ++count;
    }
    return count;
}

struct EnumerationOptions {
    /// Ranks above 6 are refused unless this is set (E8 has 696,729,600 elements).
    bool allow_large = false;
};

/// All of W_0 by breadth-first search on the Cayley graph, deduplicating
/// matrices. Elements come out in BFS order, so words are reduced.
inline std::vector<WeylElement> enumerate_weyl(const RootDatum& d, EnumerationOptions options = {}) {
    if (d.rank() > 6 && !options.allow_large)
        throw InputError("Weyl group enumeration above rank 6 requires allow_large");
    const int n = d.rank();
    std::vector<std::vector<std::int64_t>> generators;
    for (int j = 0; j < n; ++j) generators.push_back(detail::reflection_matrix(d, j));

    std::vector<WeylElement> elements;
    std::unordered_map<std::vector<std::int64_t>, std::size_t, detail::VectorHash> index;
    elements.push_back(identity_element(d));
    index.emplace(elements.back().matrix, 0);
    for (std::size_t head = 0; head < elements.size(); ++head) {
        for (int j = 0; j < n; ++j) {
            auto m = detail::matmul(elements[head].matrix, generators[j], n);
            if (index.contains(m)) continue;
            WeylElement next{n, m, elements[head].word};
            next.word.push_back(j + 1);
            index.emplace(std::move(m), elements.size());
            elements.push_back(std::move(next));
        }
    }
    return elements;
}

/// Number of elements of each length (coefficients of the Poincare polynomial).
inline std::vector<BigInt> length_distribution(std::span<const WeylElement> elements) {
    std::vector<BigInt> counts;
    for (const auto& w : elements) {
        if (static_cast<std::size_t>(w.length()) >= counts.size()) counts.resize(w.length() + 1, BigInt(0));
        counts[w.length()] += 1;
    }
    return counts;
}

/// Selects either all of W_0 or the stabilizer W_{0,lambda}.
struct WeylSubset {
    std::optional<Coweight> stabilizer_of;

    static WeylSubset all() { return {}; }
    static WeylSubset stabilizer(Coweight lambda) { return {std::move(lambda)}; }

    bool contains(const WeylElement& w) const { return !stabilizer_of || w.apply(*stabilizer_of) == *stabilizer_of; }
};

/// sum over the selected subset of q^{-l(u)}.
inline Rational poincare_value(std::span<const WeylElement> group, const WeylSubset& subset, int q) {
    if (q < 2) throw InputError("q must be at least 2");
    Rational total = 0;
    for (const auto& w : group)
        if (subset.contains(w)) total += Rational(1, ipow(BigInt(q), static_cast<unsigned>(w.length())));
    return total;
}

inline Rational poincare_value(const RootDatum& d, const WeylSubset& subset, int q, EnumerationOptions options = {}) {
    const auto group = enumerate_weyl(d, options);
    return poincare_value(group, subset, q);
}

/// True iff w_0 acts as -1.
inline bool is_minus_one_type(const RootDatum& d) { return longest_element(d).is_minus_identity(); }

struct DominantRep {
    Coweight dominant;
    /// Maps the input vector to `dominant`.
    WeylElement certificate;
};

/// The unique dominant element of the W_0-orbit of a coweight.
inline DominantRep dominant_rep(const RootDatum& d, const Coweight& mu) {
    if (mu.rank() != d.rank()) throw InputError("coweight rank does not match the root datum");
    auto v = mu.coords();
    std::vector<int> applied;
    for (;;) {
        int j = -1;
        for (int i = 0; i < d.rank(); ++i)
            if (v[i] < 0) {
                j = i;
                break;
            }
        if (j < 0) break;
        detail::reflect(d, v, j);
        applied.push_back(j + 1);
    }
    // v = s_{j_m} ... s_{j_1} mu, so the certificate's word is the applied list reversed.
    std::reverse(applied.begin(), applied.end());
    auto cert = weyl_element_from_word(d, applied);
    return {Coweight(std::move(v)), std::move(cert)};
}

/// Converts an ambient vector to coweight coordinates; it must lie in the span of
/// the roots and pair integrally with every root.
inline Coweight ambient_to_coweight(const RootDatum& d, const RationalVector& v) {
    if (static_cast<int>(v.size()) != d.ambient_dim)
        throw InputError("vector has dimension " + std::to_string(v.size()) + ", expected " +
                         std::to_string(d.ambient_dim));
    std::vector<std::int64_t> c(d.rank());
    for (int j = 0; j < d.rank(); ++j) {
        const Rational p = dot(v, d.simple_roots[j]);
        if (!is_integer(p)) throw InputError("vector pairs non-integrally with a root; not in the coweight lattice");
        c[j] = static_cast<std::int64_t>(numerator(p));
    }
    Coweight lambda(std::move(c));
    if (d.coweight_to_ambient(lambda) != v) throw InputError("vector is not in the span of the roots");
    return lambda;
}

inline DominantRep dominant_rep(const RootDatum& d, const RationalVector& ambient) {
    return dominant_rep(d, ambient_to_coweight(d, ambient));
}

/// lambda* = -w_0 lambda.
inline Coweight star_involution(const RootDatum& d, const Coweight& lambda) {
    return -longest_element(d).apply(lambda);
}

/// h(lambda) = sum over positive roots a of <lambda, a>: the number of hyperplanes
/// separating 0 from lambda. This is the exponent in the sphere and atom counts.
inline std::int64_t height_two_rho(const RootDatum& d, const Coweight& lambda) {
    if (lambda.rank() != d.rank()) throw InputError("coweight rank does not match the root datum");
    if (!lambda.is_dominant()) throw InputError("height_two_rho requires a dominant coweight");
    std::int64_t h = 0;
    for (const auto& beta : d.positive_root_coords)
        for (int i = 0; i < d.rank(); ++i) h += lambda[i] * beta[i];
    return h;
}

/// |S_lambda| = W_0(1/q) / W_{0,lambda}(1/q) * q^{h(lambda)}.
inline BigInt sphere_size(std::span<const WeylElement> group, const RootDatum& d, const Coweight& lambda, int q) {
    if (q < 2) throw InputError("q must be at least 2");
    const auto h = height_two_rho(d, lambda);
    const Rational ratio = poincare_value(group, WeylSubset::all(), q) /
                           poincare_value(group, WeylSubset::stabilizer(lambda), q);
    const Rational value = ratio * Rational(ipow(BigInt(q), static_cast<unsigned>(h)));
    if (!is_integer(value))
        throw ConsistencyError("sphere size " + to_string(value) + " is not an integer for " + d.type.str() + " " +
                               lambda.str());
    return numerator(value);
}

inline BigInt sphere_size(const RootDatum& d, const Coweight& lambda, int q, EnumerationOptions options = {}) {
    const auto group = enumerate_weyl(d, options);
    return sphere_size(group, d, lambda, q);
}

/// Coordinates of lambda in the coroot basis a_1^v..a_n^v (rational).
inline RationalVector coroot_coordinates(const RootDatum& d, const Coweight& lambda) {
    // a_j^v = sum_i <a_j^v, a_i> w_i, so lambda = sum_j x_j a_j^v means cartan^T x = c.
    const int n = d.rank();
    RationalMatrix at(n, RationalVector(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at[i][j] = d.cartan[j][i];
    RationalVector c(lambda.coords().begin(), lambda.coords().end());
    auto x = solve(at, c);
    if (!x) throw ConsistencyError("Cartan matrix is singular");
    return *x;
}

/// lambda in Q = Z a_1^v + ... + Z a_n^v.
inline bool in_coroot_lattice(const RootDatum& d, const Coweight& lambda) {
    const auto x = coroot_coordinates(d, lambda);
    return std::all_of(x.begin(), x.end(), [](const Rational& v) { return is_integer(v); });
}

/// Coroot a_j^v (1-based j) as a coweight.
inline Coweight simple_coroot(const RootDatum& d, int j) {
    std::vector<std::int64_t> c(d.rank());
    for (int i = 0; i < d.rank(); ++i) c[i] = d.cartan[j - 1][i];
    return Coweight(std::move(c));
}

inline nlohmann::json to_json(const RootDatum& d) {
    nlohmann::json out;
    out["type"] = d.type.str();
    out["rank"] = d.rank();
    out["ambient_dim"] = d.ambient_dim;
    auto vectors = [](const std::vector<RationalVector>& vs) {
        auto arr = nlohmann::json::array();
        for (const auto& v : vs) arr.push_back(rational_vector_json(v));
        return arr;
    };
    out["simple_roots"] = vectors(d.simple_roots);
    out["positive_roots"] = vectors(d.positive_roots);
    out["positive_root_coords"] = d.positive_root_coords;
    out["fundamental_coweights"] = vectors(d.fundamental_coweights);
    out["highest_root"] = rational_vector_json(d.highest_root);
    out["marks"] = d.marks;
    out["cartan_matrix"] = d.cartan;
    return out;
}

}  // namespace bramsey
