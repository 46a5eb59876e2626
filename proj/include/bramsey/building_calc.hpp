#pragma once

// Counting-level arithmetic for thick affine buildings of uniform thickness
// q: atom cardinalities, the noise constant kappa, the density bound for
// star-free sets, star specs over strongly dominant coweights, and the
// coroot-lattice witness for type A_n.

#include "exact.hpp"
#include "root_system.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bramsey::building {

inline void check_q(int q) {
    if (q < 2) throw InputError("q must be at least 2");
}

inline void check_rank(const RootDatum& d, const Coweight& lambda, const std::string& name) {
    if (lambda.rank() != d.rank())
        throw InputError(name + " has " + std::to_string(lambda.rank()) + " coordinates, expected " +
                         std::to_string(d.rank()));
}

struct AtomCardinalities {
    int longest = 0;             // l(w_0)
    std::int64_t height = 0;     // h(lambda)
    BigInt opposite;             // |O(x)| = q^{l(w_0)}
    BigInt atom;                 // |C(x,c,lambda)| = q^{h(lambda) - l(w_0)}

    nlohmann::json to_json() const {
        return {{"O", bigint_json(opposite)},
                {"atom", bigint_json(atom)},
                {"O_exponent", longest},
                {"atom_exponent", height - longest},
                {"height", height}};
    }
};

inline AtomCardinalities atom_cardinalities(const RootDatum& d, int q, const Coweight& lambda) {
    check_q(q);
    check_rank(d, lambda, "lambda");
    if (!lambda.is_strongly_dominant()) throw InputError("lambda " + lambda.str() + " is not strongly dominant");
    AtomCardinalities a;
    a.longest = longest_element(d).length();
    a.height = height_two_rho(d, lambda);
    a.opposite = ipow(BigInt(q), static_cast<unsigned>(a.longest));
    a.atom = ipow(BigInt(q), static_cast<unsigned>(a.height - a.longest));
    return a;
}

struct PartitionCheck {
    Coweight lambda, mu, nu;
    BigInt sphere_mu;      // |S_mu|
    BigInt atoms;          // |A_{nu,lambda}| = |S_mu| q^{l(w_0)}
    BigInt atom_size;      // q^{h(lambda) - l(w_0)}
    BigInt sphere_nu;      // |S_nu| from the sphere formula
    bool holds = false;    // atoms * atom_size == sphere_nu
    Rational ratio;        // |S_nu| / |S_mu|
    bool ratio_holds = false;  // ratio == q^{h(lambda)}

    nlohmann::json to_json() const {
        return {{"lambda", lambda.coords()},
                {"mu", mu.coords()},
                {"nu", nu.coords()},
                {"sphere_mu", bigint_json(sphere_mu)},
                {"atoms", bigint_json(atoms)},
                {"atom_size", bigint_json(atom_size)},
                {"sphere_nu", bigint_json(sphere_nu)},
                {"holds", holds},
                {"ratio_holds", ratio_holds}};
    }
};

/// |A_{nu,lambda}| * |C(x,c,lambda)| = |S_nu| and |S_nu| / |S_mu| = q^{h(lambda)}
/// for nu = lambda + mu with lambda, mu strongly dominant.
inline PartitionCheck partition_identity(std::span<const WeylElement> group, const RootDatum& d, int q,
                                         const Coweight& lambda, const Coweight& mu) {
    check_rank(d, mu, "mu");
    if (!mu.is_strongly_dominant()) throw InputError("mu " + mu.str() + " is not strongly dominant");
    const auto a = atom_cardinalities(d, q, lambda);
    PartitionCheck c{lambda, mu, lambda + mu, {}, {}, {}, {}, false, {}, false};
    c.sphere_mu = sphere_size(group, d, mu, q);
    c.atoms = c.sphere_mu * a.opposite;
    c.atom_size = a.atom;
    c.sphere_nu = sphere_size(group, d, c.nu, q);
    c.holds = c.atoms * c.atom_size == c.sphere_nu;
    c.ratio = Rational(c.sphere_nu, c.sphere_mu);
    c.ratio_holds = c.ratio == Rational(ipow(BigInt(q), static_cast<unsigned>(a.height)));
    return c;
}

inline PartitionCheck partition_identity(const RootDatum& d, int q, const Coweight& lambda, const Coweight& mu) {
    const auto group = enumerate_weyl(d);
    return partition_identity(group, d, q, lambda, mu);
}

struct Kappa {
    Rational value;   // (1 - 1/q)^{l(w_0)}
    BigInt scaled;    // kappa q^{l(w_0)} = (q - 1)^{l(w_0)}
    int longest = 0;

    nlohmann::json to_json() const {
        return {{"kappa", rational_json(value)}, {"kappa_times_O", bigint_json(scaled)}, {"longest_length", longest}};
    }
};

inline Kappa kappa(const RootDatum& d, int q) {
    check_q(q);
    const int L = longest_element(d).length();
    return {rpow(Rational(q - 1, q), L), ipow(BigInt(q - 1), static_cast<unsigned>(L)), L};
}

/// Type-A threshold (1 - kappa) q^{l(w_0)} = q^{l(w_0)} - (q-1)^{l(w_0)}, with its floor.
struct TypeAThreshold {
    Rational exact;
    BigInt floor;
};

inline TypeAThreshold type_a_threshold(const RootDatum& d, int q) {
    const auto k = kappa(d, q);
    const Rational t = (Rational(1) - k.value) * Rational(ipow(BigInt(q), static_cast<unsigned>(k.longest)));
    return {t, numerator(t) / denominator(t)};
}

struct BoundValue {
    Rational value;
    Rational noise_term;   // (1 - kappa)^l
    Rational tail_term;    // r q^{l(w_0) - h(lambda_11)}
    Rational limit;        // the value as l -> infinity
    bool decreasing_in_l = false;
    bool decreasing_in_lambda = false;

    nlohmann::json to_json() const {
        return {{"value", rational_json(value)},
                {"value_decimal", value.convert_to<double>()},
                {"noise_term", rational_json(noise_term)},
                {"tail_term", rational_json(tail_term)},
                {"limit", rational_json(limit)},
                {"decreasing_in_l", decreasing_in_l},
                {"decreasing_in_lambda", decreasing_in_lambda}};
    }
};

namespace detail {

inline Rational bound_value(const Rational& one_minus_kappa, int longest, int q, int ell, int r, std::int64_t h) {
    return rpow(one_minus_kappa, ell) + Rational(r) * rpow(Rational(q), longest - h);
}

}  // namespace detail

/// (1 - kappa)^l + r q^{l(w_0) - h(lambda_11)}.
inline BoundValue density_bound_rhs(const RootDatum& d, int q, int ell, int r, const Coweight& lambda11) {
    check_q(q);
    check_rank(d, lambda11, "lambda_11");
    if (ell < 1) throw InputError("l must be at least 1");
    if (r < 1) throw InputError("r must be at least 1");
    if (!lambda11.is_strongly_dominant()) throw InputError("lambda_11 " + lambda11.str() + " is not strongly dominant");
    const auto k = kappa(d, q);
    const Rational omk = Rational(1) - k.value;
    const auto h = height_two_rho(d, lambda11);
    BoundValue b;
    b.noise_term = rpow(omk, ell);
    b.tail_term = Rational(r) * rpow(Rational(q), k.longest - h);
    b.value = b.noise_term + b.tail_term;
    b.limit = b.tail_term;
    b.decreasing_in_l = detail::bound_value(omk, k.longest, q, ell + 1, r, h) < b.value;
    b.decreasing_in_lambda = true;
    for (int i = 1; i <= d.rank(); ++i) {
        const auto bigger = lambda11 + Coweight::fundamental(d.rank(), i);
        if (!(detail::bound_value(omk, k.longest, q, ell, r, height_two_rho(d, bigger)) < b.value))
            b.decreasing_in_lambda = false;
    }
    return b;
}

/// |O(x)| and kappa for per-type thickness q_1..q_n along a reduced word of
/// w_0; both words w_0 and its reverse are used and must agree.
struct NonUniformOpposition {
    BigInt opposite;
    Rational kappa;
    bool word_independent = false;

    nlohmann::json to_json() const {
        return {{"O", bigint_json(opposite)}, {"kappa", rational_json(kappa)}, {"word_independent", word_independent}};
    }
};

inline NonUniformOpposition nonuniform_opposition(const RootDatum& d, const std::vector<int>& q) {
    if (static_cast<int>(q.size()) != d.rank())
        throw InputError("thickness vector has " + std::to_string(q.size()) + " entries, expected " +
                         std::to_string(d.rank()));
    for (int qi : q) check_q(qi);
    auto evaluate = [&](const std::vector<int>& word) {
        BigInt o = 1;
        Rational k = 1;
        for (int s : word) {
            o *= q[static_cast<std::size_t>(s - 1)];
            k *= Rational(q[static_cast<std::size_t>(s - 1)] - 1, q[static_cast<std::size_t>(s - 1)]);
        }
        return std::pair{o, k};
    };
    auto word = longest_element(d).word;
    const auto [o1, k1] = evaluate(word);
    std::reverse(word.begin(), word.end());
    const auto [o2, k2] = evaluate(word);
    return {o1, k1, o1 == o2 && k1 == k2};
}

struct BuildingStarSpec {
    std::vector<Coweight> lambdas;
    std::vector<int> r;

    nlohmann::json to_json() const {
        auto ls = nlohmann::json::array();
        for (const auto& l : lambdas) ls.push_back(l.coords());
        return {{"lambdas", ls}, {"r", r}};
    }

    static BuildingStarSpec from_json(const nlohmann::json& j) {
        BuildingStarSpec s;
        if (!j.is_object() || !j.contains("lambdas")) throw InputError("star spec: missing field 'lambdas'");
        if (!j.contains("r")) throw InputError("star spec: missing field 'r'");
        try {
            for (const auto& l : j.at("lambdas")) s.lambdas.emplace_back(l.get<std::vector<std::int64_t>>());
        } catch (const nlohmann::json::exception&) {
            throw InputError("star spec: field 'lambdas' must be a list of integer lists");
        }
        try {
            s.r = j.at("r").get<std::vector<int>>();
        } catch (const nlohmann::json::exception&) {
            throw InputError("star spec: field 'r' must be a list of integers");
        }
        return s;
    }
};

struct SpecDiagnostics {
    bool valid = false;
    bool minus_one_type = false;
    bool self_dual = false;  // lambda_i* = lambda_i for every i
    std::vector<std::string> messages;

    nlohmann::json to_json() const {
        return {{"valid", valid}, {"minus_one_type", minus_one_type}, {"self_dual", self_dual}, {"messages", messages}};
    }
};

/// Checks 0 << lambda_1 << ... << lambda_k and r_i >= 1 (indices 1-based).
inline SpecDiagnostics validate_building_star_spec(const RootDatum& d, const BuildingStarSpec& spec) {
    SpecDiagnostics out;
    out.valid = true;
    auto fail = [&](const std::string& m) {
        out.valid = false;
        out.messages.push_back(m);
    };
    if (spec.lambdas.empty()) fail("spec has no coweights");
    if (spec.lambdas.size() != spec.r.size())
        fail("spec has " + std::to_string(spec.lambdas.size()) + " coweights but " + std::to_string(spec.r.size()) +
             " multiplicities");
    for (std::size_t i = 0; i < spec.lambdas.size(); ++i)
        if (spec.lambdas[i].rank() != d.rank()) fail("coweight " + std::to_string(i + 1) + " has the wrong rank");
    if (!out.valid) return out;
    for (std::size_t i = 0; i < spec.lambdas.size(); ++i) {
        const auto& below = i == 0 ? Coweight::zero(d.rank()) : spec.lambdas[i - 1];
        if (!strongly_below(below, spec.lambdas[i])) fail("<< fails at index " + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < spec.r.size(); ++i)
        if (spec.r[i] < 1) fail("r at index " + std::to_string(i + 1) + " must be at least 1");
    out.minus_one_type = is_minus_one_type(d);
    out.self_dual = true;
    for (const auto& l : spec.lambdas)
        if (star_involution(d, l) != l) out.self_dual = false;
    if (out.minus_one_type)
        out.messages.push_back("datum is (-1)-type; lambda* = lambda for every coweight");
    else
        out.messages.push_back("datum not (-1)-type; the star theorem for buildings does not apply");
    return out;
}

struct WitnessRow {
    long long N = 0;
    Coweight two_lambda;
    int residue = 0;      // class of 2 lambda in P/Q = Z/(n+1)
    bool in_lattice = false;
    bool pass = false;    // not in Q, and the residue agrees with the lattice test
};

struct ConjectureWitness {
    int n = 0;
    std::vector<WitnessRow> rows;
    int control_residue = 0;          // class of 2 rho
    bool control_in_lattice = false;  // 2 rho in Q

    bool pass() const {
        return control_in_lattice && control_residue == 0 &&
               std::all_of(rows.begin(), rows.end(), [](const WitnessRow& r) { return r.pass; });
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"N", r.N}, {"two_lambda", r.two_lambda.coords()}, {"residue", r.residue},
                           {"in_Q", r.in_lattice}, {"pass", r.pass}});
        return {{"type", "A" + std::to_string(n)},
                {"rows", arr},
                {"control_two_rho_in_Q", control_in_lattice},
                {"control_residue", control_residue},
                {"status", pass() ? "pass" : "fail"}};
    }
};

/// Class of sum c_i w_i in P/Q for type A_n: sum i c_i mod (n+1).
inline int type_a_residue(const Coweight& lambda) {
    const long long m = lambda.rank() + 1;
    long long s = 0;
    for (int i = 0; i < lambda.rank(); ++i) s = (s + (i + 1) * (lambda[i] % m)) % m;
    return static_cast<int>(((s % m) + m) % m);
}

/// For N = 0..N_max: 2(w_1 + N rho) is not in the coroot lattice of A_n.
inline ConjectureWitness conjecture_witness(int n, long long N_max) {
    if (n < 2) throw InputError("conjecture witness needs n >= 2");
    if (N_max < 0) throw InputError("N_max must be non-negative");
    const auto d = build_root_datum("A" + std::to_string(n));
    ConjectureWitness w;
    w.n = n;
    for (long long N = 0; N <= N_max; ++N) {
        const auto lambda = Coweight::fundamental(n, 1) + N * Coweight::rho(n);
        WitnessRow row{N, 2 * lambda, 0, false, false};
        row.residue = type_a_residue(row.two_lambda);
        row.in_lattice = in_coroot_lattice(d, row.two_lambda);
        row.pass = !row.in_lattice && row.residue != 0;
        w.rows.push_back(row);
    }
    const auto two_rho = 2 * Coweight::rho(n);
    w.control_residue = type_a_residue(two_rho);
    w.control_in_lattice = in_coroot_lattice(d, two_rho);
    return w;
}

}  // namespace bramsey::building
