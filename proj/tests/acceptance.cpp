// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "bramsey/bohr_lab.hpp"
#include "bramsey/building_calc.hpp"
#include "bramsey/cli.hpp"
#include "bramsey/padic.hpp"
#include "bramsey/root_system.hpp"
#include "bramsey/spherical_lab.hpp"
#include "bramsey/tree_lab.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bramsey;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

/// Accumulates failures; the first failing observation becomes the detail line.
struct Check {
    bool ok = true;
    std::string first_failure;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) first_failure = what;
        ok = ok && cond;
    }
    Verdict verdict(const std::string& summary) const { return {ok, ok ? summary : first_failure}; }
};

Coweight cw(std::vector<std::int64_t> c) { return Coweight(std::move(c)); }

Verdict c1_sphere_formula() {
    Check c;
    const auto a1 = build_root_datum("A1");
    for (int q : {2, 3}) {
        const oracle::ExplicitTree tree(q, 8);
        const auto counts = tree.sphere_counts();
        for (int n = 0; n <= 8; ++n)
            c.expect(sphere_size(a1, cw({n}), q) == counts[static_cast<std::size_t>(n)],
                     "q=" + std::to_string(q) + " n=" + std::to_string(n));
    }
    return c.verdict("A1 sphere sizes equal BFS counts, q in {2,3}, n <= 8");
}

Verdict c2_atoms() {
    Check c;
    const auto d = build_root_datum("C2");
    for (int q : {2, 3}) {
        const auto a = building::atom_cardinalities(d, q, cw({2, 2}));
        c.expect(a.height == 14 && a.longest == 4, "h or l(w0) wrong");
        c.expect(a.opposite == ipow(BigInt(q), 4) && a.atom == ipow(BigInt(q), 10), "counts wrong at q=" + std::to_string(q));
        const auto j = a.to_json();
        c.expect(j.at("O_exponent") == 4 && j.at("atom_exponent") == 10, "exponents wrong");
    }
    return c.verdict("h=14, l(w0)=4, (q^4, q^10) at q=2,3");
}

Verdict c3_minus_one_type() {
    Check c;
    std::vector<std::string> yes{"A1", "E7", "E8", "F4", "G2"}, no{"E6"};
    for (int n = 2; n <= 8; ++n) {
        yes.push_back("B" + std::to_string(n));
        yes.push_back("C" + std::to_string(n));
        no.push_back("A" + std::to_string(n));
    }
    for (int n : {4, 6, 8}) yes.push_back("D" + std::to_string(n));
    for (int n : {5, 7}) no.push_back("D" + std::to_string(n));
    for (const auto& t : yes) c.expect(is_minus_one_type(build_root_datum(t)), t + " should be (-1)-type");
    for (const auto& t : no) c.expect(!is_minus_one_type(build_root_datum(t)), t + " should not be (-1)-type");
    return c.verdict(std::to_string(yes.size() + no.size()) + " types classified");
}

Verdict c4_partition_identities() {
    Check c;
    std::size_t cases = 0;
    for (const std::string type : {"A1", "A2", "C2", "G2"}) {
        const auto d = build_root_datum(type);
        const auto group = enumerate_weyl(d);
        const int n = d.rank();
        std::vector<Coweight> grid;
        std::vector<std::int64_t> x(static_cast<std::size_t>(n), 1);
        for (;;) {
            grid.emplace_back(x);
            int i = 0;
            while (i < n && x[static_cast<std::size_t>(i)] == 3) x[static_cast<std::size_t>(i++)] = 1;
            if (i == n) break;
            ++x[static_cast<std::size_t>(i)];
        }
        for (int q : {2, 3})
            for (const auto& lambda : grid)
                for (const auto& mu : grid) {
                    const auto check = building::partition_identity(group, d, q, lambda, mu);
                    c.expect(check.holds && check.ratio_holds, type + " " + lambda.str() + " " + mu.str());
                    ++cases;
                }
    }
    return c.verdict(std::to_string(cases) + " (type, q, lambda, mu) cases exact");
}

/// The adversarial family shared by criteria 5 and 6.
tree::VertexSet adversarial(Rng& rng, int n, std::vector<int> single_levels) {
    const tree::TreeBall ball(2, n);
    const double drop = 0.3 * static_cast<double>(uniform_int(rng, 0, 2));
    const double keep = bernoulli(rng, 0.5) ? 1.0 : 0.7;
    return tree::star_free_level_set(ball, n, {std::move(single_levels), drop, keep}, rng);
}

Verdict c5_claim1() {
    Check c;
    Rng rng = make_rng(5);
    std::size_t equal = 0, measured = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(uniform_int(rng, 6, 14));
        const int t1 = static_cast<int>(uniform_int(rng, 1, n - 2));
        const auto X = adversarial(rng, n, {n - t1});
        for (int t = t1; t < n; ++t)
            for (const auto& v : tree::detail::distinct_prefixes(X, n, "", static_cast<std::size_t>(n - t))) {
                const auto res = tree::verify_claim1(X, t1, v, t, n);
                c.expect(res.applicable, "trial " + std::to_string(trial) + " not pair-free");
                c.expect(res.proportion <= Rational(1, 2), "trial " + std::to_string(trial) + " proportion " +
                                                               to_string(res.proportion));
                ++measured;
                if (res.proportion == Rational(1, 2)) ++equal;
            }
    }
    c.expect(equal > 0, "no instance attains 1/2");
    return c.verdict(std::to_string(measured) + " atom proportions <= 1/2, " + std::to_string(equal) + " equal to 1/2");
}

Verdict c6_lemma2() {
    Check c;
    Rng rng = make_rng(6);
    std::size_t tested = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(uniform_int(rng, 8, 14));
        const int ell = static_cast<int>(uniform_int(rng, 1, 3));
        std::vector<std::vector<int>> chains;
        std::vector<int> r, single;
        const int k = static_cast<int>(uniform_int(rng, 1, 2));
        for (int j = 0; j < k; ++j) r.push_back(static_cast<int>(uniform_int(rng, 1, 2)));
        int t = 0;
        for (int i = 0; i < ell; ++i) {
            std::vector<int> chain;
            for (int j = 0; j < k; ++j) chain.push_back(t += static_cast<int>(uniform_int(rng, 1, 2)));
            single.push_back(n - chain.front());
            chains.push_back(chain);
        }
        if (t >= n) continue;
        const auto X = adversarial(rng, n, single);
        const auto res = tree::verify_lemma2_bound(X, chains, r, n);
        c.expect(res.applicable, "trial " + std::to_string(trial) + " not star-free: " + res.reason);
        c.expect(res.lhs < res.rhs, "trial " + std::to_string(trial) + " density " + to_string(res.lhs) +
                                        " >= " + to_string(res.rhs));
        ++tested;
    }
    return c.verdict(std::to_string(tested) + " instances with l <= 3 satisfy the strict bound");
}

Verdict c7_star_oracle() {
    Check c;
    Rng rng = make_rng(7);
    std::size_t found = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int depth = static_cast<int>(uniform_int(rng, 3, 10));
        const tree::TreeBall ball(2, depth);
        const double p = 0.03 + 0.1 * static_cast<double>(trial % 5);
        const auto X = tree::random_level_set(ball, depth, p, rng);
        const int k = static_cast<int>(uniform_int(rng, 1, std::min(3, depth)));
        tree::StarSpec spec;
        int t = 0;
        for (int i = 0; i < k; ++i) {
            t = std::min(t + static_cast<int>(uniform_int(rng, 1, 2)), depth - (k - 1 - i));
            spec.t.push_back(t);
            spec.r.push_back(static_cast<int>(uniform_int(rng, 1, 3)));
        }
        const bool expected = oracle::star_exists_by_tuples(X.level(depth), spec.t, spec.r);
        const auto star = tree::find_balanced_star(X, spec, {depth, 1});
        c.expect(star.has_value() == expected, "trial " + std::to_string(trial) + " disagrees with the oracle");
        if (!star) continue;
        ++found;
        c.expect(tree::verify_star(X, spec, *star), "trial " + std::to_string(trial) + " star fails verification");
        for (std::size_t i = 0; i < star->groups.size(); ++i)
            for (const auto& y : star->groups[i])
                c.expect(oracle::walk_distance(star->center, y) == 2 * spec.t[i] &&
                             static_cast<int>(y.size()) == star->level,
                         "trial " + std::to_string(trial) + " wrong distance or level");
    }
    c.expect(found >= 20, "too few positive instances");
    return c.verdict("200 instances agree, " + std::to_string(found) + " stars re-verified");
}

Verdict c8_embedding() {
    Check c;
    const tree::TreeBall ball(2, 12);
    const auto X = tree::full_sphere(ball, 12);
    const tree::WeightedTree wt{{-1, 0, 0, 1, 1}, {0, 2, 3, 5, 6}};
    const auto e = tree::embed_weighted_tree(X, wt);
    c.expect(e.has_value(), "no embedding");
    if (!e) return c.verdict("");
    const auto& v = e->assignment;
    const std::vector<std::tuple<int, int, int>> required{{0, 1, 4}, {0, 2, 6}, {1, 3, 10},
                                                          {1, 4, 12}, {0, 3, 10}, {0, 4, 12}};
    for (const auto& [i, j, dist] : required)
        c.expect(oracle::walk_distance(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]) == dist,
                 "d(v" + std::to_string(i) + ",v" + std::to_string(j) + ") != " + std::to_string(dist));
    c.expect(tree::verify_embedding(X, wt, v), "verify_embedding rejects");
    return c.verdict("weights (2,3,5,6) embed in S_12, six distances exact");
}

Verdict c9_bohr() {
    Check c;
    bohr::AvoidanceOptions opt;
    opt.epsilon = Rational(1, 5);
    opt.N = 1'000'000;
    opt.K = 1000;
    opt.k_max = 4;
    opt.samples = 10'000;
    opt.seed = 9;
    const auto start = std::chrono::steady_clock::now();
    const auto rep = bohr::verify_avoidance(opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double dA = rep.density_A.estimate, dS = rep.density_sumset.estimate;
    c.expect(std::abs(dA - 0.2) < 0.01, "d(A) = " + std::to_string(dA));
    c.expect(std::abs(dS - 0.8) < 0.02, "d(sumset) = " + std::to_string(dS));
    c.expect(rep.witnesses.size() == 4 && rep.all_witnesses_found(), "missing witness");
    for (const auto& w : rep.witnesses) c.expect(w.t >= 1000 && w.certified_far, "witness k=" + std::to_string(w.k));
    c.expect(rep.sampled_pairs == 10'000 && rep.sampled_failures == 0, "sampled distance outside the sumset");
    c.expect(rep.exhaustive_failures == 0, "exhaustive distance outside the sumset");
    c.expect(secs < 60, "took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << "d(A)=" << dA << " d(sumset)=" << dS << ", 4 witnesses, 10000 pairs";
    return c.verdict(s.str());
}

Verdict c10_noise() {
    Check c;
    const std::pair<const char*, long long> cases[] = {{"fano", 8}, {"gq22", 16}};
    std::ostringstream s;
    for (const auto& [name, expected] : cases) {
        const auto fc = spherical::build_complex(name);
        const auto rep = spherical::noise_check(fc, 1);
        c.expect(rep.expected_opposites == expected && rep.opposites_pass(), std::string(name) + " opposite counts");
        c.expect(rep.min_count >= 1 && rep.bound_pass(), std::string(name) + " double-opposite count below 1");
        c.expect(rep.rows.size() == fc.size() * static_cast<std::size_t>(expected), std::string(name) + " not exhaustive");
        s << name << ": " << rep.rows.size() << " opposite pairs, min count " << rep.min_count << "; ";
    }
    return c.verdict(s.str());
}

Verdict c11_conjecture() {
    Check c;
    for (int n = 2; n <= 5; ++n) {
        const auto w = building::conjecture_witness(n, 50);
        c.expect(w.pass() && w.rows.size() == 51, "A" + std::to_string(n));
        const auto d = build_root_datum("A" + std::to_string(n));
        for (int N = 0; N <= 50; ++N) {
            const auto lambda = 2 * (Coweight::fundamental(n, 1) + N * Coweight::rho(n));
            c.expect(!in_coroot_lattice(d, lambda), "A" + std::to_string(n) + " N=" + std::to_string(N));
        }
    }
    return c.verdict("2(w1 + N rho) outside Q for A2..A5, N = 0..50");
}

Verdict c12_cartan() {
    Check c;
    Rng rng = make_rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 4));
        const long long p = std::array<long long, 3>{2, 3, 5}[static_cast<std::size_t>(uniform_int(rng, 0, 2))];
        RationalMatrix m;
        do {
            m.assign(n, RationalVector(n));
            for (auto& row : m)
                for (auto& x : row) x = uniform_int(rng, -12, 12);
        } while (padic::determinant(m) == 0);
        const auto pivot = padic::cartan_coordinates(m, p);
        const std::string tag = "trial " + std::to_string(trial);
        c.expect(pivot == padic::cartan_by_minors(m, p), tag + " minors disagree");
        c.expect(pivot.total() == padic::valuation(padic::determinant(m), p), tag + " sum != v_p(det)");
        auto reversed = pivot.lambda;
        std::reverse(reversed.begin(), reversed.end());
        for (auto& x : reversed) x = -x;
        c.expect(padic::cartan_coordinates(*inverse(m), p).lambda == reversed, tag + " inverse involution");
    }
    return c.verdict("200 matrices: minors agree, sum = v_p(det), inverse reverses and negates");
}

Verdict c13_determinism() {
    Check c;
    const std::vector<std::vector<std::string>> commands{
        {"sphere-size", "--type", "A1", "--lambda", "5", "--q", "2"},
        {"calc-atoms", "--type", "C2", "--lambda", "2,2", "--q", "2"},
        {"tree-verify-claim1", "--generate", "star-free", "--q", "2", "--depth", "12", "--single-levels", "9",
         "--drop", "0.3", "--keep", "0.7", "--t1", "3", "--t", "5", "--n", "12", "--seed", "13"},
        {"tree-verify-lemma2", "--generate", "star-free", "--q", "2", "--depth", "14", "--single-levels", "11,8",
         "--drop", "0.3", "--chains", "3,4;6,7", "--r", "1,2", "--n", "14", "--seed", "13"},
        {"tree-star-search", "--generate", "random", "--q", "2", "--depth", "10", "--density", "0.05", "--t", "2,3",
         "--r", "2,1", "--seed", "13"},
        {"tree-embed", "--generate", "full", "--q", "2", "--depth", "12", "--tree-json",
         R"({"parent":[-1,0,0,1,1],"weight":[0,2,3,5,6]})"},
        {"bohr-avoidance", "--N", "1000000", "--seed", "13"},
        {"spherical-noise-check", "--complex", "fano"},
        {"spherical-noise-check", "--complex", "gq22", "--format", "csv"},
        {"conjecture-witness", "--n", "5", "--N-max", "50"},
        {"padic-cartan", "--p", "3", "--random", "200", "--size", "4", "--seed", "13"},
    };
    for (const auto& cmd : commands) {
        std::string first;
        for (const char* threads : {"1", "1", "4"}) {
            auto args = cmd;
            args.insert(args.end(), {"--threads", threads});
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            c.expect(code == 0, cmd[0] + " exit " + std::to_string(code) + ": " + err.str());
            if (first.empty()) first = out.str();
            c.expect(!first.empty() && out.str() == first, cmd[0] + " output differs between runs");
        }
    }
    return c.verdict(std::to_string(commands.size()) + " commands byte-identical over 3 runs (threads 1, 1, 4)");
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<Verdict()> fn;
        double limit_seconds = 0;  // 0: no limit
    };
    const std::vector<Criterion> criteria{
        {"C1 sphere formula", c1_sphere_formula, 10},
        {"C2 atom counts", c2_atoms},
        {"C3 (-1)-type classifier", c3_minus_one_type},
        {"C4 ratio and partition identities", c4_partition_identities},
        {"C5 atom proportion bound", c5_claim1},
        {"C6 star-free density bound", c6_lemma2},
        {"C7 star search oracle", c7_star_oracle},
        {"C8 weighted tree embedding", c8_embedding},
        {"C9 Bohr counterexample", c9_bohr, 60},
        {"C10 opposition noise", c10_noise, 30},
        {"C11 coroot lattice witness", c11_conjecture},
        {"C12 Cartan coordinates", c12_cartan},
        {"C13 determinism", c13_determinism},
    };
    int failures = 0;
    for (const auto& [name, fn, limit] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit > 0 && secs >= limit) v = {false, "exceeded " + std::to_string(limit) + " s"};
        std::printf("%s %s (%.2f s) %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs, v.detail.c_str());
        if (!v.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
