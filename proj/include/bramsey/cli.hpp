#pragma once

// Command-line surface. run() parses a subcommand, writes a JSON (or CSV)
// report and returns 0 on success, 1 when a verified property fails and 2 on
// bad input. JSON objects are emitted with sorted keys, so identical inputs
// and seeds give byte-identical reports.

#include "bohr_lab.hpp"
#include "building_calc.hpp"
#include "exact.hpp"
#include "padic.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "root_system.hpp"
#include "spherical_lab.hpp"
#include "tree_lab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bramsey::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

/// A report and the exit code it implies.
struct Outcome {
    std::string text;
    int code = kExitOk;
};

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::vector<long long> parse_list(const std::string& text, const std::string& flag) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(flag + ": expected comma-separated integers, got '" + text + "'");
        }
    }
    if (out.empty()) throw InputError(flag + ": empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    for (long long x : parse_list(text, flag)) out.push_back(static_cast<int>(x));
    return out;
}

/// "3,4;6,7" -> {{3,4},{6,7}}.
inline std::vector<std::vector<int>> parse_chains(const std::string& text, const std::string& flag) {
    std::vector<std::vector<int>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(parse_int_list(item, flag));
    if (out.empty()) throw InputError(flag + ": empty chain list");
    return out;
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in " + what + ": " + e.what());
    }
}

inline nlohmann::json read_json_file(const std::string& path, const std::string& flag) {
    std::ifstream in(path);
    if (!in) throw InputError(flag + ": cannot open '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, flag + " '" + path + "'");
}

inline Coweight parse_coweight(const RootDatum& d, const std::string& text, const std::string& flag) {
    const auto c = parse_list(text, flag);
    if (static_cast<int>(c.size()) != d.rank())
        throw InputError(flag + ": " + d.type.str() + " needs " + std::to_string(d.rank()) + " coordinates");
    return Coweight(std::vector<std::int64_t>(c.begin(), c.end()));
}

struct Common {
    int threads = 0;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string output;
};

/// Source of a vertex set for the tree commands: a JSON file or a seeded generator.
struct SetSource {
    std::string file;
    std::string generate;  // empty, full, ball, star-free, random
    int q = 2;
    int depth = 0;
    int level = -1;
    std::string single_levels;
    double drop = 0.0;
    double keep = 1.0;
    double density = 0.5;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--set", file, "vertex set JSON file");
        cmd->add_option("--generate", generate, "generator: empty, full, ball, star-free, random")
            ->check(CLI::IsMember({"empty", "full", "ball", "star-free", "random"}));
        cmd->add_option("--q", q, "branching parameter for generated sets");
        cmd->add_option("--depth", depth, "ball depth for generated sets");
        cmd->add_option("--level", level, "level of generated sets (default: depth)");
        cmd->add_option("--single-levels", single_levels, "star-free: levels with one child per vertex");
        cmd->add_option("--drop", drop, "star-free: probability of dropping other subtrees");
        cmd->add_option("--keep", keep, "star-free: probability of keeping a leaf");
        cmd->add_option("--density", density, "random: inclusion probability");
    }

    tree::VertexSet load(std::uint64_t seed) const {
        if (!file.empty()) return tree::VertexSet::from_json(read_json_file(file, "--set"));
        if (generate.empty()) throw InputError("provide --set FILE or --generate KIND");
        const tree::TreeBall ball(q, depth);
        const int n = level < 0 ? depth : level;
        Rng rng = make_rng(seed);
        if (generate == "empty") return tree::VertexSet(ball);
        if (generate == "full") return tree::full_sphere(ball, n);
        if (generate == "ball") return tree::full_ball(ball);
        if (generate == "random") return tree::random_level_set(ball, n, density, rng);
        tree::AdversarialOptions opts;
        if (!single_levels.empty()) opts.single_child_levels = parse_int_list(single_levels, "--single-levels");
        opts.branch_drop = drop;
        opts.leaf_keep = keep;
        return tree::star_free_level_set(ball, n, opts, rng);
    }
};

// ------------------------------------------------------------ subcommands

inline Outcome rootsys_info(const std::string& type, const std::string& lambda_text, int q) {
    const auto d = build_root_datum(type);
    nlohmann::json out = to_json(d);
    const auto w0 = longest_element(d);
    out["num_positive_roots"] = d.num_positive_roots();
    out["longest_word"] = w0.word;
    out["longest_length"] = w0.length();
    out["minus_one_type"] = is_minus_one_type(d);
    if (d.rank() <= 6) {
        const auto group = enumerate_weyl(d);
        out["weyl_order"] = group.size();
        auto dist = nlohmann::json::array();
        for (const auto& c : length_distribution(group)) dist.push_back(bigint_json(c));
        out["length_distribution"] = dist;
    } else {
        out["weyl_order"] = "not enumerated above rank 6";
    }
    if (!lambda_text.empty()) {
        const auto lambda = parse_coweight(d, lambda_text, "--lambda");
        const auto dom = dominant_rep(d, lambda);
        nlohmann::json lj;
        lj["coords"] = lambda.coords();
        lj["dominant"] = dom.dominant.coords();
        lj["star"] = star_involution(d, dom.dominant).coords();
        lj["height"] = height_two_rho(d, dom.dominant);
        lj["in_coroot_lattice"] = in_coroot_lattice(d, lambda);
        if (q > 0 && d.rank() <= 6) lj["sphere_size"] = bigint_json(sphere_size(d, dom.dominant, q));
        out["lambda"] = lj;
    }
    return {dump(out), kExitOk};
}

inline Outcome sphere_size_cmd(const std::string& type, const std::string& lambda_text, int q, bool allow_large) {
    const auto d = build_root_datum(type);
    const auto lambda = parse_coweight(d, lambda_text, "--lambda");
    if (!lambda.is_dominant()) throw InputError("--lambda must be dominant");
    const auto size = sphere_size(d, lambda, q, {allow_large});
    return {dump({{"type", d.type.str()}, {"lambda", lambda.coords()}, {"q", q}, {"size", bigint_json(size)}}), kExitOk};
}

inline Outcome tree_star_search(const tree::VertexSet& X, const tree::StarSpec& spec, int level, int threads) {
    spec.validate();
    tree::StarSearchOptions opts;
    if (level >= 0) opts.level = level;
    opts.threads = threads;
    const auto star = tree::find_balanced_star(X, spec, opts);
    nlohmann::json out{{"spec", spec.to_json()}, {"set_size", X.size()}};
    if (star) {
        out["status"] = "found";
        out["star"] = star->to_json();
        out["verified"] = tree::verify_star(X, spec, *star);
        return {dump(out), out["verified"].get<bool>() ? kExitOk : kExitFailed};
    }
    out["status"] = "not found";
    return {dump(out), kExitOk};
}

inline Outcome tree_verify_claim1(const tree::VertexSet& X, int t1, const std::string& v, int t, int n) {
    nlohmann::json out{{"t1", t1}, {"t", t}, {"n", n}};
    if (!v.empty() && v != "all") {
        const auto res = tree::verify_claim1(X, t1, v, t, n);
        out["v"] = v;
        out["result"] = res.to_json();
        out["status"] = res.to_json()["status"];
        return {dump(out), res.applicable && !res.pass ? kExitFailed : kExitOk};
    }
    X.ball().check_level(n);
    if (n - t < 0) throw InputError("need n > t");
    const auto centres = X.ball().sphere(n - t);
    std::size_t checked = 0, equality = 0, failures = 0;
    Rational worst = 0;
    Rational bound = Rational(1, X.ball().q());
    for (const auto& c : centres) {
        const auto res = tree::verify_claim1(X, t1, c, t, n);
        if (!res.applicable) {
            out["status"] = "not_applicable";
            out["reason"] = res.reason;
            out["violating_pair"] = {res.violating_pair->x, res.violating_pair->y};
            return {dump(out), kExitOk};
        }
        ++checked;
        if (res.proportion > worst) worst = res.proportion;
        if (res.proportion == res.bound) ++equality;
        if (!res.pass) ++failures;
    }
    out["v"] = "all";
    out["checked"] = checked;
    out["bound"] = rational_json(bound);
    out["max_proportion"] = rational_json(worst);
    out["equality_count"] = equality;
    out["failures"] = failures;
    out["status"] = failures == 0 ? "pass" : "fail";
    return {dump(out), failures == 0 ? kExitOk : kExitFailed};
}

inline Outcome tree_verify_lemma2(const tree::VertexSet& X, const std::vector<std::vector<int>>& chains,
                                  const std::vector<int>& r, int n, int threads) {
    const auto res = tree::verify_lemma2_bound(X, chains, r, n, threads);
    nlohmann::json out{{"chains", chains}, {"r", r}, {"n", n}, {"result", res.to_json()}};
    out["status"] = res.to_json()["status"];
    return {dump(out), res.applicable && !res.pass ? kExitFailed : kExitOk};
}

inline Outcome tree_embed(const tree::VertexSet& X, const tree::WeightedTree& wt, int threads) {
    tree::StarSearchOptions opts;
    opts.threads = threads;
    const auto emb = tree::embed_weighted_tree(X, wt, opts);
    nlohmann::json out{{"tree", {{"parent", wt.parent}, {"weight", wt.weight}}}};
    if (!emb) {
        out["status"] = "not found";
        return {dump(out), kExitOk};
    }
    out["status"] = "found";
    out["embedding"] = emb->to_json();
    const bool ok = tree::verify_embedding(X, wt, emb->assignment);
    out["verified"] = ok;
    auto dists = nlohmann::json::array();
    for (std::size_t i = 0; i < emb->assignment.size(); ++i)
        for (std::size_t j = i + 1; j < emb->assignment.size(); ++j)
            dists.push_back({{"i", i}, {"j", j}, {"distance", tree::distance(emb->assignment[i], emb->assignment[j])}});
    out["distances"] = dists;
    return {dump(out), ok ? kExitOk : kExitFailed};
}

inline Outcome bohr_report(const bohr::AvoidanceOptions& opt, const std::string& rle_path) {
    auto quick = opt;
    quick.samples = 0;
    quick.exhaustive_level = 0;
    const auto rep = bohr::verify_avoidance(quick);
    nlohmann::json out;
    out["epsilon"] = rational_json(opt.epsilon);
    out["N"] = opt.N;
    out["density_A"] = rep.density_A.estimate;
    out["density_sumset"] = rep.density_sumset.estimate;
    out["uncertain_count"] = rep.uncertain_count;
    auto ws = nlohmann::json::array();
    for (const auto& w : rep.witnesses) {
        if (w.found) ws.push_back({{"k", w.k}, {"t", w.t}});
        else ws.push_back({{"k", w.k}, {"status", "not found in window"}});
    }
    out["witnesses"] = ws;
    if (!rle_path.empty()) {
        const auto A = bohr::bohr_membership(opt.epsilon, opt.N, opt.radicand, opt.threads);
        const auto sum = bohr::double_difference_sumset(A.nonnegative_indicator());
        std::ofstream f(rle_path);
        if (!f) throw InputError("--rle: cannot write '" + rle_path + "'");
        f << sum.to_rle_json().dump() << "\n";
        out["rle"] = rle_path;
    }
    return {dump(out), kExitOk};
}

inline Outcome bohr_avoidance(const bohr::AvoidanceOptions& opt) {
    const auto rep = bohr::verify_avoidance(opt);
    auto out = rep.to_json();
    const bool ok = rep.sampled_failures == 0 && rep.exhaustive_failures == 0;
    out["status"] = ok ? "pass" : "fail";
    return {dump(out), ok ? kExitOk : kExitFailed};
}

inline Outcome spherical_noise_check(const std::string& name, const std::string& format, int threads) {
    const auto fc = spherical::build_complex(name);
    const auto rep = spherical::noise_check(fc, threads);
    const int code = rep.pass() ? kExitOk : kExitFailed;
    if (format == "csv") return {rep.to_csv(fc), code};
    return {dump(rep.to_json()), code};
}

inline Outcome calc_atoms(const std::string& type, const std::string& lambda_text, int q, const std::string& mu_text) {
    const auto d = build_root_datum(type);
    const auto lambda = parse_coweight(d, lambda_text, "--lambda");
    const auto a = building::atom_cardinalities(d, q, lambda);
    const auto mu = mu_text.empty() ? Coweight::rho(d.rank()) : parse_coweight(d, mu_text, "--mu");
    const auto check = building::partition_identity(d, q, lambda, mu);
    nlohmann::json out;
    out["formula"] = "|O(x)| = q^l(w0); |C(x,c,lambda)| = q^(h(lambda) - l(w0))";
    out["inputs"] = {{"type", d.type.str()}, {"lambda", lambda.coords()}, {"q", q}};
    out["value"] = a.to_json();
    out["O"] = bigint_json(a.opposite);
    out["atom"] = bigint_json(a.atom);
    out["cross_checks"] = nlohmann::json::array({{{"name", "partition_identity"}, {"detail", check.to_json()},
                                                  {"pass", check.holds && check.ratio_holds}}});
    return {dump(out), check.holds && check.ratio_holds ? kExitOk : kExitFailed};
}

inline Outcome calc_bound(const std::string& type, int q, int ell, int r, const std::string& lambda_text,
                          const std::string& spec_path, const std::string& q_vector) {
    const auto d = build_root_datum(type);
    const auto lambda = parse_coweight(d, lambda_text, "--lambda");
    const auto b = building::density_bound_rhs(d, q, ell, r, lambda);
    const auto k = building::kappa(d, q);
    const auto thr = building::type_a_threshold(d, q);
    nlohmann::json out;
    out["formula"] = "(1 - kappa)^l + r q^(l(w0) - h(lambda_11)), kappa = (1 - 1/q)^l(w0)";
    out["inputs"] = {{"type", d.type.str()}, {"q", q}, {"l", ell}, {"r", r}, {"lambda_11", lambda.coords()}};
    out["value"] = b.to_json();
    out["kappa"] = k.to_json();
    out["type_a_threshold"] = {{"exact", rational_json(thr.exact)}, {"floor", bigint_json(thr.floor)}};
    auto checks = nlohmann::json::array();
    checks.push_back({{"name", "decreasing_in_l"}, {"pass", b.decreasing_in_l}});
    checks.push_back({{"name", "decreasing_in_lambda"}, {"pass", b.decreasing_in_lambda}});
    bool ok = b.decreasing_in_l && b.decreasing_in_lambda;
    if (d.rank() == 1) {
        const Rational tree_bound = rpow(Rational(q), -ell) + Rational(r) * rpow(Rational(q), 1 - lambda[0]);
        checks.push_back({{"name", "tree_bound"}, {"value", rational_json(tree_bound)}, {"pass", tree_bound == b.value}});
        ok = ok && tree_bound == b.value;
    }
    out["cross_checks"] = checks;
    if (!q_vector.empty())
        out["nonuniform"] = building::nonuniform_opposition(d, parse_int_list(q_vector, "--q-vector")).to_json();
    if (!spec_path.empty()) {
        const auto spec = building::BuildingStarSpec::from_json(read_json_file(spec_path, "--spec"));
        out["spec_diagnostics"] = building::validate_building_star_spec(d, spec).to_json();
    }
    return {dump(out), ok ? kExitOk : kExitFailed};
}

inline Outcome conjecture_witness_cmd(int n, long long n_max) {
    const auto w = building::conjecture_witness(n, n_max);
    return {dump(w.to_json()), w.pass() ? kExitOk : kExitFailed};
}

struct PadicArgs {
    long long p = 2;
    std::string matrix;
    std::string matrix_file;
    std::string relative;
    int random = 0;
    int size = 3;
    int bound = 9;
    std::string hypotheses;
    long long hypotheses_N = 0;
};

inline Outcome padic_cartan(const PadicArgs& a, std::uint64_t seed) {
    padic::check_prime(a.p);
    std::vector<RationalMatrix> mats;
    if (!a.matrix.empty()) mats.push_back(padic::PAdicMatrix::parse_entries(parse_json_text(a.matrix, "--matrix")));
    if (!a.matrix_file.empty()) {
        const auto j = read_json_file(a.matrix_file, "--matrix-file");
        if (j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
            for (const auto& m : j) mats.push_back(padic::PAdicMatrix::parse_entries(m));
        } else {
            mats.push_back(padic::PAdicMatrix::parse_entries(j));
        }
    }
    if (a.random > 0) {
        if (a.size < 1 || a.size > 6) throw InputError("--size must lie in 1..6");
        Rng rng = make_rng(seed);
        while (static_cast<int>(mats.size()) < a.random + (a.matrix.empty() && a.matrix_file.empty() ? 0 : 1)) {
            RationalMatrix m(static_cast<std::size_t>(a.size), RationalVector(static_cast<std::size_t>(a.size)));
            for (auto& row : m)
                for (auto& x : row) x = uniform_int(rng, -a.bound, a.bound);
            if (padic::determinant(m) != 0) mats.push_back(std::move(m));
        }
    }
    if (mats.empty()) throw InputError("provide --matrix, --matrix-file or --random");
    std::optional<RationalMatrix> h;
    if (!a.relative.empty()) h = padic::PAdicMatrix::parse_entries(parse_json_text(a.relative, "--relative"));

    nlohmann::json out;
    out["p"] = a.p;
    auto instances = nlohmann::json::array();
    bool all_agree = true;
    std::vector<padic::CartanCoord> coords;
    for (const auto& g : mats) {
        const RationalMatrix target = h ? multiply(*inverse(g), *h) : g;
        if (h) padic::PAdicMatrix{g, a.p}.validate();
        const auto rep = padic::cartan_report(target, a.p);
        all_agree = all_agree && rep.oracle_agrees;
        coords.push_back(rep.lambda);
        instances.push_back(rep.to_json());
    }
    if (instances.size() == 1) {
        out.update(instances[0]);
    } else {
        out["instances"] = instances;
        out["all_agree"] = all_agree;
    }
    if (!a.hypotheses.empty()) {
        const auto d = build_root_datum(a.hypotheses);
        out["hypotheses"] = padic::corollary_hypothesis_check(d, coords, a.hypotheses_N).to_json();
    }
    return {dump(out), all_agree ? kExitOk : kExitFailed};
}

// ------------------------------------------------------------------ run

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Density Ramsey experiments on trees, Bohr sets and buildings", "bramsey"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--threads", common.threads, "worker threads (default: " + std::string(kThreadsEnv) +
                                                          " or logical cores)");
        cmd->add_option("--seed", common.seed, "64-bit seed for every random choice");
        cmd->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--output", common.output, "write the report to a file instead of stdout");
    };

    std::string type, lambda, mu, v, chains, rlist, tlist, tree_file, tree_json, complex = "fano", spec_path, q_vector,
        rle, epsilon = "1/5";
    int q = 2, t1 = 1, t = 1, n = 0, level = -1, ell = 1, r = 1, rank_n = 2;
    long long n_max = 0;
    bool allow_large = false;
    SetSource source;
    bohr::AvoidanceOptions bohr_opt;
    PadicArgs padic_args;

    auto* c_info = app.add_subcommand("rootsys-info", "root datum, Weyl group and coweight data");
    c_info->add_option("--type", type, "type label such as C2")->required();
    c_info->add_option("--lambda", lambda, "coweight coordinates, comma-separated");
    c_info->add_option("--q", q, "thickness for the sphere size of --lambda");

    auto* c_sphere = app.add_subcommand("sphere-size", "|S_lambda| in a thick affine building");
    c_sphere->add_option("--type", type)->required();
    c_sphere->add_option("--lambda", lambda)->required();
    c_sphere->add_option("--q", q)->required();
    c_sphere->add_flag("--allow-large", allow_large, "permit Weyl group enumeration above rank 6");

    auto* c_star = app.add_subcommand("tree-star-search", "first balanced (k,t,r)-star in a vertex set");
    source.add_to(c_star);
    c_star->add_option("--t", tlist, "radii t_1 < ... < t_k")->required();
    c_star->add_option("--r", rlist, "multiplicities r_1..r_k")->required();
    c_star->add_option("--star-level", level, "restrict the search to one level");

    auto* c_claim = app.add_subcommand("tree-verify-claim1", "atom proportion bound for pair-free sets");
    source.add_to(c_claim);
    c_claim->add_option("--t1", t1)->required();
    c_claim->add_option("--t", t)->required();
    c_claim->add_option("--n", n)->required();
    c_claim->add_option("--v", v, "vertex on S_{n-t}, or 'all' (default)");

    auto* c_lemma = app.add_subcommand("tree-verify-lemma2", "density bound for star-free sets");
    source.add_to(c_lemma);
    c_lemma->add_option("--chains", chains, "chains such as 3,4;6,7")->required();
    c_lemma->add_option("--r", rlist)->required();
    c_lemma->add_option("--n", n)->required();

    auto* c_embed = app.add_subcommand("tree-embed", "embed a well-ordered weighted tree");
    source.add_to(c_embed);
    c_embed->add_option("--tree", tree_file, "weighted tree JSON file");
    c_embed->add_option("--tree-json", tree_json, "weighted tree JSON text");

    auto add_bohr = [&](CLI::App* cmd) {
        cmd->add_option("--epsilon", epsilon, "rational in (0, 1/4)");
        cmd->add_option("--N", bohr_opt.N, "horizon");
        cmd->add_option("--radicand", bohr_opt.radicand, "theta = sqrt(radicand)");
        cmd->add_option("--k-max", bohr_opt.k_max);
        cmd->add_option("--K", bohr_opt.K);
        cmd->add_option("--window", bohr_opt.window, "central sumset window (default N/2)");
    };
    auto* c_bohr = app.add_subcommand("bohr-report", "Bohr set and sumset densities with witnesses");
    add_bohr(c_bohr);
    c_bohr->add_option("--rle", rle, "write the sumset as run-length JSON");
    auto* c_avoid = app.add_subcommand("bohr-avoidance", "avoidance witnesses and distance containment");
    add_bohr(c_avoid);
    c_avoid->add_option("--samples", bohr_opt.samples);
    c_avoid->add_option("--exhaustive-level", bohr_opt.exhaustive_level);

    auto* c_noise = app.add_subcommand("spherical-noise-check", "opposition counts in q = 2 spherical buildings");
    c_noise->add_option("--complex", complex, "fano or gq22")->check(CLI::IsMember({"fano", "gq22"}));

    auto* c_atoms = app.add_subcommand("calc-atoms", "atom cardinalities");
    c_atoms->add_option("--type", type)->required();
    c_atoms->add_option("--lambda", lambda)->required();
    c_atoms->add_option("--q", q)->required();
    c_atoms->add_option("--mu", mu, "strongly dominant mu for the partition cross-check (default rho)");

    auto* c_bound = app.add_subcommand("calc-bound", "density bound for star-free sets in buildings");
    c_bound->add_option("--type", type)->required();
    c_bound->add_option("--q", q)->required();
    c_bound->add_option("--ell", ell)->required();
    c_bound->add_option("--r", r)->required();
    c_bound->add_option("--lambda", lambda)->required();
    c_bound->add_option("--spec", spec_path, "building star spec JSON to validate");
    c_bound->add_option("--q-vector", q_vector, "per-type thickness q_1..q_n");

    auto* c_conj = app.add_subcommand("conjecture-witness", "2(w_1 + N rho) outside the coroot lattice of A_n");
    c_conj->add_option("--n", rank_n)->required();
    c_conj->add_option("--N-max", n_max)->required();

    auto* c_padic = app.add_subcommand("padic-cartan", "Cartan coordinates of rational matrices at p");
    c_padic->add_option("--p", padic_args.p)->required();
    c_padic->add_option("--matrix", padic_args.matrix, "JSON rows of integers or fraction strings");
    c_padic->add_option("--matrix-file", padic_args.matrix_file, "JSON matrix or list of matrices");
    c_padic->add_option("--relative", padic_args.relative, "h: report coordinates of g^-1 h");
    c_padic->add_option("--random", padic_args.random, "number of seeded random integer matrices");
    c_padic->add_option("--size", padic_args.size);
    c_padic->add_option("--entry-bound", padic_args.bound);
    c_padic->add_option("--hypotheses", padic_args.hypotheses, "type label for the hypothesis check");
    c_padic->add_option("--N", padic_args.hypotheses_N);

    for (auto* cmd : app.get_subcommands([](const CLI::App*) { return true; })) add_common(cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        const int threads = resolve_threads(common.threads);
        auto* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        if (common.format == "csv" && name != "spherical-noise-check")
            throw InputError("--format csv is supported by spherical-noise-check only");
        bohr_opt.epsilon = parse_rational(epsilon);
        bohr_opt.seed = common.seed;
        bohr_opt.threads = threads;
        Outcome res;
        if (name == "rootsys-info") res = rootsys_info(type, lambda, c_info->count("--q") ? q : 0);
        else if (name == "sphere-size") res = sphere_size_cmd(type, lambda, q, allow_large);
        else if (name == "tree-star-search")
            res = tree_star_search(source.load(common.seed),
                                   {parse_int_list(tlist, "--t"), parse_int_list(rlist, "--r")}, level, threads);
        else if (name == "tree-verify-claim1") res = tree_verify_claim1(source.load(common.seed), t1, v, t, n);
        else if (name == "tree-verify-lemma2")
            res = tree_verify_lemma2(source.load(common.seed), parse_chains(chains, "--chains"),
                                     parse_int_list(rlist, "--r"), n, threads);
        else if (name == "tree-embed") {
            if (tree_file.empty() == tree_json.empty()) throw InputError("provide exactly one of --tree, --tree-json");
            const auto j = tree_file.empty() ? parse_json_text(tree_json, "--tree-json") : read_json_file(tree_file, "--tree");
            res = tree_embed(source.load(common.seed), tree::WeightedTree::from_json(j), threads);
        } else if (name == "bohr-report") res = bohr_report(bohr_opt, rle);
        else if (name == "bohr-avoidance") res = bohr_avoidance(bohr_opt);
        else if (name == "spherical-noise-check") res = spherical_noise_check(complex, common.format, threads);
        else if (name == "calc-atoms") res = calc_atoms(type, lambda, q, mu);
        else if (name == "calc-bound") res = calc_bound(type, q, ell, r, lambda, spec_path, q_vector);
        else if (name == "conjecture-witness") res = conjecture_witness_cmd(rank_n, n_max);
        else if (name == "padic-cartan") res = padic_cartan(padic_args, common.seed);

        if (common.output.empty()) {
            out << res.text;
        } else {
            std::ofstream f(common.output, std::ios::binary);
            if (!f) throw InputError("--output: cannot write '" + common.output + "'");
            f << res.text;
        }
        return res.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConsistencyError& e) {
        err << "consistency check failed: " << e.what() << "\n";
        return kExitFailed;
    }
}

}  // namespace bramsey::cli
