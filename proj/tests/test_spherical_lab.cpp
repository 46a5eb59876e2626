#include "bramsey/spherical_lab.hpp"

#include "bramsey/random.hpp"

#include <gtest/gtest.h>

#include <queue>

using namespace bramsey;
using namespace bramsey::spherical;

namespace {

/// Distances in the point-line incidence graph (points first, then lines).
std::vector<std::vector<int>> incidence_distances(const FlagComplex& fc) {
    const std::size_t P = fc.points.size(), n = P + fc.lines.size();
    std::vector<std::vector<int>> adj(n);
    for (std::size_t l = 0; l < fc.lines.size(); ++l)
        for (int p : fc.line_points[l]) {
            adj[static_cast<std::size_t>(p)].push_back(static_cast<int>(P + l));
            adj[P + l].push_back(p);
        }
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (std::size_t s = 0; s < n; ++s) {
        std::queue<int> todo;
        dist[s][s] = 0;
        todo.push(static_cast<int>(s));
        while (!todo.empty()) {
            const int v = todo.front();
            todo.pop();
            for (int w : adj[static_cast<std::size_t>(v)])
                if (dist[s][static_cast<std::size_t>(w)] < 0) {
                    dist[s][static_cast<std::size_t>(w)] = dist[s][static_cast<std::size_t>(v)] + 1;
                    todo.push(w);
                }
        }
    }
    return dist;
}

/// Gallery distance of two flags: 0 if equal, else 1 + the smallest
/// incidence-graph distance between their elements.
int flag_distance(const FlagComplex& fc, const std::vector<std::vector<int>>& inc, int c, int d) {
    if (c == d) return 0;
    const std::size_t P = fc.points.size();
    const auto [p1, l1] = fc.chambers[static_cast<std::size_t>(c)];
    const auto [p2, l2] = fc.chambers[static_cast<std::size_t>(d)];
    const std::array<std::size_t, 2> a{static_cast<std::size_t>(p1), P + static_cast<std::size_t>(l1)};
    const std::array<std::size_t, 2> b{static_cast<std::size_t>(p2), P + static_cast<std::size_t>(l2)};
    int best = 1 << 20;
    for (auto x : a)
        for (auto y : b) best = std::min(best, inc[x][y]);
    return best + 1;
}

}  // namespace

TEST(Fano, Counts) {
    const auto fc = build_fano();
    EXPECT_EQ(fc.points.size(), 7u);
    EXPECT_EQ(fc.lines.size(), 7u);
    EXPECT_EQ(fc.size(), 21u);
    for (const auto& pts : fc.line_points) EXPECT_EQ(pts.size(), 3u);
    EXPECT_TRUE(check_thickness(fc));
    // any two points on exactly one line
    for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) {
            int common = 0;
            for (const auto& pts : fc.line_points)
                common += std::count(pts.begin(), pts.end(), a) && std::count(pts.begin(), pts.end(), b);
            EXPECT_EQ(common, 1);
        }
}

TEST(GQ22, Counts) {
    const auto fc = build_gq22();
    EXPECT_EQ(fc.points.size(), 15u);
    EXPECT_EQ(fc.lines.size(), 15u);
    EXPECT_EQ(fc.size(), 45u);
    EXPECT_TRUE(check_thickness(fc));
    // lines are pairwise distinct perfect matchings
    std::set<std::vector<int>> seen;
    for (auto pts : fc.line_points) {
        std::sort(pts.begin(), pts.end());
        EXPECT_TRUE(seen.insert(pts).second);
    }
    // point not on a line: exactly one collinear point on that line (GQ axiom)
    const auto inc = incidence_distances(fc);
    for (std::size_t p = 0; p < 15; ++p)
        for (std::size_t l = 0; l < 15; ++l) {
            const auto& pts = fc.line_points[l];
            if (std::count(pts.begin(), pts.end(), static_cast<int>(p))) continue;
            int collinear = 0;
            for (int x : pts) collinear += inc[p][static_cast<std::size_t>(x)] == 2;
            EXPECT_EQ(collinear, 1);
        }
}

TEST(DistanceTable, MatchesIncidenceGraphAndDiameter) {
    for (const auto& fc : {build_fano(), build_gq22()}) {
        const auto t = distance_table(fc);
        const auto inc = incidence_distances(fc);
        EXPECT_TRUE(t.gallery_independent);
        EXPECT_EQ(t.diameter, longest_length(t));
        for (std::size_t c = 0; c < fc.size(); ++c)
            for (std::size_t d = 0; d < fc.size(); ++d) {
                const int dist = t.distance(static_cast<int>(c), static_cast<int>(d));
                ASSERT_EQ(dist, flag_distance(fc, inc, static_cast<int>(c), static_cast<int>(d)));
                ASSERT_EQ(t.weyl(static_cast<int>(c), static_cast<int>(d)).length(), dist);
            }
    }
    EXPECT_EQ(distance_table(build_fano()).diameter, 3);
    EXPECT_EQ(distance_table(build_gq22()).diameter, 4);
}

TEST(DistanceTable, IdentityAndSimpleReflections) {
    const auto fc = build_fano();
    const auto t = distance_table(fc);
    for (int c = 0; c < static_cast<int>(fc.size()); ++c) {
        EXPECT_TRUE(weyl_distance(t, c, c).is_identity());
        for (int i = 0; i < 2; ++i)
            for (int d : fc.panel[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])
                EXPECT_TRUE(weyl_distance(t, c, d).same_element(weyl_element_from_word(t.datum, {i + 1})));
    }
}

TEST(DistanceTable, FanoOppositeFlagsAreLongest) {
    const auto fc = build_fano();
    const auto t = distance_table(fc);
    const auto w0 = longest_element(t.datum);
    for (std::size_t c = 0; c < fc.size(); ++c)
        for (std::size_t d = 0; d < fc.size(); ++d) {
            const auto [p1, l1] = fc.chambers[c];
            const auto [p2, l2] = fc.chambers[d];
            const auto& on_l1 = fc.line_points[static_cast<std::size_t>(l1)];
            const auto& on_l2 = fc.line_points[static_cast<std::size_t>(l2)];
            const bool opposite = !std::count(on_l2.begin(), on_l2.end(), p1) && !std::count(on_l1.begin(), on_l1.end(), p2);
            ASSERT_EQ(t.weyl(static_cast<int>(c), static_cast<int>(d)).same_element(w0), opposite);
        }
}

TEST(DistanceTable, MinimalGalleriesSpellOneElement) {
    Rng rng = make_rng(7);
    for (const auto& fc : {build_fano(), build_gq22()}) {
        const auto t = distance_table(fc);
        for (int trial = 0; trial < 200; ++trial) {
            const int c = static_cast<int>(uniform_int(rng, 0, static_cast<std::int64_t>(fc.size()) - 1));
            const int d = static_cast<int>(uniform_int(rng, 0, static_cast<std::int64_t>(fc.size()) - 1));
            const auto words = minimal_galleries(fc, t, c, d);
            ASSERT_FALSE(words.empty());
            for (const auto& w : words) {
                ASSERT_EQ(static_cast<int>(w.size()), t.distance(c, d));
                ASSERT_TRUE(weyl_element_from_word(t.datum, w).same_element(t.weyl(c, d)));
            }
        }
    }
}

TEST(Opposition, CountsEqualQToLongestLength) {
    const auto fano = distance_table(build_fano());
    for (int c = 0; c < 21; ++c) EXPECT_EQ(opposite_count(fano, c), 8);
    const auto gq = distance_table(build_gq22());
    for (int c = 0; c < 45; ++c) EXPECT_EQ(opposite_count(gq, c), 16);
    int identity = 0;
    for (int d = 0; d < 21; ++d) identity += fano.weyl(0, d).is_identity();
    EXPECT_EQ(identity, 1);
}

TEST(Opposition, NoiseReportsPassWithExactValues) {
    const auto fano = noise_check(build_fano());
    EXPECT_TRUE(fano.pass());
    EXPECT_EQ(fano.rows.size(), 21u * 8u);
    EXPECT_EQ(fano.bound, 1);
    EXPECT_EQ(fano.min_count, 3);
    EXPECT_EQ(fano.max_count, 3);
    const auto gq = noise_check(build_gq22());
    EXPECT_TRUE(gq.pass());
    EXPECT_EQ(gq.rows.size(), 45u * 16u);
    EXPECT_EQ(gq.bound, 1);
    EXPECT_EQ(gq.min_count, 5);
    EXPECT_EQ(gq.max_count, 5);
    const auto j = gq.to_json();
    EXPECT_EQ(j.at("status"), "pass");
    const auto csv = fano.to_csv(build_fano());
    EXPECT_EQ(csv.rfind("c1,c2,double_opposite_count\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21 * 8 + 1);
}

TEST(Opposition, NonOppositePairRejected) {
    const auto t = distance_table(build_fano());
    EXPECT_THROW(double_opposite_count(t, 0, 0), InputError);
    EXPECT_THROW(projection_candidates(build_fano(), t, 0, 0, 0), InputError);
}

TEST(Opposition, ProjectionChamberIsUnique) {
    for (const auto& fc : {build_fano(), build_gq22()}) {
        const auto t = distance_table(fc);
        const int L = longest_length(t);
        for (int c = 0; c < static_cast<int>(fc.size()); ++c)
            for (int d = 0; d < static_cast<int>(fc.size()); ++d)
                if (t.distance(c, d) == L)
                    for (int i = 0; i < 2; ++i) ASSERT_EQ(projection_candidates(fc, t, c, d, i).size(), 1u);
    }
}

TEST(FlagComplex, JsonExportAndLookup) {
    const auto fc = build_gq22();
    const auto j = fc.to_json();
    EXPECT_EQ(j.at("type"), "C2");
    EXPECT_EQ(j.at("chambers").size(), 45u);
    EXPECT_EQ(j.at("lines")[0].at("points").size(), 3u);
    EXPECT_THROW(build_complex("icosahedron"), InputError);
    EXPECT_EQ(build_complex("fano").size(), 21u);
}

TEST(DistanceTable, ThreadCountDoesNotChangeResult) {
    const auto a = distance_table(build_gq22(), 1);
    const auto b = distance_table(build_gq22(), 3);
    EXPECT_EQ(a.dist, b.dist);
}

TEST(Opposition, GQ22CountsByIncidenceGeometry) {
    const auto fc = build_gq22();
    const auto inc = incidence_distances(fc);
    const std::size_t P = fc.points.size();
    auto opposite = [&](std::size_t c, std::size_t d) {
        const auto [p1, l1] = fc.chambers[c];
        const auto [p2, l2] = fc.chambers[d];
        return inc[static_cast<std::size_t>(p1)][static_cast<std::size_t>(p2)] == 4 &&
               inc[P + static_cast<std::size_t>(l1)][P + static_cast<std::size_t>(l2)] == 4;
    };
    const auto t = distance_table(fc);
    for (std::size_t a = 0; a < fc.size(); ++a)
        for (std::size_t b = 0; b < fc.size(); ++b) {
            ASSERT_EQ(opposite(a, b), t.distance(static_cast<int>(a), static_cast<int>(b)) == 4);
            if (!opposite(a, b)) continue;
            int both = 0;
            for (std::size_t c = 0; c < fc.size(); ++c) both += opposite(a, c) && opposite(b, c);
            ASSERT_EQ(both, 5);
        }
}
