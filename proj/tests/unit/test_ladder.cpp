#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "ctlab/ladder.hpp"
#include "model_oracle.hpp"

using namespace ctlab;
using namespace oracle;

namespace {

std::vector<int> ball_bfs(const CayleyBall& ball, VertexId s, char sigma = 0) {
    std::vector<int> d(ball.size(), 1 << 30);
    std::deque<VertexId> q{s};
    d[s] = 0;
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop_front();
        for (Letter g : kAllLetters) {
            const VertexId v = ball.neighbor(u, g);
            if (v == kNoVertex) continue;
            const char c = to_char(g);
            const int w = sigma && (c == sigma || c == sigma - 32) ? 0 : 1;
            if (d[u] + w < d[v]) {
                d[v] = d[u] + w;
                if (w == 0) q.push_front(v);
                else q.push_back(v);
            }
        }
    }
    return d;
}

bool adjacent(const CayleyBall& ball, VertexId u, VertexId v) {
    for (VertexId w : ball.neighbors(u)) {
        if (w == v) return true;
    }
    return false;
}

int sigma_free_length(const CayleyBall& ball, const std::vector<VertexId>& p, char sigma) {
    int len = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        for (Letter g : kAllLetters) {
            if (ball.neighbor(p[i], g) != p[i + 1]) continue;
            const char c = to_char(g);
            len += (c == sigma || c == sigma - 32) ? 0 : 1;
            break;
        }
    }
    return len;
}

GPath base_between(const CayleyBall& ball, const std::string& x, const std::string& y) {
    return geodesic(ball, ball.at(x), ball.at(y));
}

}  // namespace

TEST(Ladder, SheetEndpointsFollowVerticalMaps) {
    const auto& ball = ball_r(5);
    const std::vector<Block> stack{{false, 'c', 1}, {true, 'a', 2}, {false, 0, 0}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const GPath base = base_between(ball, "A", "bd");
    const Ladder L = build_ladder(m, base);
    ASSERT_EQ(L.truncated_at, -1);
    ASSERT_EQ(L.built_blocks(m), 3);

    const auto glue = oracle_map(ball, 'c', 1);
    const auto twist = oracle_map(ball, 'a', 2);
    std::vector<std::pair<VertexId, VertexId>> ends{{base.front(), base.back()}};
    ends.push_back({glue[ends[0].first], glue[ends[0].second]});
    ends.push_back(ends[1]);
    ends.push_back({twist[ends[2].first], twist[ends[2].second]});
    ends.push_back(ends[3]);
    ends.push_back(ends[4]);
    ASSERT_EQ(static_cast<int>(ends.size()), m.sheet_count());
    const std::vector<char> sigma{0, 0, 'a', 'a', 0, 0};

    for (int s = 0; s < m.sheet_count(); ++s) {
        ASSERT_TRUE(L.present(s)) << s;
        const auto& p = L.at(s).vertices;
        EXPECT_EQ(p.front(), ends[s].first) << s;
        EXPECT_EQ(p.back(), ends[s].second) << s;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) ASSERT_TRUE(adjacent(ball, p[i], p[i + 1])) << s;
        const auto d = ball_bfs(ball, p.front(), sigma[s]);
        if (sigma[s]) {
            EXPECT_EQ(sigma_free_length(ball, p, sigma[s]), d[p.back()]) << s;
        } else {
            EXPECT_EQ(static_cast<int>(p.size()) - 1, d[p.back()]) << s;
        }
    }
    EXPECT_EQ(L.K[0], 0);
    EXPECT_EQ(L.K[2], 0);
}

TEST(Ladder, PreconditionsAndTruncation) {
    const auto& ball = ball_r(4);
    const auto m = ModelManifold::assemble(ball, specs_of({{false, 0, 0}, {true, 'a', 64}, {false, 0, 0}}));
    EXPECT_THROW(build_ladder(m, GPath{}), PreconditionError);
    GPath detour = GPath::single(0);
    detour.push(ball.at("a"), 1);
    detour.push(ball.at("ab"), 1);
    detour.push(ball.at("abA"), 1);
    EXPECT_THROW(build_ladder(m, detour), PreconditionError);
    EXPECT_THROW(build_ladder(m, base_between(ball, "", "abab")), PreconditionError);

    const Ladder L = build_ladder(m, base_between(ball, "", "b"));
    EXPECT_EQ(L.truncated_at, 1);
    EXPECT_FALSE(L.truncation.empty());
    EXPECT_EQ(L.built_blocks(m), 1);
    EXPECT_TRUE(L.present(1));
    EXPECT_FALSE(L.present(2));
    EXPECT_THROW(L.at(4), TruncationError);
    EXPECT_THROW(height_table(m, L), TruncationError);
}

TEST(Ladder, DegenerateBases) {
    const auto& ball = ball_r(4);
    const auto m = ModelManifold::assemble(ball, specs_of({{true, 'a', 1}, {false, 'c', 1}}));
    const Ladder point = build_ladder(m, GPath::single(0));
    for (int s = 0; s < m.sheet_count(); ++s) EXPECT_EQ(point.at(s).size(), 1u) << s;
    EXPECT_EQ(point.C, 0);

    // A base inside one coset of the twist curve is electrically a point.
    const Ladder coset = build_ladder(m, base_between(ball, "", "aa"));
    EXPECT_EQ(coset.at(1).length(), 0);
    EXPECT_EQ(coset.at(2).length(), 0);
    EXPECT_EQ(coset.at(3).hyperbolic_length(), 2);
}

TEST(Ladder, RetractionOnPlainSheetIsNearestPoint) {
    const auto& ball = ball_r(4);
    const auto m = ModelManifold::assemble(ball, specs_of({{true, 'a', 1}}));
    const Ladder L = build_ladder(m, base_between(ball, "B", "ac"));
    const auto pi = Retraction::build(m, L, 2);
    std::vector<std::vector<int>> fields;
    for (VertexId t : L.base.vertices) fields.push_back(ball_bfs(ball, t));
    for (VertexId y = 0; y < ball.size(); ++y) {
        VertexId best = kNoVertex;
        int bd = 1 << 30;
        for (std::size_t i = 0; i < L.base.size(); ++i) {
            const VertexId t = L.base.vertices[i];
            if (fields[i][y] < bd || (fields[i][y] == bd && t < best)) {
                bd = fields[i][y];
                best = t;
            }
        }
        ASSERT_EQ(pi(m.global(0, y)), m.global(0, best)) << ball.label(y);
    }
    // Identity on the ladder itself, every sheet.
    for (VertexId x : L.vertices(m)) EXPECT_EQ(pi(x), x);
    for (int s = 1; s <= 2; ++s) EXPECT_EQ(pi.table(s)->mode(), ProjectionMode::electric);
}

TEST(Ladder, ExhaustiveSweepMatchesOracle) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{false, 'c', 1}, {true, 'a', 1}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const Ladder L = build_ladder(m, base_between(ball, "b", "C"));
    const auto pi = Retraction::build(m, L);
    const auto rep = retraction_constant(m, pi, 0, 0, 2);
    const Oracle o(ball, stack);

    std::map<std::size_t, std::vector<int>> memo;
    auto od = [&](std::size_t a, std::size_t b) {
        auto it = memo.find(a);
        if (it == memo.end()) it = memo.emplace(a, o.dijkstra(a)).first;
        return it->second[b];
    };
    int C = 0;
    std::size_t edges = 0;
    for (std::size_t u = 0; u < o.adj.size(); ++u) {
        if (!ball.trusted(static_cast<VertexId>(u % o.n))) continue;
        for (auto [v, w] : o.adj[u]) {
            if (v <= u || !ball.trusted(static_cast<VertexId>(v % o.n))) continue;
            ++edges;
            C = std::max(C, od(pi(static_cast<VertexId>(u)), pi(static_cast<VertexId>(v))));
        }
    }
    EXPECT_EQ(rep.edges, edges);
    EXPECT_EQ(rep.absent, 0u);
    EXPECT_EQ(rep.C, C);
    for (const auto& row : rep.rows) ASSERT_EQ(row.contribution, od(row.px, row.py));
    EXPECT_EQ(*std::max_element(rep.by_kind.begin(), rep.by_kind.end()), rep.C);

    const auto sampled = retraction_constant(m, pi, 500, 7, 1);
    EXPECT_LE(sampled.C, rep.C);
    EXPECT_EQ(sampled.edges, 500u);
    EXPECT_EQ(retraction_constant(m, pi, 500, 7, 3).rows.size(), sampled.rows.size());
}

TEST(Ladder, ValidatorRecognisesElementarySegments) {
    const auto& ball = ball_r(5);
    const auto m = ModelManifold::assemble(ball, specs_of({{false, 0, 0}, {true, 'a', 1}}));
    const Ladder L = build_ladder(m, base_between(ball, "B", "acd"));
    const AdmissibleValidator val(m, L);
    auto lift = [&](int s, const std::vector<VertexId>& p) {
        std::vector<VertexId> out;
        for (VertexId v : p) out.push_back(m.global(s, v));
        return out;
    };

    // A slice of the base ladder path.
    const auto& p0 = L.at(0).vertices;
    auto rep = val.validate(lift(0, {p0.begin() + 1, p0.end()}));
    ASSERT_TRUE(rep.ok) << rep.reason;
    ASSERT_EQ(rep.segments.size(), 1u);
    EXPECT_EQ(rep.segments[0].type, 1);

    // Along lambda_0, up the identity glue, back along lambda_1.
    std::vector<VertexId> path = lift(0, p0);
    for (auto it = p0.rbegin(); it != p0.rend(); ++it) path.push_back(m.global(1, *it));
    rep = val.validate(path);
    ASSERT_TRUE(rep.ok) << rep.reason;
    ASSERT_EQ(rep.segments.size(), 3u);
    EXPECT_EQ(rep.segments[1].type, 2);
    EXPECT_FALSE(rep.segments[1].thin);
    EXPECT_EQ(rep.hyperbolic_length, static_cast<int>(path.size()) - 1);

    // Twist edge out of a ladder point of level 1.
    const VertexId x = L.at(2).vertices.front();
    rep = val.validate({m.global(2, x), m.global(3, m.up(2, x))});
    ASSERT_TRUE(rep.ok) << rep.reason;
    EXPECT_EQ(rep.segments[0].type, 2);
    EXPECT_TRUE(rep.segments[0].thin);

    // Far from the ladder on the identity-glued sheets nothing applies.
    const auto far = geodesic(ball, ball.at("ccc"), ball.at("ccd")).vertices;
    rep = val.validate(lift(0, far));
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.offending, 0u);
    EXPECT_FALSE(rep.reason.empty());

    rep = val.validate({m.global(0, 0), m.global(0, ball.at("aa"))});
    EXPECT_FALSE(rep.ok);
    EXPECT_NE(rep.reason.find("adjacent"), std::string::npos);
    EXPECT_FALSE(val.validate({}).ok);
    EXPECT_TRUE(val.validate({m.global(0, ball.at("cc"))}).ok);
}

TEST(Ladder, HeightsAgreeWithOracle) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{false, 'a', 1}, {true, 'c', 2}, {false, 0, 0}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const Ladder L = build_ladder(m, base_between(ball, "", "ab"));
    const auto H = height_table(m, L);
    const Oracle o(ball, stack, false);
    ASSERT_EQ(H.g.size(), 3u);
    for (int b = 0; b < 3; ++b) {
        auto lifted = [&](int s) {
            std::vector<std::size_t> out;
            for (VertexId v : L.at(s).vertices) out.push_back(static_cast<std::size_t>(s) * o.n + v);
            return out;
        };
        const auto db = o.dijkstra(lifted(m.bottom_sheet(b)));
        const auto dt = o.dijkstra(lifted(m.top_sheet(b)));
        int g = 1;
        for (int s = m.bottom_sheet(b); s <= m.top_sheet(b); ++s) {
            for (VertexId v : L.at(s).vertices) {
                if (!ball.trusted(v)) continue;
                const std::size_t y = static_cast<std::size_t>(s) * o.n + v;
                g = std::max({g, db[y], dt[y]});
            }
        }
        EXPECT_EQ(H.g[b], g) << b;
        EXPECT_EQ(H.h[b], (b ? H.h[b - 1] : 0) + g);
    }

    std::mt19937_64 rng(3);
    std::vector<VertexId> pts = L.vertices(m);
    for (int i = 0; i < 200; ++i) pts.push_back(static_cast<VertexId>(rng() % m.size()));
    const auto chk = check_heights(m, L, H, pts);
    EXPECT_EQ(chk.points, pts.size());
    EXPECT_EQ(chk.violations, 0u);
    EXPECT_GE(chk.worst_slack, 0);
}

TEST(Ladder, ModelGeodesicHasModelLength) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{true, 'a', 2}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const Oracle o(ball, stack);
    const VertexId x = m.global(0, ball.at("bb"));
    const VertexId y = m.global(3, ball.at("ca"));
    const auto p = model_geodesic(m, x, y);
    ASSERT_EQ(p.front(), x);
    ASSERT_EQ(p.back(), y);
    int len = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        int w = -1;
        for (auto [v, ww] : o.adj[p[i]]) {
            if (v == p[i + 1]) w = w < 0 ? ww : std::min(w, ww);
        }
        ASSERT_GE(w, 0);
        len += w;
    }
    EXPECT_EQ(len, o.dijkstra(x)[y]);
}
