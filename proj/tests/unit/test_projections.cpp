#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "ctlab/projections.hpp"
#include "ctlab/twist.hpp"

using namespace ctlab;

namespace {

const CayleyBall& ball_r(int r) {
    static std::map<int, CayleyBall> cache;
    auto it = cache.find(r);
    if (it == cache.end()) {
        BallOptions o;
        o.radius = r;
        o.margin = 2;
        it = cache.emplace(r, CayleyBall::build(o)).first;
    }
    return it->second;
}

std::vector<int> oracle_bfs(const CayleyBall& ball, VertexId s) {
    std::vector<int> d(ball.size(), 1 << 30);
    std::queue<VertexId> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop();
        for (VertexId v : ball.neighbors(u)) {
            if (v != kNoVertex && d[v] > d[u] + 1) {
                d[v] = d[u] + 1;
                q.push(v);
            }
        }
    }
    return d;
}

std::vector<int> oracle_electric(const CayleyBall& ball, VertexId s, Letter sigma) {
    std::vector<int> d(ball.size(), 1 << 30);
    std::set<std::pair<int, VertexId>> open;
    d[s] = 0;
    open.insert({0, s});
    while (!open.empty()) {
        const auto [du, u] = *open.begin();
        open.erase(open.begin());
        for (Letter g : kAllLetters) {
            const VertexId v = ball.neighbor(u, g);
            if (v == kNoVertex) continue;
            const int w = (g == sigma || g == inverse(sigma)) ? 0 : 1;
            if (du + w < d[v]) {
                open.erase({d[v], v});
                d[v] = du + w;
                open.insert({d[v], v});
            }
        }
    }
    return d;
}

GPath path_of(const CayleyBall& ball, const std::string& word) {
    GPath p = GPath::single(0);
    VertexId v = 0;
    for (char ch : word) {
        v = ball.neighbor(v, letter_from_char(ch));
        p.push(v, 1);
    }
    return p;
}

}  // namespace

TEST(Projections, HyperbolicTableMatchesExhaustiveScan) {
    const auto& ball = ball_r(4);
    const GPath target = path_of(ball, "abAc");
    std::vector<std::vector<int>> fields;
    for (VertexId t : target.vertices) fields.push_back(oracle_bfs(ball, t));
    const auto table = ProjectionTable::hyperbolic(ball, target);
    for (VertexId y = 0; y < ball.size(); ++y) {
        VertexId best = kNoVertex;
        int bd = 1 << 30;
        for (std::size_t i = 0; i < target.size(); ++i) {
            const VertexId t = target.vertices[i];
            const int d = fields[i][y];
            if (d < bd || (d == bd && t < best)) {
                bd = d;
                best = t;
            }
        }
        ASSERT_EQ(table(y), best) << "y=" << ball.label(y);
        if (y % 97 == 0) ASSERT_EQ(project_h(ball, target, y), best);
    }
}

TEST(Projections, ElectricTableMatchesExhaustiveScan) {
    const auto& ball = ball_r(4);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    const GPath target = path_of(ball, "aabc");
    std::vector<std::vector<int>> fe, fd;
    for (VertexId t : target.vertices) {
        fe.push_back(oracle_electric(ball, t, Letter::a));
        fd.push_back(oracle_bfs(ball, t));
    }
    const auto table = ProjectionTable::electric(es, target);
    EXPECT_EQ(table.mode(), ProjectionMode::electric);
    for (VertexId y = 0; y < ball.size(); ++y) {
        std::tuple<int, int, VertexId> best{1 << 30, 1 << 30, kNoVertex};
        for (std::size_t i = 0; i < target.size(); ++i) {
            best = std::min(best, std::tuple<int, int, VertexId>{fe[i][y], fd[i][y], target.vertices[i]});
        }
        ASSERT_EQ(table(y), std::get<2>(best)) << "y=" << ball.label(y);
        if (y % 89 == 0) ASSERT_EQ(project_e(es, target, y), std::get<2>(best));
    }
}

TEST(Projections, IdempotentOnTarget) {
    const auto& ball = ball_r(5);
    const ElectricSpace es(ball, CurveClass{Letter::c});
    const GPath target = geodesic(ball, ball.at("BAd"), ball.at("cDab"));
    const auto h = ProjectionTable::hyperbolic(ball, target);
    const auto e = ProjectionTable::electric(es, target);
    for (VertexId t : target.vertices) {
        EXPECT_EQ(h(t), t);
        EXPECT_EQ(e(t), t);
    }
}

TEST(Projections, EmptyTargetRejected) {
    const auto& ball = ball_r(3);
    EXPECT_THROW(ProjectionTable::hyperbolic(ball, GPath{}), PreconditionError);
}

TEST(Projections, LipschitzSampleBoundedByExhaustive) {
    const auto& ball = ball_r(4);
    const GPath target = geodesic(ball, ball.at("ab"), ball.at("CD"));
    const auto table = ProjectionTable::hyperbolic(ball, target);
    int exhaustive = 0;
    for (VertexId x : ball.trusted_vertices()) {
        for (VertexId y : ball.neighbors(x)) {
            if (y == kNoVertex) continue;
            const auto d = oracle_bfs(ball, table(x));
            exhaustive = std::max(exhaustive, d[table(y)]);
        }
    }
    const auto rep = lipschitz_constant(ball, table, 400, 7);
    EXPECT_GT(rep.used, 0u);
    EXPECT_LE(rep.max_defect, exhaustive);
    EXPECT_LE(exhaustive, 8);
}

TEST(Projections, IdentityMapCommutesExactly) {
    const auto& ball = ball_r(5);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    VertexMap id(ball.size());
    for (VertexId v = 0; v < ball.size(); ++v) id[v] = v;
    const GPath lambda = geodesic(ball, ball.at("Bc"), ball.at("dA"));
    const auto h = almost_commute_defect(ball, id, lambda, 60, 3);
    EXPECT_EQ(h.max_defect, 0);
    EXPECT_EQ(h.used, 60u);
    const auto ep = electro_ambient(es, electric_geodesic(es, lambda.front(), lambda.back()));
    const auto e = almost_commute_defect(es, id, ep, 60, 3);
    EXPECT_EQ(e.max_defect, 0);
}

TEST(Projections, TwistAlmostCommutes) {
    const auto& ball = ball_r(5);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    const auto phi = ball_map(ball, TwistMap{CurveClass{Letter::a}, 1});
    const GPath lambda = path_of(ball, "acac");
    const auto rep = almost_commute_defect(es, phi, lambda, 200, 11);
    EXPECT_GT(rep.used, 0u);
    EXPECT_LE(rep.max_defect, 6);
}

TEST(Projections, AgreementOnSharedGeodesic) {
    const auto& ball = ball_r(5);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    const VertexId u = ball.at("bc");
    const VertexId v = ball.at("Dab");
    const GPath lambda = geodesic(ball, u, v);
    const GPath mu = electro_ambient(es, electric_geodesic(es, u, v));
    const auto rep = agreement_defect(es, lambda, mu, 150, 5);
    EXPECT_EQ(rep.used, 150u);
    EXPECT_LE(rep.max_defect, 6);
    EXPECT_THROW(agreement_defect(es, lambda, GPath::single(u), 5, 5), PreconditionError);
}
