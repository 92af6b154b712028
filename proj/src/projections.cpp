#include "ctlab/projections.hpp"

#include <algorithm>
#include <tuple>

#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

VertexId sample_trusted(const CayleyBall& ball, std::uint64_t seed, std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    return static_cast<VertexId>(uniform_below(rng, ball.ball_prefix(ball.trusted_radius())));
}

std::pair<VertexId, VertexId> image_endpoints(const VertexMap& phi, const GPath& lambda) {
    if (lambda.empty()) throw PreconditionError("empty path");
    const VertexId a = phi[lambda.front()];
    const VertexId b = phi[lambda.back()];
    if (a == kNoVertex || b == kNoVertex) throw TruncationError("image endpoint outside the ball");
    return {a, b};
}

}  // namespace

VertexId project_h(const CayleyBall& ball, const GPath& target, VertexId y) {
    const VertexId s[1] = {y};
    const auto d = distances(BallGraph{ball}, std::span<const VertexId>(s), kUnreached, target.vertices);
    VertexId best = kNoVertex;
    for (VertexId t : target.vertices) {
        if (best == kNoVertex || std::tie(d[t], t) < std::tie(d[best], best)) best = t;
    }
    return best;
}

VertexId project_e(const ElectricSpace& es, const GPath& target, VertexId y) {
    const VertexId s[1] = {y};
    const auto de = distances(es, std::span<const VertexId>(s), kUnreached, target.vertices);
    const auto d = distances(BallGraph{es.ball()}, std::span<const VertexId>(s), kUnreached, target.vertices);
    VertexId best = kNoVertex;
    for (VertexId t : target.vertices) {
        if (best == kNoVertex || std::tie(de[t], d[t], t) < std::tie(de[best], d[best], best)) best = t;
    }
    return best;
}

ProjectionTable ProjectionTable::hyperbolic(const CayleyBall& ball, const GPath& target) {
    if (target.empty()) throw PreconditionError("projection onto an empty path");
    auto field = nearest_sources(BallGraph{ball}, target.vertices);
    return ProjectionTable(target, ProjectionMode::hyperbolic, std::move(field.label));
}

ProjectionTable ProjectionTable::electric(const ElectricSpace& es, const GPath& target) {
    if (target.empty()) throw PreconditionError("projection onto an empty path");
    const std::size_t n = es.size();
    std::vector<VertexId> order = target.vertices;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    // One pair of fields per target vertex, folded into a running best; visiting
    // targets in index order makes strict improvement the index tie-break.
    std::vector<int> best_e(n, kUnreached), best_d(n, kUnreached);
    VertexMap map(n, kNoVertex);
    for (VertexId t : order) {
        const auto de = distances_from(es, t);
        const auto d = distances_from(BallGraph{es.ball()}, t);
        for (VertexId y = 0; y < n; ++y) {
            if (std::tie(de[y], d[y]) < std::tie(best_e[y], best_d[y])) {
                best_e[y] = de[y];
                best_d[y] = d[y];
                map[y] = t;
            }
        }
    }
    return ProjectionTable(target, ProjectionMode::electric, std::move(map));
}

DefectReport lipschitz_constant(const CayleyBall& ball, const ProjectionTable& table, std::size_t samples,
                                std::uint64_t seed) {
    if (samples == 0) throw PreconditionError("lipschitz_constant needs at least one sample");
    DefectReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        const auto x = static_cast<VertexId>(uniform_below(rng, ball.ball_prefix(ball.trusted_radius())));
        const VertexId y = ball.neighbor(x, letter_at(static_cast<int>(uniform_below(rng, kLetterCount))));
        if (y == kNoVertex) {
            ++report.skipped;
            continue;
        }
        ++report.used;
        const int c = dist(ball, table(x), table(y));
        if (report.witness == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.witness = x;
        }
    }
    return report;
}

DefectReport almost_commute_defect(const CayleyBall& ball, const VertexMap& phi, const GPath& lambda,
                                   std::size_t samples, std::uint64_t seed) {
    const auto [a, b] = image_endpoints(phi, lambda);
    const auto before = ProjectionTable::hyperbolic(ball, lambda);
    const auto after = ProjectionTable::hyperbolic(ball, geodesic(ball, a, b));
    DefectReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        const VertexId y = sample_trusted(ball, seed, i);
        const VertexId fy = phi[y];
        const VertexId fp = phi[before(y)];
        if (fy == kNoVertex || fp == kNoVertex || !ball.trusted(fy) || !ball.trusted(fp)) {
            ++report.skipped;
            continue;
        }
        ++report.used;
        const int c = dist(ball, after(fy), fp);
        if (report.witness == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.witness = y;
        }
    }
    return report;
}

DefectReport almost_commute_defect(const ElectricSpace& es, const VertexMap& phi, const GPath& lambda,
                                   std::size_t samples, std::uint64_t seed) {
    const auto& ball = es.ball();
    const auto [a, b] = image_endpoints(phi, lambda);
    const auto before = ProjectionTable::electric(es, lambda);
    const auto after = ProjectionTable::electric(es, electro_ambient(es, electric_geodesic(es, a, b)));
    DefectReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        const VertexId y = sample_trusted(ball, seed, i);
        const VertexId fy = phi[y];
        const VertexId fp = phi[before(y)];
        if (fy == kNoVertex || fp == kNoVertex || !ball.trusted(fy) || !ball.trusted(fp)) {
            ++report.skipped;
            continue;
        }
        ++report.used;
        const int c = electric_dist(es, after(fy), fp);
        if (report.witness == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.witness = y;
        }
    }
    return report;
}

DefectReport agreement_defect(const ElectricSpace& es, const GPath& lambda, const GPath& mu, std::size_t samples,
                              std::uint64_t seed) {
    if (lambda.empty() || mu.empty() || lambda.front() != mu.front() || lambda.back() != mu.back()) {
        throw PreconditionError("agreement_defect: endpoint mismatch");
    }
    const auto& ball = es.ball();
    const auto ph = ProjectionTable::hyperbolic(ball, lambda);
    const auto pe = ProjectionTable::electric(es, mu);
    DefectReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        const VertexId y = sample_trusted(ball, seed, i);
        ++report.used;
        const int c = dist(ball, ph(y), pe(y));
        if (report.witness == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.witness = y;
        }
    }
    return report;
}

}  // namespace ctlab
