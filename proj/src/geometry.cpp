#include "ctlab/geometry.hpp"

#include <algorithm>

#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

int dist(const CayleyBall& ball, VertexId u, VertexId v) { return distance(BallGraph{ball}, u, v); }

GPath geodesic(const CayleyBall& ball, VertexId u, VertexId v) {
    if (u == v) return GPath::single(u);
    const BallGraph g{ball};
    const VertexId s[1] = {v};
    const VertexId t[1] = {u};
    const auto field = distances(g, std::span<const VertexId>(s), kUnreached, std::span<const VertexId>(t));
    if (field[u] == kUnreached) throw TruncationError("vertices not connected inside the ball");
    return descend(g, field, u, [](int w) { return w; });
}

double gromov_product(const CayleyBall& ball, VertexId x, VertexId y, VertexId w) {
    return 0.5 * (dist(ball, x, w) + dist(ball, y, w) - dist(ball, x, y));
}

int triangle_defect(const CayleyBall& ball, VertexId x, VertexId y, VertexId z) {
    return triangle_defect(BallGraph{ball}, geodesic(ball, x, y), geodesic(ball, y, z), geodesic(ball, z, x));
}

HyperbolicityReport estimate_delta(const CayleyBall& ball, std::size_t samples, std::uint64_t seed, int jobs) {
    if (samples == 0) throw PreconditionError("estimate_delta needs at least one sample");
    const std::size_t pool = ball.ball_prefix(ball.trusted_radius());
    std::vector<int> defect(samples);
    std::vector<std::array<VertexId, 3>> tri(samples);
    parallel_for(samples, jobs, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        for (auto& v : tri[i]) v = static_cast<VertexId>(uniform_below(rng, pool));
        defect[i] = triangle_defect(ball, tri[i][0], tri[i][1], tri[i][2]);
    });
    HyperbolicityReport report;
    report.sample_count = samples;
    report.radius_used = ball.radius();
    for (std::size_t i = 0; i < samples; ++i) {
        if (i == 0 || defect[i] > report.delta) {
            report.delta = defect[i];
            report.witness = tri[i];
        }
    }
    return report;
}

QuasiReport is_quasigeodesic(const CayleyBall& ball, const GPath& path, double k, double eps) {
    QuasiReport report;
    const std::size_t n = path.size();
    std::vector<int> prefix(n, 0);
    for (std::size_t i = 1; i < n; ++i) prefix[i] = prefix[i - 1] + path.weights[i - 1];
    bool have_worst = false;
    const BallGraph g{ball};
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const VertexId> rest(path.vertices.data() + i, n - i);
        const VertexId s[1] = {path.vertices[i]};
        const auto d = distances(g, std::span<const VertexId>(s), kUnreached, rest);
        for (std::size_t j = i; j < n; ++j) {
            const int l = prefix[j] - prefix[i];
            const int dj = d[path.vertices[j]];
            if (dj > 0) report.k_measured = std::max(report.k_measured, static_cast<double>(l) / dj);
            report.eps_measured = std::max(report.eps_measured, l - dj);
            const double excess = std::max(l / k - eps - dj, dj - k * l - eps);
            if (!have_worst || excess > report.worst_excess) {
                have_worst = true;
                report.worst_excess = excess;
                report.worst_i = i;
                report.worst_j = j;
            }
        }
    }
    report.ok = report.worst_excess <= 1e-9;
    return report;
}

}  // namespace ctlab
