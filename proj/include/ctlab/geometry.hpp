#pragma once

#include <cstdint>

#include "ctlab/cayley_ball.hpp"
#include "ctlab/path.hpp"
#include "ctlab/search.hpp"

namespace ctlab {

int dist(const CayleyBall& ball, VertexId u, VertexId v);

// Shortest path; among shortest paths the one whose letter sequence is
// shortlex-least.
GPath geodesic(const CayleyBall& ball, VertexId u, VertexId v);

// (x . y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2
double gromov_product(const CayleyBall& ball, VertexId x, VertexId y, VertexId w);

struct HyperbolicityReport {
    int delta = 0;
    std::size_t sample_count = 0;
    int radius_used = 0;
    std::array<VertexId, 3> witness{kNoVertex, kNoVertex, kNoVertex};
};

// Thinness defect of a triangle with the given sides, distances measured in g:
// the largest distance from a point of one side to the union of the other two.
template <class G>
int triangle_defect(const G& g, const GPath& s0, const GPath& s1, const GPath& s2) {
    const GPath* sides[3] = {&s0, &s1, &s2};
    int worst = 0;
    for (int i = 0; i < 3; ++i) {
        std::vector<VertexId> others;
        for (int j = 0; j < 3; ++j) {
            if (j != i) others.insert(others.end(), sides[j]->vertices.begin(), sides[j]->vertices.end());
        }
        const auto d = distances(g, others, kUnreached, sides[i]->vertices);
        for (VertexId v : sides[i]->vertices) worst = std::max(worst, d[v]);
    }
    return worst;
}

int triangle_defect(const CayleyBall& ball, VertexId x, VertexId y, VertexId z);

// Max thinness defect over `samples` triangles with trusted vertices.
HyperbolicityReport estimate_delta(const CayleyBall& ball, std::size_t samples, std::uint64_t seed, int jobs = 1);

struct QuasiReport {
    bool ok = true;
    // Subpath [worst_i, worst_j] with the largest violation of the requested bounds.
    std::size_t worst_i = 0;
    std::size_t worst_j = 0;
    double worst_excess = 0.0;
    // Measured constants: max l/d over subpaths with d > 0, and max l - d.
    double k_measured = 1.0;
    int eps_measured = 0;
};

// Checks l/K - eps <= d(endpoints) <= K l + eps for every subpath, where l is
// the weighted parameter length of the subpath.
QuasiReport is_quasigeodesic(const CayleyBall& ball, const GPath& path, double k, double eps);

}  // namespace ctlab
