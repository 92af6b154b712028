#pragma once

#include <cstdint>

#include "ctlab/electro.hpp"
#include "ctlab/geometry.hpp"

namespace ctlab {

enum class ProjectionMode { hyperbolic, electric };

// Target vertex nearest to y in the graph metric; smallest index on ties.
VertexId project_h(const CayleyBall& ball, const GPath& target, VertexId y);

// Target vertex minimising (d_e, d, index) lexicographically.
VertexId project_e(const ElectricSpace& es, const GPath& target, VertexId y);

/// Projection onto a path, tabulated for every vertex of the ball.
class ProjectionTable {
public:
    static ProjectionTable hyperbolic(const CayleyBall& ball, const GPath& target);
    static ProjectionTable electric(const ElectricSpace& es, const GPath& target);

    VertexId operator()(VertexId y) const { return map_[y]; }
    const GPath& target() const { return target_; }
    ProjectionMode mode() const { return mode_; }
    const VertexMap& map() const { return map_; }

private:
    ProjectionTable(GPath target, ProjectionMode mode, VertexMap map)
        : target_(std::move(target)), mode_(mode), map_(std::move(map)) {}
    GPath target_;
    ProjectionMode mode_;
    VertexMap map_;
};

struct DefectReport {
    int max_defect = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    VertexId witness = kNoVertex;
};

// Max over sampled trusted edges (x, y) of d(pi(x), pi(y)).
DefectReport lipschitz_constant(const CayleyBall& ball, const ProjectionTable& table, std::size_t samples,
                                std::uint64_t seed);

// Max over sampled y of d(project(Phi(lambda), phi(y)), phi(project(lambda, y))),
// where Phi(lambda) is the canonical path joining the image endpoints. Samples
// whose images are missing or leave the trusted interior are skipped.
DefectReport almost_commute_defect(const CayleyBall& ball, const VertexMap& phi, const GPath& lambda,
                                   std::size_t samples, std::uint64_t seed);
DefectReport almost_commute_defect(const ElectricSpace& es, const VertexMap& phi, const GPath& lambda,
                                   std::size_t samples, std::uint64_t seed);

// Max over sampled y of d(project_h(lambda, y), project_e(mu, y)).
DefectReport agreement_defect(const ElectricSpace& es, const GPath& lambda, const GPath& mu, std::size_t samples,
                              std::uint64_t seed);

}  // namespace ctlab
