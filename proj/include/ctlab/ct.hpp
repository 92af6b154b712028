#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ctlab/ladder.hpp"

namespace ctlab {

// A gap between two retracted dots could not be bridged within budget.
class BridgeError : public Error {
public:
    using Error::Error;
};

// pre: N <= trusted radius - 1 (N = 0 gives a geodesic through the identity).
// post: every vertex is trusted and at depth >= N, with depth N attained.
// Walks toward the endpoints only visit vertices accepted by `endpoint_ok`.
GPath make_test_geodesic(const CayleyBall& ball, int N, std::uint64_t seed, int attempts = 64,
                         const std::function<bool(VertexId)>& endpoint_ok = {});

// Test geodesic for a model: its endpoints have vertical images through the whole stack.
GPath ct_test_geodesic(const ModelManifold& m, int N, std::uint64_t seed);

struct AdmissiblePath {
    std::vector<VertexId> vertices;  // global model vertices
    AdmissibleReport report;
    std::size_t bridges = 0;         // gaps between dots on different sheets
    int max_bridge = 0;              // largest electric length of a vertical bridge
    bool backtracking_ok = true;     // electric-sheet runs pass the no-backtracking check
};

/// Projects every vertex of beta onto the ladder and joins consecutive dots by
/// ladder slices, or across a gap by a vertical edge and a connector to the
/// foot of its image on the next ladder path.
// pre: beta is a model path whose sheets all carry a ladder path.
AdmissiblePath join_the_dots(const ModelManifold& m, const Ladder& ladder, const Retraction& pi,
                             const std::vector<VertexId>& beta, int budget);

struct CTRow {
    int N = 0;
    int M_adm = 0;
    int M_geo = 0;
    int ladder_blocks = 0;
    int electric_len = 0;
    int hyperbolic_len = 0;
    std::uint64_t seed = 0;
    int C_retract = 0;
    int tracking = 0;  // max model distance from a geodesic vertex to the admissible path
};

struct CTOptions {
    std::size_t retract_samples = 200;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct CTCurve {
    std::vector<CTRow> rows;  // increasing N

    bool nondecreasing() const;
    // Largest tracking distance over the rows.
    int tracking() const;
};

// Runs the pipeline for each N; failures are rethrown with N in the message.
CTCurve ct_curve(const ModelManifold& m, const std::vector<int>& Ns, const CTOptions& opt = {});

struct AuditRow {
    int id = 0;
    std::string property;
    double constant = 0;
    std::string witness;
};

struct AuditOptions {
    std::size_t samples = 200;
    std::uint64_t seed = 1;
    int jobs = 1;
};

// One row per structural property of the electrocuted curves of the stack
// (curve a when the stack has no thin block).
std::vector<AuditRow> six_properties_audit(const ModelManifold& m, const AuditOptions& opt = {});

}  // namespace ctlab
