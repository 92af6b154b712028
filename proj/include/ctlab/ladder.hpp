#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctlab/blocks.hpp"
#include "ctlab/projections.hpp"

namespace ctlab {

/// The ladder B_lambda: one path per sheet, built upward from a base geodesic.
///
/// Thin blocks carry a hyperbolic geodesic on level 0, electro-ambient
/// representatives of electric geodesics on levels 1 and 2 (level 2 joins the
/// twisted endpoints), and the hyperbolic geodesic between the twisted
/// endpoints on level 3. Thick blocks carry geodesics on both sheets.
struct Ladder {
    GPath base;
    // Ball vertex ids; weights are in the sheet's own metric.
    std::vector<std::optional<GPath>> paths;
    int truncated_at = -1;  // first block that could not be built, -1 if none
    std::string truncation;
    // Neighbourhood constant: how far the vertical image of a ladder point can
    // land from the next ladder path (electric length on twist gaps).
    int C = 0;
    // Per block, the longest hyperbolic connector from a twisted ladder point
    // to the twisted ladder path; 0 on thick blocks.
    std::vector<int> K;

    bool present(int sheet) const { return sheet < static_cast<int>(paths.size()) && paths[sheet].has_value(); }
    const GPath& at(int sheet) const;
    int built_blocks(const ModelManifold& m) const;
    std::vector<VertexId> vertices(const ModelManifold& m) const;
    // Ladder vertices on the sheets of one block, boundary sheets included.
    std::vector<VertexId> block_vertices(const ModelManifold& m, int block) const;
};

// pre: base is a ball geodesic with trusted endpoints.
Ladder build_ladder(const ModelManifold& m, const GPath& base);

/// Sheetwise nearest-point projection onto the ladder.
class Retraction {
public:
    static Retraction build(const ModelManifold& m, const Ladder& ladder, int jobs = 1);

    // kNoVertex when the sheet has no ladder path.
    VertexId operator()(VertexId x) const;
    const ProjectionTable* table(int sheet) const { return tables_[sheet] ? &*tables_[sheet] : nullptr; }

private:
    const ModelManifold* m_ = nullptr;
    std::vector<std::optional<ProjectionTable>> tables_;
};

struct SweepRow {
    EdgeKind kind;
    VertexId x, y;    // representative edge
    VertexId px, py;  // its retraction
    int contribution;
};

struct RetractionReport {
    int C = 0;
    std::array<int, 4> by_kind{};  // indexed by EdgeKind
    std::size_t edges = 0;
    std::size_t absent = 0;        // edges with an endpoint on a sheet without ladder
    std::vector<SweepRow> rows;    // one per distinct (kind, px, py), in sweep order
};

// Max model distance between the retractions of adjacent vertices. samples = 0
// sweeps every edge whose endpoints are both trusted; otherwise samples random
// trusted edges.
RetractionReport retraction_constant(const ModelManifold& m, const Retraction& pi, std::size_t samples = 0,
                                     std::uint64_t seed = 0, int jobs = 1);

struct AdmissibleSegment {
    std::size_t begin = 0;  // path indices, inclusive
    std::size_t end = 0;
    int block = 0;
    bool thin = false;
    int type = 0;           // 1..4 on thick blocks, 1..7 on thin blocks
};

struct AdmissibleReport {
    bool ok = false;
    std::vector<AdmissibleSegment> segments;
    std::size_t offending = 0;  // first path index that no decomposition gets past
    std::string reason;
    int electric_length = 0;
    int hyperbolic_length = 0;
};

/// Decomposes model paths into ladder-elementary segments.
class AdmissibleValidator {
public:
    AdmissibleValidator(const ModelManifold& m, const Ladder& ladder);

    AdmissibleReport validate(const std::vector<VertexId>& path) const;

    // Hyperbolic distance on `sheet` from v to the ladder path, and the nearest
    // ladder vertex (smallest id on ties).
    int gap(int sheet, VertexId v) const { return fields_[sheet].dist[v]; }
    VertexId foot(int sheet, VertexId v) const { return fields_[sheet].label[v]; }
    // Indices of v along the sheet's ladder path.
    const std::vector<std::size_t>* positions(int sheet, VertexId v) const;

private:
    bool ladder_slice(std::span<const VertexId> seg, int sheet) const;
    bool near_geodesic(std::span<const VertexId> seg, int sheet) const;
    bool twist_connector(std::span<const VertexId> seg, int block, int level) const;
    bool tube_segment(std::span<const VertexId> seg, int block) const;
    int segment_type(std::span<const VertexId> seg, int block) const;

    const ModelManifold* m_;
    const Ladder* ladder_;
    std::vector<LabeledField> fields_;
    std::vector<std::unordered_map<VertexId, std::vector<std::size_t>>> index_;
};

AdmissibleReport validate_admissible(const ModelManifold& m, const Ladder& ladder, const std::vector<VertexId>& path);

/// g(i): largest model distance from a ladder point on block i to either
/// boundary ladder path of the block; h: partial sums.
struct HeightTable {
    std::vector<int> g;
    std::vector<int> h;
};

HeightTable height_table(const ModelManifold& m, const Ladder& ladder, bool electrocuted = false);

struct HeightCheck {
    std::size_t points = 0;
    std::size_t violations = 0;
    int worst_slack = 0;  // min over points of h(i) + d(x, ladder of block i) - d(x, lambda_0)
    VertexId witness = kNoVertex;
};

// Checks d(x, lambda_0) <= h(i) + d(x, B_lambda on block i) for each point x,
// where i is the lowest block containing x's sheet.
HeightCheck check_heights(const ModelManifold& m, const Ladder& ladder, const HeightTable& heights,
                          std::span<const VertexId> points, bool electrocuted = false);

// Canonical model geodesic: descends the (length, edge count) field from y, first edge wins.
std::vector<VertexId> model_geodesic(const ModelManifold& m, VertexId x, VertexId y, bool electrocuted = true);

}  // namespace ctlab
