#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "ctlab/error.hpp"

namespace ctlab {

/// Vertex sequence with per-edge weights (0 or 1); weights.size() == vertices.size() - 1.
struct GPath {
    std::vector<VertexId> vertices;
    std::vector<std::uint8_t> weights;

    static GPath single(VertexId v) { return GPath{{v}, {}}; }

    bool empty() const { return vertices.empty(); }
    std::size_t size() const { return vertices.size(); }
    VertexId front() const { return vertices.front(); }
    VertexId back() const { return vertices.back(); }
    // Sum of edge weights.
    int length() const { return std::accumulate(weights.begin(), weights.end(), 0); }
    // Number of edges, i.e. the length with every edge weighted 1.
    int hyperbolic_length() const { return vertices.empty() ? 0 : static_cast<int>(vertices.size()) - 1; }

    void push(VertexId v, std::uint8_t w) {
        if (!vertices.empty()) weights.push_back(w);
        vertices.push_back(v);
    }
    GPath reversed() const {
        return GPath{{vertices.rbegin(), vertices.rend()}, {weights.rbegin(), weights.rend()}};
    }
    bool operator==(const GPath&) const = default;
};

// Partial map between vertex sets; kNoVertex marks points without an image.
using VertexMap = std::vector<VertexId>;

}  // namespace ctlab
