#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctlab/error.hpp"
#include "ctlab/fuchsian.hpp"
#include "ctlab/word.hpp"

namespace ctlab {

struct BallOptions {
    int radius = 6;
    int margin = 2;
    // Coincidence tolerance in the hyperboloid (X, Y) chart; bounds hyperbolic distance.
    double tolerance = 1e-6;
    std::size_t vertex_cap = 6'000'000;
#ifdef NDEBUG
    bool cross_check = false;
#else
    bool cross_check = true;
#endif
};

/// Finite radius-R ball of the Cayley graph of the genus-2 surface group.
///
/// Vertices are numbered in BFS order with generators tried in letter order,
/// so vertex 0 is the identity and index order coincides with shortlex order
/// on the canonical (shortlex-least geodesic) words. The structure is
/// immutable once built and safe for concurrent readers.
class CayleyBall {
public:
    using Adjacency = std::array<VertexId, kLetterCount>;
    static constexpr std::size_t kMaxLocateLength = 24;

    static CayleyBall build(const BallOptions& options);

    int radius() const { return radius_; }
    int margin() const { return margin_; }
    double tolerance() const { return tolerance_; }
    std::size_t size() const { return depth_.size(); }
    std::size_t edge_count() const;
    VertexId identity() const { return 0; }

    int depth(VertexId v) const { return depth_[v]; }
    // Trusted interior: at least `margin` away from the truncation boundary.
    bool trusted(VertexId v) const { return depth_[v] <= radius_ - margin_; }
    int trusted_radius() const { return radius_ - margin_; }
    std::vector<VertexId> trusted_vertices() const;
    std::size_t sphere_size(int r) const;
    // Vertices at depth <= r form the prefix [0, ball_prefix(r)).
    std::size_t ball_prefix(int r) const;

    VertexId neighbor(VertexId v, Letter g) const { return adj_[v][index_of(g)]; }
    const Adjacency& neighbors(VertexId v) const { return adj_[v]; }
    Letter parent_letter(VertexId v) const { return last_[v]; }
    VertexId parent(VertexId v) const { return parent_[v]; }

    Letters letters(VertexId v) const;
    Word word(VertexId v) const;
    std::string label(VertexId v) const { return to_string(letters(v)); }
    DiskPoint point(VertexId v) const { return disk_[v]; }
    HyperboloidXY chart_point(VertexId v) const { return xy_[v]; }

    // Vertex of the element named by an arbitrary word, if it lies in the ball.
    // The word is Dehn-reduced first; the chart lookup uses a loose tolerance
    // (orbit points are more than 4 apart) and hits are confirmed by the word
    // problem solver. Reduced words longer than kMaxLocateLength are reported
    // absent, since their matrices are too inaccurate to trust.
    std::optional<VertexId> locate(std::span<const Letter> letters) const;
    std::optional<VertexId> locate(const Word& w) const { return locate(w.letters()); }
    // Lookup at the build tolerance, without word-problem confirmation.
    std::optional<VertexId> locate_unchecked(const Mobius& m) const;
    // Walks the letters from `start` along ball edges; nullopt if a step leaves the ball.
    std::optional<VertexId> walk(VertexId start, std::span<const Letter> letters) const;
    // Throws TruncationError when the element is outside the ball.
    VertexId at(std::string_view word) const;

    void save(const std::filesystem::path& file) const;
    // Throws Error on any corruption or header mismatch.
    static CayleyBall load(const std::filesystem::path& file, const BallOptions& options);
    static std::filesystem::path cache_file(const std::filesystem::path& dir, const BallOptions& options);
    // Loads the cached ball keyed by (R, tolerance) or rebuilds and rewrites it.
    static CayleyBall load_or_build(const std::filesystem::path& dir, const BallOptions& options,
                                    bool* rebuilt = nullptr);

private:
    struct CellKey {
        std::int64_t x;
        std::int64_t y;
        bool operator==(const CellKey&) const = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& k) const noexcept {
            return std::hash<std::int64_t>{}(k.x * 0x9E3779B97F4A7C15LL ^ (k.y + 0x632BE59BD9B4E019LL));
        }
    };

    std::optional<VertexId> lookup(const HyperboloidXY& p, long double tol) const;
    void insert_cell(VertexId v);
    VertexId add_vertex(VertexId parent, Letter g, int depth, const Mobius& m);

    int radius_ = 0;
    int margin_ = 0;
    double tolerance_ = 1e-6;
    long double max_chart_norm_ = 0.0L;
    std::vector<VertexId> parent_;
    std::vector<Letter> last_;
    std::vector<std::uint8_t> depth_;
    std::vector<Adjacency> adj_;
    std::vector<HyperboloidXY> xy_;
    std::vector<DiskPoint> disk_;
    std::vector<std::size_t> sphere_start_;
    std::unordered_map<CellKey, VertexId, CellHash> cells_;
};

}  // namespace ctlab
