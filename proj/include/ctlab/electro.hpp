#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctlab/cayley_ball.hpp"
#include "ctlab/geometry.hpp"
#include "ctlab/path.hpp"
#include "ctlab/search.hpp"

namespace ctlab {

/// The electrocuted curve: one of the generators a or c.
struct CurveClass {
    Letter sigma = Letter::a;

    static CurveClass parse(std::string_view name);  // "a" or "c"; throws ConfigError
    char name() const { return to_char(sigma); }
    bool operator==(const CurveClass&) const = default;
};

using SetId = std::uint32_t;
inline constexpr SetId kNoSet = ~SetId{0};

/// Intersection of one coset g<sigma> with the ball.
struct QCSet {
    VertexId rep = kNoVertex;          // smallest-index member; its word is the coset id
    std::vector<VertexId> members;     // ordered by exponent
    std::vector<int> exponents;        // members[i] = rep * sigma^exponents[i]
};

// Enumerates the cosets of <sigma> meeting the ball, ordered by representative.
std::vector<QCSet> lifts_of(const CayleyBall& ball, CurveClass curve);

/// Ball with the sigma-labelled edges set to weight zero.
class ElectricSpace {
public:
    ElectricSpace(const CayleyBall& ball, CurveClass curve);

    const CayleyBall& ball() const { return *ball_; }
    CurveClass curve() const { return curve_; }
    Letter sigma() const { return curve_.sigma; }
    const std::vector<QCSet>& sets() const { return sets_; }
    const QCSet& set(SetId s) const { return sets_[s]; }
    SetId set_of(VertexId v) const { return set_of_[v]; }
    // Exponent of v relative to its set's representative.
    int exponent_of(VertexId v) const { return exponent_[v]; }
    std::optional<SetId> find_set(const Word& coset_id) const;
    bool is_sigma(Letter g) const { return g == curve_.sigma || g == inverse(curve_.sigma); }

    std::size_t size() const { return ball_->size(); }
    template <class F>
    void for_each_edge(VertexId u, F&& f) const {
        const auto& nb = ball_->neighbors(u);
        for (int i = 0; i < kLetterCount; ++i) {
            if (nb[i] != kNoVertex) f(nb[i], is_sigma(letter_at(i)) ? 0 : 1);
        }
    }

private:
    const CayleyBall* ball_;
    CurveClass curve_;
    std::vector<QCSet> sets_;
    std::vector<SetId> set_of_;
    std::vector<int> exponent_;
};

/// Maximal run of consecutive path vertices inside one set.
struct SetVisit {
    SetId set = kNoSet;
    std::size_t first = 0;  // index of the entry vertex in the path
    std::size_t last = 0;   // index of the exit vertex
    VertexId entry = kNoVertex;
    VertexId exit = kNoVertex;
    bool operator==(const SetVisit&) const = default;
};

struct EPath {
    GPath path;
    std::vector<SetVisit> visits;
    int electric_length() const { return path.length(); }
};

std::vector<SetVisit> visit_log(const ElectricSpace& es, const GPath& path);
// Re-weights a vertex path under the electric metric and attaches its visit log.
EPath make_epath(const ElectricSpace& es, const std::vector<VertexId>& vertices);

int electric_dist(const ElectricSpace& es, VertexId u, VertexId v);

// Among paths realising d_e, the one with fewest edges, then shortlex-least letters.
EPath electric_geodesic(const ElectricSpace& es, VertexId u, VertexId v);

struct BacktrackReport {
    bool ok = true;
    SetId set = kNoSet;
    std::size_t index = 0;  // path index where the violation shows
    std::string reason;
};

// eps = 0: no set is entered twice, and each in-set run is a monotone sigma-run.
// eps = 1: additionally, for each visited set H, the path indices lying in the
// 1-neighbourhood of H form one contiguous block. `cyclic` treats the path as a loop.
BacktrackReport validate_no_backtracking(const ElectricSpace& es, const EPath& ep, int eps = 0, bool cyclic = false);

// Replaces every in-set run by the graph geodesic between its entry and exit.
GPath electro_ambient(const ElectricSpace& es, const EPath& ep);

struct CoboundednessReport {
    int D = 0;
    SetId onto = kNoSet;  // worst pair: projection of `from` onto `onto`
    SetId from = kNoSet;
    std::size_t pairs = 0;
};

struct PairProjection {
    SetId onto;
    SetId from;
    int diameter;
};

// Per ordered pair of distinct sets, the diameter of the nearest-point image
// of `from` on `onto`. Only members within `member_radius` of the identity
// are projected and only sets with such members take part (default: trusted radius).
std::vector<PairProjection> projection_diameters(const ElectricSpace& es, int member_radius = -1, int jobs = 1);
CoboundednessReport coboundedness(const ElectricSpace& es, int member_radius = -1, int jobs = 1);

struct PenetrationRow {
    SetId set = kNoSet;
    bool in_beta = false;
    bool in_gamma = false;
    int entry_gap = 0;   // d(entry_beta, entry_gamma) when met by both
    int exit_gap = 0;
    int solo_length = 0; // sigma-length of the crossing when met by one path only
};

// A path meets a set when it runs along at least one sigma-edge inside it.
struct PenetrationReport {
    std::vector<PenetrationRow> rows;  // ordered by set id
    int max_entry_gap = 0;
    int max_exit_gap = 0;
    int max_solo_length = 0;
};

PenetrationReport penetration_compare(const ElectricSpace& es, const EPath& beta, const GPath& gamma);

// Hyperbolic length of a closed non-backtracking loop with in-set runs
// replaced by interpolating geodesics.
int loop_hyperbolic_length(const ElectricSpace& es, const EPath& loop);

struct TrackingSample {
    int electric_to_geodesic = 0;   // max d_e from electric-geodesic vertices to the graph geodesic
    int geodesic_to_ambient = 0;    // max d from graph-geodesic vertices to ambient path plus visited sets
};

TrackingSample tracking(const ElectricSpace& es, VertexId u, VertexId v);

HyperbolicityReport estimate_electric_delta(const ElectricSpace& es, std::size_t samples, std::uint64_t seed,
                                            int jobs = 1);

}  // namespace ctlab
