#pragma once

#include <cstdint>
#include <optional>

#include "ctlab/electro.hpp"

namespace ctlab {

/// Dehn twist T^n about the curve carried by sigma.
///
/// For sigma = a the map sends b -> b a^n and fixes a, c, d; for sigma = c it
/// sends d -> d c^n. Both preserve the relator, so they are automorphisms.
struct TwistMap {
    CurveClass curve;
    int n = 0;

    // The letter moved by the twist (b or d).
    Letter moved() const { return curve.sigma == Letter::a ? Letter::b : Letter::d; }
    Letters image(Letter x) const;
    // Substitutes and reduces.
    Word apply(std::span<const Letter> w) const;
    Word apply(const Word& w) const { return apply(w.letters()); }
    TwistMap inverse() const { return {curve, -n}; }
    // this after other; only twists about the same curve compose to a twist.
    TwistMap after(const TwistMap& other) const;
};

// Image of every ball vertex, kNoVertex where the image leaves the ball.
VertexMap ball_map(const CayleyBall& ball, const TwistMap& tw, int jobs = 1);

// Walks the image of a vertex path starting from `start`, edge by edge along
// ball edges. nullopt if some image edge leaves the ball.
std::optional<GPath> image_path(const CayleyBall& ball, const TwistMap& tw, VertexId start,
                                const std::vector<VertexId>& path);

struct DistortionReport {
    int max_defect = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    VertexId u = kNoVertex;
    VertexId v = kNoVertex;
};

// |d_e(phi u, phi v) - d_e(u, v)| over sampled trusted pairs. A sample counts
// only when the electric geodesic and its image, and the image geodesic and its
// preimage, all stay inside the ball.
DistortionReport electric_distortion(const ElectricSpace& es, const TwistMap& tw, std::size_t samples,
                                     std::uint64_t seed);

// |d(phi u, phi v) - d(u, v)| over sampled trusted pairs with trusted images.
DistortionReport hyperbolic_distortion(const CayleyBall& ball, const TwistMap& tw, std::size_t samples,
                                       std::uint64_t seed);

/// The pair (1, t) where t is the moved letter; its image is t sigma^n, whose
/// length is certified exactly by the abelianization bound.
struct TwistWitness {
    Word x;
    Word y;
    Word image_y;
    int before = 0;
    int after = 0;
};
TwistWitness hyperbolic_witness(const TwistMap& tw);

// Canonical path between the images of lambda's endpoints.
GPath induced_geodesic(const CayleyBall& ball, const VertexMap& phi, const GPath& lambda);
EPath induced_electric_geodesic(const ElectricSpace& es, const VertexMap& phi, const GPath& lambda);

}  // namespace ctlab
