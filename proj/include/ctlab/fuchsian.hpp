#pragma once

#include <complex>
#include <span>

#include "ctlab/word.hpp"

namespace ctlab {

struct DiskPoint {
    double x = 0.0;
    double y = 0.0;
};

// Spatial coordinates (X, Y) of the hyperboloid model. The chart is expanding:
// |delta(X,Y)| >= 2 sinh(d/2) >= d for points at hyperbolic distance d.
struct HyperboloidXY {
    long double x = 0.0L;
    long double y = 0.0L;
};

/// Element of SU(1,1) acting on the Poincare disk, z -> (alpha z + beta) / (conj(beta) z + conj(alpha)).
struct Mobius {
    using Complex = std::complex<long double>;
    Complex alpha{1.0L, 0.0L};
    Complex beta{0.0L, 0.0L};

    Mobius inverse() const { return {std::conj(alpha), -beta}; }
    DiskPoint origin_image() const;
    HyperboloidXY origin_xy() const;
    // Hyperbolic distance from the disk centre to its image.
    long double displacement() const;
};

Mobius operator*(const Mobius& lhs, const Mobius& rhs);

// Side pairings of the regular octagon with angles pi/4 (the {8,8} tiling),
// labelled so that a b A B c d C D is the identity.
const Mobius& generator_matrix(Letter x);
Mobius word_matrix(std::span<const Letter> letters);

// Inradius of the fundamental octagon; adjacent orbit points are 2*inradius apart.
long double octagon_inradius();

}  // namespace ctlab
