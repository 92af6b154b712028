#include "ctlab/fuchsian.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ctlab {

namespace {

using Complex = Mobius::Complex;

Mobius translation(long double theta, long double distance) {
    return {Complex(std::cosh(distance / 2), 0.0L), std::polar(std::sinh(distance / 2), theta)};
}

Mobius rotation(long double angle) { return {std::polar(1.0L, angle / 2), Complex(0.0L, 0.0L)}; }

// Maps side i of the octagon onto side j and the octagon onto its neighbour across side j.
Mobius side_pairing(int from, int to) {
    const long double step = std::numbers::pi_v<long double> / 4;
    const long double target = step * to;
    const long double source = step * from;
    return translation(target, 2 * octagon_inradius()) *
           rotation(target + std::numbers::pi_v<long double> - source);
}

std::array<Mobius, kLetterCount> make_generators() {
    std::array<Mobius, kLetterCount> g{};
    g[index_of(Letter::a)] = side_pairing(2, 0);
    g[index_of(Letter::b)] = side_pairing(1, 3);
    g[index_of(Letter::c)] = side_pairing(6, 4);
    g[index_of(Letter::d)] = side_pairing(5, 7);
    for (int i = 0; i < kLetterCount; i += 2) g[i + 1] = g[i].inverse();
    return g;
}

}  // namespace

long double octagon_inradius() {
    // cosh(r) = cot(pi/8) for the regular octagon with interior angle pi/4.
    return std::acosh(1.0L / std::tan(std::numbers::pi_v<long double> / 8));
}

Mobius operator*(const Mobius& lhs, const Mobius& rhs) {
    return {lhs.alpha * rhs.alpha + lhs.beta * std::conj(rhs.beta),
            lhs.alpha * rhs.beta + lhs.beta * std::conj(rhs.alpha)};
}

DiskPoint Mobius::origin_image() const {
    const Complex z = beta / std::conj(alpha);
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

HyperboloidXY Mobius::origin_xy() const {
    // X + iY = 2z / (1 - |z|^2) = 2 alpha beta for z = beta / conj(alpha).
    const Complex xy = 2.0L * alpha * beta;
    return {xy.real(), xy.imag()};
}

long double Mobius::displacement() const {
    // cosh(d) = 1 + 2|z|^2/(1-|z|^2) = |alpha|^2 + |beta|^2.
    return std::acosh(std::norm(alpha) + std::norm(beta));
}

const Mobius& generator_matrix(Letter x) {
    static const std::array<Mobius, kLetterCount> table = make_generators();
    return table[index_of(x)];
}

Mobius word_matrix(std::span<const Letter> letters) {
    Mobius m;
    for (Letter x : letters) m = m * generator_matrix(x);
    return m;
}

}  // namespace ctlab
