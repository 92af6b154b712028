#include "ctlab/twist.hpp"

#include <cstdlib>
#include <random>

#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

Letter letter_between(const CayleyBall& ball, VertexId x, VertexId y) {
    const auto& nb = ball.neighbors(x);
    for (int i = 0; i < kLetterCount; ++i) {
        if (nb[i] == y) return letter_at(i);
    }
    throw PreconditionError("path vertices are not adjacent");
}

std::pair<VertexId, VertexId> sample_pair(const CayleyBall& ball, std::uint64_t seed, std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const auto n = ball.ball_prefix(ball.trusted_radius());
    const auto u = static_cast<VertexId>(uniform_below(rng, n));
    const auto v = static_cast<VertexId>(uniform_below(rng, n));
    return {u, v};
}

bool all_trusted(const CayleyBall& ball, const std::vector<VertexId>& vs) {
    for (VertexId v : vs) {
        if (!ball.trusted(v)) return false;
    }
    return true;
}

}  // namespace

Letters TwistMap::image(Letter x) const {
    const Letter t = moved();
    if (x == t) {
        Letters out{t};
        const Word p = power(curve.sigma, n);
        out.insert(out.end(), p.letters().begin(), p.letters().end());
        return out;
    }
    if (x == ctlab::inverse(t)) {
        const Word p = power(curve.sigma, -n);
        Letters out(p.letters().begin(), p.letters().end());
        out.push_back(ctlab::inverse(t));
        return out;
    }
    return {x};
}

Word TwistMap::apply(std::span<const Letter> w) const {
    Letters out;
    out.reserve(w.size() * (1 + static_cast<std::size_t>(std::abs(n))));
    for (Letter x : w) {
        const auto img = image(x);
        out.insert(out.end(), img.begin(), img.end());
    }
    return reduce(out);
}

TwistMap TwistMap::after(const TwistMap& other) const {
    if (!(curve == other.curve)) throw PreconditionError("twists about different curves do not compose to a twist");
    return {curve, n + other.n};
}

VertexMap ball_map(const CayleyBall& ball, const TwistMap& tw, int jobs) {
    VertexMap out(ball.size(), kNoVertex);
    const Letter t = tw.moved();
    const int sigma_axis = index_of(tw.curve.sigma) / 2;
    parallel_for(ball.size(), jobs, [&](std::size_t i) {
        const auto v = static_cast<VertexId>(i);
        const auto w = ball.letters(v);
        // Cheap rejection: the image's abelianization is known without reducing.
        auto ab = abelianization(w);
        int moved = 0;
        for (Letter x : w) moved += (x == t) - (x == inverse(t));
        ab[sigma_axis] += tw.n * moved;
        int bound = 0;
        for (int c : ab) bound += std::abs(c);
        if (bound > ball.radius()) return;
        if (auto hit = ball.locate(tw.apply(w))) out[v] = *hit;
    });
    return out;
}

std::optional<GPath> image_path(const CayleyBall& ball, const TwistMap& tw, VertexId start,
                                const std::vector<VertexId>& path) {
    GPath out = GPath::single(start);
    VertexId cur = start;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Letter g = letter_between(ball, path[i], path[i + 1]);
        for (Letter x : tw.image(g)) {
            cur = ball.neighbor(cur, x);
            if (cur == kNoVertex) return std::nullopt;
            out.push(cur, 1);
        }
    }
    return out;
}

DistortionReport electric_distortion(const ElectricSpace& es, const TwistMap& tw, std::size_t samples,
                                     std::uint64_t seed) {
    if (!(es.curve() == tw.curve)) throw PreconditionError("electric space and twist use different curves");
    if (samples == 0) throw PreconditionError("electric_distortion needs at least one sample");
    const auto& ball = es.ball();
    const VertexMap phi = ball_map(ball, tw);
    DistortionReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto [u, v] = sample_pair(ball, seed, i);
        const VertexId fu = phi[u];
        const VertexId fv = phi[v];
        bool usable = fu != kNoVertex && fv != kNoVertex && ball.trusted(fu) && ball.trusted(fv);
        EPath beta, beta_img;
        if (usable) {
            beta = electric_geodesic(es, u, v);
            beta_img = electric_geodesic(es, fu, fv);
            usable = all_trusted(ball, beta.path.vertices) && all_trusted(ball, beta_img.path.vertices);
        }
        if (usable) {
            const auto fwd = image_path(ball, tw, fu, beta.path.vertices);
            const auto back = image_path(ball, tw.inverse(), u, beta_img.path.vertices);
            usable = fwd && back && fwd->back() == fv && back->back() == v;
        }
        if (!usable) {
            ++report.skipped;
            continue;
        }
        ++report.used;
        const int c = std::abs(beta_img.electric_length() - beta.electric_length());
        if (report.u == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.u = u;
            report.v = v;
        }
    }
    return report;
}

DistortionReport hyperbolic_distortion(const CayleyBall& ball, const TwistMap& tw, std::size_t samples,
                                       std::uint64_t seed) {
    if (samples == 0) throw PreconditionError("hyperbolic_distortion needs at least one sample");
    const VertexMap phi = ball_map(ball, tw);
    DistortionReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto [u, v] = sample_pair(ball, seed, i);
        const VertexId fu = phi[u];
        const VertexId fv = phi[v];
        if (fu == kNoVertex || fv == kNoVertex || !ball.trusted(fu) || !ball.trusted(fv)) {
            ++report.skipped;
            continue;
        }
        ++report.used;
        const int c = std::abs(dist(ball, fu, fv) - dist(ball, u, v));
        if (report.u == kNoVertex || c > report.max_defect) {
            report.max_defect = c;
            report.u = u;
            report.v = v;
        }
    }
    return report;
}

TwistWitness hyperbolic_witness(const TwistMap& tw) {
    TwistWitness w;
    w.y = power(tw.moved(), 1);
    w.image_y = tw.apply(w.y);
    w.before = 1;
    w.after = abelian_length_bound(w.image_y.letters());
    // The bound is a lower bound on length and the word itself an upper bound.
    if (w.after != static_cast<int>(w.image_y.size())) throw Error("twist witness is not certified");
    return w;
}

GPath induced_geodesic(const CayleyBall& ball, const VertexMap& phi, const GPath& lambda) {
    if (lambda.empty()) throw PreconditionError("empty path");
    const VertexId a = phi[lambda.front()];
    const VertexId b = phi[lambda.back()];
    if (a == kNoVertex || b == kNoVertex) throw TruncationError("image endpoint outside the ball");
    return geodesic(ball, a, b);
}

EPath induced_electric_geodesic(const ElectricSpace& es, const VertexMap& phi, const GPath& lambda) {
    if (lambda.empty()) throw PreconditionError("empty path");
    const VertexId a = phi[lambda.front()];
    const VertexId b = phi[lambda.back()];
    if (a == kNoVertex || b == kNoVertex) throw TruncationError("image endpoint outside the ball");
    return electric_geodesic(es, a, b);
}

}  // namespace ctlab
