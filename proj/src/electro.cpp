#include "ctlab/electro.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

constexpr std::uint32_t kNoChain = ~std::uint32_t{0};

struct ChainLink {
    std::uint32_t to;
    int offset;  // exponent of the target chain's start relative to this chain's start
};

}  // namespace

CurveClass CurveClass::parse(std::string_view name) {
    if (name == "a") return CurveClass{Letter::a};
    if (name == "c") return CurveClass{Letter::c};
    throw ConfigError("unsupported curve '" + std::string(name) + "' (expected a or c)");
}

std::vector<QCSet> lifts_of(const CayleyBall& ball, CurveClass curve) {
    const Letter s = curve.sigma;
    const Letter s_inv = inverse(s);
    const std::size_t n = ball.size();

    // Maximal sigma-runs inside the ball.
    std::vector<std::uint32_t> chain_of(n, kNoChain);
    std::vector<int> pos(n, 0);
    std::vector<std::vector<VertexId>> chains;
    for (VertexId v = 0; v < n; ++v) {
        if (chain_of[v] != kNoChain) continue;
        VertexId start = v;
        while (ball.neighbor(start, s_inv) != kNoVertex) start = ball.neighbor(start, s_inv);
        const auto c = static_cast<std::uint32_t>(chains.size());
        chains.emplace_back();
        for (VertexId x = start; x != kNoVertex; x = ball.neighbor(x, s)) {
            chain_of[x] = c;
            pos[x] = static_cast<int>(chains[c].size());
            chains[c].push_back(x);
        }
    }

    // Runs of one coset can be separated by elements outside the ball; find
    // them through the disk coordinates of rep * sigma^k and confirm with the
    // word problem. |k| <= 2R + 1 covers every pair of members.
    const int bound = 2 * ball.radius() + 1;
    std::vector<Mobius> powers(2 * bound + 1);
    powers[bound] = Mobius{};
    for (int k = 1; k <= bound; ++k) {
        powers[bound + k] = powers[bound + k - 1] * generator_matrix(s);
        powers[bound - k] = powers[bound - k + 1] * generator_matrix(s_inv);
    }
    std::vector<std::vector<ChainLink>> links(chains.size());
    for (std::uint32_t c = 0; c < chains.size(); ++c) {
        const VertexId start = chains[c].front();
        const int len = static_cast<int>(chains[c].size());
        const Mobius m = word_matrix(ball.letters(start));
        std::optional<Word> start_word;
        for (int k = -bound; k <= bound; ++k) {
            if (k >= 0 && k < len) continue;
            const auto hit = ball.locate_unchecked(m * powers[bound + k]);
            if (!hit || chain_of[*hit] == c) continue;
            if (!start_word) start_word = ball.word(start);
            if (!same_coset(*start_word, ball.word(*hit), s, bound)) continue;
            const int offset = k - pos[*hit];
            links[c].push_back({chain_of[*hit], offset});
            links[chain_of[*hit]].push_back({c, -offset});
        }
    }

    std::vector<char> done(chains.size(), 0);
    std::vector<int> chain_offset(chains.size(), 0);
    std::vector<QCSet> sets;
    for (std::uint32_t c = 0; c < chains.size(); ++c) {
        if (done[c]) continue;
        std::vector<std::uint32_t> component = {c};
        done[c] = 1;
        for (std::size_t i = 0; i < component.size(); ++i) {
            const auto cur = component[i];
            for (const auto& link : links[cur]) {
                const int expected = chain_offset[cur] + link.offset;
                if (done[link.to]) {
                    if (chain_offset[link.to] != expected) throw Error("inconsistent coset exponents");
                    continue;
                }
                done[link.to] = 1;
                chain_offset[link.to] = expected;
                component.push_back(link.to);
            }
        }
        std::vector<std::pair<int, VertexId>> members;
        for (auto cc : component) {
            for (std::size_t i = 0; i < chains[cc].size(); ++i) {
                members.emplace_back(chain_offset[cc] + static_cast<int>(i), chains[cc][i]);
            }
        }
        std::sort(members.begin(), members.end());
        QCSet set;
        set.rep = std::min_element(members.begin(), members.end(), [](auto& x, auto& y) {
                      return x.second < y.second;
                  })->second;
        int rep_exp = 0;
        for (auto& [e, v] : members) {
            if (v == set.rep) rep_exp = e;
        }
        for (auto& [e, v] : members) {
            if (!set.exponents.empty() && set.exponents.back() == e - rep_exp) {
                throw Error("two coset members share an exponent");
            }
            set.members.push_back(v);
            set.exponents.push_back(e - rep_exp);
        }
        sets.push_back(std::move(set));
    }
    std::sort(sets.begin(), sets.end(), [](const QCSet& x, const QCSet& y) { return x.rep < y.rep; });
    return sets;
}

ElectricSpace::ElectricSpace(const CayleyBall& ball, CurveClass curve)
    : ball_(&ball), curve_(curve), sets_(lifts_of(ball, curve)), set_of_(ball.size(), kNoSet),
      exponent_(ball.size(), 0) {
    for (SetId s = 0; s < sets_.size(); ++s) {
        const auto& set = sets_[s];
        for (std::size_t i = 0; i < set.members.size(); ++i) {
            if (set_of_[set.members[i]] != kNoSet) throw Error("cosets overlap");
            set_of_[set.members[i]] = s;
            exponent_[set.members[i]] = set.exponents[i];
        }
    }
}

std::optional<SetId> ElectricSpace::find_set(const Word& coset_id) const {
    const auto v = ball_->locate(coset_id);
    if (!v || sets_[set_of_[*v]].rep != *v) return std::nullopt;
    return set_of_[*v];
}

std::vector<SetVisit> visit_log(const ElectricSpace& es, const GPath& path) {
    std::vector<SetVisit> log;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const VertexId v = path.vertices[i];
        const SetId s = es.set_of(v);
        if (!log.empty() && log.back().set == s && log.back().last + 1 == i) {
            log.back().last = i;
            log.back().exit = v;
        } else {
            log.push_back({s, i, i, v, v});
        }
    }
    return log;
}

EPath make_epath(const ElectricSpace& es, const std::vector<VertexId>& vertices) {
    EPath ep;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        std::uint8_t w = 0;
        if (i > 0) {
            const auto& nb = es.ball().neighbors(vertices[i - 1]);
            const auto it = std::find(nb.begin(), nb.end(), vertices[i]);
            if (it == nb.end()) throw PreconditionError("path vertices are not adjacent");
            w = es.is_sigma(letter_at(static_cast<int>(it - nb.begin()))) ? 0 : 1;
        }
        ep.path.push(vertices[i], w);
    }
    ep.visits = visit_log(es, ep.path);
    return ep;
}

int electric_dist(const ElectricSpace& es, VertexId u, VertexId v) { return distance(es, u, v); }

EPath electric_geodesic(const ElectricSpace& es, VertexId u, VertexId v) {
    if (u == v) return make_epath(es, {u});
    const auto field = lex_distances(es, v, u);
    if (field[u] == kLexUnreached) throw TruncationError("vertices not connected inside the ball");
    EPath ep;
    ep.path = descend(es, field, u, lex_cost);
    ep.visits = visit_log(es, ep.path);
    return ep;
}

BacktrackReport validate_no_backtracking(const ElectricSpace& es, const EPath& ep, int eps, bool cyclic) {
    BacktrackReport report;
    const auto& verts = ep.path.vertices;
    auto fail = [&](SetId s, std::size_t index, std::string reason) {
        report.ok = false;
        report.set = s;
        report.index = index;
        report.reason = std::move(reason);
        return report;
    };
    std::vector<SetVisit> runs = ep.visits;
    const bool wrap = cyclic && runs.size() > 1 && runs.front().set == runs.back().set;

    std::set<SetId> seen;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (wrap && r == runs.size() - 1) break;
        if (!seen.insert(runs[r].set).second) return fail(runs[r].set, runs[r].first, "set entered twice");
    }

    auto monotone = [&](const std::vector<std::size_t>& idx) {
        int dir = 0;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            const int step = es.exponent_of(verts[idx[k]]) - es.exponent_of(verts[idx[k - 1]]);
            if (step != 1 && step != -1) return false;
            if (dir != 0 && step != dir) return false;
            dir = step;
        }
        return true;
    };
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<std::size_t> idx;
        if (wrap && r == 0) continue;
        if (wrap && r == runs.size() - 1) {
            for (std::size_t i = runs[r].first; i <= runs[r].last; ++i) idx.push_back(i);
            for (std::size_t i = runs[0].first + 1; i <= runs[0].last; ++i) idx.push_back(i);
        } else {
            for (std::size_t i = runs[r].first; i <= runs[r].last; ++i) idx.push_back(i);
        }
        if (!monotone(idx)) return fail(runs[r].set, runs[r].first, "in-set run is not a sigma-geodesic");
    }

    if (eps >= 1) {
        const std::size_t n = cyclic && verts.size() > 1 ? verts.size() - 1 : verts.size();
        std::map<SetId, std::vector<std::size_t>> near;
        for (std::size_t i = 0; i < n; ++i) {
            std::set<SetId> around = {es.set_of(verts[i])};
            for (VertexId w : es.ball().neighbors(verts[i])) {
                if (w != kNoVertex) around.insert(es.set_of(w));
            }
            for (SetId s : around) near[s].push_back(i);
        }
        for (const auto& run : runs) {
            const auto& idx = near[run.set];
            std::size_t breaks = 0;
            for (std::size_t k = 1; k < idx.size(); ++k) breaks += (idx[k] != idx[k - 1] + 1);
            if (cyclic && breaks == 1 && idx.front() == 0 && idx.back() == n - 1) breaks = 0;
            if (breaks > 0) return fail(run.set, idx.front(), "path leaves and re-enters the 1-neighbourhood");
        }
    }
    return report;
}

GPath electro_ambient(const ElectricSpace& es, const EPath& ep) {
    if (ep.path.empty()) throw PreconditionError("empty electric path");
    if (ep.visits != visit_log(es, ep.path)) throw PreconditionError("malformed visit log");
    GPath out;
    for (const auto& visit : ep.visits) {
        const GPath seg = geodesic(es.ball(), visit.entry, visit.exit);
        for (VertexId v : seg.vertices) out.push(v, 1);
    }
    return out;
}

std::vector<PairProjection> projection_diameters(const ElectricSpace& es, int member_radius, int jobs) {
    const auto& ball = es.ball();
    const int radius = member_radius < 0 ? ball.trusted_radius() : member_radius;
    const std::size_t inner = ball.ball_prefix(radius);
    std::vector<SetId> active;
    {
        std::set<SetId> s;
        for (VertexId v = 0; v < inner; ++v) s.insert(es.set_of(v));
        active.assign(s.begin(), s.end());
    }
    std::vector<std::vector<PairProjection>> per(active.size());
    parallel_for(active.size(), jobs, [&](std::size_t i) {
        const SetId onto = active[i];
        const auto field = nearest_sources(BallGraph{ball}, es.set(onto).members);
        for (SetId from : active) {
            if (from == onto) continue;
            int lo = 0, hi = 0;
            bool any = false;
            for (VertexId y : es.set(from).members) {
                if (y >= inner) continue;
                const int e = es.exponent_of(field.label[y]);
                lo = any ? std::min(lo, e) : e;
                hi = any ? std::max(hi, e) : e;
                any = true;
            }
            per[i].push_back({onto, from, hi - lo});
        }
    });
    std::vector<PairProjection> out;
    for (auto& p : per) out.insert(out.end(), p.begin(), p.end());
    return out;
}

CoboundednessReport coboundedness(const ElectricSpace& es, int member_radius, int jobs) {
    const auto pairs = projection_diameters(es, member_radius, jobs);
    if (pairs.empty()) throw PreconditionError("coboundedness needs two sets with interior members");
    CoboundednessReport report;
    report.pairs = pairs.size();
    for (const auto& p : pairs) {
        if (report.onto == kNoSet || p.diameter > report.D) {
            report.D = p.diameter;
            report.onto = p.onto;
            report.from = p.from;
        }
    }
    return report;
}

PenetrationReport penetration_compare(const ElectricSpace& es, const EPath& beta, const GPath& gamma) {
    if (beta.path.empty() || gamma.empty() || beta.path.front() != gamma.front() ||
        beta.path.back() != gamma.back()) {
        throw PreconditionError("penetration_compare: endpoint mismatch");
    }
    struct Span {
        VertexId entry = kNoVertex;
        VertexId exit = kNoVertex;
    };
    auto spans = [&](const std::vector<SetVisit>& log) {
        std::map<SetId, Span> out;
        for (const auto& v : log) {
            if (v.last == v.first) continue;  // touching a set at one vertex is not a penetration
            auto [it, fresh] = out.try_emplace(v.set, Span{v.entry, v.exit});
            if (!fresh) it->second.exit = v.exit;
        }
        return out;
    };
    const auto in_beta = spans(beta.visits);
    const auto in_gamma = spans(visit_log(es, gamma));
    std::set<SetId> all;
    for (auto& [s, _] : in_beta) all.insert(s);
    for (auto& [s, _] : in_gamma) all.insert(s);

    PenetrationReport report;
    for (SetId s : all) {
        PenetrationRow row;
        row.set = s;
        const auto b = in_beta.find(s);
        const auto g = in_gamma.find(s);
        row.in_beta = b != in_beta.end();
        row.in_gamma = g != in_gamma.end();
        if (row.in_beta && row.in_gamma) {
            row.entry_gap = dist(es.ball(), b->second.entry, g->second.entry);
            row.exit_gap = dist(es.ball(), b->second.exit, g->second.exit);
        } else {
            const Span& sp = row.in_beta ? b->second : g->second;
            row.solo_length = std::abs(es.exponent_of(sp.exit) - es.exponent_of(sp.entry));
        }
        report.max_entry_gap = std::max(report.max_entry_gap, row.entry_gap);
        report.max_exit_gap = std::max(report.max_exit_gap, row.exit_gap);
        report.max_solo_length = std::max(report.max_solo_length, row.solo_length);
        report.rows.push_back(row);
    }
    return report;
}

int loop_hyperbolic_length(const ElectricSpace& es, const EPath& loop) {
    if (loop.path.empty() || loop.path.front() != loop.path.back()) {
        throw PreconditionError("loop_hyperbolic_length: path is not closed");
    }
    const auto check = validate_no_backtracking(es, loop, 0, true);
    if (!check.ok) throw PreconditionError("loop_hyperbolic_length: " + check.reason);
    return electro_ambient(es, loop).hyperbolic_length();
}

TrackingSample tracking(const ElectricSpace& es, VertexId u, VertexId v) {
    const EPath beta = electric_geodesic(es, u, v);
    const GPath gamma = geodesic(es.ball(), u, v);
    TrackingSample t;
    {
        const auto d = distances(es, gamma.vertices, kUnreached, beta.path.vertices);
        for (VertexId x : beta.path.vertices) t.electric_to_geodesic = std::max(t.electric_to_geodesic, d[x]);
    }
    {
        std::vector<VertexId> hull = electro_ambient(es, beta).vertices;
        for (const auto& visit : beta.visits) {
            const auto& m = es.set(visit.set).members;
            hull.insert(hull.end(), m.begin(), m.end());
        }
        const auto d = distances(BallGraph{es.ball()}, hull, kUnreached, gamma.vertices);
        for (VertexId x : gamma.vertices) t.geodesic_to_ambient = std::max(t.geodesic_to_ambient, d[x]);
    }
    return t;
}

HyperbolicityReport estimate_electric_delta(const ElectricSpace& es, std::size_t samples, std::uint64_t seed,
                                            int jobs) {
    if (samples == 0) throw PreconditionError("estimate_electric_delta needs at least one sample");
    const auto& ball = es.ball();
    const std::size_t pool = ball.ball_prefix(ball.trusted_radius());
    std::vector<int> defect(samples);
    std::vector<std::array<VertexId, 3>> tri(samples);
    parallel_for(samples, jobs, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        for (auto& v : tri[i]) v = static_cast<VertexId>(uniform_below(rng, pool));
        const auto [x, y, z] = tri[i];
        defect[i] = triangle_defect(es, electric_geodesic(es, x, y).path, electric_geodesic(es, y, z).path,
                                    electric_geodesic(es, z, x).path);
    });
    HyperbolicityReport report;
    report.sample_count = samples;
    report.radius_used = ball.radius();
    for (std::size_t i = 0; i < samples; ++i) {
        if (i == 0 || defect[i] > report.delta) {
            report.delta = defect[i];
            report.witness = tri[i];
        }
    }
    return report;
}

}  // namespace ctlab
