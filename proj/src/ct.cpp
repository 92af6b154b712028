#include "ctlab/ct.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>

#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

VertexId random_in(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return static_cast<VertexId>(lo + uniform_below(rng, hi - lo));
}

// Random outward walk of up to `steps` trusted edges from v. `first` receives
// the first vertex stepped to; the walk never starts through `avoid`.
VertexId walk_out(const CayleyBall& ball, std::mt19937_64& rng, VertexId v, int steps, VertexId avoid,
                  const std::function<bool(VertexId)>& keep, VertexId& first) {
    first = kNoVertex;
    for (int k = 0; k < steps; ++k) {
        std::vector<VertexId> out;
        for (VertexId w : ball.neighbors(v)) {
            if (w != kNoVertex && ball.depth(w) == ball.depth(v) + 1 && ball.trusted(w) && (k > 0 || w != avoid) &&
                (!keep || keep(w))) {
                out.push_back(w);
            }
        }
        if (out.empty()) break;
        v = out[uniform_below(rng, out.size())];
        if (k == 0) first = v;
    }
    return v;
}

// Length of a model path in the sheet metric of its electric sheets.
int sheet_length(const ModelManifold& m, int sheet, const std::vector<VertexId>& local) {
    if (!m.sheet(sheet).electric) return local.empty() ? 0 : static_cast<int>(local.size()) - 1;
    return make_epath(m.electric(m.sheet(sheet).curve), local).electric_length();
}

std::vector<VertexId> loop_erase(const std::vector<VertexId>& path) {
    std::vector<VertexId> out;
    std::unordered_map<VertexId, std::size_t> at;
    for (VertexId v : path) {
        if (auto it = at.find(v); it != at.end()) {
            for (std::size_t k = it->second + 1; k < out.size(); ++k) at.erase(out[k]);
            out.resize(it->second + 1);
            continue;
        }
        at.emplace(v, out.size());
        out.push_back(v);
    }
    return out;
}

template <class E>
[[noreturn]] void rethrow_with(const std::string& prefix, const E& e) {
    throw E(prefix + e.what());
}

}  // namespace

GPath make_test_geodesic(const CayleyBall& ball, int N, std::uint64_t seed, int attempts,
                         const std::function<bool(VertexId)>& endpoint_ok) {
    const int T = ball.trusted_radius();
    if (N < 0 || N > T - 1) throw PreconditionError("test geodesic distance must lie in [0, trusted radius - 1]");
    const std::size_t lo = N == 0 ? 0 : ball.ball_prefix(N - 1);
    const std::size_t hi = ball.ball_prefix(N);
    GPath best;
    for (int t = 0; t < attempts; ++t) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const VertexId c = random_in(rng, lo, hi);
        const int reach = T - N;
        VertexId fx = kNoVertex, fy = kNoVertex;
        const VertexId x = walk_out(ball, rng, c, 1 + static_cast<int>(uniform_below(rng, reach)), kNoVertex, endpoint_ok, fx);
        const VertexId y = walk_out(ball, rng, c, 1 + static_cast<int>(uniform_below(rng, reach)), fx, endpoint_ok, fy);
        if (x == y || (endpoint_ok && (!endpoint_ok(x) || !endpoint_ok(y)))) continue;
        GPath g = geodesic(ball, x, y);
        int low = std::numeric_limits<int>::max();
        bool ok = true;
        for (VertexId v : g.vertices) {
            ok = ok && ball.trusted(v);
            low = std::min(low, ball.depth(v));
        }
        if (ok && low == N && g.size() > best.size()) best = std::move(g);
    }
    if (best.empty()) {
        throw Error("no test geodesic at distance " + std::to_string(N) + " within " + std::to_string(attempts) +
                    " attempts");
    }
    return best;
}

AdmissiblePath join_the_dots(const ModelManifold& m, const Ladder& ladder, const Retraction& pi,
                             const std::vector<VertexId>& beta, int budget) {
    if (beta.empty()) throw PreconditionError("empty input path");
    const AdmissibleValidator val(m, ladder);
    std::vector<VertexId> dots;
    for (VertexId v : beta) {
        const VertexId d = pi(v);
        if (d == kNoVertex) throw PreconditionError("input path leaves the sheets carrying the ladder");
        dots.push_back(d);
    }

    AdmissiblePath res;
    std::vector<VertexId> out{dots[0]};
    auto pos = [&](int s, VertexId local) { return val.positions(s, local)->front(); };
    // Ladder vertices strictly after position i up to position j, lifted to sheet s.
    auto slice = [&](int s, std::size_t i, std::size_t j, std::vector<VertexId>& into) {
        const auto& p = ladder.at(s).vertices;
        if (i < j) {
            for (std::size_t k = i + 1; k <= j; ++k) into.push_back(m.global(s, p[k]));
        } else {
            for (std::size_t k = i; k-- > j;) into.push_back(m.global(s, p[k]));
        }
    };
    auto span = [](std::size_t i, std::size_t j) { return static_cast<int>(i > j ? i - j : j - i); };

    for (std::size_t k = 1; k < dots.size(); ++k) {
        const VertexId p = out.back();
        const VertexId q = dots[k];
        if (p == q) continue;
        const int sp = m.sheet_of(p);
        const int sq = m.sheet_of(q);
        if (sp == sq) {
            slice(sp, pos(sp, m.local(p)), pos(sp, m.local(q)), out);
            continue;
        }
        if (std::abs(sp - sq) != 1) throw PreconditionError("input path is not a model path");
        const int lo = std::min(sp, sq);
        const int hi = lo + 1;
        const VertexId pl = m.local(sp == lo ? p : q);
        const VertexId pu = m.local(sp == lo ? q : p);
        const std::size_t ipl = pos(lo, pl);
        const std::size_t ipu = pos(hi, pu);
        const auto& lam_lo = ladder.at(lo).vertices;
        const auto& lam_hi = ladder.at(hi).vertices;

        struct Choice {
            int cost = std::numeric_limits<int>::max();
            bool up = true;
            std::size_t at = 0;  // ladder position of the vertical edge's ladder end
        } best;
        for (std::size_t i = 0; i < lam_lo.size(); ++i) {
            const VertexId w = m.up(lo, lam_lo[i]);
            if (w == kNoVertex) continue;
            const int c = span(ipl, i) + 1 + val.gap(hi, w) + span(pos(hi, val.foot(hi, w)), ipu);
            if (c < best.cost) best = {c, true, i};
        }
        if (m.gap_kind(lo) != EdgeKind::twist) {
            for (std::size_t i = 0; i < lam_hi.size(); ++i) {
                const VertexId w = m.down(hi, lam_hi[i]);
                if (w == kNoVertex) continue;
                const int c = span(ipl, pos(lo, val.foot(lo, w))) + val.gap(lo, w) + 1 + span(i, ipu);
                if (c < best.cost) best = {c, false, i};
            }
        }
        if (best.cost == std::numeric_limits<int>::max()) {
            throw BridgeError("no vertical edge leaves the ladder across the gap between sheets " +
                              std::to_string(lo) + " and " + std::to_string(hi));
        }

        // Bridge from the lower dot to the upper dot.
        std::vector<VertexId> bridge{m.global(lo, pl)};
        int length = 1;
        if (best.up) {
            const VertexId x = lam_lo[best.at];
            const VertexId w = m.up(lo, x);
            const VertexId r = val.foot(hi, w);
            const auto conn = geodesic(m.ball(), w, r).vertices;
            length += sheet_length(m, hi, conn);
            slice(lo, ipl, best.at, bridge);
            for (VertexId v : conn) bridge.push_back(m.global(hi, v));
            slice(hi, pos(hi, r), ipu, bridge);
        } else {
            const VertexId y = lam_hi[best.at];
            const VertexId w = m.down(hi, y);
            const VertexId r = val.foot(lo, w);
            const auto conn = geodesic(m.ball(), r, w).vertices;
            length += sheet_length(m, lo, conn);
            slice(lo, ipl, pos(lo, r), bridge);
            for (std::size_t i = 1; i < conn.size(); ++i) bridge.push_back(m.global(lo, conn[i]));
            bridge.push_back(m.global(hi, y));
            slice(hi, best.at, ipu, bridge);
        }
        if (length > budget) {
            throw BridgeError("bridge across sheets " + std::to_string(lo) + "/" + std::to_string(hi) + " at step " +
                              std::to_string(k) + " has electric length " + std::to_string(length) +
                              ", budget " + std::to_string(budget));
        }
        ++res.bridges;
        res.max_bridge = std::max(res.max_bridge, length);
        if (sp == hi) std::reverse(bridge.begin(), bridge.end());
        // The bridge starts at p, which is already on the path.
        bridge.erase(std::unique(bridge.begin(), bridge.end()), bridge.end());
        out.insert(out.end(), bridge.begin() + 1, bridge.end());
    }

    res.vertices = loop_erase(out);
    res.report = val.validate(res.vertices);
    if (!res.report.ok) {
        auto raw = val.validate(out);
        if (!raw.ok) throw BridgeError("joined path is not admissible: " + res.report.reason);
        res.vertices = std::move(out);
        res.report = std::move(raw);
    }

    for (std::size_t i = 0; i < res.vertices.size();) {
        const int s = m.sheet_of(res.vertices[i]);
        std::size_t j = i;
        std::vector<VertexId> run;
        while (j < res.vertices.size() && m.sheet_of(res.vertices[j]) == s) run.push_back(m.local(res.vertices[j++]));
        if (m.sheet(s).electric) {
            const auto& es = m.electric(m.sheet(s).curve);
            res.backtracking_ok = res.backtracking_ok && validate_no_backtracking(es, make_epath(es, run)).ok;
        }
        i = j;
    }
    return res;
}

GPath ct_test_geodesic(const ModelManifold& m, int N, std::uint64_t seed) {
    auto survives = [&m](VertexId v) {
        for (int s = 0; s + 1 < m.sheet_count() && v != kNoVertex; ++s) v = m.up(s, v);
        return v != kNoVertex;
    };
    return make_test_geodesic(m.ball(), N, seed, 256, survives);
}

bool CTCurve::nondecreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].M_adm < rows[i - 1].M_adm || rows[i].M_geo < rows[i - 1].M_geo) return false;
    }
    return true;
}

int CTCurve::tracking() const {
    int t = 0;
    for (const auto& r : rows) t = std::max(t, r.tracking);
    return t;
}

CTCurve ct_curve(const ModelManifold& m, const std::vector<int>& Ns, const CTOptions& opt) {
    for (std::size_t i = 1; i < Ns.size(); ++i) {
        if (Ns[i] <= Ns[i - 1]) throw PreconditionError("N values must be strictly increasing");
    }
    const auto& ball = m.ball();
    const ModelGraph plain = m.graph(false);
    const VertexId p = m.global(0, 0);
    const auto dp = distances_from(plain, p);
    CTCurve curve;
    curve.rows.resize(Ns.size());
    parallel_for(Ns.size(), opt.jobs, [&](std::size_t i) {
        const int N = Ns[i];
        const std::string where = "N=" + std::to_string(N) + ": ";
        try {
            CTRow& row = curve.rows[i];
            row.N = N;
            row.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(N));
            const GPath lambda = ct_test_geodesic(m, N, row.seed);
            const Ladder L = build_ladder(m, lambda);
            if (L.truncated_at >= 0) throw TruncationError(L.truncation);
            row.ladder_blocks = L.built_blocks(m);
            const auto pi = Retraction::build(m, L);
            row.C_retract = retraction_constant(m, pi, opt.retract_samples, row.seed).C;
            const VertexId a = m.global(0, lambda.front());
            const VertexId z = m.global(0, lambda.back());
            const auto beta = model_geodesic(m, a, z, true);
            const auto adm = join_the_dots(m, L, pi, beta, 4 * row.C_retract + 8);
            row.electric_len = adm.report.electric_length;
            row.hyperbolic_len = adm.report.hyperbolic_length;
            row.M_adm = std::numeric_limits<int>::max();
            for (VertexId v : adm.vertices) row.M_adm = std::min(row.M_adm, dp[v]);
            const auto geo = model_geodesic(m, a, z, false);
            row.M_geo = std::numeric_limits<int>::max();
            for (VertexId v : geo) row.M_geo = std::min(row.M_geo, dp[v]);
            const auto d = distances(plain, std::span<const VertexId>(adm.vertices), kUnreached,
                                     std::span<const VertexId>(geo));
            for (VertexId v : geo) row.tracking = std::max(row.tracking, d[v]);
        } catch (const BridgeError& e) {
            rethrow_with(where, e);
        } catch (const TruncationError& e) {
            rethrow_with(where, e);
        } catch (const PreconditionError& e) {
            rethrow_with(where, e);
        } catch (const Error& e) {
            rethrow_with(where, e);
        }
    });
    return curve;
}

std::vector<AuditRow> six_properties_audit(const ModelManifold& m, const AuditOptions& opt) {
    const auto& ball = m.ball();
    std::vector<CurveClass> curves;
    for (const auto& spec : m.specs()) {
        if (const auto* thin = std::get_if<ThinBlockSpec>(&spec)) {
            if (std::find(curves.begin(), curves.end(), thin->curve) == curves.end()) curves.push_back(thin->curve);
        }
    }
    if (curves.empty()) curves.push_back(CurveClass{Letter::a});
    const auto trusted = ball.ball_prefix(ball.trusted_radius());

    std::vector<AuditRow> rows{{1, "tube quasiconvexity", 0, ""},  {2, "tube separation", 0, ""},
                               {3, "mutual coboundedness", 0, ""}, {4, "electric delta", 0, ""},
                               {5, "penetration", 0, ""},          {6, "electro-ambient quasigeodesic", 0, ""}};
    bool separated = false;
    double eps_worst = 0;
    for (const CurveClass curve : curves) {
        const auto& es = m.electric(curve);
        const std::string tag = std::string("curve ") + curve.name() + ": ";

        // (1) Largest excursion of a geodesic between two trusted members of one coset.
        std::vector<SetId> eligible;
        for (SetId s = 0; s < es.sets().size(); ++s) {
            int inside = 0;
            for (VertexId v : es.set(s).members) inside += ball.trusted(v) ? 1 : 0;
            if (inside >= 2) eligible.push_back(s);
        }
        std::vector<int> excursion(eligible.empty() ? 0 : opt.samples, 0);
        std::vector<std::pair<VertexId, VertexId>> ends(excursion.size());
        parallel_for(excursion.size(), opt.jobs, [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(opt.seed, i));
            const auto& set = es.set(eligible[uniform_below(rng, eligible.size())]);
            std::vector<VertexId> inner;
            for (VertexId v : set.members) {
                if (ball.trusted(v)) inner.push_back(v);
            }
            const VertexId u = inner[uniform_below(rng, inner.size())];
            VertexId v = inner[uniform_below(rng, inner.size() - 1)];
            if (v == u) v = inner.back();
            const auto g = geodesic(ball, u, v);
            const auto d = distances(BallGraph{ball}, std::span<const VertexId>(set.members), kUnreached,
                                     std::span<const VertexId>(g.vertices));
            for (VertexId x : g.vertices) excursion[i] = std::max(excursion[i], d[x]);
            ends[i] = {u, v};
        });
        for (std::size_t i = 0; i < excursion.size(); ++i) {
            if (excursion[i] > rows[0].constant || rows[0].witness.empty()) {
                rows[0].constant = std::max<double>(rows[0].constant, excursion[i]);
                rows[0].witness = tag + ball.label(ends[i].first) + " -> " + ball.label(ends[i].second);
            }
        }

        // (2) Distinct cosets are disjoint, so the least separation is the shortest non-sigma edge between two.
        for (VertexId v = 0; v < trusted && !separated; ++v) {
            for (Letter g : kAllLetters) {
                const VertexId w = ball.neighbor(v, g);
                if (w == kNoVertex || es.is_sigma(g) || es.set_of(w) == es.set_of(v)) continue;
                rows[1].constant = 1;
                rows[1].witness = tag + ball.label(v) + " -- " + ball.label(w);
                separated = true;
                break;
            }
        }

        // (3) Coboundedness.
        const auto cob = coboundedness(es, -1, opt.jobs);
        if (cob.D >= rows[2].constant) {
            rows[2].constant = cob.D;
            rows[2].witness = cob.onto == kNoSet ? tag + "no pairs"
                                                 : tag + "onto " + ball.label(es.set(cob.onto).rep) + " from " +
                                                       ball.label(es.set(cob.from).rep);
        }

        // (4) Electric hyperbolicity.
        const auto hyp = estimate_electric_delta(es, opt.samples, opt.seed, opt.jobs);
        if (hyp.delta >= rows[3].constant) {
            rows[3].constant = hyp.delta;
            rows[3].witness = tag + (hyp.witness[0] == kNoVertex
                                         ? std::string("no samples")
                                         : ball.label(hyp.witness[0]) + ", " + ball.label(hyp.witness[1]) + ", " +
                                               ball.label(hyp.witness[2]));
        }

        // (5) Penetration and (6) electro-ambient quality over sampled pairs.
        struct Sample {
            VertexId u = 0, v = 0;
            int pen = 0, solo = 0;
            double k = 1;
            int eps = 0;
        };
        std::vector<Sample> samples(opt.samples);
        parallel_for(samples.size(), opt.jobs, [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(opt.seed ^ 0x5e5e, i));
            Sample& s = samples[i];
            s.u = static_cast<VertexId>(uniform_below(rng, trusted));
            s.v = static_cast<VertexId>(uniform_below(rng, trusted));
            const EPath beta = electric_geodesic(es, s.u, s.v);
            const auto pen = penetration_compare(es, beta, geodesic(ball, s.u, s.v));
            s.pen = std::max(pen.max_entry_gap, pen.max_exit_gap);
            s.solo = pen.max_solo_length;
            GPath amb = electro_ambient(es, beta);
            std::fill(amb.weights.begin(), amb.weights.end(), 1);
            const auto q = is_quasigeodesic(ball, amb, 4, 8);
            s.k = q.k_measured;
            s.eps = q.eps_measured;
        });
        for (const auto& s : samples) {
            const std::string pair = tag + ball.label(s.u) + " -> " + ball.label(s.v);
            if (s.pen > rows[4].constant || rows[4].witness.empty()) {
                rows[4].constant = std::max<double>(rows[4].constant, s.pen);
                rows[4].witness = pair + " (solo " + std::to_string(s.solo) + ")";
            }
            if (s.k > rows[5].constant || s.eps > eps_worst || rows[5].witness.empty()) {
                rows[5].constant = std::max(rows[5].constant, s.k);
                eps_worst = std::max<double>(eps_worst, s.eps);
                rows[5].witness = pair + " (eps " + std::to_string(static_cast<int>(eps_worst)) + ")";
            }
        }
    }
    return rows;
}

}  // namespace ctlab
