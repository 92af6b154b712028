#include "ctlab/ladder.hpp"

#include <algorithm>
#include <climits>
#include <random>
#include <unordered_map>

#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

GPath electric_path(const ElectricSpace& es, VertexId a, VertexId z) {
    return make_epath(es, electro_ambient(es, electric_geodesic(es, a, z)).vertices).path;
}

GPath unit_weights(std::vector<VertexId> vs) {
    GPath p;
    for (VertexId v : vs) p.push(v, 1);
    return p;
}

int electric_length(const ElectricSpace& es, const std::vector<VertexId>& vs) {
    return make_epath(es, vs).electric_length();
}

// Blocks whose sheet range contains s, lowest first.
std::vector<int> blocks_of_sheet(const ModelManifold& m, int s) {
    std::vector<int> out{m.sheet(s).block};
    const int b = out[0];
    if (s == m.top_sheet(b) && b + 1 < m.block_count()) out.push_back(b + 1);
    return out;
}

struct PairKey {
    std::uint64_t hi;
    std::uint32_t lo;
    bool operator==(const PairKey&) const = default;
};

struct PairHash {
    std::size_t operator()(const PairKey& k) const { return std::hash<std::uint64_t>{}(k.hi * 1000003u ^ k.lo); }
};

}  // namespace

const GPath& Ladder::at(int sheet) const {
    if (!present(sheet)) throw TruncationError("no ladder path on sheet " + std::to_string(sheet));
    return *paths[sheet];
}

int Ladder::built_blocks(const ModelManifold& m) const { return truncated_at < 0 ? m.block_count() : truncated_at; }

std::vector<VertexId> Ladder::vertices(const ModelManifold& m) const {
    std::vector<VertexId> out;
    for (int s = 0; s < static_cast<int>(paths.size()); ++s) {
        if (!present(s)) continue;
        for (VertexId v : paths[s]->vertices) out.push_back(m.global(s, v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VertexId> Ladder::block_vertices(const ModelManifold& m, int block) const {
    std::vector<VertexId> out;
    for (int s = m.bottom_sheet(block); s <= m.top_sheet(block); ++s) {
        if (!present(s)) continue;
        for (VertexId v : paths[s]->vertices) out.push_back(m.global(s, v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Ladder build_ladder(const ModelManifold& m, const GPath& base) {
    const auto& ball = m.ball();
    if (base.empty()) throw PreconditionError("empty base path");
    if (!ball.trusted(base.front()) || !ball.trusted(base.back())) {
        throw PreconditionError("base endpoints must lie in the trusted interior");
    }
    if (base.hyperbolic_length() != dist(ball, base.front(), base.back())) {
        throw PreconditionError("base path is not a geodesic");
    }
    Ladder L;
    L.base = unit_weights(base.vertices);
    L.paths.assign(m.sheet_count(), std::nullopt);
    L.K.assign(m.block_count(), 0);
    L.paths[0] = L.base;

    for (int b = 0; b < m.block_count(); ++b) {
        const int s0 = m.bottom_sheet(b);
        const VertexId a = L.paths[s0]->front();
        const VertexId z = L.paths[s0]->back();
        if (const auto* thin = std::get_if<ThinBlockSpec>(&m.specs()[b])) {
            const auto& es = m.electric(thin->curve);
            const VertexId a2 = m.up(s0 + 1, a);
            const VertexId z2 = m.up(s0 + 1, z);
            if (a2 == kNoVertex || z2 == kNoVertex) {
                L.truncated_at = b;
                L.truncation = "twist image of a ladder endpoint leaves the ball in block " + std::to_string(b);
                break;
            }
            L.paths[s0 + 1] = electric_path(es, a, z);
            L.paths[s0 + 2] = electric_path(es, a2, z2);
            L.paths[s0 + 3] = geodesic(ball, a2, z2);
        } else {
            const VertexId a2 = m.up(s0, a);
            const VertexId z2 = m.up(s0, z);
            if (a2 == kNoVertex || z2 == kNoVertex) {
                L.truncated_at = b;
                L.truncation = "glue image of a ladder endpoint leaves the ball in block " + std::to_string(b);
                break;
            }
            L.paths[s0 + 1] = geodesic(ball, a2, z2);
        }
    }

    // Neighbourhood constants from the vertical images of ladder points.
    std::vector<LabeledField> field(m.sheet_count());
    for (int s = 0; s < m.sheet_count(); ++s) {
        if (L.present(s)) field[s] = nearest_sources(BallGraph{ball}, L.paths[s]->vertices);
    }
    for (int s = 0; s + 1 < m.sheet_count(); ++s) {
        if (!L.present(s) || !L.present(s + 1)) continue;
        const int b = m.sheet(s + 1).block;
        if (m.gap_kind(s) == EdgeKind::twist) {
            const auto& es = m.electric(m.sheet(s).curve);
            auto connect = [&](VertexId w, int target) {
                const GPath conn = geodesic(ball, w, field[target].label[w]);
                L.K[b] = std::max(L.K[b], conn.hyperbolic_length());
                L.C = std::max(L.C, electric_length(es, conn.vertices));
            };
            for (VertexId x : L.paths[s]->vertices) {
                if (const VertexId w = m.up(s, x); w != kNoVertex) connect(w, s + 1);
            }
            for (VertexId y : L.paths[s + 1]->vertices) {
                if (const VertexId w = m.down(s + 1, y); w != kNoVertex) connect(w, s);
            }
        } else {
            for (VertexId x : L.paths[s]->vertices) {
                if (const VertexId w = m.up(s, x); w != kNoVertex) L.C = std::max(L.C, field[s + 1].dist[w]);
            }
            for (VertexId y : L.paths[s + 1]->vertices) {
                if (const VertexId w = m.down(s + 1, y); w != kNoVertex) L.C = std::max(L.C, field[s].dist[w]);
            }
        }
    }
    return L;
}

Retraction Retraction::build(const ModelManifold& m, const Ladder& ladder, int jobs) {
    Retraction r;
    r.m_ = &m;
    r.tables_.resize(m.sheet_count());
    parallel_for(static_cast<std::size_t>(m.sheet_count()), jobs, [&](std::size_t i) {
        const int s = static_cast<int>(i);
        if (!ladder.present(s)) return;
        const SheetInfo& info = m.sheet(s);
        if (info.electric) {
            r.tables_[s] = ProjectionTable::electric(m.electric(info.curve), *ladder.paths[s]);
        } else {
            r.tables_[s] = ProjectionTable::hyperbolic(m.ball(), *ladder.paths[s]);
        }
    });
    return r;
}

VertexId Retraction::operator()(VertexId x) const {
    const int s = m_->sheet_of(x);
    if (!tables_[s]) return kNoVertex;
    return m_->global(s, (*tables_[s])(m_->local(x)));
}

RetractionReport retraction_constant(const ModelManifold& m, const Retraction& pi, std::size_t samples,
                                     std::uint64_t seed, int jobs) {
    const auto& ball = m.ball();
    const ModelGraph g = m.graph(true);
    const auto trusted = static_cast<VertexId>(ball.ball_prefix(ball.trusted_radius()));
    RetractionReport rep;
    std::unordered_map<PairKey, std::size_t, PairHash> seen;

    auto consider = [&](VertexId u, VertexId v) {
        const int su = m.sheet_of(u);
        const int sv = m.sheet_of(v);
        const EdgeKind kind = su == sv ? EdgeKind::horizontal : m.gap_kind(std::min(su, sv));
        ++rep.edges;
        const VertexId pu = pi(u);
        const VertexId pv = pi(v);
        if (pu == kNoVertex || pv == kNoVertex) {
            ++rep.absent;
            return;
        }
        const PairKey key{(static_cast<std::uint64_t>(kind) << 32) | pu, pv};
        if (seen.emplace(key, rep.rows.size()).second) rep.rows.push_back({kind, u, v, pu, pv, 0});
    };

    if (samples == 0) {
        for (int s = 0; s < m.sheet_count(); ++s) {
            for (VertexId v = 0; v < trusted; ++v) {
                const VertexId u = m.global(s, v);
                g.for_each_edge(u, [&](VertexId w, int) {
                    if (w > u && ball.trusted(m.local(w))) consider(u, w);
                });
            }
        }
    } else {
        std::vector<VertexId> nb;
        for (std::size_t i = 0; i < samples; ++i) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const auto s = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m.sheet_count())));
            const VertexId u = m.global(s, static_cast<VertexId>(uniform_below(rng, trusted)));
            nb.clear();
            g.for_each_edge(u, [&](VertexId w, int) {
                if (ball.trusted(m.local(w))) nb.push_back(w);
            });
            if (nb.empty()) continue;
            consider(u, nb[uniform_below(rng, nb.size())]);
        }
    }

    // One early-stopping search per distinct source.
    std::unordered_map<VertexId, std::vector<std::size_t>> by_source;
    std::vector<VertexId> sources;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        if (row.px == row.py) continue;
        auto [it, fresh] = by_source.try_emplace(row.px);
        if (fresh) sources.push_back(row.px);
        it->second.push_back(i);
    }
    parallel_for(sources.size(), jobs, [&](std::size_t k) {
        const VertexId src = sources[k];
        const auto& idx = by_source.at(src);
        std::vector<VertexId> targets;
        for (std::size_t i : idx) targets.push_back(rep.rows[i].py);
        const auto d = distances(g, std::span<const VertexId>(&src, 1), kUnreached, targets);
        for (std::size_t i : idx) rep.rows[i].contribution = d[rep.rows[i].py];
    });
    for (const auto& row : rep.rows) {
        rep.C = std::max(rep.C, row.contribution);
        auto& slot = rep.by_kind[static_cast<int>(row.kind)];
        slot = std::max(slot, row.contribution);
    }
    return rep;
}

AdmissibleValidator::AdmissibleValidator(const ModelManifold& m, const Ladder& ladder)
    : m_(&m), ladder_(&ladder), fields_(m.sheet_count()), index_(m.sheet_count()) {
    for (int s = 0; s < m.sheet_count(); ++s) {
        if (!ladder.present(s)) continue;
        const auto& p = ladder.paths[s]->vertices;
        fields_[s] = nearest_sources(BallGraph{m.ball()}, p);
        for (std::size_t i = 0; i < p.size(); ++i) index_[s][p[i]].push_back(i);
    }
}

const std::vector<std::size_t>* AdmissibleValidator::positions(int sheet, VertexId v) const {
    auto it = index_[sheet].find(v);
    return it == index_[sheet].end() ? nullptr : &it->second;
}

bool AdmissibleValidator::ladder_slice(std::span<const VertexId> seg, int sheet) const {
    if (!ladder_->present(sheet)) return false;
    const auto* pos = positions(sheet, m_->local(seg[0]));
    if (!pos) return false;
    const auto& lad = ladder_->paths[sheet]->vertices;
    for (std::size_t p : *pos) {
        for (int dir : {1, -1}) {
            bool ok = true;
            for (std::size_t k = 1; k < seg.size() && ok; ++k) {
                const auto q = static_cast<std::ptrdiff_t>(p) + dir * static_cast<std::ptrdiff_t>(k);
                ok = q >= 0 && q < static_cast<std::ptrdiff_t>(lad.size()) && lad[q] == m_->local(seg[k]);
            }
            if (ok) return true;
        }
    }
    return false;
}

bool AdmissibleValidator::near_geodesic(std::span<const VertexId> seg, int sheet) const {
    if (!ladder_->present(sheet)) return false;
    for (VertexId v : seg) {
        if (fields_[sheet].dist[m_->local(v)] > ladder_->C) return false;
    }
    const int len = static_cast<int>(seg.size()) - 1;
    const VertexId a = m_->local(seg.front());
    const VertexId z = m_->local(seg.back());
    const auto d = distances(BallGraph{m_->ball()}, std::span<const VertexId>(&a, 1), len, std::span<const VertexId>(&z, 1));
    return d[z] == len;
}

bool AdmissibleValidator::twist_connector(std::span<const VertexId> seg, int block, int level) const {
    const int s = m_->sheet_at(block, level);
    const int lvl1 = m_->sheet_at(block, 1);
    const int lvl2 = lvl1 + 1;
    if (!ladder_->present(lvl1) || !ladder_->present(lvl2)) return false;
    std::vector<VertexId> local;
    for (VertexId v : seg) local.push_back(m_->local(v));
    const auto& es = m_->electric(m_->sheet(s).curve);
    if (static_cast<int>(seg.size()) - 1 > ladder_->K[block]) return false;
    if (electric_length(es, local) > ladder_->C) return false;
    auto starts = [&](VertexId v) {
        const VertexId w = level == 2 ? m_->down(lvl2, v) : m_->up(lvl1, v);
        return w != kNoVertex && positions(level == 2 ? lvl1 : lvl2, w) != nullptr;
    };
    auto lands = [&](VertexId v) { return positions(s, v) != nullptr; };
    return (starts(local.front()) && lands(local.back())) || (starts(local.back()) && lands(local.front()));
}

bool AdmissibleValidator::tube_segment(std::span<const VertexId> seg, int block) const {
    const int lvl1 = m_->sheet_at(block, 1);
    const int lvl2 = lvl1 + 1;
    const auto& es = m_->electric(m_->sheet(lvl1).curve);
    SetId key = kNoSet;
    for (VertexId g : seg) {
        const int s = m_->sheet_of(g);
        VertexId v = m_->local(g);
        if (s == lvl2) v = m_->down(lvl2, v);
        else if (s != lvl1) return false;
        if (v == kNoVertex) return false;
        const SetId k = es.set_of(v);
        if (key != kNoSet && k != key) return false;
        key = k;
    }
    auto on_ladder = [&](VertexId g) {
        const int s = m_->sheet_of(g);
        return ladder_->present(s) && positions(s, m_->local(g)) != nullptr;
    };
    return on_ladder(seg.front()) && on_ladder(seg.back());
}

int AdmissibleValidator::segment_type(std::span<const VertexId> seg, int block) const {
    const bool thin = m_->is_thin(block);
    const int bottom = m_->bottom_sheet(block);
    auto level = [&](VertexId g) { return m_->sheet_of(g) - bottom; };
    const int top_level = m_->levels(block) - 1;
    for (VertexId g : seg) {
        if (level(g) < 0 || level(g) > top_level) return 0;
    }
    const int s = m_->sheet_of(seg.front());
    const bool flat = std::all_of(seg.begin(), seg.end(), [&](VertexId g) { return m_->sheet_of(g) == s; });
    if (flat) {
        const int lvl = s - bottom;
        if (ladder_slice(seg, s)) return 1;
        if (near_geodesic(seg, s)) return 4;
        if (thin && lvl == 2 && twist_connector(seg, block, 2)) return 5;
        if (thin && lvl == 1 && twist_connector(seg, block, 1)) return 6;
        if (thin && (lvl == 1 || lvl == 2) && tube_segment(seg, block)) return 7;
        return 0;
    }
    if (seg.size() == 2) {
        const int l0 = level(seg[0]);
        const int l1 = level(seg[1]);
        if (!thin) return l0 < l1 ? 2 : 3;
        if (std::min(l0, l1) == 1) {
            const VertexId x = m_->local(l0 == 1 ? seg[0] : seg[1]);
            if (positions(bottom + 1, x)) return 2;
            return tube_segment(seg, block) ? 7 : 0;
        }
        return 3;
    }
    return thin && tube_segment(seg, block) ? 7 : 0;
}

AdmissibleReport AdmissibleValidator::validate(const std::vector<VertexId>& path) const {
    AdmissibleReport rep;
    const std::size_t n = path.size();
    if (n == 0) {
        rep.reason = "empty path";
        return rep;
    }
    const ModelGraph g = m_->graph(true);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        int weight = -1;
        g.for_each_edge(path[k], [&](VertexId v, int w) {
            if (v == path[k + 1] && weight < 0) weight = w;
        });
        if (weight < 0) {
            rep.offending = k;
            rep.reason = "consecutive path vertices are not adjacent";
            return rep;
        }
        rep.electric_length += weight;
        rep.hyperbolic_length += 1;
    }

    std::vector<std::ptrdiff_t> parent(n, -1);
    std::vector<std::pair<int, int>> how(n, {0, 0});
    std::vector<char> reach(n, 0);
    reach[0] = 1;
    std::size_t furthest = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!reach[i]) continue;
        const int s = m_->sheet_of(path[i]);
        // Longest stretch any single segment starting here could cover.
        std::size_t far = i + 1;
        while (far + 1 < n && m_->sheet_of(path[far + 1]) == s && m_->sheet_of(path[far]) == s) ++far;
        for (int b : blocks_of_sheet(*m_, s)) {
            if (!m_->is_thin(b)) continue;
            const int l1 = m_->sheet_at(b, 1);
            std::size_t k = i;
            while (k + 1 < n && (m_->sheet_of(path[k + 1]) == l1 || m_->sheet_of(path[k + 1]) == l1 + 1) &&
                   (m_->sheet_of(path[k]) == l1 || m_->sheet_of(path[k]) == l1 + 1)) {
                ++k;
            }
            far = std::max(far, k);
        }
        for (std::size_t j = far; j > i; --j) {
            if (reach[j]) continue;
            const std::span<const VertexId> seg(path.data() + i, j - i + 1);
            for (int b : blocks_of_sheet(*m_, s)) {
                const int t = segment_type(seg, b);
                if (t == 0) continue;
                reach[j] = 1;
                parent[j] = static_cast<std::ptrdiff_t>(i);
                how[j] = {b, t};
                // Sub-slices of a ladder slice are ladder slices.
                if (t == 1) {
                    for (std::size_t q = i + 1; q < j; ++q) {
                        if (!reach[q]) {
                            reach[q] = 1;
                            parent[q] = static_cast<std::ptrdiff_t>(i);
                            how[q] = {b, 1};
                        }
                    }
                }
                break;
            }
        }
        for (std::size_t q = i; q < n; ++q) {
            if (reach[q]) furthest = std::max(furthest, q);
        }
    }
    if (!reach[n - 1]) {
        rep.offending = furthest;
        rep.reason = "no elementary segment leaves path index " + std::to_string(furthest) + " (sheet " +
                     std::to_string(m_->sheet_of(path[furthest])) + ", vertex " +
                     m_->ball().label(m_->local(path[furthest])) + ")";
        return rep;
    }
    for (std::size_t j = n - 1; j > 0;) {
        const auto i = static_cast<std::size_t>(parent[j]);
        rep.segments.push_back({i, j, how[j].first, m_->is_thin(how[j].first), how[j].second});
        j = i;
    }
    std::reverse(rep.segments.begin(), rep.segments.end());
    rep.ok = true;
    return rep;
}

AdmissibleReport validate_admissible(const ModelManifold& m, const Ladder& ladder, const std::vector<VertexId>& path) {
    return AdmissibleValidator(m, ladder).validate(path);
}

HeightTable height_table(const ModelManifold& m, const Ladder& ladder, bool electrocuted) {
    if (ladder.built_blocks(m) < m.block_count()) throw TruncationError("height table needs a complete ladder");
    const ModelGraph g = m.graph(electrocuted);
    HeightTable H;
    for (int b = 0; b < m.block_count(); ++b) {
        const auto pts = ladder.block_vertices(m, b);
        std::vector<VertexId> bottom, top;
        for (VertexId v : ladder.at(m.bottom_sheet(b)).vertices) bottom.push_back(m.global(m.bottom_sheet(b), v));
        for (VertexId v : ladder.at(m.top_sheet(b)).vertices) top.push_back(m.global(m.top_sheet(b), v));
        if (bottom.empty() || top.empty()) throw PreconditionError("empty ladder level");
        const auto db = distances(g, std::span<const VertexId>(bottom), kUnreached, pts);
        const auto dt = distances(g, std::span<const VertexId>(top), kUnreached, pts);
        int worst = 1;
        for (VertexId y : pts) {
            if (!m.ball().trusted(m.local(y))) continue;
            worst = std::max({worst, db[y], dt[y]});
        }
        H.g.push_back(worst);
        H.h.push_back((H.h.empty() ? 0 : H.h.back()) + worst);
    }
    return H;
}

HeightCheck check_heights(const ModelManifold& m, const Ladder& ladder, const HeightTable& heights,
                          std::span<const VertexId> points, bool electrocuted) {
    HeightCheck rep;
    if (points.empty()) return rep;
    const ModelGraph g = m.graph(electrocuted);
    std::vector<VertexId> base;
    for (VertexId v : ladder.base.vertices) base.push_back(m.global(0, v));
    const auto d0 = distances(g, std::span<const VertexId>(base), kUnreached, points);
    rep.worst_slack = INT_MAX;
    for (int b = 0; b < m.block_count(); ++b) {
        std::vector<VertexId> mine;
        for (VertexId x : points) {
            if (m.sheet(m.sheet_of(x)).block == b) mine.push_back(x);
        }
        if (mine.empty()) continue;
        const auto lad = ladder.block_vertices(m, b);
        const auto e = distances(g, std::span<const VertexId>(lad), kUnreached, mine);
        for (VertexId x : mine) {
            ++rep.points;
            const int slack = heights.h[b] + e[x] - d0[x];
            if (slack < 0) ++rep.violations;
            if (slack < rep.worst_slack) {
                rep.worst_slack = slack;
                rep.witness = x;
            }
        }
    }
    return rep;
}

std::vector<VertexId> model_geodesic(const ModelManifold& m, VertexId x, VertexId y, bool electrocuted) {
    const ModelGraph g = m.graph(electrocuted);
    // Ties on electric length are broken by edge count so the descent cannot stall on zero edges.
    const auto field = lex_distances(g, y, x);
    if (field[x] == kLexUnreached) throw TruncationError("model vertices are not connected");
    return descend(g, field, x, lex_cost).vertices;
}

}  // namespace ctlab
