#include "ctlab/cayley_ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ctlab {

namespace {

constexpr char kMagic[4] = {'C', 'G', 'B', '1'};

long double chart_norm(const HyperboloidXY& p) { return std::hypot(p.x, p.y); }

template <class T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw Error("ball cache truncated");
    return value;
}

}  // namespace

VertexId CayleyBall::add_vertex(VertexId parent, Letter g, int depth, const Mobius& m) {
    const auto v = static_cast<VertexId>(depth_.size());
    parent_.push_back(parent);
    last_.push_back(g);
    depth_.push_back(static_cast<std::uint8_t>(depth));
    Adjacency none;
    none.fill(kNoVertex);
    adj_.push_back(none);
    xy_.push_back(m.origin_xy());
    disk_.push_back(m.origin_image());
    max_chart_norm_ = std::max(max_chart_norm_, chart_norm(xy_.back()));
    insert_cell(v);
    return v;
}

void CayleyBall::insert_cell(VertexId v) {
    const auto& p = xy_[v];
    cells_.emplace(CellKey{static_cast<std::int64_t>(std::floor(p.x)), static_cast<std::int64_t>(std::floor(p.y))}, v);
}

std::optional<VertexId> CayleyBall::lookup(const HyperboloidXY& p, long double tol) const {
    if (chart_norm(p) > max_chart_norm_ + tol + 1.0L) return std::nullopt;
    const auto x0 = static_cast<std::int64_t>(std::floor(p.x - tol));
    const auto x1 = static_cast<std::int64_t>(std::floor(p.x + tol));
    const auto y0 = static_cast<std::int64_t>(std::floor(p.y - tol));
    const auto y1 = static_cast<std::int64_t>(std::floor(p.y + tol));
    for (auto cx = x0; cx <= x1; ++cx) {
        for (auto cy = y0; cy <= y1; ++cy) {
            auto it = cells_.find(CellKey{cx, cy});
            if (it == cells_.end()) continue;
            const auto& q = xy_[it->second];
            if (std::hypot(q.x - p.x, q.y - p.y) < tol) return it->second;
        }
    }
    return std::nullopt;
}

CayleyBall CayleyBall::build(const BallOptions& options) {
    if (options.radius < 1) throw PreconditionError("ball radius must be >= 1");
    if (options.margin < 0 || options.margin >= options.radius) {
        throw PreconditionError("ball margin must satisfy 0 <= margin < R");
    }
    if (options.radius > 250) throw ResourceLimitError("ball radius exceeds the depth encoding");
    CayleyBall ball;
    ball.radius_ = options.radius;
    ball.margin_ = options.margin;
    ball.tolerance_ = options.tolerance;

    std::vector<Mobius> mats;
    mats.emplace_back();
    ball.add_vertex(kNoVertex, Letter::a, 0, mats[0]);

    for (VertexId u = 0; u < ball.size(); ++u) {
        const int du = ball.depth_[u];
        for (Letter g : kAllLetters) {
            if (ball.adj_[u][index_of(g)] != kNoVertex) continue;
            const Mobius m = mats[u] * generator_matrix(g);
            if (auto hit = ball.lookup(m.origin_xy(), ball.tolerance_)) {
                const VertexId v = *hit;
                if (options.cross_check) {
                    Letters probe = ball.letters(u);
                    probe.push_back(g);
                    const Word back = ball.word(v).inverse();
                    probe.insert(probe.end(), back.letters().begin(), back.letters().end());
                    if (!is_trivial(probe)) {
                        throw Error("disk-point coincidence disagrees with the word problem at " + ball.label(u) +
                                    to_char(g));
                    }
                }
                ball.adj_[u][index_of(g)] = v;
                ball.adj_[v][index_of(inverse(g))] = u;
            } else if (du < ball.radius_) {
                if (ball.size() >= options.vertex_cap) {
                    throw ResourceLimitError("ball vertex count exceeds cap " + std::to_string(options.vertex_cap));
                }
                const VertexId v = ball.add_vertex(u, g, du + 1, m);
                mats.push_back(m);
                ball.adj_[u][index_of(g)] = v;
                ball.adj_[v][index_of(inverse(g))] = u;
            }
        }
    }

    ball.sphere_start_.assign(static_cast<std::size_t>(ball.radius_) + 2, ball.size());
    for (VertexId v = ball.size(); v-- > 0;) ball.sphere_start_[ball.depth_[v]] = v;
    return ball;
}

std::size_t CayleyBall::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : adj_) {
        for (VertexId w : nb) twice += (w != kNoVertex);
    }
    return twice / 2;
}

std::vector<VertexId> CayleyBall::trusted_vertices() const {
    std::vector<VertexId> out(ball_prefix(trusted_radius()));
    for (VertexId v = 0; v < out.size(); ++v) out[v] = v;
    return out;
}

std::size_t CayleyBall::sphere_size(int r) const {
    if (r < 0 || r > radius_) return 0;
    return sphere_start_[r + 1] - sphere_start_[r];
}

std::size_t CayleyBall::ball_prefix(int r) const {
    if (r < 0) return 0;
    if (r >= radius_) return size();
    return sphere_start_[r + 1];
}

Letters CayleyBall::letters(VertexId v) const {
    Letters out(depth_[v]);
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = last_[v];
        v = parent_[v];
    }
    return out;
}

Word CayleyBall::word(VertexId v) const { return reduce(letters(v)); }

std::optional<VertexId> CayleyBall::locate_unchecked(const Mobius& m) const {
    return lookup(m.origin_xy(), tolerance_);
}

std::optional<VertexId> CayleyBall::locate(std::span<const Letter> w) const {
    const Word r = reduce(w);
    if (r.size() > kMaxLocateLength) return std::nullopt;
    auto hit = lookup(word_matrix(r.letters()).origin_xy(), 1.0L);
    if (!hit) return std::nullopt;
    if (!same_element(r, word(*hit))) return std::nullopt;
    return hit;
}

std::optional<VertexId> CayleyBall::walk(VertexId start, std::span<const Letter> letters) const {
    VertexId v = start;
    for (Letter x : letters) {
        v = adj_[v][index_of(x)];
        if (v == kNoVertex) return std::nullopt;
    }
    return v;
}

VertexId CayleyBall::at(std::string_view text) const {
    const Word w = Word::parse(text);
    auto v = locate(w);
    if (!v) throw TruncationError("element " + std::string(text) + " lies outside the radius-" +
                                  std::to_string(radius_) + " ball");
    return *v;
}

std::filesystem::path CayleyBall::cache_file(const std::filesystem::path& dir, const BallOptions& options) {
    std::ostringstream name;
    name << "ball_R" << options.radius << "_tol" << options.tolerance << ".cgb";
    return dir / name.str();
}

void CayleyBall::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write ball cache " + file.string());
    out.write(kMagic, 4);
    write_pod(out, static_cast<std::uint32_t>(radius_));
    write_pod(out, static_cast<std::uint32_t>(margin_));
    write_pod(out, static_cast<std::uint64_t>(size()));
    for (VertexId v = 0; v < size(); ++v) {
        const Letters w = letters(v);
        write_pod(out, static_cast<std::uint8_t>(w.size()));
        for (Letter x : w) write_pod(out, static_cast<std::uint8_t>(index_of(x)));
        write_pod(out, disk_[v].x);
        write_pod(out, disk_[v].y);
    }
    write_pod(out, static_cast<std::uint64_t>(edge_count()));
    for (VertexId u = 0; u < size(); ++u) {
        for (Letter g : kAllLetters) {
            const VertexId v = adj_[u][index_of(g)];
            if (v == kNoVertex || v < u) continue;
            write_pod(out, static_cast<std::uint32_t>(u));
            write_pod(out, static_cast<std::uint32_t>(v));
            write_pod(out, static_cast<std::uint8_t>(index_of(g)));
        }
    }
    if (!out) throw Error("failed writing ball cache " + file.string());
}

CayleyBall CayleyBall::load(const std::filesystem::path& file, const BallOptions& options) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open ball cache " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("bad ball cache magic");
    const auto radius = read_pod<std::uint32_t>(in);
    read_pod<std::uint32_t>(in);  // stored margin; the caller's margin wins
    const auto count = read_pod<std::uint64_t>(in);
    if (static_cast<int>(radius) != options.radius) throw Error("ball cache radius mismatch");
    if (count == 0 || count > options.vertex_cap) throw Error("ball cache vertex count out of range");

    CayleyBall ball;
    ball.radius_ = options.radius;
    ball.margin_ = options.margin;
    ball.tolerance_ = options.tolerance;

    std::vector<Letters> words(count);
    std::vector<DiskPoint> stored(count);
    for (std::size_t v = 0; v < count; ++v) {
        const auto len = read_pod<std::uint8_t>(in);
        if (len > radius) throw Error("ball cache word longer than radius");
        words[v].resize(len);
        for (auto& x : words[v]) {
            const auto code = read_pod<std::uint8_t>(in);
            if (code >= kLetterCount) throw Error("ball cache letter out of range");
            x = letter_at(code);
        }
        stored[v].x = read_pod<double>(in);
        stored[v].y = read_pod<double>(in);
    }
    if (!words[0].empty()) throw Error("ball cache does not start at the identity");

    std::vector<Adjacency> adj(count);
    for (auto& nb : adj) nb.fill(kNoVertex);
    const auto edges = read_pod<std::uint64_t>(in);
    for (std::uint64_t e = 0; e < edges; ++e) {
        const auto u = read_pod<std::uint32_t>(in);
        const auto v = read_pod<std::uint32_t>(in);
        const auto g = read_pod<std::uint8_t>(in);
        if (u >= count || v >= count || g >= kLetterCount) throw Error("ball cache edge out of range");
        adj[u][g] = v;
        adj[v][g ^ 1u] = u;
    }
    in.peek();
    if (!in.eof()) throw Error("ball cache has trailing bytes");

    std::vector<Mobius> mats(count);
    for (std::size_t v = 0; v < count; ++v) {
        VertexId parent = kNoVertex;
        Letter g = Letter::a;
        if (v > 0) {
            if (words[v].size() < words[v - 1].size()) throw Error("ball cache not in BFS order");
            g = words[v].back();
            parent = adj[v][index_of(inverse(g))];
            if (parent == kNoVertex || parent >= v || words[parent].size() + 1 != words[v].size()) {
                throw Error("ball cache parent edge missing");
            }
            mats[v] = mats[parent] * generator_matrix(g);
        }
        ball.add_vertex(parent, g, static_cast<int>(words[v].size()), mats[v]);
        const DiskPoint p = ball.disk_[v];
        if (std::abs(p.x - stored[v].x) > 1e-9 || std::abs(p.y - stored[v].y) > 1e-9) {
            throw Error("ball cache coordinates disagree with the stored words");
        }
    }
    if (ball.letters(static_cast<VertexId>(count - 1)) != words[count - 1]) {
        throw Error("ball cache words inconsistent with parent edges");
    }
    ball.adj_ = std::move(adj);
    for (VertexId u = 0; u < count; ++u) {
        for (Letter g : kAllLetters) {
            const VertexId v = ball.adj_[u][index_of(g)];
            if (v == kNoVertex) continue;
            const auto q = (mats[u] * generator_matrix(g)).origin_xy();
            if (std::hypot(q.x - ball.xy_[v].x, q.y - ball.xy_[v].y) >= ball.tolerance_) {
                throw Error("ball cache edge does not match its generator");
            }
        }
    }
    ball.sphere_start_.assign(static_cast<std::size_t>(ball.radius_) + 2, ball.size());
    for (VertexId v = ball.size(); v-- > 0;) ball.sphere_start_[ball.depth_[v]] = v;
    return ball;
}

CayleyBall CayleyBall::load_or_build(const std::filesystem::path& dir, const BallOptions& options, bool* rebuilt) {
    const auto file = cache_file(dir, options);
    if (std::filesystem::exists(file)) {
        try {
            auto ball = load(file, options);
            if (rebuilt) *rebuilt = false;
            return ball;
        } catch (const Error&) {
            // corrupted or stale: fall through to a rebuild
        }
    }
    auto ball = build(options);
    std::filesystem::create_directories(dir);
    ball.save(file);
    if (rebuilt) *rebuilt = true;
    return ball;
}

}  // namespace ctlab
