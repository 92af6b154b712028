#include "ctlab/blocks.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace ctlab {

namespace {

constexpr char kMagic[4] = {'B', 'L', 'K', '1'};

template <class T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw Error("model cache truncated");
    return value;
}

VertexMap invert(const VertexMap& up, std::size_t n) {
    VertexMap down(n, kNoVertex);
    for (VertexId v = 0; v < up.size(); ++v) {
        const VertexId w = up[v];
        if (w == kNoVertex) continue;
        if (w >= n || down[w] != kNoVertex) throw Error("vertical map is not injective");
        down[w] = v;
    }
    return down;
}

}  // namespace

std::string_view to_string(Glue g) {
    switch (g) {
        case Glue::identity: return "id";
        case Glue::tw_a: return "tw_a";
        case Glue::tw_a_inv: return "tw_a^-1";
        case Glue::tw_c: return "tw_c";
        case Glue::tw_c_inv: return "tw_c^-1";
    }
    return "?";
}

Glue parse_glue(std::string_view text) {
    for (Glue g : {Glue::identity, Glue::tw_a, Glue::tw_a_inv, Glue::tw_c, Glue::tw_c_inv}) {
        if (text == to_string(g)) return g;
    }
    if (text == "identity") return Glue::identity;
    throw ConfigError("unknown glue '" + std::string(text) + "' (expected id, tw_a, tw_a^-1, tw_c, tw_c^-1)");
}

TwistMap glue_twist(Glue g) {
    switch (g) {
        case Glue::identity: return {CurveClass{Letter::a}, 0};
        case Glue::tw_a: return {CurveClass{Letter::a}, 1};
        case Glue::tw_a_inv: return {CurveClass{Letter::a}, -1};
        case Glue::tw_c: return {CurveClass{Letter::c}, 1};
        case Glue::tw_c_inv: return {CurveClass{Letter::c}, -1};
    }
    throw PreconditionError("bad glue");
}

std::string_view to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::horizontal: return "horizontal";
        case EdgeKind::vertical: return "vertical";
        case EdgeKind::twist: return "twist";
        case EdgeKind::glue: return "glue";
    }
    return "?";
}

std::string describe(const BlockSpec& spec) {
    if (const auto* t = std::get_if<ThickBlockSpec>(&spec)) return "thick(" + std::string(to_string(t->glue)) + ")";
    const auto& thin = std::get<ThinBlockSpec>(spec);
    return "thin(" + std::string(1, thin.curve.name()) + "," + std::to_string(thin.n) + ")";
}

std::vector<BlockSpec> parse_stack(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("stack: ") + e.what());
    }
    if (!j.is_array()) throw ConfigError("stack must be an array of block entries");
    std::vector<BlockSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        const std::string where = "stack[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string()) {
            throw ConfigError(where + ": missing kind");
        }
        const auto kind = e["kind"].get<std::string>();
        try {
            if (kind == "thick") {
                ThickBlockSpec t;
                if (e.contains("glue")) t.glue = parse_glue(e["glue"].get<std::string>());
                out.emplace_back(t);
            } else if (kind == "thin") {
                ThinBlockSpec t;
                t.curve = CurveClass::parse(e.at("curve").get<std::string>());
                t.n = e.at("n").get<int>();
                if (t.n == 0) throw ConfigError("twist coefficient must be nonzero");
                out.emplace_back(t);
            } else {
                throw ConfigError("kind must be thick or thin, got '" + kind + "'");
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(where + ": " + ex.what());
        } catch (const ConfigError& ex) {
            throw ConfigError(where + ": " + ex.what());
        }
    }
    return out;
}

std::string stack_to_json(const std::vector<BlockSpec>& specs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& spec : specs) {
        if (const auto* t = std::get_if<ThickBlockSpec>(&spec)) {
            j.push_back({{"kind", "thick"}, {"glue", std::string(to_string(t->glue))}});
        } else {
            const auto& thin = std::get<ThinBlockSpec>(spec);
            j.push_back({{"kind", "thin"}, {"curve", std::string(1, thin.curve.name())}, {"n", thin.n}});
        }
    }
    return j.dump();
}

ModelManifold::ModelManifold(const CayleyBall& ball, std::vector<BlockSpec> specs)
    : ball_(&ball), specs_(std::move(specs)), n_(ball.size()) {
    if (specs_.empty()) throw PreconditionError("a model needs at least one block");
    layout();
}

void ModelManifold::layout() {
    base_.assign(1, 0);
    sheets_.assign(1, SheetInfo{0, 0, false, {}});
    for (int b = 0; b < block_count(); ++b) {
        const auto* thin = std::get_if<ThinBlockSpec>(&specs_[b]);
        const int top = thin ? 3 : 1;
        for (int level = 1; level <= top; ++level) {
            SheetInfo info{b, level, false, {}};
            if (thin && (level == 1 || level == 2)) {
                info.electric = true;
                info.curve = thin->curve;
            }
            sheets_.push_back(info);
        }
        base_.push_back(base_.back() + top);
    }
}

void ModelManifold::attach_electric() {
    for (const auto& s : sheets_) {
        if (!s.electric) continue;
        auto& slot = s.curve.sigma == Letter::a ? es_a_ : es_c_;
        if (!slot) slot = std::make_shared<const ElectricSpace>(*ball_, s.curve);
    }
}

ModelManifold ModelManifold::assemble(const CayleyBall& ball, std::vector<BlockSpec> specs, int jobs) {
    ModelManifold m(ball, std::move(specs));
    m.gaps_.resize(m.sheets_.size() - 1);
    for (int b = 0; b < m.block_count(); ++b) {
        const int s0 = m.bottom_sheet(b);
        if (const auto* thin = std::get_if<ThinBlockSpec>(&m.specs_[b])) {
            if (thin->n == 0) throw PreconditionError("thin block with zero twist coefficient");
            Gap& tw = m.gaps_[s0 + 1];
            tw.kind = EdgeKind::twist;
            tw.up = ball_map(ball, TwistMap{thin->curve, thin->n}, jobs);
            std::size_t defined = 0;
            for (VertexId w : tw.up) defined += w != kNoVertex;
            if (defined == 0) throw PreconditionError("empty twist domain");
            tw.down = invert(tw.up, m.n_);
        } else {
            const Glue g = std::get<ThickBlockSpec>(m.specs_[b]).glue;
            Gap& gap = m.gaps_[s0];
            gap.kind = EdgeKind::glue;
            if (g != Glue::identity) {
                gap.up = ball_map(ball, glue_twist(g), jobs);
                gap.down = invert(gap.up, m.n_);
            }
        }
    }
    m.attach_electric();
    return m;
}

const ElectricSpace& ModelManifold::electric(CurveClass c) const {
    const auto& slot = c.sigma == Letter::a ? es_a_ : es_c_;
    if (!slot) throw PreconditionError(std::string("model has no electric sheet for curve ") + c.name());
    return *slot;
}

int ModelManifold::glue_distortion(int block) const {
    if (is_thin(block)) throw PreconditionError("glue distortion is defined for thick blocks");
    const TwistMap tw = glue_twist(std::get<ThickBlockSpec>(specs_[block]).glue);
    int worst = 1;
    for (Letter x : kAllLetters) {
        const Word img = tw.apply(std::span<const Letter>(&x, 1));
        worst = std::max(worst, static_cast<int>(img.size()));
    }
    return worst;
}

bool ModelManifold::operator==(const ModelManifold& other) const {
    if (ball_ != other.ball_ || stack_to_json(specs_) != stack_to_json(other.specs_)) return false;
    if (gaps_.size() != other.gaps_.size()) return false;
    for (std::size_t i = 0; i < gaps_.size(); ++i) {
        if (gaps_[i].kind != other.gaps_[i].kind || gaps_[i].up != other.gaps_[i].up) return false;
    }
    return true;
}

std::filesystem::path ModelManifold::cache_file(const std::filesystem::path& dir, const CayleyBall& ball,
                                                const std::vector<BlockSpec>& specs) {
    std::ostringstream key;
    key << stack_to_json(specs) << "|R" << ball.radius() << "|tol" << ball.tolerance();
    std::ostringstream name;
    name << "model_R" << ball.radius() << "_" << std::hex << std::hash<std::string>{}(key.str()) << ".blk";
    return dir / name.str();
}

void ModelManifold::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write model cache " + file.string());
    out.write(kMagic, 4);
    const std::string stack = stack_to_json(specs_);
    write_pod(out, static_cast<std::uint32_t>(ball_->radius()));
    write_pod(out, static_cast<std::uint64_t>(n_));
    write_pod(out, static_cast<std::uint32_t>(stack.size()));
    out.write(stack.data(), static_cast<std::streamsize>(stack.size()));
    write_pod(out, static_cast<std::uint32_t>(gaps_.size()));
    for (const auto& gap : gaps_) {
        write_pod(out, static_cast<std::uint8_t>(gap.kind));
        write_pod(out, static_cast<std::uint8_t>(gap.up.empty() ? 0 : 1));
        if (!gap.up.empty()) out.write(reinterpret_cast<const char*>(gap.up.data()), n_ * sizeof(VertexId));
    }
    if (!out) throw Error("failed writing model cache " + file.string());
}

ModelManifold ModelManifold::load(const CayleyBall& ball, const std::vector<BlockSpec>& specs,
                                  const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open model cache " + file.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("bad model cache magic");
    if (static_cast<int>(read_pod<std::uint32_t>(in)) != ball.radius()) throw Error("model cache radius mismatch");
    if (read_pod<std::uint64_t>(in) != ball.size()) throw Error("model cache ball size mismatch");
    const auto len = read_pod<std::uint32_t>(in);
    if (len > (1u << 20)) throw Error("model cache stack text too long");
    std::string stack(len, '\0');
    in.read(stack.data(), len);
    if (!in || stack != stack_to_json(specs)) throw Error("model cache stack mismatch");

    ModelManifold m(ball, specs);
    const auto gaps = read_pod<std::uint32_t>(in);
    if (gaps != m.sheets_.size() - 1) throw Error("model cache gap count mismatch");
    m.gaps_.resize(gaps);
    for (auto& gap : m.gaps_) {
        const auto kind = read_pod<std::uint8_t>(in);
        if (kind > static_cast<std::uint8_t>(EdgeKind::glue)) throw Error("model cache bad edge kind");
        gap.kind = static_cast<EdgeKind>(kind);
        if (read_pod<std::uint8_t>(in)) {
            gap.up.resize(m.n_);
            in.read(reinterpret_cast<char*>(gap.up.data()), static_cast<std::streamsize>(m.n_ * sizeof(VertexId)));
            if (!in) throw Error("model cache truncated");
            gap.down = invert(gap.up, m.n_);
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw Error("model cache has trailing bytes");

    // The layout must match a fresh assembly, and every stored map is spot
    // checked against the twist it claims to be.
    for (int b = 0; b < m.block_count(); ++b) {
        const int s0 = m.bottom_sheet(b);
        TwistMap tw;
        const Gap* gap;
        if (const auto* thin = std::get_if<ThinBlockSpec>(&m.specs_[b])) {
            tw = TwistMap{thin->curve, thin->n};
            gap = &m.gaps_[s0 + 1];
            if (gap->kind != EdgeKind::twist || gap->up.empty()) throw Error("model cache twist gap missing");
        } else {
            tw = glue_twist(std::get<ThickBlockSpec>(m.specs_[b]).glue);
            gap = &m.gaps_[s0];
            if (gap->kind != EdgeKind::glue || gap->up.empty() != (tw.n == 0)) throw Error("model cache glue gap");
        }
        if (gap->up.empty()) continue;
        const std::size_t stride = std::max<std::size_t>(1, m.n_ / 257);
        for (VertexId v = 0; v < m.n_; v += static_cast<VertexId>(stride)) {
            const auto expect = ball.locate(tw.apply(ball.letters(v)));
            if (gap->up[v] != expect.value_or(kNoVertex)) throw Error("model cache map disagrees with the twist");
        }
    }
    m.attach_electric();
    return m;
}

ModelManifold ModelManifold::load_or_build(const CayleyBall& ball, const std::vector<BlockSpec>& specs,
                                           const std::filesystem::path& dir, int jobs, bool* rebuilt) {
    const auto file = cache_file(dir, ball, specs);
    if (std::filesystem::exists(file)) {
        try {
            auto m = load(ball, specs, file);
            if (rebuilt) *rebuilt = false;
            return m;
        } catch (const Error&) {
            // corrupted or stale: rebuild
        }
    }
    auto m = assemble(ball, specs, jobs);
    std::filesystem::create_directories(dir);
    m.save(file);
    if (rebuilt) *rebuilt = true;
    return m;
}

int model_dist(const ModelManifold& m, VertexId x, VertexId y, bool electrocuted) {
    return distance(m.graph(electrocuted), x, y);
}

int tube_diameter(const ModelManifold& m, int block, SetId set) {
    if (!m.is_thin(block)) throw PreconditionError("tubes live in thin blocks");
    const auto& spec = std::get<ThinBlockSpec>(m.specs()[block]);
    const auto& es = m.electric(spec.curve);
    const int s1 = m.sheet_at(block, 1);
    std::vector<VertexId> tube;
    for (VertexId v : es.set(set).members) {
        tube.push_back(m.global(s1, v));
        const VertexId w = m.up(s1, v);
        if (w != kNoVertex) tube.push_back(m.global(s1 + 1, w));
    }
    int diam = 0;
    for (VertexId t : tube) {
        const auto d = distances(m.graph(), std::span<const VertexId>(&t, 1), kUnreached, tube);
        for (VertexId u : tube) diam = std::max(diam, d[u]);
    }
    return diam;
}

}  // namespace ctlab
