#include "ctlab/render.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

namespace ctlab {

namespace {

constexpr double kDisk = 380.0;  // disk radius in the single-ball picture
constexpr double kSmall = 120.0; // disk radius in ladder pictures
constexpr double kGap = 30.0;

struct Palette {
    const char* stroke;
    double width;
};

Palette palette(Layer l) {
    switch (l) {
    case Layer::ball_edges: return {"#b0b0b0", 0.4};
    case Layer::qcsets: return {"#2a9d8f", 1.2};
    case Layer::geodesic: return {"#264653", 2.0};
    case Layer::electric_geodesic: return {"#e76f51", 2.0};
    case Layer::electro_ambient: return {"#8e44ad", 1.6};
    case Layer::ladder: return {"#d62828", 2.0};
    }
    return {"#000000", 1.0};
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

bool has(const RenderOptions& opt, Layer l) {
    return std::find(opt.layers.begin(), opt.layers.end(), l) != opt.layers.end();
}

class Svg {
public:
    Svg(double w, double h, bool timestamp) {
        out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        if (timestamp) {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            out_ += std::string("<!-- generated ") + buf + " -->\n";
        }
        out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
                "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
    }

    void disk(double cx, double cy, double r, const std::string& title) {
        out_ += "<g class=\"sheet\"><title>" + title + "</title>\n";
        out_ += "<circle class=\"disk\" cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
                "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    }
    void end_disk() { out_ += "</g>\n"; }

    void line(const char* cls, Palette p, DiskPoint a, DiskPoint b) {
        out_ += std::string("<line class=\"") + cls + "\" x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" +
                num(b.x) + "\" y2=\"" + num(b.y) + "\" stroke=\"" + p.stroke + "\" stroke-width=\"" + num(p.width) +
                "\"/>\n";
    }

    void polyline(const char* cls, Palette p, const std::vector<DiskPoint>& pts) {
        out_ += std::string("<polyline class=\"") + cls + "\" fill=\"none\" stroke=\"" + p.stroke +
                "\" stroke-width=\"" + num(p.width) + "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) out_ += (i ? " " : "") + num(pts[i].x) + "," + num(pts[i].y);
        out_ += "\"/>\n";
    }

    std::string finish() { return out_ + "</svg>\n"; }

private:
    std::string out_;
};

struct Frame {
    double cx, cy, r;
    DiskPoint at(const CayleyBall& ball, VertexId v) const {
        const DiskPoint p = ball.point(v);
        return {cx + r * p.x, cy - r * p.y};
    }
    std::vector<DiskPoint> at(const CayleyBall& ball, const std::vector<VertexId>& vs) const {
        std::vector<DiskPoint> out;
        for (VertexId v : vs) out.push_back(at(ball, v));
        return out;
    }
};

void draw_edges(Svg& svg, const CayleyBall& ball, const Frame& f) {
    for (VertexId u = 0; u < ball.size(); ++u) {
        for (VertexId v : ball.neighbors(u)) {
            if (v != kNoVertex && u < v) svg.line("edge", palette(Layer::ball_edges), f.at(ball, u), f.at(ball, v));
        }
    }
}

void draw_qcsets(Svg& svg, const ElectricSpace& es, const Frame& f) {
    for (const auto& set : es.sets()) {
        if (set.members.size() >= 2) svg.polyline("qcset", palette(Layer::qcsets), f.at(es.ball(), set.members));
    }
}

}  // namespace

std::string_view to_string(Layer layer) {
    switch (layer) {
    case Layer::ball_edges: return "ball_edges";
    case Layer::qcsets: return "qcsets";
    case Layer::geodesic: return "geodesic";
    case Layer::electric_geodesic: return "electric_geodesic";
    case Layer::electro_ambient: return "electro_ambient";
    case Layer::ladder: return "ladder";
    }
    return "?";
}

Layer parse_layer(std::string_view name) {
    for (Layer l : {Layer::ball_edges, Layer::qcsets, Layer::geodesic, Layer::electric_geodesic,
                    Layer::electro_ambient, Layer::ladder}) {
        if (to_string(l) == name) return l;
    }
    throw ConfigError("unknown layer '" + std::string(name) + "'");
}

std::vector<Layer> parse_layers(std::string_view list) {
    std::vector<Layer> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = list.substr(0, comma);
        if (!item.empty()) out.push_back(parse_layer(item));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return out;
}

std::string render_ball(const CayleyBall& ball, const RenderOptions& opt) {
    const double size = 2 * (kDisk + kGap);
    Svg svg(size, size, opt.timestamp);
    const Frame f{size / 2, size / 2, kDisk};
    svg.disk(f.cx, f.cy, f.r, "ball R=" + std::to_string(ball.radius()));
    const bool electric = has(opt, Layer::qcsets) || has(opt, Layer::electric_geodesic) || has(opt, Layer::electro_ambient);
    std::optional<ElectricSpace> es;
    if (electric) es.emplace(ball, opt.curve);
    if (has(opt, Layer::ladder)) throw ConfigError("layer 'ladder' needs a model render");
    if (has(opt, Layer::ball_edges)) draw_edges(svg, ball, f);
    if (has(opt, Layer::qcsets)) draw_qcsets(svg, *es, f);
    const bool paths = has(opt, Layer::geodesic) || electric;
    const VertexId u = paths ? ball.at(opt.from) : kNoVertex;
    const VertexId v = paths ? ball.at(opt.to) : kNoVertex;
    if (has(opt, Layer::geodesic)) {
        svg.polyline("geodesic", palette(Layer::geodesic), f.at(ball, geodesic(ball, u, v).vertices));
    }
    if (has(opt, Layer::electric_geodesic) || has(opt, Layer::electro_ambient)) {
        const EPath ep = electric_geodesic(*es, u, v);
        if (has(opt, Layer::electric_geodesic)) {
            svg.polyline("electric_geodesic", palette(Layer::electric_geodesic), f.at(ball, ep.path.vertices));
        }
        if (has(opt, Layer::electro_ambient)) {
            svg.polyline("electro_ambient", palette(Layer::electro_ambient),
                         f.at(ball, electro_ambient(*es, ep).vertices));
        }
    }
    svg.end_disk();
    return svg.finish();
}

std::string render_ladder(const ModelManifold& m, const Ladder& ladder, const RenderOptions& opt) {
    for (Layer l : opt.layers) {
        if (l != Layer::ball_edges && l != Layer::qcsets && l != Layer::ladder) {
            throw ConfigError("layer '" + std::string(to_string(l)) + "' is not available for ladder renders");
        }
    }
    int widest = 0;
    for (int b = 0; b < m.block_count(); ++b) widest = std::max(widest, m.levels(b));
    const double cell = 2 * kSmall + kGap;
    Svg svg(kGap + widest * cell, kGap + m.block_count() * cell, opt.timestamp);
    const auto& ball = m.ball();
    for (int b = 0; b < m.block_count(); ++b) {
        for (int l = 0; l < m.levels(b); ++l) {
            const int s = m.sheet_at(b, l);
            const Frame f{kGap + kSmall + l * cell, kGap + kSmall + (m.block_count() - 1 - b) * cell, kSmall};
            svg.disk(f.cx, f.cy, f.r,
                     "block " + std::to_string(b) + " level " + std::to_string(l) + " sheet " + std::to_string(s));
            if (has(opt, Layer::ball_edges)) draw_edges(svg, ball, f);
            if (has(opt, Layer::qcsets) && m.sheet(s).electric) draw_qcsets(svg, m.electric(m.sheet(s).curve), f);
            if (has(opt, Layer::ladder) && ladder.present(s)) {
                svg.polyline("ladder", palette(Layer::ladder), f.at(ball, ladder.at(s).vertices));
            }
            svg.end_disk();
        }
    }
    return svg.finish();
}

}  // namespace ctlab
