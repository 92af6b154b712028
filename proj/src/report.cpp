#include "ctlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <random>
#include <set>

#include "json.hpp"

#include "ctlab/ct.hpp"
#include "ctlab/parallel.hpp"
#include "ctlab/rng.hpp"
#include "ctlab/twist.hpp"

namespace ctlab {

namespace fs = std::filesystem;
using nlohmann::json;

CsvWriter::CsvWriter(const fs::path& file, const std::vector<std::string>& header)
    : out_(file, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw Error("cannot write " + file.string());
    for (const auto& h : header) *this << h;
    end_row();
}

std::string CsvWriter::quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string q = "\"";
    for (char ch : field) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string CsvWriter::format(double value) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

CsvWriter& CsvWriter::operator<<(const std::string& field) {
    if (filled_ == columns_) throw Error("csv row has too many fields");
    if (filled_++) out_ << ',';
    out_ << quote(field);
    return *this;
}

CsvWriter& CsvWriter::operator<<(double value) { return *this << format(value); }

void CsvWriter::end_row() {
    if (filled_ != columns_) throw Error("csv row has too few fields");
    out_ << '\n';
    filled_ = 0;
}

double SuiteConfig::threshold(const std::string& key, double fallback) const {
    auto it = thresholds.find(key);
    return it == thresholds.end() ? fallback : it->second;
}

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names{"ball",   "electro", "projections", "twist", "blocks",
                                                "ladder", "retract", "ct",          "audit"};
    return names;
}

SuiteConfig ExperimentConfig::suite(const std::string& name) const {
    for (const auto& s : suites) {
        if (s.name == name) return s;
    }
    SuiteConfig s;
    s.name = name;
    return s;
}

namespace {

template <class T>
T get(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": wrong type");
    }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

SuiteConfig parse_suite(const json& j, std::size_t index) {
    SuiteConfig s;
    const std::string where = "suites[" + std::to_string(index) + "]";
    if (j.is_string()) {
        s.name = j.get<std::string>();
    } else {
        check_keys(j, {"name", "samples", "seed", "thresholds", "curve", "n", "N", "from", "to", "exhaustive"}, where);
        if (!j.contains("name")) throw ConfigError(where + ": missing name");
        s.name = get<std::string>(j["name"], where + ".name");
        if (j.contains("samples")) s.samples = get<std::size_t>(j["samples"], where + ".samples");
        if (j.contains("seed")) s.seed = get<std::uint64_t>(j["seed"], where + ".seed");
        if (j.contains("thresholds")) {
            if (!j["thresholds"].is_object()) throw ConfigError(where + ".thresholds must be an object");
            for (const auto& [k, v] : j["thresholds"].items()) s.thresholds[k] = get<double>(v, where + ".thresholds." + k);
        }
        if (j.contains("curve")) s.curve = get<std::string>(j["curve"], where + ".curve");
        if (j.contains("n")) s.ns = get<std::vector<int>>(j["n"], where + ".n");
        if (j.contains("N")) s.Ns = get<std::vector<int>>(j["N"], where + ".N");
        if (j.contains("from")) s.from = get<std::string>(j["from"], where + ".from");
        if (j.contains("to")) s.to = get<std::string>(j["to"], where + ".to");
        if (j.contains("exhaustive")) s.exhaustive = get<bool>(j["exhaustive"], where + ".exhaustive");
    }
    const auto& names = known_suites();
    if (std::find(names.begin(), names.end(), s.name) == names.end()) {
        throw ConfigError("unknown suite '" + s.name + "'");
    }
    CurveClass::parse(s.curve);
    for (int n : s.ns) {
        if (n == 0) throw ConfigError(where + ": twist exponents must be nonzero");
    }
    for (char ch : s.from + s.to) letter_from_char(ch);
    return s;
}

std::string vlabel(const CayleyBall& ball, VertexId v) { return v == 0 ? "e" : ball.label(v); }

std::string mlabel(const ModelManifold& m, VertexId x) {
    return std::to_string(m.sheet_of(x)) + ":" + vlabel(m.ball(), m.local(x));
}

std::string join(const std::vector<std::pair<std::string, double>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += (out.empty() ? "" : ";") + k + "=" + CsvWriter::format(v);
    return out;
}

class Context {
public:
    Context(const ExperimentConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {}

    const ExperimentConfig& cfg() const { return cfg_; }
    fs::path out(const std::string& file) const { return cfg_.output / file; }

    const CayleyBall& ball() {
        if (!ball_) {
            bool rebuilt = false;
            ball_.emplace(CayleyBall::load_or_build(cfg_.cache, cfg_.ball, &rebuilt));
            note(std::string("ball R=") + std::to_string(cfg_.ball.radius) + (rebuilt ? " built" : " loaded from cache"));
        }
        return *ball_;
    }

    const ModelManifold& model() {
        if (!model_) {
            if (cfg_.stack.empty()) throw ConfigError("stack is empty");
            bool rebuilt = false;
            model_.emplace(ModelManifold::load_or_build(ball(), cfg_.stack, cfg_.cache, cfg_.jobs, &rebuilt));
            note(std::string("model ") + (rebuilt ? "built" : "loaded from cache"));
        }
        return *model_;
    }

    const Ladder& ladder() {
        if (!ladder_) {
            const auto s = cfg_.suite("ladder");
            const auto& b = ball();
            ladder_.emplace(build_ladder(model(), geodesic(b, b.at(s.from), b.at(s.to))));
        }
        return *ladder_;
    }

    const Retraction& retraction() {
        if (!pi_) pi_.emplace(Retraction::build(model(), ladder(), cfg_.jobs));
        return *pi_;
    }

    void note(const std::string& text) const {
        if (log_) *log_ << "  " << text << '\n';
    }

private:
    const ExperimentConfig& cfg_;
    std::ostream* log_;
    std::optional<CayleyBall> ball_;
    std::optional<ModelManifold> model_;
    std::optional<Ladder> ladder_;
    std::optional<Retraction> pi_;
};

SuiteResult run_ball(Context& ctx, const SuiteConfig& sc) {
    const auto& ball = ctx.ball();
    const auto hyp = estimate_delta(ball, sc.samples, sc.seed, ctx.cfg().jobs);
    const double limit = sc.threshold("delta", 6);
    CsvWriter csv(ctx.out("ball.csv"),
                  {"R", "margin", "vertices", "edges", "trusted_radius", "delta", "samples", "witness"});
    std::string witness;
    if (hyp.witness[0] != kNoVertex) {
        witness = vlabel(ball, hyp.witness[0]) + " " + vlabel(ball, hyp.witness[1]) + " " + vlabel(ball, hyp.witness[2]);
    }
    csv << ball.radius() << ball.margin() << ball.size() << ball.edge_count() << ball.trusted_radius() << hyp.delta
        << hyp.sample_count << witness;
    csv.end_row();
    return {"ball", hyp.delta <= limit, {{"delta", hyp.delta}, {"vertices", static_cast<double>(ball.size())}},
            witness, 0, {"ball.csv"}};
}

SuiteResult run_electro(Context& ctx, const SuiteConfig& sc) {
    const auto& ball = ctx.ball();
    const ElectricSpace es(ball, CurveClass::parse(sc.curve));
    const auto trusted = ball.ball_prefix(ball.trusted_radius());
    const double k_limit = sc.threshold("K", 4);
    const double eps_limit = sc.threshold("eps", 8);
    struct Row {
        std::uint64_t seed;
        VertexId u, v;
        int d, d_e, eps;
        double k;
        std::size_t sets;
        PenetrationReport pen;
    };
    std::vector<Row> rows(sc.samples);
    parallel_for(rows.size(), ctx.cfg().jobs, [&](std::size_t i) {
        Row& r = rows[i];
        r.seed = derive_seed(sc.seed, i);
        std::mt19937_64 rng(r.seed);
        r.u = static_cast<VertexId>(uniform_below(rng, trusted));
        r.v = static_cast<VertexId>(uniform_below(rng, trusted));
        const GPath g = geodesic(ball, r.u, r.v);
        r.d = g.hyperbolic_length();
        const EPath ep = electric_geodesic(es, r.u, r.v);
        r.d_e = ep.electric_length();
        r.sets = ep.visits.size();
        GPath amb = electro_ambient(es, ep);
        std::fill(amb.weights.begin(), amb.weights.end(), 1);
        const auto q = is_quasigeodesic(ball, amb, k_limit, eps_limit);
        r.k = q.k_measured;
        r.eps = q.eps_measured;
        r.pen = penetration_compare(es, ep, g);
    });
    CsvWriter csv(ctx.out("electro.csv"), {"seed", "u", "v", "d", "d_e", "K_measured", "sets_crossed"});
    double k = 1;
    int eps = 0;
    std::string witness;
    struct Pen {
        std::size_t met = 0;
        int entry = 0, exit = 0, solo = 0;
    };
    std::map<SetId, Pen> pen;
    for (const auto& r : rows) {
        csv << r.seed << vlabel(ball, r.u) << vlabel(ball, r.v) << r.d << r.d_e << r.k << r.sets;
        csv.end_row();
        if (r.k > k || r.eps > eps) witness = vlabel(ball, r.u) + " -> " + vlabel(ball, r.v);
        k = std::max(k, r.k);
        eps = std::max(eps, r.eps);
        for (const auto& p : r.pen.rows) {
            auto& agg = pen[p.set];
            ++agg.met;
            agg.entry = std::max(agg.entry, p.entry_gap);
            agg.exit = std::max(agg.exit, p.exit_gap);
            agg.solo = std::max(agg.solo, p.solo_length);
        }
    }
    CsvWriter pcsv(ctx.out("electro_penetration.csv"),
                   {"set", "rep", "samples_meeting", "max_entry_gap", "max_exit_gap", "max_solo_length"});
    for (const auto& [set, agg] : pen) {
        pcsv << static_cast<std::size_t>(set) << vlabel(ball, es.set(set).rep) << agg.met << agg.entry << agg.exit
             << agg.solo;
        pcsv.end_row();
    }
    return {"electro", k <= k_limit && eps <= eps_limit, {{"K", k}, {"eps", eps}}, witness, 0,
            {"electro.csv", "electro_penetration.csv"}};
}

SuiteResult run_projections(Context& ctx, const SuiteConfig& sc) {
    const auto& ball = ctx.ball();
    const CurveClass curve = CurveClass::parse(sc.curve);
    const ElectricSpace es(ball, curve);
    const auto trusted = ball.ball_prefix(ball.trusted_radius());
    std::mt19937_64 rng(derive_seed(sc.seed, 0x1a4bda));
    const VertexId x = static_cast<VertexId>(uniform_below(rng, trusted));
    const VertexId y = static_cast<VertexId>(uniform_below(rng, trusted));
    const GPath lambda = geodesic(ball, x, y);
    const GPath mu = electro_ambient(es, electric_geodesic(es, x, y));
    const auto table = ProjectionTable::hyperbolic(ball, lambda);
    const auto phi = ball_map(ball, TwistMap{curve, 1}, ctx.cfg().jobs);
    struct Row {
        int lip = -1, comm = -1, agree = -1;
    };
    std::vector<Row> rows(sc.samples);
    parallel_for(rows.size(), ctx.cfg().jobs, [&](std::size_t i) {
        const auto s = derive_seed(sc.seed, i);
        auto keep = [](const DefectReport& r) { return r.used ? r.max_defect : -1; };
        rows[i].lip = keep(lipschitz_constant(ball, table, 1, s));
        rows[i].comm = keep(almost_commute_defect(ball, phi, lambda, 1, s));
        rows[i].agree = keep(agreement_defect(es, lambda, mu, 1, s));
    });
    CsvWriter csv(ctx.out("projections.csv"), {"check", "sample", "defect"});
    int worst[3] = {0, 0, 0};
    const char* names[3] = {"lipschitz", "almost_commute", "agreement"};
    for (int l = 0; l < 3; ++l) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const int d = l == 0 ? rows[i].lip : l == 1 ? rows[i].comm : rows[i].agree;
            if (d < 0) continue;
            csv << names[l] << i << d;
            csv.end_row();
            worst[l] = std::max(worst[l], d);
        }
    }
    const double limit = sc.threshold("defect", 6);
    const bool ok = *std::max_element(worst, worst + 3) <= limit;
    return {"projections", ok,
            {{"lipschitz", worst[0]}, {"almost_commute", worst[1]}, {"agreement", worst[2]}},
            "lambda " + vlabel(ball, x) + " -> " + vlabel(ball, y), 0, {"projections.csv"}};
}

SuiteResult run_twist(Context& ctx, const SuiteConfig& sc) {
    const auto& ball = ctx.ball();
    const CurveClass curve = CurveClass::parse(sc.curve);
    const ElectricSpace es(ball, curve);
    CsvWriter csv(ctx.out("twist.csv"), {"n", "metric", "max_defect", "samples_used", "samples_skipped"});
    bool ok = true;
    int electric = 0;
    int hyperbolic = 0;
    std::string witness;
    for (int n : sc.ns) {
        const TwistMap tw{curve, n};
        const auto e = electric_distortion(es, tw, sc.samples, sc.seed);
        const auto h = hyperbolic_distortion(ball, tw, sc.samples, sc.seed);
        const auto w = hyperbolic_witness(tw);
        csv << n << "electric" << e.max_defect << e.used << e.skipped;
        csv.end_row();
        csv << n << "hyperbolic" << h.max_defect << h.used << h.skipped;
        csv.end_row();
        csv << n << "witness" << (w.after - w.before) << 1 << 0;
        csv.end_row();
        if (e.max_defect != 0 || e.used == 0 || w.after - w.before < std::abs(n)) {
            ok = false;
            witness = "n=" + std::to_string(n) + (e.u == kNoVertex ? "" : " " + vlabel(ball, e.u) + " " + vlabel(ball, e.v));
        }
        electric = std::max(electric, e.max_defect);
        hyperbolic = std::max(hyperbolic, h.max_defect);
    }
    return {"twist", ok, {{"electric", electric}, {"hyperbolic", hyperbolic}}, witness, 0, {"twist.csv"}};
}

SuiteResult run_blocks(Context& ctx, const SuiteConfig&) {
    const auto& m = ctx.model();
    CsvWriter csv(ctx.out("blocks.csv"), {"block", "spec", "bottom_sheet", "top_sheet", "levels", "glue_distortion"});
    for (int b = 0; b < m.block_count(); ++b) {
        csv << b << describe(m.specs()[b]) << m.bottom_sheet(b) << m.top_sheet(b) << m.levels(b)
            << (m.is_thin(b) ? std::string() : std::to_string(m.glue_distortion(b)));
        csv.end_row();
    }
    return {"blocks", true,
            {{"blocks", m.block_count()}, {"sheets", m.sheet_count()}, {"vertices", static_cast<double>(m.size())}},
            "", 0, {"blocks.csv"}};
}

SuiteResult run_ladder(Context& ctx, const SuiteConfig& sc) {
    const auto& m = ctx.model();
    const auto& L = ctx.ladder();
    CsvWriter csv(ctx.out("ladder.csv"), {"block", "level", "seq", "vertex"});
    for (int b = 0; b < m.block_count(); ++b) {
        for (int l = 0; l < m.levels(b); ++l) {
            const int s = m.sheet_at(b, l);
            if (!L.present(s)) continue;
            const auto& p = L.at(s).vertices;
            for (std::size_t i = 0; i < p.size(); ++i) {
                csv << b << l << i << vlabel(m.ball(), p[i]);
                csv.end_row();
            }
        }
    }
    SuiteResult res{"ladder", L.truncated_at < 0, {{"blocks_built", L.built_blocks(m)}, {"C", L.C}}, L.truncation, 0,
                    {"ladder.csv"}};
    if (L.truncated_at >= 0) return res;
    const auto H = height_table(m, L);
    std::mt19937_64 rng(derive_seed(sc.seed, 0x4e16));
    std::vector<VertexId> pts = L.vertices(m);
    for (std::size_t i = 0; i < sc.samples; ++i) {
        const auto s = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m.sheet_count())));
        pts.push_back(m.global(s, static_cast<VertexId>(uniform_below(rng, m.ball().size()))));
    }
    CsvWriter hcsv(ctx.out("ladder_heights.csv"), {"block", "g", "h", "points", "violations", "worst_slack"});
    std::size_t violations = 0;
    for (int b = 0; b < m.block_count(); ++b) {
        std::vector<VertexId> mine;
        for (VertexId x : pts) {
            if (m.sheet(m.sheet_of(x)).block == b) mine.push_back(x);
        }
        const auto chk = check_heights(m, L, H, mine);
        hcsv << b << H.g[b] << H.h[b] << chk.points << chk.violations << (chk.points ? chk.worst_slack : 0);
        hcsv.end_row();
        violations += chk.violations;
        if (chk.violations && res.witness.empty()) res.witness = mlabel(m, chk.witness);
    }
    res.pass = violations == 0;
    res.constants.emplace_back("height_violations", static_cast<double>(violations));
    res.artifacts.push_back("ladder_heights.csv");
    return res;
}

SuiteResult run_retract(Context& ctx, const SuiteConfig& sc) {
    const auto& m = ctx.model();
    const auto& L = ctx.ladder();
    if (L.truncated_at >= 0) throw TruncationError(L.truncation);
    const auto rep = retraction_constant(m, ctx.retraction(), sc.exhaustive ? 0 : sc.samples, sc.seed, ctx.cfg().jobs);
    CsvWriter csv(ctx.out("retract.csv"), {"edge_kind", "x", "y", "pi_x", "pi_y", "contribution"});
    std::string witness;
    for (const auto& r : rep.rows) {
        csv << std::string(to_string(r.kind)) << mlabel(m, r.x) << mlabel(m, r.y) << mlabel(m, r.px) << mlabel(m, r.py)
            << r.contribution;
        csv.end_row();
        if (witness.empty() && r.contribution == rep.C) witness = mlabel(m, r.x) + " -- " + mlabel(m, r.y);
    }
    const double limit = sc.threshold("C", 1e9);
    return {"retract", rep.C <= limit,
            {{"C", rep.C}, {"edges", static_cast<double>(rep.edges)}, {"absent", static_cast<double>(rep.absent)}},
            witness, 0, {"retract.csv"}};
}

SuiteResult run_ct(Context& ctx, const SuiteConfig& sc) {
    const auto& m = ctx.model();
    const auto curve = ct_curve(m, sc.Ns, CTOptions{sc.samples, sc.seed, ctx.cfg().jobs});
    CsvWriter csv(ctx.out("ct.csv"), {"N", "M_adm", "M_geo", "ladder_blocks", "electric_len", "hyperbolic_len", "seed"});
    CsvWriter tcsv(ctx.out("ct_tracking.csv"), {"N", "tracking", "C_retract", "bound"});
    bool tracked = true;
    for (const auto& r : curve.rows) {
        csv << r.N << r.M_adm << r.M_geo << r.ladder_blocks << r.electric_len << r.hyperbolic_len << r.seed;
        csv.end_row();
        const int bound = 4 * r.C_retract + 8;
        tcsv << r.N << r.tracking << r.C_retract << bound;
        tcsv.end_row();
        tracked = tracked && r.tracking <= bound;
    }
    const auto& rows = curve.rows;
    const bool grows = rows.size() < 2 || (rows.back().M_adm > rows.front().M_adm && rows.back().M_geo > rows.front().M_geo);
    const bool ok = curve.nondecreasing() && grows && tracked;
    std::string witness;
    if (!ok) {
        for (const auto& r : rows) {
            witness += (witness.empty() ? "" : " ") + std::to_string(r.N) + ":" + std::to_string(r.M_adm) + "/" +
                       std::to_string(r.M_geo);
        }
    }
    return {"ct", ok, {{"tracking", curve.tracking()}}, witness, 0, {"ct.csv", "ct_tracking.csv"}};
}

SuiteResult run_audit(Context& ctx, const SuiteConfig& sc) {
    const auto rows = six_properties_audit(ctx.model(), AuditOptions{sc.samples, sc.seed, ctx.cfg().jobs});
    CsvWriter csv(ctx.out("audit.csv"), {"property_id", "constant", "witness"});
    SuiteResult res{"audit", true, {}, "", 0, {"audit.csv"}};
    for (const auto& r : rows) {
        csv << r.id << r.constant << r.property + ": " + r.witness;
        csv.end_row();
        res.constants.emplace_back("p" + std::to_string(r.id), r.constant);
    }
    return res;
}

SuiteResult run_suite(Context& ctx, const SuiteConfig& sc) {
    if (sc.name == "ball") return run_ball(ctx, sc);
    if (sc.name == "electro") return run_electro(ctx, sc);
    if (sc.name == "projections") return run_projections(ctx, sc);
    if (sc.name == "twist") return run_twist(ctx, sc);
    if (sc.name == "blocks") return run_blocks(ctx, sc);
    if (sc.name == "ladder") return run_ladder(ctx, sc);
    if (sc.name == "retract") return run_retract(ctx, sc);
    if (sc.name == "ct") return run_ct(ctx, sc);
    return run_audit(ctx, sc);
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"ball", "stack", "suites", "output", "jobs"}, "config");
    ExperimentConfig cfg = default_config();
    if (j.contains("ball")) {
        const auto& b = j["ball"];
        check_keys(b, {"R", "margin", "tolerance", "cache", "max_R", "vertex_cap"}, "ball");
        if (b.contains("R")) cfg.ball.radius = get<int>(b["R"], "ball.R");
        if (b.contains("margin")) cfg.ball.margin = get<int>(b["margin"], "ball.margin");
        if (b.contains("tolerance")) cfg.ball.tolerance = get<double>(b["tolerance"], "ball.tolerance");
        if (b.contains("cache")) cfg.cache = get<std::string>(b["cache"], "ball.cache");
        if (b.contains("max_R")) cfg.max_radius = get<int>(b["max_R"], "ball.max_R");
        if (b.contains("vertex_cap")) cfg.ball.vertex_cap = get<std::size_t>(b["vertex_cap"], "ball.vertex_cap");
    }
    if (cfg.ball.radius < 1 || cfg.ball.radius > cfg.max_radius) {
        throw ConfigError("ball.R must lie in [1, " + std::to_string(cfg.max_radius) + "]");
    }
    if (cfg.ball.margin < 0 || cfg.ball.margin >= cfg.ball.radius) throw ConfigError("ball.margin must lie in [0, R)");
    if (!(cfg.ball.tolerance > 0)) throw ConfigError("ball.tolerance must be positive");
    if (j.contains("stack")) cfg.stack = parse_stack(j["stack"].dump());
    cfg.suites.clear();
    if (j.contains("suites")) {
        if (!j["suites"].is_array()) throw ConfigError("suites must be an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < j["suites"].size(); ++i) {
            auto s = parse_suite(j["suites"][i], i);
            if (!seen.insert(s.name).second) throw ConfigError("suite '" + s.name + "' listed twice");
            for (int N : s.name == "ct" ? s.Ns : std::vector<int>{}) {
                if (N < 0 || N > cfg.ball.radius - cfg.ball.margin - 1) {
                    throw ConfigError("suite '" + s.name + "': N=" + std::to_string(N) + " exceeds trusted radius - 1");
                }
            }
            cfg.suites.push_back(std::move(s));
        }
    }
    if (j.contains("output")) cfg.output = get<std::string>(j["output"], "output");
    if (j.contains("jobs")) cfg.jobs = std::max(1, get<int>(j["jobs"], "jobs"));
    return cfg;
}

ExperimentConfig load_config(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + file.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.stack = {ThickBlockSpec{Glue::identity}, ThinBlockSpec{CurveClass{Letter::a}, 4}, ThickBlockSpec{Glue::tw_c},
                 ThinBlockSpec{CurveClass{Letter::c}, 4}};
    return cfg;
}

RunOutcome run_experiment(const ExperimentConfig& config, std::ostream* log) {
    RunOutcome outcome;
    try {
        fs::create_directories(config.output);
        Context ctx(config, log);
        for (const auto& name : known_suites()) {
            auto it = std::find_if(config.suites.begin(), config.suites.end(),
                                   [&](const SuiteConfig& s) { return s.name == name; });
            if (it == config.suites.end()) continue;
            if (log) *log << "suite " << name << '\n';
            const auto t0 = std::chrono::steady_clock::now();
            SuiteResult r;
            try {
                r = run_suite(ctx, *it);
            } catch (const ConfigError&) {
                throw;
            } catch (const ResourceLimitError&) {
                throw;
            } catch (const Error& e) {
                r = SuiteResult{name, false, {}, e.what(), 0, {}};
            }
            r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (log) {
                *log << "  " << (r.pass ? "PASS" : "FAIL") << ' ' << join(r.constants) << " ("
                     << CsvWriter::format(std::round(r.runtime * 100) / 100) << " s)";
                if (!r.witness.empty()) *log << " witness: " << r.witness;
                *log << '\n';
            }
            outcome.results.push_back(std::move(r));
        }
        CsvWriter summary(config.output / "summary.csv", {"suite", "status", "constants", "witness", "artifacts"});
        for (const auto& r : outcome.results) {
            std::string artifacts;
            for (const auto& a : r.artifacts) artifacts += (artifacts.empty() ? "" : ";") + a;
            summary << r.id << (r.pass ? "pass" : "fail") << join(r.constants) << r.witness << artifacts;
            summary.end_row();
        }
        const bool all = std::all_of(outcome.results.begin(), outcome.results.end(), [](const auto& r) { return r.pass; });
        outcome.exit_code = all ? 0 : 1;
    } catch (const ConfigError& e) {
        outcome.exit_code = 2;
        outcome.error = e.what();
    } catch (const ResourceLimitError& e) {
        outcome.exit_code = 3;
        outcome.error = e.what();
    } catch (const fs::filesystem_error& e) {
        outcome.exit_code = 2;
        outcome.error = e.what();
    }
    return outcome;
}

}  // namespace ctlab
