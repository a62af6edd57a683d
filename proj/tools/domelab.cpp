// domelab: batch front-end over the geometry library.  Every run reads a JSON
// config, writes its artifacts into --out, and drops a manifest.json with the
// config hash, tool/compiler versions and wall time so results can be re-run
// and diffed byte for byte.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "domelab/dimension.hpp"
#include "domelab/dome.hpp"
#include "domelab/gauges.hpp"
#include "domelab/io.hpp"
#include "domelab/level_sets.hpp"
#include "domelab/partition.hpp"
#include "domelab/snowflake.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace domelab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunContext {
    std::string command;
    json config;
    std::string config_text;
    fs::path out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::string> artifacts;
    json report;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void emit(const std::string& name, const std::string& content) {
        io::write_file((out_dir / name).string(), content);
        artifacts.push_back(name);
    }

    void write_manifest() {
        std::uint64_t hash = 14695981039346656037ull;  // FNV-1a over config bytes
        for (unsigned char c : config_text) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json m;
        m["command"] = command;
        m["config"] = config;
        m["config_hash"] = hash;
        m["seed"] = seed;
        m["threads"] = threads;
        m["versions"] = {{"domelab", kVersion}, {"compiler", __VERSION__}};
        m["wall_time_seconds"] = wall;
        m["artifacts"] = artifacts;
        if (!report.is_null()) m["report"] = report;
        io::write_file((out_dir / "manifest.json").string(), m.dump(2) + "\n");
    }
};

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(std::string("config field '") + key + "' missing or not a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double def) {
    return j.contains(key) ? require_number(j, key) : def;
}

std::size_t size_or(const json& j, const char* key, std::size_t def) {
    if (!j.contains(key)) return def;
    double v = require_number(j, key);
    if (v < 0 || v != std::floor(v))
        throw ConfigError(std::string("config field '") + key + "' must be a nonnegative integer");
    return (std::size_t)v;
}

// Curve sources shared by the subcommands: a snowflake spec, a CSV file, or a
// built-in fixture (circle / square / stadium approximations as polygons).
PolyCurve load_curve(const json& j, const fs::path& base) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("curve config needs a 'type' field");
    std::string type = j.at("type").get<std::string>();
    if (type == "snowflake") {
        SnowflakeSpec spec = SnowflakeSpec::from_json(j.dump());
        return generate(spec);
    }
    if (type == "csv") {
        if (!j.contains("path")) throw ConfigError("csv curve needs 'path'");
        fs::path p = j.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        bool closed = j.value("closed", true);
        return io::curve_from_csv(io::read_file(p.string()), closed);
    }
    if (type == "circle") {
        double r = number_or(j, "radius", 1.0);
        std::size_t n = size_or(j, "segments", 512);
        if (n < 8) throw ConfigError("circle needs at least 8 segments");
        std::vector<Vec2> pts(n);
        for (std::size_t i = 0; i < n; i++) {
            double a = 2.0 * std::numbers::pi * (double)i / (double)n;
            pts[i] = {r * std::cos(a), r * std::sin(a)};
        }
        return PolyCurve::make(std::move(pts), true);
    }
    if (type == "square") {
        double s = number_or(j, "side", 1.0);
        std::size_t per = size_or(j, "segments_per_side", 16);
        std::vector<Vec2> pts;
        Vec2 c[4] = {{0, 0}, {s, 0}, {s, s}, {0, s}};
        for (int e = 0; e < 4; e++)
            for (std::size_t k = 0; k < per; k++)
                pts.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * ((double)k / (double)per));
        return PolyCurve::make(std::move(pts), true);
    }
    throw ConfigError("unknown curve type: " + type);
}

// Random subarcs of a closed curve with diameters spread over dyadic scales.
std::vector<ArcRef> sample_subarcs(const PolyCurve& curve, std::size_t count,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double L = curve.total_length();
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<ArcRef> arcs;
    double min_len = 8.0 * curve.min_spacing();
    for (std::size_t k = 0; k < count; k++) {
        double start = ud(rng) * L;
        double frac = std::pow(0.5, 1.0 + 8.0 * ud(rng));  // lengths L/512 .. L/2
        double len = std::max(min_len, frac * L);
        if (len >= L) len = L / 2;
        arcs.push_back(make_arc(curve, start, start + len));
    }
    return arcs;
}

std::string partition_csv(const Partition& part) {
    std::ostringstream os;
    os << "piece_id,start,end,diam\n";
    for (std::size_t i = 0; i < part.pieces.size(); i++) {
        const ArcRef& a = part.pieces[i];
        os << i << ',' << io::fmt(a.start) << ',' << io::fmt(a.end) << ','
           << io::fmt(arc_diameter(a)) << '\n';
    }
    return os.str();
}

std::string edge_wca_csv(const std::vector<EdgeWcaRow>& rows) {
    std::ostringstream os;
    os << "step,diam,piece_step,pieces,m_index,mode\n";
    for (const auto& r : rows)
        os << r.step << ',' << io::fmt(r.diam) << ',' << r.piece_step << ','
           << io::fmt(r.pieces) << ',' << io::fmt(r.m_index) << ',' << r.mode << '\n';
    return os.str();
}

void run_snowflake(RunContext& ctx) {
    SnowflakeSpec spec = SnowflakeSpec::from_json(ctx.config.dump());
    PolyCurve curve = generate(spec);
    ctx.emit("curve.csv", io::curve_to_csv(curve));
    ctx.report["vertices"] = curve.vertex_count();
    ctx.report["perimeter"] = curve.total_length();
    ctx.report["diameter"] = curve.diameter();
}

void run_gauge(RunContext& ctx) {
    PolyCurve curve = load_curve(ctx.config.at("curve"), ctx.out_dir);
    std::size_t budget = size_or(ctx.config, "budget_pairs", 4000000);
    GaugeResult tp = two_point_constant(curve, budget);
    GaugeResult ca = chord_arc_constant(curve, budget);
    std::ostringstream os;
    os << "metric,value,witness_ax,witness_ay,witness_bx,witness_by,pairs,exhaustive\n";
    auto row = [&](const char* name, const GaugeResult& g) {
        os << name << ',' << io::fmt(g.value) << ',' << io::fmt(g.witness_a.x) << ','
           << io::fmt(g.witness_a.y) << ',' << io::fmt(g.witness_b.x) << ','
           << io::fmt(g.witness_b.y) << ',' << g.pairs_scanned << ','
           << (g.exhaustive ? "true" : "false") << '\n';
    };
    row("two_point", tp);
    row("chord_arc", ca);
    ctx.emit("gauge.csv", os.str());
    ctx.report["two_point"] = tp.value;
    ctx.report["chord_arc"] = ca.value;

    if (ctx.config.contains("wca")) {
        const json& w = ctx.config.at("wca");
        std::size_t count = size_or(w, "subarcs", 64);
        double m0 = number_or(w, "m0", 8.0);
        auto arcs = sample_subarcs(curve, count, ctx.seed);
        WcaReport rep = weak_chord_arc_scan(curve, arcs, m0);
        ctx.emit("wca.csv", wca_report_csv(rep));
        ctx.report["wca_max_index"] = rep.max_index;
    }
}

void run_partition(RunContext& ctx) {
    PolyCurve curve = load_curve(ctx.config.at("curve"), ctx.out_dir);
    double delta = require_number(ctx.config, "delta");
    double start = number_or(ctx.config, "start", 0.0);
    double end = number_or(ctx.config, "end", curve.total_length());
    ArcRef arc = make_arc(curve, start, end);
    Partition part = build_delta_partition(arc, delta);
    ctx.emit("partition.csv", partition_csv(part));
    ctx.report["pieces"] = part.pieces.size();
    ctx.report["m_index"] = m_index(arc, part);
    ctx.report["delta"] = delta;
}

void run_dim(RunContext& ctx) {
    PolyCurve curve = load_curve(ctx.config.at("curve"), ctx.out_dir);
    double dmin = number_or(ctx.config, "delta_min", 1.0 / 1024.0);
    double dmax = number_or(ctx.config, "delta_max", 1.0 / 8.0);
    std::size_t levels = size_or(ctx.config, "levels", 8);
    DimensionFit box = box_dimension(curve, dmin * curve.diameter(),
                                     dmax * curve.diameter(), levels);
    std::ostringstream os;
    os << "delta,count\n";
    for (std::size_t i = 0; i < box.scales.size(); i++)
        os << io::fmt(box.scales[i]) << ',' << box.counts[i] << '\n';
    ctx.emit("box.csv", os.str());
    ctx.report["box_dimension"] = box.exponent;
    ctx.report["box_residual"] = box.residual;

    if (ctx.config.contains("assouad")) {
        const json& a = ctx.config.at("assouad");
        std::size_t count = size_or(a, "subarcs", 64);
        std::vector<double> grid;
        if (a.contains("delta_grid"))
            grid = a.at("delta_grid").get<std::vector<double>>();
        else
            for (int k = 2; k <= 6; k++) grid.push_back(std::pow(0.5, k));
        auto arcs = sample_subarcs(curve, count, ctx.seed);
        DimensionFit prof = assouad_profile(curve, arcs, grid);
        ctx.emit("assouad.csv", dimension_rows_csv(prof));
        ctx.report["assouad_profile"] = prof.exponent;
    }
}

void run_levels(RunContext& ctx) {
    PolyCurve domain = load_curve(ctx.config.at("domain"), ctx.out_dir);
    double eps0 = number_or(ctx.config, "eps0", 0.2 * domain.diameter());
    std::size_t levels = size_or(ctx.config, "levels", 6);
    double h = number_or(ctx.config, "h", domain.diameter() / 256.0);
    std::size_t budget = size_or(ctx.config, "budget_pairs", 2000000);
    LqcReport rep = lqc_scan(domain, eps0, levels, budget, h);
    ctx.emit("levels.csv", lqc_report_csv(rep));
    ctx.report["max_constant"] = rep.max_constant;
    ctx.report["violation_levels"] = rep.violation_levels;
    if (ctx.config.value("write_curves", false)) {
        DistanceField field = build_distance_field(domain, h);
        std::size_t id = 0;
        for (const auto& row : rep.rows) {
            if (row.components != 1) continue;
            LevelCurve lc = extract_level_curve(field, row.epsilon);
            ctx.emit("level_" + std::to_string(id++) + ".csv",
                     io::curve_to_csv(lc.components[0]));
        }
    }
}

DomeMesh dome_from_config(const json& j, const fs::path& base) {
    PolyCurve domain = load_curve(j.at("domain"), base);
    double alpha = require_number(j, "alpha");
    double h = number_or(j, "h", domain.diameter() / 128.0);
    int band = (int)number_or(j, "band_levels", -1.0);
    return build_dome(domain, alpha, h, band);
}

void run_dome(RunContext& ctx) {
    DomeMesh mesh = dome_from_config(ctx.config, ctx.out_dir);
    ctx.emit("dome.obj", io::mesh_to_obj(mesh.vertices, mesh.triangles));
    ctx.report["vertices"] = mesh.vertices.size();
    ctx.report["triangles"] = mesh.triangles.size();
    ctx.report["area"] = mesh.total_area();
    ctx.report["euler_characteristic"] = mesh.euler_characteristic();
}

void run_regularity(RunContext& ctx) {
    DomeMesh mesh = dome_from_config(ctx.config, ctx.out_dir);
    std::size_t centers = size_or(ctx.config, "centers_per_stratum", 8);
    std::vector<double> radii;
    if (ctx.config.contains("radii"))
        radii = ctx.config.at("radii").get<std::vector<double>>();
    else
        for (int k = 1; k <= 4; k++) radii.push_back(mesh.domain_diam * std::pow(0.5, k + 1));
    RegularityReport rep = regularity_scan(mesh, centers, radii, ctx.seed);
    ctx.emit("regularity.csv", regularity_csv(rep));
    ctx.report["constant"] = rep.constant;
}

void run_llc(RunContext& ctx) {
    DomeMesh mesh = dome_from_config(ctx.config, ctx.out_dir);
    std::size_t samples = size_or(ctx.config, "samples", 32);
    double cap = number_or(ctx.config, "lambda_cap", 100.0);
    LlcReport rep = llc_scan(mesh, samples, ctx.seed, cap);
    ctx.emit("llc.csv", llc_csv(rep));
    ctx.report["lambda1"] = rep.lambda1;
    ctx.report["lambda2"] = rep.lambda2;
    ctx.report["capped"] = rep.capped1 || rep.capped2;
}

void run_piece(RunContext& ctx) {
    DomeMesh mesh = dome_from_config(ctx.config, ctx.out_dir);
    Vec2 px1{require_number(ctx.config, "x1"), require_number(ctx.config, "y1")};
    Vec2 py1{require_number(ctx.config, "x1b"), require_number(ctx.config, "y1b")};
    double t2 = require_number(ctx.config, "t2");
    double c0 = number_or(ctx.config, "c0", 1.5);
    double grid_h = number_or(ctx.config, "grid_h", mesh.domain_diam / 256.0);
    SquarePiece piece = square_piece(mesh, px1, py1, t2, c0, grid_h);
    json out;
    out["t1"] = piece.t1;
    out["t2"] = piece.t2;
    out["area"] = piece.area;
    out["diam"] = piece.diam;
    out["ratio"] = piece.ratio;
    ctx.emit("piece.json", out.dump(2) + "\n");
    ctx.report = out;
}

void run_repro(RunContext& ctx, const std::string& name) {
    if (name == "sec51") {
        // Bumps at steps 10, 100, ...: the edge-subarc scan stays under one bound.
        SnowflakeSpec spec;
        spec.p = ctx.config.value("p", 0.45);
        spec.schedule.kind = ScheduleKind::powers_of_ten;
        spec.depth = 1;
        spec.validate();
        std::size_t max_step = size_or(ctx.config, "max_step", 40);
        std::vector<EdgeWcaRow> rows;
        double worst = 0.0;
        for (std::size_t n = 1; n <= max_step; n++) {
            rows.push_back(wca_edge_row(spec, n));
            worst = std::max(worst, rows.back().m_index);
        }
        ctx.emit("wca.csv", edge_wca_csv(rows));
        ctx.report["max_m_index"] = worst;
        return;
    }
    if (name == "sec52") {
        // Bumps at the perfect squares: the M column grows and the Assouad
        // profile sits near 1.
        SnowflakeSpec spec;
        spec.p = ctx.config.value("p", 1.0 / 3.0);
        spec.schedule.kind = ScheduleKind::squares;
        spec.depth = 1;
        spec.validate();
        std::size_t max_step = size_or(ctx.config, "max_step", 25);
        std::vector<EdgeWcaRow> rows;
        for (std::size_t n = 1; n <= max_step; n++) rows.push_back(wca_edge_row(spec, n));
        ctx.emit("wca.csv", edge_wca_csv(rows));
        ctx.report["m_at_first_step"] = rows.front().m_index;
        ctx.report["m_at_last_step"] = rows.back().m_index;

        SnowflakeSpec gen = spec;
        gen.depth = size_or(ctx.config, "depth", 9);
        PolyCurve curve = generate(gen);
        auto arcs = sample_subarcs(curve, 48, ctx.seed);
        std::vector<double> grid = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
        DimensionFit prof = assouad_profile(curve, arcs, grid);
        ctx.emit("assouad.csv", dimension_rows_csv(prof));
        ctx.report["assouad_profile"] = prof.exponent;
        return;
    }
    if (name == "cone") {
        // Unit-disk dome at alpha = 1: surface of revolution with area 2*sqrt(2)*pi.
        json cfg;
        cfg["domain"] = {{"type", "circle"}, {"radius", 1.0}, {"segments", 1024}};
        cfg["alpha"] = 1.0;
        cfg["h"] = ctx.config.value("h", 1.0 / 256.0) * 2.0;  // diam = 2
        DomeMesh mesh = dome_from_config(cfg, ctx.out_dir);
        ctx.emit("dome.obj", io::mesh_to_obj(mesh.vertices, mesh.triangles));
        double area = mesh.total_area();
        double expected = 2.0 * std::numbers::sqrt2 * std::numbers::pi;
        ctx.report["area"] = area;
        ctx.report["expected"] = expected;
        ctx.report["relative_error"] = std::abs(area - expected) / expected;
        return;
    }
    if (name == "alpha2-llc") {
        // Unit-disk dome at alpha = 2: mirror pairs near the rim force lambda1
        // past any bound; the scan should hit the cap.
        json cfg;
        cfg["domain"] = {{"type", "circle"}, {"radius", 1.0}, {"segments", 1024}};
        cfg["alpha"] = 2.0;
        cfg["h"] = ctx.config.value("h", 1.0 / 128.0) * 2.0;
        cfg["band_levels"] = 4;
        DomeMesh mesh = dome_from_config(cfg, ctx.out_dir);
        LlcReport rep = llc_scan(mesh, 16, ctx.seed, 100.0);
        ctx.emit("llc.csv", llc_csv(rep));
        ctx.report["lambda1"] = rep.lambda1;
        ctx.report["capped"] = rep.capped1;
        return;
    }
    throw ConfigError("unknown repro experiment: " + name +
                      " (expected sec51, sec52, cone or alpha2-llc)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"domelab: snowflake curves, gauges and double-dome surfaces"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    std::string repro_name;

    const char* names[] = {"snowflake", "gauge",      "partition", "dim",  "levels",
                           "dome",      "regularity", "llc",       "piece", "repro"};
    std::vector<CLI::App*> subs;
    for (const char* n : names) {
        CLI::App* s = app.add_subcommand(n);
        s->add_option("--config", config_path, "JSON config file");
        s->add_option("--out", out_dir, "output directory");
        s->add_option("--seed", seed, "random seed");
        s->add_option("--threads", threads, "worker thread count");
        subs.push_back(s);
    }
    subs.back()->add_option("name", repro_name, "experiment: sec51 | sec52 | cone | alpha2-llc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.seed = seed;
    if (threads <= 0) {
        const char* env = std::getenv("DOMELAB_THREADS");
        threads = env ? std::atoi(env) : 1;
        if (threads <= 0) threads = 1;
    }
    ctx.threads = threads;
    ctx.out_dir = out_dir;

    try {
        if (!config_path.empty()) {
            ctx.config_text = io::read_file(config_path);
            ctx.config = json::parse(ctx.config_text);
            if (!ctx.config.is_object()) throw ConfigError("config root must be a JSON object");
        } else {
            ctx.config = json::object();
            ctx.config_text = "{}";
        }
        if (ctx.command == "repro" && repro_name.empty())
            throw ConfigError("repro needs an experiment name");
        fs::create_directories(ctx.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (ctx.command == "snowflake")
            run_snowflake(ctx);
        else if (ctx.command == "gauge")
            run_gauge(ctx);
        else if (ctx.command == "partition")
            run_partition(ctx);
        else if (ctx.command == "dim")
            run_dim(ctx);
        else if (ctx.command == "levels")
            run_levels(ctx);
        else if (ctx.command == "dome")
            run_dome(ctx);
        else if (ctx.command == "regularity")
            run_regularity(ctx);
        else if (ctx.command == "llc")
            run_llc(ctx);
        else if (ctx.command == "piece")
            run_piece(ctx);
        else
            run_repro(ctx, repro_name);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return 3;
    }

    ctx.write_manifest();
    std::cout << ctx.command << ": wrote " << ctx.artifacts.size() << " artifact(s) to "
              << ctx.out_dir.string() << "\n";
    return 0;
}
