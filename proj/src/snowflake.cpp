#include "domelab/snowflake.hpp"

#include <cmath>

#include <json.hpp>

namespace domelab {

namespace {

// Edge-count budget for geometric generation (~1.6 GB of vertex data).
constexpr double kMaxEdges = 7e7;

std::size_t isqrt(std::size_t n) {
    std::size_t r = (std::size_t)std::sqrt((double)n);
    while ((r + 1) * (r + 1) <= n) r++;
    while (r * r > n) r--;
    return r;
}

}  // namespace

bool Schedule::is_bump(std::size_t k) const {
    if (k == 0) return false;
    switch (kind) {
        case ScheduleKind::constant_bump:
            return true;
        case ScheduleKind::constant_flat:
            return false;
        case ScheduleKind::powers_of_ten:
            // Bumps at steps 10, 100, 1000, ...
            for (std::size_t v = 10; v <= k; v *= 10)
                if (v == k) return true;
            return false;
        case ScheduleKind::squares:
            // Bumps at steps 1, 4, 9, 16, ...
            {
                std::size_t r = isqrt(k);
                return r * r == k;
            }
        case ScheduleKind::explicit_steps:
            for (std::size_t s : steps)
                if (s == k) return true;
            return false;
    }
    return false;
}

std::size_t Schedule::bumps_through(std::size_t n) const {
    switch (kind) {
        case ScheduleKind::constant_bump:
            return n;
        case ScheduleKind::constant_flat:
            return 0;
        case ScheduleKind::powers_of_ten: {
            std::size_t c = 0;
            for (std::size_t v = 10; v <= n; v *= 10) c++;
            return c;
        }
        case ScheduleKind::squares:
            return isqrt(n);
        case ScheduleKind::explicit_steps: {
            std::size_t c = 0;
            for (std::size_t s : steps)
                if (s >= 1 && s <= n) c++;
            return c;
        }
    }
    return 0;
}

void SnowflakeSpec::validate() const {
    if (n_sides < 4) throw Error("n_sides must be >= 4");
    if (!(p > 0.25 && p < 0.5)) throw Error("p must lie in (1/4, 1/2)");
    if (schedule.kind == ScheduleKind::explicit_steps)
        for (std::size_t s : schedule.steps)
            if (s < 1) throw Error("explicit schedule steps must be >= 1");
}

double SnowflakeSpec::side0() const {
    if (normalization == Normalization::unit_side) return 1.0;
    // Regular n-gon of diameter 1/2: diameter is 2R for even n and
    // 2R cos(pi/2n) for odd n, side is 2R sin(pi/n).
    double R = (n_sides % 2 == 0) ? 0.25 : 0.25 / std::cos(M_PI / (2.0 * n_sides));
    return 2.0 * R * std::sin(M_PI / n_sides);
}

SnowflakeSpec SnowflakeSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("snowflake spec JSON parse error: ") + e.what());
    }
    SnowflakeSpec s;
    try {
        if (j.contains("n_sides")) s.n_sides = j.at("n_sides").get<int>();
        if (j.contains("p")) s.p = j.at("p").get<double>();
        if (j.contains("depth")) s.depth = j.at("depth").get<std::size_t>();
        if (j.contains("normalization")) {
            std::string n = j.at("normalization").get<std::string>();
            if (n == "diameter_half")
                s.normalization = Normalization::diameter_half;
            else if (n == "unit_side")
                s.normalization = Normalization::unit_side;
            else
                throw Error("normalization must be diameter_half or unit_side");
        }
        if (j.contains("schedule")) {
            const auto& sch = j.at("schedule");
            std::string kind = sch.at("kind").get<std::string>();
            if (kind == "powers_of_ten")
                s.schedule.kind = ScheduleKind::powers_of_ten;
            else if (kind == "squares")
                s.schedule.kind = ScheduleKind::squares;
            else if (kind == "constant_bump")
                s.schedule.kind = ScheduleKind::constant_bump;
            else if (kind == "constant_flat")
                s.schedule.kind = ScheduleKind::constant_flat;
            else if (kind == "explicit")
                s.schedule.kind = ScheduleKind::explicit_steps;
            else
                throw Error("unknown schedule kind: " + kind);
            if (s.schedule.kind == ScheduleKind::explicit_steps)
                s.schedule.steps = sch.at("steps").get<std::vector<std::size_t>>();
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(std::string("snowflake spec field error: ") + e.what());
    }
    s.validate();
    return s;
}

std::string SnowflakeSpec::to_json() const {
    nlohmann::json j;
    j["n_sides"] = n_sides;
    j["p"] = p;
    j["depth"] = depth;
    j["normalization"] =
        normalization == Normalization::diameter_half ? "diameter_half" : "unit_side";
    switch (schedule.kind) {
        case ScheduleKind::powers_of_ten: j["schedule"]["kind"] = "powers_of_ten"; break;
        case ScheduleKind::squares: j["schedule"]["kind"] = "squares"; break;
        case ScheduleKind::constant_bump: j["schedule"]["kind"] = "constant_bump"; break;
        case ScheduleKind::constant_flat: j["schedule"]["kind"] = "constant_flat"; break;
        case ScheduleKind::explicit_steps:
            j["schedule"]["kind"] = "explicit";
            j["schedule"]["steps"] = schedule.steps;
            break;
    }
    return j.dump();
}

std::array<Vec2, 5> generator_arc(bool bump, double p, const Vec2& a, const Vec2& b) {
    if (a == b) throw Error("generator chord is degenerate");
    Vec2 e = b - a;
    if (!bump) {
        return {a, a + e * 0.25, a + e * 0.5, a + e * 0.75, b};
    }
    // Apex on the right of a->b: outward for a counterclockwise polygon.
    Vec2 apex = a + e * 0.5 + e.perp_cw() * std::sqrt(p - 0.25);
    return {a, a + e * p, apex, b - e * p, b};
}

std::vector<Vec2> base_polygon(const SnowflakeSpec& spec) {
    spec.validate();
    const int n = spec.n_sides;
    double R = spec.side0() / (2.0 * std::sin(M_PI / n));
    std::vector<Vec2> verts(n);
    for (int i = 0; i < n; i++) {
        double th = 2.0 * M_PI * i / n;
        verts[i] = {R * std::cos(th), R * std::sin(th)};
    }
    return verts;
}

PolyCurve generate(const SnowflakeSpec& spec) {
    spec.validate();
    double edges = (double)spec.n_sides * std::pow(4.0, (double)spec.depth);
    if (edges > kMaxEdges)
        throw Error("snowflake depth exceeds the edge budget; reduce depth");

    std::vector<Vec2> verts = base_polygon(spec);
    for (std::size_t k = 1; k <= spec.depth; k++) {
        bool bump = spec.schedule.is_bump(k);
        std::vector<Vec2> next;
        next.reserve(verts.size() * 4);
        const std::size_t n = verts.size();
        for (std::size_t i = 0; i < n; i++) {
            auto g = generator_arc(bump, spec.p, verts[i], verts[(i + 1) % n]);
            next.push_back(g[0]);
            next.push_back(g[1]);
            next.push_back(g[2]);
            next.push_back(g[3]);
        }
        verts = std::move(next);
    }
    return PolyCurve::make(std::move(verts), true);
}

double edge_length_log(const SnowflakeSpec& spec, std::size_t step) {
    std::size_t b = spec.schedule.bumps_through(step);
    return std::log(spec.side0()) + (double)b * std::log(spec.p) +
           (double)(step - b) * std::log(0.25);
}

double edge_length_analytic(const SnowflakeSpec& spec, std::size_t step) {
    std::size_t b = spec.schedule.bumps_through(step);
    return spec.side0() * std::pow(spec.p, (double)b) *
           std::pow(0.25, (double)(step - b));
}

ArcRef subarc_of_edge(const PolyCurve& curve, const SnowflakeSpec& spec,
                      const EdgeAddress& address, std::size_t total_depth) {
    if (address.side >= (std::size_t)spec.n_sides) throw Error("edge address: bad side");
    if (address.step() > total_depth) throw Error("edge address deeper than curve");
    std::size_t expect = (std::size_t)spec.n_sides << (2 * total_depth);
    if (curve.segment_count() != expect)
        throw Error("curve does not match spec depth");
    std::size_t idx = address.side;
    for (int w : address.word) {
        if (w < 0 || w > 3) throw Error("edge address: child index out of range");
        idx = idx * 4 + (std::size_t)w;
    }
    std::size_t span = (std::size_t)1 << (2 * (total_depth - address.step()));
    double start = curve.cumulative_length(idx * span);
    double end = curve.cumulative_length((idx + 1) * span);
    return ArcRef{&curve, start, end};
}

PolyCurve edge_subarc_rep(const SnowflakeSpec& spec, std::size_t step, std::size_t rel_depth) {
    spec.validate();
    if (4.0 * std::pow(4.0, (double)rel_depth) > kMaxEdges)
        throw Error("edge subarc depth exceeds the edge budget");
    std::vector<Vec2> verts = {{0.0, 0.0}, {1.0, 0.0}};
    for (std::size_t j = 1; j <= rel_depth; j++) {
        bool bump = spec.schedule.is_bump(step + j);
        std::vector<Vec2> next;
        next.reserve((verts.size() - 1) * 4 + 1);
        for (std::size_t i = 0; i + 1 < verts.size(); i++) {
            auto g = generator_arc(bump, spec.p, verts[i], verts[i + 1]);
            next.push_back(g[0]);
            next.push_back(g[1]);
            next.push_back(g[2]);
            next.push_back(g[3]);
        }
        next.push_back(verts.back());
        verts = std::move(next);
    }
    return PolyCurve::make(std::move(verts), false, false);
}

std::size_t k0_for_step(const SnowflakeSpec& spec, std::size_t n) {
    double ln = edge_length_log(spec, n);
    if (ln >= 0.0) throw Error("edge length must be < 1 for the square target");
    double target = 2.0 * ln;
    for (std::size_t k = 1; k <= 20 * n + 1000; k++) {
        if (edge_length_log(spec, n + k) <= target) return k;
    }
    throw Error("square target not reached within the search bound");
}

namespace {

// log(absolute diameter) of the subarc spanned by a step-m edge, estimated
// from the unit-chord representative truncated at rel_depth further steps.
double log_subarc_diam(const SnowflakeSpec& spec, std::size_t m, std::size_t rel_depth) {
    PolyCurve rep = edge_subarc_rep(spec, m, rel_depth);
    return edge_length_log(spec, m) + std::log(rep.diameter());
}

}  // namespace

EdgeWcaRow wca_edge_row(const SnowflakeSpec& spec, std::size_t n, std::size_t rel_depth) {
    spec.validate();
    EdgeWcaRow row;
    row.step = n;
    double ld = log_subarc_diam(spec, n, rel_depth);
    if (ld >= 0.0) throw Error("subarc diameter must be < 1 (normalization)");
    row.diam = std::exp(ld);
    // Piece diameters must land in [d^2/2, d^2].
    const double hi = 2.0 * ld;
    const double lo = 2.0 * ld + std::log(0.5);
    // Slack absorbs the truncation error of the representative geometry.
    const double slack = 3e-4;

    // Deepest step whose whole-edge subarcs are small enough.
    std::size_t m = n + 1;
    double ldm = log_subarc_diam(spec, m, rel_depth);
    while (ldm > hi + slack) {
        m++;
        ldm = log_subarc_diam(spec, m, rel_depth);
    }
    if (ldm >= lo - slack) {
        row.piece_step = m;
        row.pieces = std::pow(4.0, (double)(m - n));
        row.m_index = row.pieces * std::exp(ldm - ld);
        row.mode = "singles";
        return row;
    }

    // Whole step-m edges are too small and step-(m-1) edges too big: tile each
    // step-(m-1) edge with groups of its level-q descendants.  All step-(m-1)
    // edges are congruent, so one composition serves every edge.
    std::size_t parent = m - 1;
    double log_lp = edge_length_log(spec, parent);
    for (std::size_t q = 2; q <= 4; q++) {
        std::size_t r = std::max(rel_depth, q + 4);
        PolyCurve rep = edge_subarc_rep(spec, parent, r);
        std::size_t cells = (std::size_t)1 << (2 * q);
        std::size_t cellsegs = rep.segment_count() / cells;
        auto group_log_diam = [&](std::size_t a, std::size_t b) {
            std::vector<Vec2> pts;
            pts.reserve((b - a) * cellsegs + 1);
            for (std::size_t v = a * cellsegs; v <= b * cellsegs; v++)
                pts.push_back(rep.vertex(v));
            return log_lp + std::log(point_set_diameter(pts));
        };
        // Shortest-first composition of [0, cells) into in-band groups.
        std::vector<int> from(cells + 1, -1);
        std::vector<double> gld(cells + 1, 0.0);
        std::vector<bool> reach(cells + 1, false);
        reach[0] = true;
        for (std::size_t a = 0; a < cells; a++) {
            if (!reach[a]) continue;
            for (std::size_t b = a + 1; b <= cells; b++) {
                double g = group_log_diam(a, b);
                if (g > hi + slack) break;
                if (g < lo - slack) continue;
                if (!reach[b]) {
                    reach[b] = true;
                    from[b] = (int)a;
                    gld[b] = g;
                }
            }
        }
        if (!reach[cells]) continue;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t b = cells; b != 0; b = (std::size_t)from[b]) {
            sum += std::exp(gld[b] - ld);
            count++;
        }
        double parents = std::pow(4.0, (double)(parent - n));
        row.piece_step = parent + q;
        row.pieces = parents * (double)count;
        row.m_index = parents * sum;
        row.mode = "groups:" + std::to_string(q);
        return row;
    }
    throw Error("no in-band piece composition found for this edge step");
}

}  // namespace domelab
