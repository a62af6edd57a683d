#include "domelab/level_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "domelab/gauges.hpp"
#include "domelab/io.hpp"
#include "domelab/kernels.hpp"

namespace domelab {

namespace {

constexpr std::uint32_t kLeafSize = 16;

double bbox_dist2(double minx, double miny, double maxx, double maxy, const Vec2& p) {
    double dx = std::max({minx - p.x, 0.0, p.x - maxx});
    double dy = std::max({miny - p.y, 0.0, p.y - maxy});
    return dx * dx + dy * dy;
}

}  // namespace

SegmentIndex SegmentIndex::build(const std::vector<Vec2>& pts, bool closed) {
    if (pts.size() < 2) throw Error("segment index needs at least 2 points");
    SegmentIndex idx;
    const std::size_t nseg = closed ? pts.size() : pts.size() - 1;
    std::vector<double> ax(nseg), ay(nseg), bx(nseg), by(nseg);
    for (std::size_t i = 0; i < nseg; i++) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % pts.size()];
        ax[i] = a.x;
        ay[i] = a.y;
        bx[i] = b.x;
        by[i] = b.y;
    }

    std::vector<std::uint32_t> order(nseg);
    std::iota(order.begin(), order.end(), 0);
    idx.ax_.reserve(nseg);
    idx.ay_.reserve(nseg);
    idx.bx_.reserve(nseg);
    idx.by_.reserve(nseg);

    // Median split on segment midpoints along the wider bbox axis.
    auto build_node = [&](auto&& self, std::size_t lo, std::size_t hi) -> std::uint32_t {
        Node node;
        node.minx = node.miny = 1e300;
        node.maxx = node.maxy = -1e300;
        for (std::size_t k = lo; k < hi; k++) {
            std::uint32_t s = order[k];
            node.minx = std::min({node.minx, ax[s], bx[s]});
            node.maxx = std::max({node.maxx, ax[s], bx[s]});
            node.miny = std::min({node.miny, ay[s], by[s]});
            node.maxy = std::max({node.maxy, ay[s], by[s]});
        }
        if (hi - lo <= kLeafSize) {
            node.begin = (std::uint32_t)idx.ax_.size();
            node.count = (std::uint32_t)(hi - lo);
            for (std::size_t k = lo; k < hi; k++) {
                std::uint32_t s = order[k];
                idx.ax_.push_back(ax[s]);
                idx.ay_.push_back(ay[s]);
                idx.bx_.push_back(bx[s]);
                idx.by_.push_back(by[s]);
            }
            idx.nodes_.push_back(node);
            return (std::uint32_t)idx.nodes_.size() - 1;
        }
        bool split_x = node.maxx - node.minx >= node.maxy - node.miny;
        std::size_t mid = (lo + hi) / 2;
        std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                         [&](std::uint32_t u, std::uint32_t v) {
                             double cu = split_x ? ax[u] + bx[u] : ay[u] + by[u];
                             double cv = split_x ? ax[v] + bx[v] : ay[v] + by[v];
                             return cu < cv;
                         });
        std::uint32_t l = self(self, lo, mid);
        std::uint32_t r = self(self, mid, hi);
        node.left = l;
        node.right = r;
        idx.nodes_.push_back(node);
        return (std::uint32_t)idx.nodes_.size() - 1;
    };
    idx.root_ = build_node(build_node, 0, nseg);
    return idx;
}

double SegmentIndex::query(const Vec2& p, std::uint32_t* best_entry) const {
    double best2 = 1e300;
    std::uint32_t best_lo = 0, best_hi = 0;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = root_;
    while (top > 0) {
        const Node& n = nodes_[stack[--top]];
        if (bbox_dist2(n.minx, n.miny, n.maxx, n.maxy, p) >= best2) continue;
        if (n.count > 0) {
            double d2 = kernels::min_dist2_to_segments(p.x, p.y, ax_.data() + n.begin,
                                                       ay_.data() + n.begin,
                                                       bx_.data() + n.begin,
                                                       by_.data() + n.begin, n.count);
            if (d2 < best2) {
                best2 = d2;
                best_lo = n.begin;
                best_hi = n.begin + n.count;
            }
            continue;
        }
        // Nearer child last so it pops first.
        const Node& l = nodes_[n.left];
        const Node& r = nodes_[n.right];
        double dl = bbox_dist2(l.minx, l.miny, l.maxx, l.maxy, p);
        double dr = bbox_dist2(r.minx, r.miny, r.maxx, r.maxy, p);
        if (dl < dr) {
            stack[top++] = n.right;
            stack[top++] = n.left;
        } else {
            stack[top++] = n.left;
            stack[top++] = n.right;
        }
    }
    if (best_entry) {
        *best_entry = best_lo;
        double found = 1e300;
        for (std::uint32_t e = best_lo; e < best_hi; e++) {
            double d2 = point_segment_dist2(p, {ax_[e], ay_[e]}, {bx_[e], by_[e]});
            if (d2 < found) {
                found = d2;
                *best_entry = e;
            }
        }
    }
    return std::sqrt(best2);
}

double SegmentIndex::distance(const Vec2& p) const { return query(p, nullptr); }

void SegmentIndex::nearest_segment(const Vec2& p, Vec2* a, Vec2* b,
                                   double* dist_out) const {
    std::uint32_t e = 0;
    double d = query(p, &e);
    if (dist_out) *dist_out = d;
    if (a) *a = {ax_[e], ay_[e]};
    if (b) *b = {bx_[e], by_[e]};
}

Vec2 SegmentIndex::closest_point(const Vec2& p, double* dist_out) const {
    std::uint32_t e = 0;
    double d = query(p, &e);
    if (dist_out) *dist_out = d;
    return closest_point_on_segment(p, {ax_[e], ay_[e]}, {bx_[e], by_[e]});
}

namespace {

void fill_unsigned(DistanceField& f) {
    for (std::size_t j = 0; j < f.ny; j++) {
        for (std::size_t i = 0; i < f.nx; i++) {
            f.values[j * f.nx + i] = f.index.distance(f.node(i, j));
        }
    }
}

// Crossing abscissas per grid row against the polyline (even-odd rule).
std::vector<std::vector<double>> row_crossings(const PolyCurve& domain, const Vec2& origin,
                                               double h, std::size_t ny) {
    std::vector<std::vector<double>> rows(ny);
    const std::size_t n = domain.vertex_count();
    for (std::size_t s = 0; s < domain.segment_count(); s++) {
        const Vec2& a = domain.vertex(s);
        const Vec2& b = domain.vertex((s + 1) % n);
        double ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
        if (ylo == yhi) continue;
        // Half-open [ylo, yhi): shared vertices count once.
        std::int64_t jlo = (std::int64_t)std::ceil((ylo - origin.y) / h);
        for (std::int64_t j = std::max<std::int64_t>(jlo, 0); j < (std::int64_t)ny; j++) {
            double y = origin.y + (double)j * h;
            if (y < ylo) continue;
            if (y >= yhi) break;
            rows[(std::size_t)j].push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
    }
    for (auto& r : rows) std::sort(r.begin(), r.end());
    return rows;
}

}  // namespace

DistanceField build_distance_field(const PolyCurve& domain, double h) {
    if (!domain.closed()) throw Error("distance field needs a closed domain boundary");
    double diam = domain.diameter();
    if (!(h > 0 && h < diam / 32.0)) throw Error("grid spacing must be < diam/32");

    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (std::size_t i = 0; i < domain.vertex_count(); i++) {
        const Vec2& v = domain.vertex(i);
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }

    DistanceField f;
    f.h = h;
    f.domain_diam = diam;
    f.origin = {minx - 2.0 * h, miny - 2.0 * h};
    f.nx = (std::size_t)std::ceil((maxx + 2.0 * h - f.origin.x) / h) + 1;
    f.ny = (std::size_t)std::ceil((maxy + 2.0 * h - f.origin.y) / h) + 1;
    f.values.assign(f.nx * f.ny, 0.0);

    std::vector<Vec2> pts(domain.vertex_count());
    for (std::size_t i = 0; i < pts.size(); i++) pts[i] = domain.vertex(i);
    f.index = SegmentIndex::build(pts, true);

    fill_unsigned(f);
    auto rows = row_crossings(domain, f.origin, h, f.ny);
    for (std::size_t j = 0; j < f.ny; j++) {
        const auto& xs = rows[j];
        for (std::size_t i = 0; i < f.nx; i++) {
            double x = f.origin.x + (double)i * h;
            std::size_t cnt = (std::size_t)(std::upper_bound(xs.begin(), xs.end(), x) -
                                            xs.begin());
            bool inside = (xs.size() - cnt) % 2 == 1;  // crossings to the right
            if (!inside) f.values[j * f.nx + i] = -f.values[j * f.nx + i];
        }
    }
    return f;
}

namespace {

using EdgeKey = std::uint64_t;

EdgeKey hkey(std::size_t i, std::size_t j) { return (((EdgeKey)j << 32) | i) << 1; }
EdgeKey vkey(std::size_t i, std::size_t j) { return ((((EdgeKey)j << 32) | i) << 1) | 1; }

struct ContourGraph {
    std::unordered_map<EdgeKey, Vec2> points;
    std::unordered_map<EdgeKey, std::array<EdgeKey, 2>> adj;
    std::unordered_map<EdgeKey, int> deg;

    void add_segment(EdgeKey a, EdgeKey b) {
        if (a == b) return;
        auto& da = deg[a];
        auto& db = deg[b];
        if (da >= 2 || db >= 2) throw Error("contour tracing: vertex degree exceeds 2");
        adj[a][(std::size_t)da++] = b;
        adj[b][(std::size_t)db++] = a;
    }
};

// Loops of the isocontour {value = level} via marching squares; saddles split
// by the cell-center average.
std::vector<std::vector<Vec2>> contour_loops(const DistanceField& f, double level) {
    ContourGraph g;
    auto val = [&](std::size_t i, std::size_t j) { return f.at(i, j) - level; };
    auto interp = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
        double fa = val(i0, j0), fb = val(i1, j1);
        double t = fa / (fa - fb);
        Vec2 a = f.node(i0, j0), b = f.node(i1, j1);
        return a + (b - a) * t;
    };

    for (std::size_t j = 0; j + 1 < f.ny; j++) {
        for (std::size_t i = 0; i + 1 < f.nx; i++) {
            bool b0 = val(i, j) > 0, b1 = val(i + 1, j) > 0;
            bool b2 = val(i + 1, j + 1) > 0, b3 = val(i, j + 1) > 0;
            int idx = (int)b0 | (int)b1 << 1 | (int)b2 << 2 | (int)b3 << 3;
            if (idx == 0 || idx == 15) continue;
            EdgeKey e0 = hkey(i, j), e1 = vkey(i + 1, j), e2 = hkey(i, j + 1),
                    e3 = vkey(i, j);
            auto point_of = [&](EdgeKey e) {
                if (e == e0) return interp(i, j, i + 1, j);
                if (e == e1) return interp(i + 1, j, i + 1, j + 1);
                if (e == e2) return interp(i, j + 1, i + 1, j + 1);
                return interp(i, j, i, j + 1);
            };
            auto emit = [&](EdgeKey a, EdgeKey b) {
                if (!g.points.count(a)) g.points[a] = point_of(a);
                if (!g.points.count(b)) g.points[b] = point_of(b);
                g.add_segment(a, b);
            };
            switch (idx) {
                case 1: emit(e3, e0); break;
                case 2: emit(e0, e1); break;
                case 3: emit(e3, e1); break;
                case 4: emit(e1, e2); break;
                case 6: emit(e0, e2); break;
                case 7: emit(e3, e2); break;
                case 8: emit(e2, e3); break;
                case 9: emit(e0, e2); break;
                case 11: emit(e1, e2); break;
                case 12: emit(e3, e1); break;
                case 13: emit(e0, e1); break;
                case 14: emit(e3, e0); break;
                case 5:
                case 10: {
                    double c = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) +
                                       val(i, j + 1));
                    bool blob = (idx == 5) == (c > 0);
                    if (blob) {
                        emit(e0, e1);
                        emit(e2, e3);
                    } else {
                        emit(e0, e3);
                        emit(e1, e2);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    std::vector<std::vector<Vec2>> loops;
    std::unordered_map<EdgeKey, bool> visited;
    for (const auto& [start, d] : g.deg) {
        if (visited[start]) continue;
        if (d != 2) throw Error("contour tracing: open contour at grid border");
        std::vector<Vec2> loop;
        EdgeKey prev = start, cur = start;
        bool first = true;
        do {
            visited[cur] = true;
            loop.push_back(g.points[cur]);
            const auto& nb = g.adj[cur];
            EdgeKey next = first ? nb[0] : (nb[0] == prev ? nb[1] : nb[0]);
            first = false;
            prev = cur;
            cur = next;
        } while (cur != start);
        loops.push_back(std::move(loop));
    }
    return loops;
}

// Moves p onto {dist = eps} along the ray from its nearest boundary point.
Vec2 project_to_level(const SegmentIndex& idx, Vec2 p, double eps, double tol) {
    for (int it = 0; it < 6; it++) {
        double d = 0.0;
        Vec2 q = idx.closest_point(p, &d);
        if (std::abs(d - eps) <= tol) return p;
        if (d <= 0) break;
        p = q + (p - q) * (eps / d);
    }
    // Robust fallback: bisect dist = eps along the ray q -> p.
    double d = 0.0;
    Vec2 q = idx.closest_point(p, &d);
    if (d <= 0) return p;
    Vec2 u = (p - q) * (1.0 / d);
    double lo = 0.0, hi = std::max(d, eps) * 2.0;
    for (int it = 0; it < 200; it++) {
        double mid = 0.5 * (lo + hi);
        double dm = idx.distance(q + u * mid);
        if (std::abs(dm - eps) <= tol) return q + u * mid;
        if (dm < eps)
            lo = mid;
        else
            hi = mid;
    }
    return q + u * (0.5 * (lo + hi));
}

// Inserts projected chord midpoints where the polyline cuts a corner of the
// level set, e.g. at the inner corners of a polygon's parallel curve.  The
// marching-squares vertices only sit on grid edges, so without this the
// extremes of the component can miss a level-set corner by up to one spacing.
void refine_chord(const SegmentIndex& idx, Vec2 a, Vec2 b, double eps, double tol,
                  int depth, std::vector<Vec2>& out) {
    Vec2 m = project_to_level(idx, (a + b) * 0.5, eps, tol);
    double off2 = point_segment_dist2(m, a, b);
    if (depth > 0 && off2 > 1e-6 * dist2(a, b)) {
        refine_chord(idx, a, m, eps, tol, depth - 1, out);
        out.push_back(m);
        refine_chord(idx, m, b, eps, tol, depth - 1, out);
    }
}

std::vector<PolyCurve> refined_components(const DistanceField& f,
                                          std::vector<std::vector<Vec2>> loops,
                                          double eps) {
    double tol = 1e-6 * f.domain_diam;
    std::vector<PolyCurve> out;
    for (auto& loop : loops) {
        std::vector<Vec2> v;
        v.reserve(loop.size());
        for (std::size_t k = 0; k < loop.size(); k++) {
            Vec2 r = project_to_level(f.index, loop[k], eps, tol);
            if (!v.empty() && dist(v.back(), r) < 1e-12 * std::max(1.0, f.domain_diam))
                continue;
            if (!v.empty()) refine_chord(f.index, v.back(), r, eps, tol, 8, v);
            v.push_back(r);
        }
        if (v.size() >= 2)
            refine_chord(f.index, v.back(), v.front(), eps, tol, 8, v);
        while (v.size() >= 2 &&
               dist(v.front(), v.back()) < 1e-12 * std::max(1.0, f.domain_diam))
            v.pop_back();
        if (v.size() < 3) continue;
        out.push_back(PolyCurve::make(std::move(v), true, false));
    }
    return out;
}

}  // namespace

LevelCurve extract_level_curve(const DistanceField& field, double epsilon) {
    if (!(epsilon > 0)) throw Error("level must be positive");
    LevelCurve lc;
    lc.epsilon = epsilon;
    lc.components = refined_components(field, contour_loops(field, epsilon), epsilon);
    return lc;
}

LqcReport lqc_scan(const PolyCurve& domain, double eps0, std::size_t levels,
                   std::size_t budget, double h) {
    if (levels < 1) throw Error("lqc scan needs at least one level");
    DistanceField f = build_distance_field(domain, h);
    LqcReport report;
    for (std::size_t k = 0; k < levels; k++) {
        double eps = eps0 * std::pow(0.5, (double)k);
        if (eps < 3.0 * h) break;  // below grid resolution
        LevelCurve lc = extract_level_curve(f, eps);
        LqcRow row;
        row.epsilon = eps;
        row.components = lc.components.size();
        if (row.components == 1) {
            row.two_point = two_point_constant(lc.components[0], budget).value;
            report.max_constant = std::max(report.max_constant, row.two_point);
        } else {
            report.violation_levels.push_back(eps);
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string lqc_report_csv(const LqcReport& report) {
    std::ostringstream os;
    os << "epsilon,components,two_point_constant\n";
    for (const LqcRow& r : report.rows)
        os << io::fmt(r.epsilon) << ',' << r.components << ',' << io::fmt(r.two_point)
           << '\n';
    return os.str();
}

LevelSubarcResult level_subarc(const DistanceField& field, const ArcRef& sigma,
                               double epsilon, double tol) {
    LevelCurve lc = extract_level_curve(field, epsilon);
    if (lc.components.size() != 1)
        throw Error("level set is not a single Jordan curve (components: " +
                    std::to_string(lc.components.size()) + ")");
    const PolyCurve& gamma = lc.components[0];

    std::vector<Vec2> spts = materialize(sigma);
    SegmentIndex sidx = SegmentIndex::build(spts, false);

    LevelSubarcResult res;
    std::vector<bool> sel(gamma.vertex_count(), false);
    for (std::size_t i = 0; i < gamma.vertex_count(); i++) {
        double d = sidx.distance(gamma.vertex(i));
        sel[i] = d <= epsilon + tol;
        if (sel[i]) res.points.push_back(gamma.vertex(i));
    }
    // Connected iff the selected vertices form one cyclic block.
    std::size_t transitions = 0;
    for (std::size_t i = 0; i < sel.size(); i++)
        if (sel[i] != sel[(i + 1) % sel.size()]) transitions++;
    res.connected = !res.points.empty() && transitions <= 2;
    return res;
}

double distant_level_chord_arc(const ArcRef& sigma, double epsilon, double h,
                               std::size_t budget, PolyCurve* curve_out) {
    double d = arc_diameter(sigma);
    if (!(epsilon > 3.0 * d)) throw Error("level must exceed 3 * diam(sigma)");
    std::vector<Vec2> spts = materialize(sigma);

    DistanceField f;
    f.h = h;
    f.domain_diam = 2.0 * (epsilon + d);
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const Vec2& p : spts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    double pad = epsilon + 4.0 * h;
    f.origin = {minx - pad, miny - pad};
    f.nx = (std::size_t)std::ceil((maxx + pad - f.origin.x) / h) + 1;
    f.ny = (std::size_t)std::ceil((maxy + pad - f.origin.y) / h) + 1;
    f.values.assign(f.nx * f.ny, 0.0);
    f.index = SegmentIndex::build(spts, false);
    fill_unsigned(f);

    auto comps = refined_components(f, contour_loops(f, epsilon), epsilon);
    if (comps.size() != 1) throw Error("distant level set is not a single curve");
    if (curve_out) *curve_out = comps[0];
    return chord_arc_constant(comps[0], budget).value;
}

}  // namespace domelab
