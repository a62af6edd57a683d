#include "domelab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "domelab/io.hpp"
#include "domelab/kernels.hpp"

namespace domelab {

namespace {

// Cells of the size-h grid crossed by segment a->b, appended as packed keys.
void mark_cells(const Vec2& a, const Vec2& b, double h, std::vector<std::int64_t>& out) {
    auto key = [](std::int64_t ix, std::int64_t iy) { return (ix << 32) ^ (iy & 0xffffffffll); };
    std::int64_t ix = (std::int64_t)std::floor(a.x / h);
    std::int64_t iy = (std::int64_t)std::floor(a.y / h);
    std::int64_t jx = (std::int64_t)std::floor(b.x / h);
    std::int64_t jy = (std::int64_t)std::floor(b.y / h);
    out.push_back(key(ix, iy));
    if (ix == jx && iy == jy) return;
    // Amanatides-Woo traversal.
    Vec2 d = b - a;
    int sx = d.x > 0 ? 1 : -1, sy = d.y > 0 ? 1 : -1;
    double tx = d.x != 0 ? ((ix + (sx > 0 ? 1 : 0)) * h - a.x) / d.x : 1e300;
    double ty = d.y != 0 ? ((iy + (sy > 0 ? 1 : 0)) * h - a.y) / d.y : 1e300;
    double dtx = d.x != 0 ? std::abs(h / d.x) : 1e300;
    double dty = d.y != 0 ? std::abs(h / d.y) : 1e300;
    int guard = (int)(std::abs(jx - ix) + std::abs(jy - iy)) + 4;
    while ((ix != jx || iy != jy) && guard-- > 0) {
        if (tx < ty) {
            ix += sx;
            tx += dtx;
        } else {
            iy += sy;
            ty += dty;
        }
        out.push_back(key(ix, iy));
    }
}

std::size_t box_count(const PolyCurve& curve, double h) {
    std::vector<std::int64_t> keys;
    keys.reserve(curve.segment_count() * 2);
    const std::size_t n = curve.vertex_count();
    for (std::size_t i = 0; i < curve.segment_count(); i++)
        mark_cells(curve.vertex(i), curve.vertex((i + 1) % n), h, keys);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys.size();
}

void fit_loglog(const std::vector<double>& scales, const std::vector<std::size_t>& counts,
                double* slope, double* residual) {
    const std::size_t n = scales.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; i++) {
        double x = std::log(1.0 / scales[i]);
        double y = std::log((double)counts[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    *slope = (n * sxy - sx * sy) / denom;
    double b = (sy - *slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < n; i++) {
        double x = std::log(1.0 / scales[i]);
        double y = std::log((double)counts[i]);
        double e = y - (*slope * x + b);
        rss += e * e;
    }
    *residual = std::sqrt(rss / n);
}

}  // namespace

DimensionFit box_dimension(const PolyCurve& curve, double delta_min, double delta_max,
                           std::size_t levels) {
    if (levels < 4) throw Error("box dimension needs at least 4 scales");
    if (!(delta_min > 0 && delta_min < delta_max))
        throw Error("need 0 < delta_min < delta_max");
    DimensionFit fit;
    double ratio = std::pow(delta_min / delta_max, 1.0 / (double)(levels - 1));
    for (std::size_t i = 0; i < levels; i++) {
        double h = delta_max * std::pow(ratio, (double)i);
        fit.scales.push_back(h);
        fit.counts.push_back(box_count(curve, h));
    }
    fit_loglog(fit.scales, fit.counts, &fit.exponent, &fit.residual);
    return fit;
}

std::size_t greedy_cover_count(const ArcRef& arc, double delta) {
    if (!(delta > 0 && delta < 1)) throw Error("delta must lie in (0,1)");
    double target = delta * arc_diameter(arc);
    std::vector<double> params;
    std::vector<Vec2> pts = materialize(arc, &params);
    const PolyCurve& c = *arc.curve;
    const double ptol = 1e-12 * std::max(1.0, c.total_length());
    const double target2 = target * target;

    std::size_t count = 1;
    std::vector<double> px = {pts[0].x}, py = {pts[0].y};
    double cur2 = 0.0;
    double last_param = params[0];
    std::size_t j = 1;
    while (j < pts.size()) {
        double cand = std::max(cur2, kernels::max_dist2_to_points(
                                         pts[j].x, pts[j].y, px.data(), py.data(), px.size()));
        if (cand <= target2) {
            px.push_back(pts[j].x);
            py.push_back(pts[j].y);
            cur2 = cand;
            last_param = params[j];
            j++;
            continue;
        }
        // Cut where the growing piece first reaches the target diameter.
        double lo = last_param, hi = params[j];
        for (int it = 0; it < 80 && hi - lo > ptol; it++) {
            double mid = 0.5 * (lo + hi);
            Vec2 q = c.point_at(mid);
            double d2 = std::max(cur2, kernels::max_dist2_to_points(q.x, q.y, px.data(),
                                                                    py.data(), px.size()));
            if (d2 > target2)
                hi = mid;
            else
                lo = mid;
        }
        if (lo >= params.back() - ptol) break;
        count++;
        Vec2 q = c.point_at(lo);
        px = {q.x};
        py = {q.y};
        cur2 = 0.0;
        last_param = lo;
    }
    return count;
}

DimensionFit assouad_profile(const PolyCurve& curve, const std::vector<ArcRef>& subarcs,
                             const std::vector<double>& delta_grid) {
    DimensionFit fit;
    for (std::size_t s = 0; s < subarcs.size(); s++) {
        const ArcRef& arc = subarcs[s];
        double d = arc_diameter(arc);
        for (double delta : delta_grid) {
            DimensionRow row;
            row.subarc_id = "arc" + std::to_string(s);
            row.diam = d;
            row.delta = delta;
            if (delta * d <= 2.0 * curve.min_spacing()) {
                row.ok = false;
                row.note = "below curve resolution";
                fit.per_subarc.push_back(std::move(row));
                continue;
            }
            row.count = greedy_cover_count(arc, delta);
            row.exponent = std::log((double)row.count) / std::log(1.0 / delta);
            if (row.exponent > fit.exponent) {
                fit.exponent = row.exponent;
                fit.witness = fit.per_subarc.size();
            }
            fit.per_subarc.push_back(std::move(row));
        }
    }
    return fit;
}

std::string dimension_rows_csv(const DimensionFit& fit) {
    std::ostringstream os;
    os << "subarc_id,diam,delta,count,exponent\n";
    for (const DimensionRow& r : fit.per_subarc) {
        os << r.subarc_id << ',' << io::fmt(r.diam) << ',' << io::fmt(r.delta) << ','
           << r.count << ',' << io::fmt(r.exponent) << '\n';
    }
    return os.str();
}

}  // namespace domelab
