#include "domelab/curve.hpp"

#include <algorithm>
#include <cmath>

namespace domelab {

namespace {

// Kahan-compensated running sum; keeps cumulative arclength accurate on
// multi-million-vertex curves.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

bool polyline_is_simple(const std::vector<Vec2>& verts, bool closed) {
    const std::size_t n = verts.size();
    const std::size_t nseg = closed ? n : n - 1;
    if (nseg < 2) return true;

    auto seg_a = [&](std::size_t i) -> const Vec2& { return verts[i]; };
    auto seg_b = [&](std::size_t i) -> const Vec2& { return verts[(i + 1) % n]; };

    double maxlen2 = 0.0;
    for (std::size_t i = 0; i < nseg; i++)
        maxlen2 = std::max(maxlen2, dist2(seg_a(i), seg_b(i)));
    double cell = 2.0 * std::sqrt(maxlen2);
    if (cell <= 0.0) return false;

    auto key_from_idx = [](std::int64_t ix, std::int64_t iy) -> std::int64_t {
        return ix * 0x9e3779b97f4a7c15ll ^ iy * 0xff51afd7ed558ccdll;
    };
    auto cell_idx = [&](const Vec2& m) {
        return std::pair<std::int64_t, std::int64_t>{(std::int64_t)std::floor(m.x / cell),
                                                     (std::int64_t)std::floor(m.y / cell)};
    };

    std::vector<std::pair<std::int64_t, std::uint32_t>> items(nseg);
    for (std::size_t i = 0; i < nseg; i++) {
        Vec2 m = (seg_a(i) + seg_b(i)) * 0.5;
        auto [ix, iy] = cell_idx(m);
        items[i] = {key_from_idx(ix, iy), (std::uint32_t)i};
    }
    std::sort(items.begin(), items.end());

    auto adjacent = [&](std::size_t i, std::size_t j) {
        std::size_t d = i > j ? i - j : j - i;
        if (d == 1) return true;
        if (closed && d == nseg - 1) return true;
        return false;
    };
    auto bad_pair = [&](std::size_t i, std::size_t j) {
        if (adjacent(i, j)) return false;
        return segments_intersect(seg_a(i), seg_b(i), seg_a(j), seg_b(j));
    };

    // Midpoints of intersecting segments are at most one cell apart, so
    // checking same-cell pairs and the 8-neighborhood covers everything.
    auto lower = [&](std::int64_t key) {
        return std::lower_bound(items.begin(), items.end(),
                                std::make_pair(key, (std::uint32_t)0));
    };
    for (std::size_t i = 0; i < nseg; i++) {
        Vec2 m = (seg_a(i) + seg_b(i)) * 0.5;
        auto [ix, iy] = cell_idx(m);
        for (int dx = -1; dx <= 1; dx++) {
            for (int dy = -1; dy <= 1; dy++) {
                std::int64_t key = key_from_idx(ix + dx, iy + dy);
                for (auto it = lower(key); it != items.end() && it->first == key; ++it) {
                    std::size_t j = it->second;
                    if (j <= i) continue;
                    if (bad_pair(i, j)) return false;
                }
            }
        }
    }
    return true;
}

PolyCurve PolyCurve::make(std::vector<Vec2> vertices, bool closed, bool check_simple) {
    PolyCurve c;
    const std::size_t n = vertices.size();
    if (closed && n < 3) throw Error("closed curve needs at least 3 vertices");
    if (!closed && n < 2) throw Error("open arc needs at least 2 vertices");
    const std::size_t nseg = closed ? n : n - 1;
    for (std::size_t i = 0; i < nseg; i++) {
        if (vertices[i] == vertices[(i + 1) % n])
            throw Error("consecutive vertices must be distinct (index " +
                        std::to_string(i) + ")");
    }
    if (check_simple && !polyline_is_simple(vertices, closed))
        throw Error("curve is not simple (self-intersection detected)");

    c.verts_ = std::move(vertices);
    c.closed_ = closed;
    c.cum_.resize(nseg + 1);
    KahanSum s;
    c.cum_[0] = 0.0;
    for (std::size_t i = 0; i < nseg; i++) {
        s.add(dist(c.verts_[i], c.verts_[(i + 1) % n]));
        c.cum_[i + 1] = s.sum;
    }
    return c;
}

double PolyCurve::diameter() const {
    if (diameter_ < 0) diameter_ = point_set_diameter(verts_);
    return diameter_;
}

double PolyCurve::min_spacing() const {
    if (min_spacing_ < 0) {
        double m = cum_[1] - cum_[0];
        for (std::size_t i = 1; i + 1 < cum_.size(); i++)
            m = std::min(m, cum_[i + 1] - cum_[i]);
        min_spacing_ = m;
    }
    return min_spacing_;
}

std::size_t PolyCurve::segment_at(double s, double* local) const {
    double L = total_length();
    if (closed_) {
        s = std::fmod(s, L);
        if (s < 0) s += L;
    } else {
        s = std::clamp(s, 0.0, L);
    }
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = (it == cum_.begin()) ? 0 : (std::size_t)(it - cum_.begin()) - 1;
    if (i >= segment_count()) i = segment_count() - 1;
    if (local) *local = s - cum_[i];
    return i;
}

Vec2 PolyCurve::point_at(double s) const {
    double local = 0.0;
    std::size_t i = segment_at(s, &local);
    const Vec2& a = verts_[i];
    const Vec2& b = verts_[(i + 1) % verts_.size()];
    double seglen = cum_[i + 1] - cum_[i];
    double t = seglen > 0 ? local / seglen : 0.0;
    return a + (b - a) * std::clamp(t, 0.0, 1.0);
}

std::pair<double, double> PolyCurve::nearest_param(const Vec2& p) const {
    double best = 1e300;
    std::size_t besti = 0;
    Vec2 bestq;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < segment_count(); i++) {
        Vec2 q = closest_point_on_segment(p, verts_[i], verts_[(i + 1) % n]);
        double d2 = dist2(p, q);
        if (d2 < best) {
            best = d2;
            besti = i;
            bestq = q;
        }
    }
    double s = cum_[besti] + dist(verts_[besti], bestq);
    return {std::min(s, total_length()), std::sqrt(best)};
}

double PolyCurve::signed_area2() const { return polygon_signed_area2(verts_); }

bool ArcRef::whole_curve() const {
    return curve && start == 0.0 && end == curve->total_length();
}

ArcRef make_arc(const PolyCurve& curve, double start, double end) {
    double L = curve.total_length();
    if (curve.closed()) {
        double len = end - start;
        if (len <= 0 && len > -L) len += L;  // given in wrapped coordinates
        if (len <= 0 || len > L) throw Error("arc interval invalid after wrapping");
        if (start < 0 || start >= L) {
            start = std::fmod(start, L);
            if (start < 0) start += L;
        }
        end = start + len;
    } else {
        if (start < 0 || end > L || end <= start)
            throw Error("arc interval out of range");
    }
    return ArcRef{&curve, start, end};
}

ArcRef whole_arc(const PolyCurve& curve) {
    return ArcRef{&curve, 0.0, curve.total_length()};
}

std::vector<Vec2> materialize(const ArcRef& arc, std::vector<double>* params) {
    if (!arc.curve) throw Error("null arc");
    const PolyCurve& c = *arc.curve;
    std::vector<Vec2> pts;
    if (params) params->clear();
    auto push = [&](const Vec2& p, double s) {
        pts.push_back(p);
        if (params) params->push_back(s);
    };
    push(c.point_at(arc.start), arc.start);
    double local = 0.0;
    std::size_t seg = c.segment_at(arc.start, &local);
    // First interior vertex strictly after start.
    double s = arc.start - local + (c.cumulative_length(seg + 1) - c.cumulative_length(seg));
    std::size_t i = seg + 1;
    const std::size_t n = c.vertex_count();
    while (s < arc.end - 1e-15 * std::max(1.0, c.total_length())) {
        if (s > arc.start + 1e-15 * std::max(1.0, c.total_length()))
            push(c.vertex(i % n), s);
        double seglen = c.cumulative_length(i % c.segment_count() + 1) -
                        c.cumulative_length(i % c.segment_count());
        s += seglen;
        i++;
    }
    push(c.point_at(arc.end), arc.end);
    return pts;
}

double arc_diameter(const ArcRef& arc) {
    if (arc.length() <= 0) throw Error("degenerate arc (zero length)");
    std::vector<Vec2> pts = materialize(arc);
    if (pts.size() < 2) throw Error("degenerate arc (zero length)");
    return point_set_diameter(pts);
}

}  // namespace domelab
