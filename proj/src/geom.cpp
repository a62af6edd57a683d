#include "domelab/geom.hpp"

#include <algorithm>

namespace domelab {

double point_segment_dist2(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return dist2(p, a);
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist2(p, a + ab * t);
}

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return a;
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    double detl = (b.x - a.x) * (c.y - a.y);
    double detr = (b.y - a.y) * (c.x - a.x);
    double det = detl - detr;
    // Error filter from the standard floating-point predicate analysis.
    double detsum = std::abs(detl) + std::abs(detr);
    double eps = 3.3306690738754716e-16 * detsum;
    if (det > eps) return 1;
    if (det < -eps) return -1;
    long double dl = (long double)(b.x - a.x) * (long double)(c.y - a.y) -
                     (long double)(b.y - a.y) * (long double)(c.x - a.x);
    if (dl > 0) return 1;
    if (dl < 0) return -1;
    return 0;
}

static bool on_segment_collinear(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    int o1 = orient(a, b, c);
    int o2 = orient(a, b, d);
    int o3 = orient(c, d, a);
    int o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;  // proper crossing needs strict straddling
    if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
    if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
    if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
    if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
    return false;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; i++) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) k--;
        hull[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) k--;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double point_set_diameter_brute(const Vec2* pts, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; i++)
        for (std::size_t j = i + 1; j < n; j++)
            best = std::max(best, dist2(pts[i], pts[j]));
    return std::sqrt(best);
}

double point_set_diameter(const std::vector<Vec2>& pts) {
    if (pts.size() < 2) return 0.0;
    if (pts.size() <= 96) return point_set_diameter_brute(pts.data(), pts.size());
    std::vector<Vec2> hull = convex_hull(pts);
    std::size_t m = hull.size();
    if (m < 2) return 0.0;
    if (m <= 96) return point_set_diameter_brute(hull.data(), m);
    // Rotating calipers.
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < m; i++) {
        Vec2 e = hull[(i + 1) % m] - hull[i];
        while (true) {
            std::size_t jn = (j + 1) % m;
            if (e.cross(hull[jn] - hull[j]) > 0)
                j = jn;
            else
                break;
        }
        best = std::max(best, dist2(hull[i], hull[j]));
        best = std::max(best, dist2(hull[(i + 1) % m], hull[j]));
    }
    return std::sqrt(best);
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    bool inside = false;
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double polygon_signed_area2(const std::vector<Vec2>& poly) {
    double a = 0.0;
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) a += poly[j].cross(poly[i]);
    return a;
}

double triangle_area3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace domelab
