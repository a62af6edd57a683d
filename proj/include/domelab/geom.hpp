#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace domelab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
    // 90-degree clockwise rotation; for a CCW polygon edge this points outward.
    Vec2 perp_cw() const { return {y, -x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double dist2(const Vec2& a, const Vec2& b) { return (a - b).norm2(); }
inline double dist(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Squared distance from point p to segment [a,b].
double point_segment_dist2(const Vec2& p, const Vec2& a, const Vec2& b);
// Closest point on [a,b] to p.
Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// Sign of the orientation of (a,b,c): +1 CCW, -1 CW, 0 collinear.
// Filtered double evaluation with long double fallback near zero.
int orient(const Vec2& a, const Vec2& b, const Vec2& c);

// Proper or improper intersection test for segments [a,b] and [c,d].
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

// Monotone-chain convex hull; returns CCW hull without repeated first point.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// Diameter (max pairwise distance) of a point set.  Rotating calipers on the
// hull for large inputs, brute force otherwise.
double point_set_diameter(const std::vector<Vec2>& pts);

// Max pairwise distance by exhaustive scan.  Independent of the hull path;
// used as an oracle and for small inputs.
double point_set_diameter_brute(const Vec2* pts, std::size_t n);

// Even-odd point-in-polygon test (vertices without repeated first point).
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

// Twice the signed area of a polygon; positive for CCW.
double polygon_signed_area2(const std::vector<Vec2>& poly);

double triangle_area3(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace domelab
