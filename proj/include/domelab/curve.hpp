#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "domelab/geom.hpp"

namespace domelab {

// Polyline Jordan curve (closed) or arc (open) with arclength parameterization.
// Vertices of a closed curve are stored without repeating the first one.
// Immutable after construction.
class PolyCurve {
  public:
    // Validates vertex count, distinct consecutive vertices and (optionally)
    // simplicity.  Throws Error on violation.
    static PolyCurve make(std::vector<Vec2> vertices, bool closed,
                          bool check_simple = true);

    // Empty curve, only valid as an assignment target.
    PolyCurve() = default;

    bool closed() const { return closed_; }
    std::size_t vertex_count() const { return verts_.size(); }
    std::size_t segment_count() const { return closed_ ? verts_.size() : verts_.size() - 1; }
    const Vec2& vertex(std::size_t i) const { return verts_[i]; }
    const std::vector<Vec2>& vertices() const { return verts_; }

    double total_length() const { return cum_.back(); }
    // Arclength offset of vertex i (cum_[n] closes the loop for closed curves).
    double cumulative_length(std::size_t i) const { return cum_[i]; }
    const std::vector<double>& cumulative_lengths() const { return cum_; }

    double diameter() const;     // cached
    double min_spacing() const;  // smallest segment length

    // Point at arclength s; s wraps modulo total length for closed curves.
    Vec2 point_at(double s) const;
    // Index of the segment containing arclength s (and local offset).
    std::size_t segment_at(double s, double* local = nullptr) const;

    // Parameter of the curve point nearest to p, with its distance.
    std::pair<double, double> nearest_param(const Vec2& p) const;

    // Twice the signed area (closed curves); positive when CCW.
    double signed_area2() const;

  private:
    std::vector<Vec2> verts_;
    std::vector<double> cum_;
    bool closed_ = false;
    mutable double diameter_ = -1.0;
    mutable double min_spacing_ = -1.0;
};

// True if no two non-adjacent segments of the chain intersect.
bool polyline_is_simple(const std::vector<Vec2>& verts, bool closed);

// Subarc of a PolyCurve as an arclength parameter interval.
// Closed parents allow wrapping: start in [0,L), end in (start, start+L].
struct ArcRef {
    const PolyCurve* curve = nullptr;
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    bool whole_curve() const;
};

// Validated constructor; throws on empty or out-of-range intervals.
ArcRef make_arc(const PolyCurve& curve, double start, double end);
ArcRef whole_arc(const PolyCurve& curve);

// Endpoint-inclusive vertex list of the subarc (mid-segment endpoints
// interpolated).  `params` optionally receives the arclength parameter of
// each returned point (in [start, end], not wrapped).
std::vector<Vec2> materialize(const ArcRef& arc, std::vector<double>* params = nullptr);

// Max pairwise distance over the materialized subarc.  Errors on degenerate
// (zero length) arcs.
double arc_diameter(const ArcRef& arc);

}  // namespace domelab
