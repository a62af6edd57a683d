#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "domelab/curve.hpp"

namespace domelab {

// Bounding-box tree over a set of segments for nearest-distance queries;
// leaves hold contiguous segment runs evaluated by the distance kernel.
class SegmentIndex {
  public:
    static SegmentIndex build(const std::vector<Vec2>& pts, bool closed);

    double distance(const Vec2& p) const;
    Vec2 closest_point(const Vec2& p, double* dist_out = nullptr) const;
    // Endpoints of the nearest segment, in the orientation of the source curve.
    void nearest_segment(const Vec2& p, Vec2* a, Vec2* b, double* dist_out = nullptr) const;
    std::size_t segment_count() const { return ax_.size(); }

  private:
    struct Node {
        double minx, miny, maxx, maxy;
        std::uint32_t left = 0, right = 0;   // children, internal nodes
        std::uint32_t begin = 0, count = 0;  // SoA range, leaf nodes
    };
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
    std::vector<double> ax_, ay_, bx_, by_;  // segments in tree order

    double query(const Vec2& p, std::uint32_t* best_entry) const;
};

// Signed distances (positive inside) sampled exactly at grid nodes.
struct DistanceField {
    Vec2 origin;
    double h = 0.0;
    std::size_t nx = 0, ny = 0;  // node counts
    std::vector<double> values;  // row-major, index j*nx + i
    SegmentIndex index;
    double domain_diam = 0.0;

    double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
    Vec2 node(std::size_t i, std::size_t j) const {
        return {origin.x + (double)i * h, origin.y + (double)j * h};
    }
};

DistanceField build_distance_field(const PolyCurve& domain, double h);

struct LevelCurve {
    double epsilon = 0.0;
    std::vector<PolyCurve> components;
};

// Marching-squares isocontour of dist = epsilon, every vertex projected onto
// the exact level set (|dist - eps| <= 1e-6 * diam).  Empty when eps exceeds
// the inradius.
LevelCurve extract_level_curve(const DistanceField& field, double epsilon);

struct LqcRow {
    double epsilon = 0.0;
    std::size_t components = 0;
    double two_point = 0.0;
};

struct LqcReport {
    std::vector<LqcRow> rows;
    double max_constant = 0.0;
    std::vector<double> violation_levels;  // levels with != 1 component
};

// Scans levels on a geometric grid in (0, eps0]; two-point constant per
// single-component level.
LqcReport lqc_scan(const PolyCurve& domain, double eps0, std::size_t levels,
                   std::size_t budget, double h);
std::string lqc_report_csv(const LqcReport& report);

struct LevelSubarcResult {
    std::vector<Vec2> points;  // gamma_eps vertices nearest to sigma
    bool connected = false;    // points form one contiguous arc of gamma_eps
};

// Vertices z of gamma_eps with dist(z, sigma) = eps within tol.
LevelSubarcResult level_subarc(const DistanceField& field, const ArcRef& sigma,
                               double epsilon, double tol);

// Chord-arc constant of {x : dist(x, sigma) = eps} for eps > 3*diam(sigma).
double distant_level_chord_arc(const ArcRef& sigma, double epsilon, double h,
                               std::size_t budget, PolyCurve* curve_out = nullptr);

}  // namespace domelab
