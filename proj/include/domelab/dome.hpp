#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "domelab/curve.hpp"
#include "domelab/level_sets.hpp"

namespace domelab {

enum class SheetTag : std::uint8_t { upper, lower, boundary };

// Double dome over a Jordan domain: the graph of +/- dist(x, boundary)^alpha,
// the two sheets glued along the boundary (z = 0) vertices.
struct DomeMesh {
    std::vector<Vec3> vertices;
    std::vector<SheetTag> tags;
    std::vector<std::uint32_t> mirror;  // index of the z-reflected vertex
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<double> tri_area;
    double alpha = 1.0;
    double h = 0.0;
    double domain_diam = 0.0;
    PolyCurve domain;
    SegmentIndex index;  // over the domain boundary

    double total_area() const;
    int euler_characteristic() const;
    // Per-vertex neighbor lists with Euclidean edge lengths.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency() const;
};

// Grid triangulation of the domain clipped to the boundary, lifted to both
// sheets.  Cells near the boundary are split band_levels times (2:1 graded,
// crack-free); band_levels < 0 picks a default from alpha.
DomeMesh build_dome(const PolyCurve& domain, double alpha, double h,
                    int band_levels = -1);

// Area of the mesh region where the predicate holds; straddling triangles are
// recursively subdivided 4 levels deep.
double region_area(const DomeMesh& mesh, const std::function<bool(const Vec3&)>& pred);
// Same with a ball prefilter: only triangles meeting B(center, r) are tested.
double ball_area(const DomeMesh& mesh, const Vec3& center, double r);

struct RegularityRow {
    std::string center_id;
    std::string stratum;  // interior | near_boundary | on_boundary
    double r = 0.0;
    double area = 0.0;
    double ratio = 0.0;  // max(area/r^2, r^2/area)
    bool ok = true;
};

struct RegularityReport {
    double constant = 0.0;  // max ratio over unflagged rows
    std::vector<RegularityRow> rows;
};

// Ball-area ratios at sampled centers (stratified by boundary distance) over
// the given radii; radii below 4h are flagged, not evaluated.
RegularityReport regularity_scan(const DomeMesh& mesh, std::size_t centers_per_stratum,
                                 const std::vector<double>& radii, std::uint64_t seed);
std::string regularity_csv(const RegularityReport& report);

struct LlcRow {
    std::string sample_id;
    double r = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    bool capped1 = false;
    bool capped2 = false;
};

struct LlcReport {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    bool capped1 = false;
    bool capped2 = false;
    std::vector<LlcRow> rows;
};

// Graph-connectivity estimates of the LLC constants: for sampled (x, r) and
// vertex pairs in B(x, r), the least lambda connecting them within
// B(x, lambda*r) (LLC1) and outside B(x, r/lambda) (LLC2).  Near-boundary
// mirror pairs are always included; estimates cap at lambda_cap.
LlcReport llc_scan(const DomeMesh& mesh, std::size_t samples, std::uint64_t seed,
                   double lambda_cap);
std::string llc_csv(const LlcReport& report);

struct SquarePiece {
    Vec3 x1, y1, x2, y2;
    double t1 = 0.0, t2 = 0.0;
    double area = 0.0;
    double diam = 0.0;
    double ratio = 0.0;  // area / diam^2
};

// Surface patch between levels t1 and t2: px1, py1 lie on gamma_t1; their
// nearest points on gamma_t2 close the quadrilateral.  c0 is the measured
// level-quasicircle constant used in the admissibility inequality.
SquarePiece square_piece(const DomeMesh& mesh, const Vec2& px1, const Vec2& py1,
                         double t2, double c0, double grid_h);

}  // namespace domelab
