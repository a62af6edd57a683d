#include "domelab/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "domelab/kernels.hpp"

namespace domelab {

namespace {

constexpr std::size_t kMaxExhaustivePairs = 4'000'000;
constexpr std::size_t kMaxSamplePoints = 1024;
constexpr std::size_t kMinSamplePoints = 256;
constexpr std::uint64_t kSampleSeed = 0x5eed0d031abull;

// Sample parameters for the pair scans: all vertices when that fits the pair
// budget, densified to kMinSamplePoints on coarse curves so mid-segment
// extremes (e.g. side midpoints of a square) are represented.
std::vector<double> sample_params(const PolyCurve& c, std::size_t budget_pairs,
                                  bool* exhaustive) {
    const double L = c.total_length();
    const std::size_t nv = c.vertex_count();
    std::size_t cap_pts = (std::size_t)std::floor(
        std::sqrt(2.0 * (double)std::min(budget_pairs, kMaxExhaustivePairs)));
    cap_pts = std::min(cap_pts, kMaxSamplePoints);

    std::vector<double> params;
    if (nv <= cap_pts) {
        for (std::size_t i = 0; i < nv; i++) params.push_back(c.cumulative_length(i));
        *exhaustive = true;
        std::size_t extra = nv < kMinSamplePoints ? std::min(cap_pts, kMinSamplePoints) - nv : 0;
        if (extra > 0) {
            std::mt19937_64 rng(kSampleSeed);
            std::uniform_real_distribution<double> jitter(0.0, 1.0);
            for (std::size_t i = 0; i < extra; i++)
                params.push_back(((double)i + jitter(rng)) * L / (double)extra);
        }
    } else {
        // Stratified arclength sampling with a fixed seed.
        *exhaustive = false;
        std::mt19937_64 rng(kSampleSeed);
        std::uniform_real_distribution<double> jitter(0.0, 1.0);
        for (std::size_t i = 0; i < cap_pts; i++)
            params.push_back(((double)i + jitter(rng)) * L / (double)cap_pts);
    }
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    return params;
}

// D[i*m + j] = diameter of the forward point chain i -> j (cyclic, over the
// sampled points only).  Incremental: extending a chain by one point can only
// raise the diameter by that point's distance to the existing chain.
std::vector<double> forward_chain_diameters(const std::vector<Vec2>& pts) {
    const std::size_t m = pts.size();
    std::vector<double> xs(2 * m), ys(2 * m);
    for (std::size_t i = 0; i < m; i++) {
        xs[i] = xs[i + m] = pts[i].x;
        ys[i] = ys[i + m] = pts[i].y;
    }
    std::vector<double> d(m * m, 0.0);
    for (std::size_t i = 0; i < m; i++) {
        double run2 = 0.0;
        for (std::size_t k = 1; k < m; k++) {
            std::size_t j = (i + k) % m;
            double cand = kernels::max_dist2_to_points(pts[j].x, pts[j].y, xs.data() + i,
                                                       ys.data() + i, k);
            if (cand > run2) run2 = cand;
            d[i * m + j] = std::sqrt(run2);
        }
    }
    return d;
}

void check_preconditions(const PolyCurve& c, std::size_t budget_pairs) {
    if (!c.closed()) throw Error("gauge requires a closed curve");
    if (budget_pairs < c.vertex_count())
        throw Error("pair budget below vertex count; refusing silent undersampling");
}

}  // namespace

ArcRef smaller_diameter_subarc(const PolyCurve& curve, const Vec2& x, const Vec2& y) {
    if (!curve.closed()) throw Error("smaller_diameter_subarc requires a closed curve");
    double tol = 1e-9 * curve.diameter();
    auto [sx, dx] = curve.nearest_param(x);
    auto [sy, dy] = curve.nearest_param(y);
    if (dx > tol) throw Error("point x does not lie on the curve");
    if (dy > tol) throw Error("point y does not lie on the curve");
    double L = curve.total_length();
    double gap = std::abs(sx - sy);
    gap = std::min(gap, L - gap);
    if (gap <= tol) throw Error("x and y coincide after snapping");

    ArcRef fwd = make_arc(curve, sx, sy <= sx ? sy + L : sy);
    ArcRef bwd = make_arc(curve, sy, sx <= sy ? sx + L : sx);
    double df = arc_diameter(fwd);
    double db = arc_diameter(bwd);
    return df <= db ? fwd : bwd;
}

GaugeResult two_point_constant(const PolyCurve& curve, std::size_t budget_pairs) {
    check_preconditions(curve, budget_pairs);
    bool exhaustive = false;
    std::vector<double> params = sample_params(curve, budget_pairs, &exhaustive);
    const std::size_t m = params.size();
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; i++) pts[i] = curve.point_at(params[i]);

    std::vector<double> D = forward_chain_diameters(pts);
    GaugeResult r;
    r.exhaustive = exhaustive;
    double mindist = 1e-12 * curve.diameter();
    for (std::size_t i = 0; i < m; i++) {
        for (std::size_t j = i + 1; j < m; j++) {
            double chord = dist(pts[i], pts[j]);
            if (chord < mindist) continue;
            double sub = std::min(D[i * m + j], D[j * m + i]);
            double ratio = sub / chord;
            r.pairs_scanned++;
            if (ratio > r.value) {
                r.value = ratio;
                r.witness_a = pts[i];
                r.witness_b = pts[j];
            }
        }
    }
    return r;
}

GaugeResult chord_arc_constant(const PolyCurve& curve, std::size_t budget_pairs) {
    check_preconditions(curve, budget_pairs);
    bool exhaustive = false;
    std::vector<double> params = sample_params(curve, budget_pairs, &exhaustive);
    const std::size_t m = params.size();
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; i++) pts[i] = curve.point_at(params[i]);

    const double L = curve.total_length();
    GaugeResult r;
    r.exhaustive = exhaustive;
    double mindist = 1e-12 * curve.diameter();
    for (std::size_t i = 0; i < m; i++) {
        for (std::size_t j = i + 1; j < m; j++) {
            double chord = dist(pts[i], pts[j]);
            if (chord < mindist) continue;
            double lf = params[j] - params[i];
            double ratio = std::min(lf, L - lf) / chord;
            r.pairs_scanned++;
            if (ratio > r.value) {
                r.value = ratio;
                r.witness_a = pts[i];
                r.witness_b = pts[j];
            }
        }
    }
    return r;
}

}  // namespace domelab
