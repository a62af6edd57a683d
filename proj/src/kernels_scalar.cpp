#include "domelab/kernels.hpp"

namespace domelab::kernels::detail {

double max_dist2_to_points_scalar(double px, double py, const double* xs,
                                  const double* ys, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; i++) {
        double dx = px - xs[i];
        double dy = py - ys[i];
        double d2 = dx * dx + dy * dy;
        if (d2 > best) best = d2;
    }
    return best;
}

double min_dist2_to_segments_scalar(double px, double py, const double* ax,
                                    const double* ay, const double* bx,
                                    const double* by, std::size_t n) {
    double best = 1e300;
    for (std::size_t i = 0; i < n; i++) {
        double abx = bx[i] - ax[i];
        double aby = by[i] - ay[i];
        double apx = px - ax[i];
        double apy = py - ay[i];
        double len2 = abx * abx + aby * aby;
        double dot = apx * abx + apy * aby;
        double t = dot / len2;
        // NaN (degenerate segment, 0/0) falls through to 0.
        t = t > 1.0 ? 1.0 : (t >= 0.0 ? t : 0.0);
        double dx = apx - t * abx;
        double dy = apy - t * aby;
        double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
    }
    return best;
}

}  // namespace domelab::kernels::detail
