#include "domelab/kernels.hpp"

namespace domelab::kernels {

bool avx2_available() {
#if defined(__x86_64__) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {
Isa g_isa = avx2_available() ? Isa::avx2 : Isa::scalar;
}

Isa active() { return g_isa; }
void force(Isa isa) { g_isa = isa; }

double max_dist2_to_points(double px, double py, const double* xs, const double* ys,
                           std::size_t n) {
    if (g_isa == Isa::avx2)
        return detail::max_dist2_to_points_avx2(px, py, xs, ys, n);
    return detail::max_dist2_to_points_scalar(px, py, xs, ys, n);
}

double min_dist2_to_segments(double px, double py, const double* ax, const double* ay,
                             const double* bx, const double* by, std::size_t n) {
    if (g_isa == Isa::avx2)
        return detail::min_dist2_to_segments_avx2(px, py, ax, ay, bx, by, n);
    return detail::min_dist2_to_segments_scalar(px, py, ax, ay, bx, by, n);
}

}  // namespace domelab::kernels
