#include "domelab/kernels.hpp"

#ifdef __x86_64__
#include <immintrin.h>

namespace domelab::kernels::detail {

double max_dist2_to_points_avx2(double px, double py, const double* xs,
                                const double* ys, std::size_t n) {
    __m256d vpx = _mm256_set1_pd(px);
    __m256d vpy = _mm256_set1_pd(py);
    __m256d vbest = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(xs + i));
        __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(ys + i));
        __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        vbest = _mm256_max_pd(vbest, d2);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vbest);
    double best = lanes[0];
    for (int k = 1; k < 4; k++)
        if (lanes[k] > best) best = lanes[k];
    for (; i < n; i++) {
        double dx = px - xs[i];
        double dy = py - ys[i];
        double d2 = dx * dx + dy * dy;
        if (d2 > best) best = d2;
    }
    return best;
}

double min_dist2_to_segments_avx2(double px, double py, const double* ax,
                                  const double* ay, const double* bx,
                                  const double* by, std::size_t n) {
    __m256d vpx = _mm256_set1_pd(px);
    __m256d vpy = _mm256_set1_pd(py);
    __m256d vzero = _mm256_setzero_pd();
    __m256d vone = _mm256_set1_pd(1.0);
    __m256d vbest = _mm256_set1_pd(1e300);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vax = _mm256_loadu_pd(ax + i);
        __m256d vay = _mm256_loadu_pd(ay + i);
        __m256d abx = _mm256_sub_pd(_mm256_loadu_pd(bx + i), vax);
        __m256d aby = _mm256_sub_pd(_mm256_loadu_pd(by + i), vay);
        __m256d apx = _mm256_sub_pd(vpx, vax);
        __m256d apy = _mm256_sub_pd(vpy, vay);
        __m256d len2 = _mm256_add_pd(_mm256_mul_pd(abx, abx), _mm256_mul_pd(aby, aby));
        __m256d dot = _mm256_add_pd(_mm256_mul_pd(apx, abx), _mm256_mul_pd(apy, aby));
        __m256d t = _mm256_div_pd(dot, len2);
        // max returns the second operand when the first is NaN, so a 0/0
        // lane clamps to 0 exactly like the scalar path.
        t = _mm256_min_pd(_mm256_max_pd(t, vzero), vone);
        __m256d dx = _mm256_sub_pd(apx, _mm256_mul_pd(t, abx));
        __m256d dy = _mm256_sub_pd(apy, _mm256_mul_pd(t, aby));
        __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        vbest = _mm256_min_pd(vbest, d2);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vbest);
    double best = lanes[0];
    for (int k = 1; k < 4; k++)
        if (lanes[k] < best) best = lanes[k];
    for (; i < n; i++) {
        double abx = bx[i] - ax[i];
        double aby = by[i] - ay[i];
        double apx = px - ax[i];
        double apy = py - ay[i];
        double len2 = abx * abx + aby * aby;
        double dot = apx * abx + apy * aby;
        double t = dot / len2;
        t = t > 1.0 ? 1.0 : (t >= 0.0 ? t : 0.0);
        double dx = apx - t * abx;
        double dy = apy - t * aby;
        double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
    }
    return best;
}

}  // namespace domelab::kernels::detail

#else  // non-x86: forward to the scalar reference

namespace domelab::kernels::detail {

double max_dist2_to_points_avx2(double px, double py, const double* xs,
                                const double* ys, std::size_t n) {
    return max_dist2_to_points_scalar(px, py, xs, ys, n);
}

double min_dist2_to_segments_avx2(double px, double py, const double* ax,
                                  const double* ay, const double* bx,
                                  const double* by, std::size_t n) {
    return min_dist2_to_segments_scalar(px, py, ax, ay, bx, by, n);
}

}  // namespace domelab::kernels::detail

#endif
