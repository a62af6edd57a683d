#pragma once

#include <cstddef>

// Data-parallel inner loops used by the distance-field fill and the diameter
// scans.  Scalar reference implementations and AVX2 variants share the same
// operation order per element, so results are bitwise identical; the active
// variant is selected once at startup from CPUID.

namespace domelab::kernels {

enum class Isa { scalar, avx2 };

Isa active();
void force(Isa isa);  // test hook
bool avx2_available();

// max over i of (px - xs[i])^2 + (py - ys[i])^2
double max_dist2_to_points(double px, double py, const double* xs, const double* ys,
                           std::size_t n);

// min over i of squared distance from (px,py) to segment [(ax,ay)[i], (bx,by)[i]]
double min_dist2_to_segments(double px, double py, const double* ax, const double* ay,
                             const double* bx, const double* by, std::size_t n);

namespace detail {
double max_dist2_to_points_scalar(double px, double py, const double* xs,
                                  const double* ys, std::size_t n);
double min_dist2_to_segments_scalar(double px, double py, const double* ax,
                                    const double* ay, const double* bx,
                                    const double* by, std::size_t n);
double max_dist2_to_points_avx2(double px, double py, const double* xs,
                                const double* ys, std::size_t n);
double min_dist2_to_segments_avx2(double px, double py, const double* ax,
                                  const double* ay, const double* bx,
                                  const double* by, std::size_t n);
}  // namespace detail

}  // namespace domelab::kernels
