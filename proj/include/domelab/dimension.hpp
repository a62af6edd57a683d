#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "domelab/curve.hpp"

namespace domelab {

struct DimensionRow {
    std::string subarc_id;
    double diam = 0.0;
    double delta = 0.0;
    std::size_t count = 0;
    double exponent = 0.0;
    bool ok = true;
    std::string note;
};

struct DimensionFit {
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    double exponent = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
    std::vector<DimensionRow> per_subarc;
    std::size_t witness = 0;  // row index of the profile maximum
};

// Grid box counting over a geometric scale sequence from delta_max down to
// delta_min (`levels` scales); exponent = least-squares slope of
// log(count) against log(1/delta).
DimensionFit box_dimension(const PolyCurve& curve, double delta_min, double delta_max,
                           std::size_t levels);

// For each (subarc Y, delta): greedy arclength cover of Y by subarcs of
// diameter <= delta*diam(Y); per-row exponent log(count)/log(1/delta);
// profile exponent = max over rows, witness reported.
DimensionFit assouad_profile(const PolyCurve& curve, const std::vector<ArcRef>& subarcs,
                             const std::vector<double>& delta_grid);

// Greedy cover count of one arc at piece diameter <= delta*diam(arc).
std::size_t greedy_cover_count(const ArcRef& arc, double delta);

std::string dimension_rows_csv(const DimensionFit& fit);

}  // namespace domelab
