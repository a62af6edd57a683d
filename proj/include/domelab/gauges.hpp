#pragma once

#include <cstddef>

#include "domelab/curve.hpp"

namespace domelab {

struct GaugeResult {
    double value = 1.0;
    Vec2 witness_a;
    Vec2 witness_b;
    std::size_t pairs_scanned = 0;
    bool exhaustive = false;  // every vertex pair was scanned
};

// Subarc of the closed curve connecting x and y of smaller diameter.
// x,y snap to the nearest curve point within 1e-9 * diam(curve).
// On an exact diameter tie the subarc running forward from x is returned.
ArcRef smaller_diameter_subarc(const PolyCurve& curve, const Vec2& x, const Vec2& y);

// Sampled estimate of the 2-point constant: max over pairs of
// diam(smaller subarc) / |x - y|.  Lower bound for the true supremum.
GaugeResult two_point_constant(const PolyCurve& curve, std::size_t budget_pairs);

// Sampled estimate of the chord-arc constant: max over pairs of
// length(shorter complementary subarc) / |x - y|.
GaugeResult chord_arc_constant(const PolyCurve& curve, std::size_t budget_pairs);

}  // namespace domelab
