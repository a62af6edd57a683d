#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domelab/curve.hpp"

namespace domelab {

// Ordered list of subarcs tiling a parent arc (disjoint except endpoints).
struct Partition {
    ArcRef parent;
    std::vector<ArcRef> pieces;
    std::optional<double> delta;  // set when built as a delta-partition
};

// Builds a delta-partition: every piece has diameter in
// [delta/2, delta] * diam(arc).  Walks from the arc start cutting where the
// growing piece's diameter reaches a target (initially 3*delta/4), solving
// cut positions by bisection; the target is re-tuned when the final
// remainder misses the band.
Partition build_delta_partition(const ArcRef& arc, double delta);

// Chord-arc index: (sum of piece diameters) / diam(arc).
double m_index(const ArcRef& arc, const Partition& partition);

// Union partition; one sub-partition per piece, each tiling its piece.
Partition refine(const Partition& partition, const std::vector<Partition>& sub_partitions);

struct WcaRow {
    std::string subarc_id;
    double start = 0.0;
    double end = 0.0;
    double diam = 0.0;
    std::size_t pieces = 0;
    double m_index = 0.0;
    bool pass = false;
    bool ok = true;  // false when curve resolution was insufficient
    std::string note;
};

struct WcaReport {
    double max_index = 0.0;
    std::size_t witness_row = 0;
    std::vector<WcaRow> per_subarc;
    double threshold = 0.0;
};

// For each subarc G' builds a diam(G')-partition and records M(G', P);
// rows where resolution is insufficient are flagged, not dropped.
WcaReport weak_chord_arc_scan(const PolyCurve& curve, const std::vector<ArcRef>& subarcs,
                              double m0);

// M of a (diam)^ (1/alpha - 1) partition of the arc.
double alpha_partition_index(const ArcRef& arc, double alpha);

std::string wca_report_csv(const WcaReport& report);

}  // namespace domelab
