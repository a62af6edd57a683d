#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "domelab/curve.hpp"
#include "domelab/partition.hpp"

namespace domelab {

enum class ScheduleKind { powers_of_ten, squares, constant_bump, constant_flat, explicit_steps };

// Maps step index k >= 1 to bump or flat.
struct Schedule {
    ScheduleKind kind = ScheduleKind::constant_bump;
    std::vector<std::size_t> steps;  // bump steps, for kind == explicit_steps
    bool is_bump(std::size_t k) const;
    // Number of bump steps among 1..n.
    std::size_t bumps_through(std::size_t n) const;
};

enum class Normalization { diameter_half, unit_side };

struct SnowflakeSpec {
    int n_sides = 4;
    double p = 1.0 / 3.0;
    Schedule schedule;
    std::size_t depth = 6;
    Normalization normalization = Normalization::diameter_half;

    void validate() const;
    double side0() const;  // edge length of the base polygon
    static SnowflakeSpec from_json(const std::string& text);
    std::string to_json() const;
};

// Edge E of S_k: base polygon side, then one child index per later step.
struct EdgeAddress {
    std::size_t side = 0;             // 0 .. n_sides-1
    std::vector<int> word;            // entries 0..3
    std::size_t step() const { return word.size(); }
};

// Replaces the chord a->b by a 5-vertex polyline: a symmetric tent of 4
// segments of length p*|ab| with the apex on the right of a->b (the outward
// side for a counterclockwise polygon), or 4 collinear quarters when flat.
std::array<Vec2, 5> generator_arc(bool bump, double p, const Vec2& a, const Vec2& b);

// Counterclockwise regular n_sides-gon under the chosen normalization.
std::vector<Vec2> base_polygon(const SnowflakeSpec& spec);

// S_depth as a closed curve.  Guarded by an edge-count memory budget.
PolyCurve generate(const SnowflakeSpec& spec);

// Length of one edge of S_step: side0 * prod_{k<=step}(p if bump else 1/4).
double edge_length_analytic(const SnowflakeSpec& spec, std::size_t step);
// Natural log of the same; safe for steps where the value underflows.
double edge_length_log(const SnowflakeSpec& spec, std::size_t step);

// Arc of the depth-d truncation spanning the descendants of the addressed
// edge.  `curve` must be generate() of the same spec at depth d.
ArcRef subarc_of_edge(const PolyCurve& curve, const SnowflakeSpec& spec,
                      const EdgeAddress& address, std::size_t total_depth);

// Representative edge subarc: the open polyline obtained by applying schedule
// steps step+1 .. step+rel_depth to the unit chord (0,0)->(1,0).  All edges
// of S_step are congruent, so this is every edge's subarc up to similarity.
PolyCurve edge_subarc_rep(const SnowflakeSpec& spec, std::size_t step, std::size_t rel_depth);

// Minimal k such that the step n+k edge length is <= (step n edge length)^2.
std::size_t k0_for_step(const SnowflakeSpec& spec, std::size_t n);

// One row of the edge-subarc weak chord-arc scan, computed structurally: all
// step-n edges are congruent, so M of a diam-partition of one subarc is M of
// every one.  Pieces are descendant edge groups whose diameters land in the
// band [d^2/2, d^2], d = diam of the subarc.
struct EdgeWcaRow {
    std::size_t step = 0;
    double diam = 0.0;        // d, absolute units
    std::size_t piece_step = 0;  // descendant step supplying the pieces
    double pieces = 0.0;      // piece count (can exceed 2^53? no; double for 4^k)
    double m_index = 0.0;
    std::string mode;         // "singles", "pairs", or "groups:q"
};
EdgeWcaRow wca_edge_row(const SnowflakeSpec& spec, std::size_t n, std::size_t rel_depth = 8);

}  // namespace domelab
