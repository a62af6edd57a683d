#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "domelab/partition.hpp"
#include "domelab/snowflake.hpp"

using namespace domelab;

namespace {

PolyCurve regular_ngon(std::size_t n, double r = 1.0) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; i++) {
        double a = 2.0 * M_PI * (double)i / (double)n;
        pts[i] = {r * std::cos(a), r * std::sin(a)};
    }
    return PolyCurve::make(std::move(pts), true);
}

PolyCurve segment_curve(double len, std::size_t pieces = 64) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i <= pieces; i++)
        pts.push_back({len * (double)i / (double)pieces, 0.0});
    return PolyCurve::make(std::move(pts), false);
}

void check_delta_invariants(const ArcRef& arc, const Partition& part, double delta) {
    double D = arc_diameter(arc);
    REQUIRE(!part.pieces.empty());
    CHECK((double)part.pieces.size() >= 1.0 / delta - 1e-9);
    double s = arc.start;
    for (const ArcRef& piece : part.pieces) {
        CHECK(piece.start == doctest::Approx(s).epsilon(1e-12));
        double d = arc_diameter(piece);
        CHECK(d >= 0.5 * delta * D - 1e-12 * D);
        CHECK(d <= delta * D + 1e-12 * D);
        s = piece.end;
    }
    CHECK(s == doctest::Approx(arc.end).epsilon(1e-12));
}

}  // namespace

TEST_CASE("delta partition of a segment") {
    PolyCurve seg = segment_curve(1.0);
    ArcRef arc = whole_arc(seg);
    Partition part = build_delta_partition(arc, 0.25);
    check_delta_invariants(arc, part, 0.25);
    CHECK(part.pieces.size() >= 4);
    CHECK(m_index(arc, part) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("m index of a fine circle partition approximates pi") {
    PolyCurve gon = regular_ngon(2048);
    ArcRef arc = whole_arc(gon);
    Partition part = build_delta_partition(arc, 0.01);
    check_delta_invariants(arc, part, 0.01);
    CHECK(m_index(arc, part) == doctest::Approx(M_PI).epsilon(0.02 / M_PI));
}

TEST_CASE("sandwich and refinement monotonicity on randomized cases") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    SnowflakeSpec spec;
    spec.schedule.kind = ScheduleKind::constant_bump;
    spec.depth = 6;
    PolyCurve sf = generate(spec);
    PolyCurve gon = regular_ngon(512);
    for (int k = 0; k < 60; k++) {
        const PolyCurve& curve = (k % 2 == 0) ? sf : gon;
        double L = curve.total_length();
        double s = ud(rng) * L;
        ArcRef arc = make_arc(curve, s, s + (0.1 + 0.5 * ud(rng)) * L);
        double delta = 0.08 + 0.3 * ud(rng);
        Partition part = build_delta_partition(arc, delta);
        check_delta_invariants(arc, part, delta);
        double M = m_index(arc, part);
        double n = (double)part.pieces.size();
        CHECK(M >= 0.5 * n * delta - 1e-9);  // needs every piece in band, delta exactness
        CHECK(M <= n * delta + 1e-9);

        // refine each piece with its own delta-partition; M must not decrease
        std::vector<Partition> subs;
        for (const ArcRef& piece : part.pieces)
            subs.push_back(build_delta_partition(piece, 0.3 + 0.3 * ud(rng)));
        Partition fine = refine(part, subs);
        CHECK(m_index(arc, fine) >= M - 1e-9);
    }
}

TEST_CASE("refining with identity partitions keeps M unchanged") {
    PolyCurve gon = regular_ngon(256);
    ArcRef arc = make_arc(gon, 0.0, 2.0);
    Partition part = build_delta_partition(arc, 0.2);
    std::vector<Partition> identity;
    for (const ArcRef& piece : part.pieces)
        identity.push_back(Partition{piece, {piece}, std::nullopt});
    Partition same = refine(part, identity);
    CHECK(m_index(arc, same) == doctest::Approx(m_index(arc, part)).epsilon(1e-12));
}

TEST_CASE("halving segment pieces keeps M unchanged, snowflake refinement raises it") {
    PolyCurve seg = segment_curve(1.0);
    ArcRef arc = whole_arc(seg);
    Partition part = build_delta_partition(arc, 0.25);
    std::vector<Partition> halves;
    for (const ArcRef& piece : part.pieces) {
        double mid = 0.5 * (piece.start + piece.end);
        halves.push_back(Partition{piece,
                                   {make_arc(seg, piece.start, mid), make_arc(seg, mid, piece.end)},
                                   std::nullopt});
    }
    CHECK(m_index(arc, refine(part, halves)) == doctest::Approx(m_index(arc, part)));

    SnowflakeSpec spec;
    spec.schedule.kind = ScheduleKind::constant_bump;
    spec.depth = 7;
    PolyCurve sf = generate(spec);
    ArcRef sarc = make_arc(sf, 0.0, 0.25 * sf.total_length());
    Partition coarse = build_delta_partition(sarc, 0.3);
    std::vector<Partition> subs;
    for (const ArcRef& piece : coarse.pieces)
        subs.push_back(build_delta_partition(piece, 0.3));
    CHECK(m_index(sarc, refine(coarse, subs)) > m_index(sarc, coarse));
}

TEST_CASE("errors: resolution, parent mismatch, non-tiling refinement") {
    PolyCurve coarse = regular_ngon(16);
    CHECK_THROWS_AS(build_delta_partition(whole_arc(coarse), 0.001), Error);

    PolyCurve seg = segment_curve(1.0);
    ArcRef arc = whole_arc(seg);
    Partition part = build_delta_partition(arc, 0.25);
    ArcRef other = make_arc(seg, 0.1, 0.9);
    CHECK_THROWS_AS(m_index(other, part), Error);

    std::vector<Partition> bad;
    for (const ArcRef& piece : part.pieces) {
        double mid = 0.5 * (piece.start + piece.end);
        bad.push_back(Partition{piece, {make_arc(seg, piece.start, mid)}, std::nullopt});
    }
    CHECK_THROWS_AS(refine(part, bad), Error);
}

TEST_CASE("weak chord arc scan on circle subarcs passes a pi-level bound") {
    PolyCurve gon = regular_ngon(1024, 0.5);  // radius 1/2 keeps subarc diameters < 1
    double L = gon.total_length();
    std::vector<ArcRef> subarcs;
    for (int k = 0; k < 12; k++)
        subarcs.push_back(make_arc(gon, 0.08 * k * L, (0.08 * k + 0.05 + 0.008 * k) * L));
    WcaReport rep = weak_chord_arc_scan(gon, subarcs, M_PI + 0.1);
    CHECK(rep.max_index <= M_PI + 0.1);
    for (const WcaRow& row : rep.per_subarc) {
        CHECK(row.ok);
        CHECK(row.pass);
    }
    CHECK(rep.per_subarc[rep.witness_row].m_index == doctest::Approx(rep.max_index));
    std::string csv = wca_report_csv(rep);
    CHECK(csv.rfind("subarc_id,start,end,diam,pieces,m_index,pass\n", 0) == 0);
}

TEST_CASE("alpha partition index") {
    PolyCurve gon = regular_ngon(4096, 0.5);
    ArcRef arc = make_arc(gon, 0.0, 0.6);  // diameter about 0.55
    // alpha = 1/2 means piece scale (diam)^1, the same as the WCA partition
    double d = arc_diameter(arc);
    Partition wca_part = build_delta_partition(arc, d);
    double a_half = alpha_partition_index(arc, 0.5);
    CHECK(a_half == doctest::Approx(m_index(arc, wca_part)).epsilon(0.05));
    // circle subarc at alpha = 1/3 stays under the circumference bound
    CHECK(alpha_partition_index(arc, 1.0 / 3.0) <= M_PI + 0.1);
}

TEST_CASE("covering bound: piece count is at most C over lambda squared") {
    SnowflakeSpec spec;
    spec.schedule.kind = ScheduleKind::constant_bump;
    spec.depth = 8;
    PolyCurve sf = generate(spec);
    ArcRef arc = make_arc(sf, 0.0, 0.3 * sf.total_length());
    double D = arc_diameter(arc);
    for (double delta : {0.3, 0.2, 0.1}) {
        Partition part = build_delta_partition(arc, delta);
        double lambda = 1e300;
        for (const ArcRef& piece : part.pieces)
            lambda = std::min(lambda, arc_diameter(piece) / D);
        CHECK((double)part.pieces.size() <= 8.0 / (lambda * lambda));
    }
}
