#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "domelab/curve.hpp"
#include "domelab/io.hpp"
#include "domelab/snowflake.hpp"

using namespace domelab;

namespace {

PolyCurve unit_square(std::size_t per_side = 1) {
    std::vector<Vec2> pts;
    Vec2 c[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int e = 0; e < 4; e++)
        for (std::size_t k = 0; k < per_side; k++)
            pts.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * ((double)k / (double)per_side));
    return PolyCurve::make(std::move(pts), true);
}

PolyCurve regular_ngon(std::size_t n, double r = 1.0) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; i++) {
        double a = 2.0 * M_PI * (double)i / (double)n;
        pts[i] = {r * std::cos(a), r * std::sin(a)};
    }
    return PolyCurve::make(std::move(pts), true);
}

double brute_arc_diameter(const ArcRef& arc) {
    std::vector<Vec2> pts = materialize(arc);
    double best = 0;
    for (std::size_t i = 0; i < pts.size(); i++)
        for (std::size_t j = i + 1; j < pts.size(); j++)
            best = std::max(best, dist(pts[i], pts[j]));
    return best;
}

}  // namespace

TEST_CASE("construction validates inputs") {
    CHECK_THROWS_AS(PolyCurve::make({{0, 0}, {1, 0}}, true), Error);   // closed needs 3
    CHECK_THROWS_AS(PolyCurve::make({{0, 0}}, false), Error);          // open needs 2
    CHECK_THROWS_AS(PolyCurve::make({{0, 0}, {0, 0}, {1, 1}}, false), Error);  // repeat
    // bowtie self-intersection
    CHECK_THROWS_AS(PolyCurve::make({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true), Error);
    PolyCurve sq = unit_square();
    CHECK(sq.total_length() == doctest::Approx(4.0));
    for (std::size_t i = 1; i < sq.vertex_count(); i++)
        CHECK(sq.cumulative_length(i) > sq.cumulative_length(i - 1));
}

TEST_CASE("diameter of basic arcs") {
    PolyCurve seg = PolyCurve::make({{0, 0}, {3, 4}}, false);
    CHECK(arc_diameter(whole_arc(seg)) == doctest::Approx(5.0));
    PolyCurve sq = unit_square();
    CHECK(sq.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(arc_diameter(whole_arc(sq)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("snowflake arc diameter matches the brute-force pair scan") {
    SnowflakeSpec spec;
    spec.schedule.kind = ScheduleKind::constant_bump;
    spec.depth = 6;
    PolyCurve curve = generate(spec);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    double L = curve.total_length();
    for (int k = 0; k < 10; k++) {
        double s = ud(rng) * L;
        double len = (0.01 + 0.2 * ud(rng)) * L;
        ArcRef arc = make_arc(curve, s, s + len);
        CHECK(arc_diameter(arc) == doctest::Approx(brute_arc_diameter(arc)).epsilon(1e-12));
    }
}

TEST_CASE("diameter is monotone under subarc inclusion") {
    PolyCurve gon = regular_ngon(128);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    double L = gon.total_length();
    for (int k = 0; k < 50; k++) {
        double s = ud(rng) * L;
        double l1 = (0.05 + 0.4 * ud(rng)) * L;
        double l2 = l1 * (0.2 + 0.7 * ud(rng));
        double off = (l1 - l2) * ud(rng);
        ArcRef outer = make_arc(gon, s, s + l1);
        ArcRef inner = make_arc(gon, std::fmod(s + off, L), std::fmod(s + off, L) + l2);
        CHECK(arc_diameter(inner) <= arc_diameter(outer) + 1e-12);
    }
}

TEST_CASE("arc materialization keeps endpoints on the parent curve") {
    PolyCurve gon = regular_ngon(64);
    ArcRef arc = make_arc(gon, 0.37, 2.91);
    std::vector<double> params;
    std::vector<Vec2> pts = materialize(arc, &params);
    CHECK(pts.size() == params.size());
    CHECK(dist(pts.front(), gon.point_at(0.37)) < 1e-12);
    CHECK(dist(pts.back(), gon.point_at(2.91)) < 1e-12);
    for (std::size_t i = 1; i < params.size(); i++) CHECK(params[i] > params[i - 1]);

    // wrapped arc on a closed curve
    double L = gon.total_length();
    ArcRef wrap = make_arc(gon, L - 0.5, L + 0.5);
    std::vector<Vec2> wpts = materialize(wrap);
    CHECK(dist(wpts.front(), gon.point_at(L - 0.5)) < 1e-12);
    CHECK(dist(wpts.back(), gon.point_at(0.5)) < 1e-12);
}

TEST_CASE("arc validation") {
    PolyCurve seg = PolyCurve::make({{0, 0}, {1, 0}}, false);
    CHECK_THROWS_AS(make_arc(seg, 0.5, 0.5), Error);  // empty
    CHECK_THROWS_AS(make_arc(seg, 0.5, 1.5), Error);  // beyond an open curve
    PolyCurve gon = regular_ngon(16);
    double L = gon.total_length();
    CHECK_THROWS_AS(make_arc(gon, 0.0, L + 0.1), Error);  // longer than the loop
}

TEST_CASE("curve CSV round trip") {
    PolyCurve gon = regular_ngon(12, 0.8);
    std::string csv = io::curve_to_csv(gon);
    PolyCurve back = io::curve_from_csv(csv, true);
    REQUIRE(back.vertex_count() == gon.vertex_count());
    for (std::size_t i = 0; i < gon.vertex_count(); i++)
        CHECK(gon.vertex(i) == back.vertex(i));  // fmt() is round-trip exact
    CHECK_THROWS_AS(io::curve_from_csv("x,y\n1,2\nnot,a number\n", false), Error);
}
