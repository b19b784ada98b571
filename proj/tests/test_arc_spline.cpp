#include <cmath>
#include <random>

#include "doctest.h"

#include "hypiso/arc_spline.hpp"
#include "hypiso/bodies.hpp"
#include "hypiso/errors.hpp"
#include "hypiso/optimize.hpp"

using namespace hypiso;

namespace {

const double R2 = arccoth(2.0);

double frame_gap(const Frame& a, const Frame& b) {
    return std::max({(a.p.x() - b.p.x()).cwiseAbs().maxCoeff(), (a.t - b.t).cwiseAbs().maxCoeff(),
                     (a.n - b.n).cwiseAbs().maxCoeff()});
}

std::vector<Body> constructor_bodies() {
    return {ball(1.0),          ball(0.3),           sausage(2.0, 1.0),      sausage(2.0, 0.0),
            sausage(1.5, 3.0),  sausage(5.0, 3.0),   two_ball_hull(R2, 1.0), q_counterexample(2.0, 0.1),
            random_thick_body(2.0, 12, 1), random_thick_body(3.0, 8, 2)};
}

}  // namespace

TEST_CASE("transport closed forms") {
    const Frame f0 = Frame::origin();
    const Frame circle = transport(f0, {coth(1.0), kTwoPi * std::sinh(1.0)});
    CHECK(frame_gap(circle, f0) < 1e-9);

    const Frame g = transport(f0, {0.0, 1.7});
    CHECK(dist(g.p, Point()) == doctest::Approx(1.7).epsilon(1e-14));
    CHECK((parallel_transport(Point(), g.p, f0.t) - g.t).norm() < 1e-12);

    const double h = 0.5;
    const Frame e = transport(f0, {std::tanh(h), std::cosh(h) * 1.0});
    const Isometry to_base = Isometry::translation(-h, kPi / 2);
    CHECK(dist(to_base(Point()), fermi_point(0.0, -h)) < 1e-14);
    CHECK(dist(to_base(e.p), fermi_point(1.0, -h)) < 1e-12);

    const Frame horo = transport(f0, {1.0, 2.0});
    CHECK(horo.orthonormality_error() < 1e-12);
    CHECK(std::abs(to_disk(horo.p)) < 1.0);
}

TEST_CASE("transport regimes are continuous through the horocycle band") {
    for (double s : {0.3, 2.0, 6.0}) {
        const Mat3 below = transport_matrix(1.0 - 2e-12, s);
        const Mat3 at = transport_matrix(1.0, s);
        const Mat3 above = transport_matrix(1.0 + 2e-12, s);
        CHECK((below - at).cwiseAbs().maxCoeff() < 1e-9 * at.cwiseAbs().maxCoeff());
        CHECK((above - at).cwiseAbs().maxCoeff() < 1e-9 * at.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("transport is a group action and isometry equivariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> k(-3.0, 3.0), l(0.0, 1.5), a(0.0, kTwoPi);
    for (int i = 0; i < 200; ++i) {
        const double kappa = (i % 10 == 0) ? 1.0 : k(rng);
        const double l1 = l(rng), l2 = l(rng);
        const Frame f = Isometry::translation(l(rng), a(rng))(Frame::origin());
        const Frame two = transport(transport(f, {kappa, l1}), {kappa, l2});
        const Frame one = transport(f, {kappa, l1 + l2});
        CHECK(frame_gap(one, two) < 1e-12 * std::max(1.0, one.p[0]) * 10);

        const Isometry g = Isometry::translation(l(rng), a(rng)) * Isometry::rotation(a(rng));
        CHECK(frame_gap(g(transport(f, {kappa, l1})), transport(g(f), {kappa, l1})) < 1e-9);
    }
}

TEST_CASE("closure residual") {
    ArcSpline c{Frame::origin(), {{coth(1.0), kTwoPi * std::sinh(1.0)}}};
    CHECK(closure_residual(c) < 1e-9);
    c.arcs[0].length -= 0.1;
    CHECK(closure_residual(c) > 0.01);
    CHECK_THROWS_AS(area_gauss_bonnet(c), NotClosed);
    CHECK(closure_residual(sausage(2.0, 1.0).boundary()) < 1e-9);
    for (double lambda : {1.5, 2.0, 5.0})
        for (double d : {0.0, 1.0, 3.0}) CHECK(closure_residual(sausage(lambda, d).boundary()) < 1e-9);
}

TEST_CASE("perimeter and Gauss-Bonnet area") {
    const double P_ball = kTwoPi * std::sinh(1.0);
    CHECK(perimeter(ball(1.0).boundary()) == doctest::Approx(P_ball).epsilon(1e-14));
    CHECK(P_ball == doctest::Approx(7.384007).epsilon(1e-7));
    CHECK(area_gauss_bonnet(ball(1.0).boundary()) == doctest::Approx(kTwoPi * (std::cosh(1.0) - 1)).epsilon(1e-13));
    CHECK(area_gauss_bonnet(ball(1.0).boundary()) == doctest::Approx(3.412277).epsilon(1e-6));

    const ArcSpline s = sausage(2.0, 1.0).boundary();
    CHECK(perimeter(s) == doctest::Approx(kTwoPi * std::sinh(R2) + 4 * std::cosh(R2)).epsilon(1e-14));
    CHECK(perimeter(s) == doctest::Approx(8.246401).epsilon(1e-7));
    CHECK(area_gauss_bonnet(s) == doctest::Approx((4 * kPi + 4) / std::sqrt(3.0) - kTwoPi).epsilon(1e-13));
    CHECK(area_gauss_bonnet(s) == doctest::Approx(3.281413).epsilon(1e-7));
    CHECK(area_gauss_bonnet(sausage(2.0, 0.0).boundary()) ==
          doctest::Approx(kTwoPi * (2 / std::sqrt(3.0) - 1)).epsilon(1e-13));

    CHECK_THROWS_AS(area_gauss_bonnet(ArcSpline{}), DomainError);
    CHECK_THROWS_AS(spline_from_json(nlohmann::json::parse(R"({"arcs": []})")), DomainError);
    CHECK_THROWS_AS(spline_from_json(nlohmann::json::parse(R"({"arcs": [{"kappa": 1, "length": 0}]})")),
                    DomainError);
}

TEST_CASE("polygonal oracle") {
    CHECK(area_polygonal(ball(1.0).boundary(), 10000) == doctest::Approx(3.412277).epsilon(1e-4 / 3.4));
    CHECK(area_polygonal(sausage(2.0, 1.0).boundary(), 10000) == doctest::Approx(3.281413).epsilon(1e-4 / 3.3));
    CHECK_THROWS_AS(area_polygonal(ball(1.0).boundary(), 2), DomainError);
    for (const Body& b : constructor_bodies())
        CHECK(std::abs(area_polygonal(b.boundary(), 100000) - area_gauss_bonnet(b.boundary())) < 5e-4);

    // Figure eight crossing itself at the origin under 90 degrees.
    const double r = 1.0;
    const double L = std::asinh(std::tanh(r));
    const double gamma = std::acos(std::cosh(L) * std::sin(kPi / 4));
    const double arc = (kTwoPi - 2 * gamma) * std::sinh(r);
    const ArcSpline eight{Isometry::rotation(kPi / 4)(Frame::origin()),
                          {{0.0, L}, {-coth(r), arc}, {0.0, 2 * L}, {coth(r), arc}, {0.0, L}}};
    CHECK(closure_residual(eight) < 1e-9);
    CHECK_FALSE(is_simple(eight));
    CHECK_THROWS_AS(area_polygonal(eight, 1000), NonSimpleBoundary);
}

TEST_CASE("refinement leaves measures unchanged") {
    for (const Body& b : constructor_bodies()) {
        for (int k : {2, 3, 7}) {
            const ArcSpline r = refine(b.boundary(), k);
            CHECK(r.arcs.size() == b.boundary().arcs.size() * k);
            CHECK(std::abs(perimeter(r) - perimeter(b.boundary())) < 1e-10);
            CHECK(std::abs(area_gauss_bonnet(r) - area_gauss_bonnet(b.boundary())) < 1e-10);
            CHECK(std::abs(closure_residual(r) - closure_residual(b.boundary())) < 1e-10);
        }
    }
}

TEST_CASE("thickness certificates") {
    const auto s = check_thickness(sausage(2.0, 1.0).boundary(), 2.0);
    CHECK(s.ok);
    CHECK(s.convex);
    CHECK(s.closed);
    for (double lambda : {1.5, 2.0, 5.0})
        for (double d : {0.0, 1.0, 3.0}) CHECK(check_thickness(sausage(lambda, d).boundary(), lambda).ok);

    const auto h = check_thickness(two_ball_hull(R2, 1.0).boundary(), 2.0);
    CHECK_FALSE(h.ok);
    REQUIRE_FALSE(h.violations.empty());
    CHECK(h.violations.front().lower);
    CHECK(h.violations.front().kappa == doctest::Approx(0.0));
    CHECK(h.violations.front().bound == 0.5);

    const auto q = check_thickness(q_counterexample(2.0, 0.1).boundary(), 2.0);
    CHECK_FALSE(q.ok);
    REQUIRE_FALSE(q.violations.empty());
    CHECK(q.violations.front().kappa == doctest::Approx(0.4).epsilon(1e-14));

    CHECK(check_thickness(ball(1.0).boundary(), 2.0).ok);
    CHECK_FALSE(check_thickness(ball(0.3).boundary(), 2.0).ok);
    CHECK_THROWS_AS(check_thickness(ball(1.0).boundary(), 1.0), DomainError);

    ArcSpline open = ball(1.0).boundary();
    open.arcs[0].length *= 0.9;
    const auto o = check_thickness(open, 2.0);
    CHECK_FALSE(o.closed);
    CHECK_FALSE(o.ok);
}

TEST_CASE("sampling") {
    const ArcSpline s = sausage(2.0, 1.0).boundary();
    const auto samples = sample_uniform(s, 100);
    REQUIRE(samples.size() == 100);
    CHECK(dist(samples[0].frame.p, s.start.p) < 1e-15);
    const double step = perimeter(s) / 100;
    for (int i = 1; i < 100; ++i) CHECK(dist(samples[i].frame.p, samples[i - 1].frame.p) <= step + 1e-12);
    const auto pts = sample_with_endpoints(s, 50);
    CHECK(pts.size() >= 50);
}

TEST_CASE("json round trip") {
    const ArcSpline s = random_thick_body(2.0, 9, 4).boundary();
    const std::string text = spline_to_json(s);
    const ArcSpline back = spline_from_json(nlohmann::json::parse(text));
    REQUIRE(back.arcs.size() == s.arcs.size());
    for (std::size_t i = 0; i < s.arcs.size(); ++i) {
        CHECK(back.arcs[i].kappa == s.arcs[i].kappa);
        CHECK(back.arcs[i].length == s.arcs[i].length);
    }
    CHECK(frame_gap(back.start, s.start) == 0.0);
    CHECK(spline_to_json(back) == text);

    const ArcSpline d = spline_from_json(nlohmann::json::parse(R"({"arcs": [{"kappa": 2, "length": 1}]})"));
    CHECK(frame_gap(d.start, Frame::origin()) == 0.0);
    CHECK(format_real(0.1) == "0.10000000000000001");
}
