#include <cmath>
#include <random>

#include "doctest.h"

#include "hypiso/bodies.hpp"
#include "hypiso/errors.hpp"
#include "hypiso/optimize.hpp"

using namespace hypiso;

namespace {

const double R2 = arccoth(2.0);

struct Thick {
    Body body;
    double lambda;
};

std::vector<Thick> thick_bodies() {
    return {{sausage(2.0, 1.0), 2.0},          {sausage(2.0, 0.0), 2.0},       {sausage(1.5, 3.0), 1.5},
            {sausage(5.0, 0.5), 5.0},          {ball(1.0), 2.0},               {ball(R2), 2.0},
            {random_thick_body(2.0, 12, 3), 2.0}, {random_thick_body(3.0, 10, 8), 3.0}};
}

Isometry random_motion(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> s(0.0, 1.5), a(0.0, kTwoPi);
    return Isometry::translation(s(rng), a(rng)) * Isometry::rotation(a(rng));
}

}  // namespace

TEST_CASE("sausage") {
    const Body s = sausage(2.0, 1.0);
    CHECK(s.boundary().arcs.size() == 4);
    CHECK(std::abs(s.perimeter() - 8.246401) < 1e-6);
    CHECK(std::abs(s.area() - 3.281413) < 1e-6);
    CHECK(s.convex());
    CHECK(s.thick_for() == 2.0);
    CHECK(s.boundary().arcs[0].kappa == 2.0);
    CHECK(s.boundary().arcs[1].kappa == 0.5);
    CHECK(s.boundary().arcs[0].length == doctest::Approx(kPi * std::sinh(R2)).epsilon(1e-15));
    CHECK(s.boundary().arcs[1].length == doctest::Approx(2.0 * std::cosh(R2)).epsilon(1e-15));
    CHECK(std::abs(area_polygonal(s.boundary(), 100000) - s.area()) < 1e-6);

    const Body z = sausage(2.0, 0.0);
    CHECK(std::abs(z.perimeter() - 3.627599) < 1e-6);
    CHECK(std::abs(z.area() - kTwoPi * (std::cosh(R2) - 1)) < 1e-13);
    for (double lambda : {1.5, 2.0, 5.0})
        for (double d : {0.0, 1.0, 3.0}) {
            const Body b = sausage(lambda, d);
            CHECK(b.thick_for() == lambda);
            CHECK(closure_residual(b.boundary()) < 1e-9);
        }
    CHECK_THROWS_AS(sausage(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(sausage(2.0, -0.1), DomainError);
}

TEST_CASE("ball") {
    const Body b = ball(1.0);
    CHECK(std::abs(b.perimeter() - 7.384007) < 1e-6);
    CHECK(std::abs(b.area() - 3.412277) < 1e-6);
    CHECK(std::abs(ball(R2).area() - sausage(2.0, 0.0).area()) < 1e-12);
    CHECK(std::abs(ball(R2).perimeter() - sausage(2.0, 0.0).perimeter()) < 1e-12);
    CHECK(check_thickness(b.boundary(), 2.0).ok);
    CHECK_THROWS_AS(ball(0.0), DomainError);
    const Point c = exp_origin(0.7, -0.4);
    const Body moved = ball_at(0.5, c);
    CHECK(std::abs(signed_distance(moved, c) - 0.5) < 1e-12);
}

TEST_CASE("cached measures match fresh evaluation") {
    std::vector<Body> all = {ball(1.0), sausage(2.0, 1.0), two_ball_hull(R2, 1.0), q_counterexample(2.0, 0.1),
                             offset(two_ball_hull(R2, 1.0), -0.2)};
    for (const Body& b : all) {
        CHECK(std::abs(b.area() - area_gauss_bonnet(b.boundary())) < 1e-9);
        CHECK(std::abs(b.perimeter() - perimeter(b.boundary())) < 1e-9);
        bool convex = true;
        for (const Arc& a : b.boundary().arcs) convex = convex && a.kappa >= -1e-12;
        CHECK(b.convex() == convex);
    }
    CHECK_FALSE(all.back().convex());
}

TEST_CASE("two-ball hull") {
    const Body h = two_ball_hull(R2, 1.0);
    CHECK(closure_residual(h.boundary()) < 1e-9);
    REQUIRE(h.boundary().arcs.size() == 4);
    CHECK(h.boundary().arcs[1].kappa == 0.0);
    CHECK(h.boundary().arcs[0].kappa == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(check_thickness(h.boundary(), 2.0).ok);
    // The sausage is the R-neighbourhood of the core segment, so it contains the hull.
    const Body s = sausage(2.0, 1.0);
    CHECK(contains_body(s, h, 720));
    CHECK(h.area() < s.area());
    CHECK(std::abs(area_polygonal(h.boundary(), 100000) - h.area()) < 1e-6);
    // Caps cover more than a half circle: cap angle exceeds pi.
    CHECK(h.meta().at("cap_angle").get<double>() > kPi);

    // The measures grow linearly in d.
    const Body b = ball(R2);
    for (double d : {1e-4, 1e-6, 1e-8}) {
        const Body t = two_ball_hull(R2, d);
        CHECK(std::abs(t.area() - b.area()) < 4 * d);
        CHECK(std::abs(t.perimeter() - b.perimeter()) < 5 * d);
    }
    CHECK(std::abs(two_ball_hull(R2, 1e-8).area() - b.area()) < 1e-6);
}

TEST_CASE("Q counterexample") {
    const Body q = q_counterexample(2.0, 0.1);
    CHECK(closure_residual(q.boundary()) < 1e-9);
    CHECK(q.boundary().arcs[1].kappa == doctest::Approx(0.4).epsilon(1e-14));
    CHECK_FALSE(check_thickness(q.boundary(), 2.0).ok);
    CHECK(q.meta().at("cap_angle").get<double>() > kPi);
    const Body near = q_counterexample(2.0, 1e-6);
    const Body s = sausage(2.0, 1.0);
    CHECK(std::abs(near.area() - s.area()) < 1e-5);
    CHECK(std::abs(near.perimeter() - s.perimeter()) < 1e-5);
    CHECK_THROWS_AS(q_counterexample(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(q_counterexample(2.0, 0.5), DomainError);
}

TEST_CASE("point containment") {
    const Body b = ball(1.0);
    CHECK(contains_point(b, fermi_point(0.0, 0.0)));
    CHECK_FALSE(contains_point(b, exp_origin(1.5, 0.0)));
    CHECK(contains_point(b, exp_origin(0.0, 1.0)));  // on the boundary
    CHECK_FALSE(contains_point(b, exp_origin(0.0, 1.0 + 1e-6)));
    const Body s = sausage(2.0, 1.0);
    CHECK(contains_point(s, fermi_point(0.0, R2 - 1e-6)));
    CHECK_FALSE(contains_point(s, fermi_point(0.0, R2 + 1e-6)));
    CHECK(contains_point(s, fermi_point(1.0 + R2 - 1e-6, 0.0)));
    CHECK_FALSE(contains_point(s, fermi_point(1.0 + R2 + 1e-6, 0.0)));

    // Ray casting against the exact signed distance.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (const Body& k : {s, two_ball_hull(R2, 1.0), q_counterexample(2.0, 0.1), offset(two_ball_hull(R2, 1.0), -0.2)}) {
        for (int i = 0; i < 300; ++i) {
            const Point p = exp_origin(u(rng), u(rng) * 0.6);
            const double sd = signed_distance(k, p);
            if (std::abs(sd) < 1e-7) continue;
            CHECK(contains_point(k, p) == (sd > 0));
        }
    }
}

TEST_CASE("body containment") {
    const Body s = sausage(2.0, 1.0);
    CHECK(contains_body(s, ball_at(0.4, fermi_point(0.3, 0.0)), 720));
    CHECK_FALSE(contains_body(ball(1.0), ball(1.1), 720));
    CHECK(contains_body(s, s, 720));
    CHECK(contains_body(ball(1.1), ball(1.0), 720));
}

TEST_CASE("inradius") {
    CHECK(std::abs(inradius(ball(1.0)) - 1.0) < 1e-6);
    CHECK(std::abs(inradius(sausage(2.0, 1.0)) - R2) < 1e-6);
    CHECK(std::abs(inradius(two_ball_hull(R2, 1.0)) - R2) < 1e-6);
    for (double lambda : {1.5, 2.0, 5.0})
        for (double d : {0.5, 1.0, 3.0}) CHECK(std::abs(inradius(sausage(lambda, d)) - arccoth(lambda)) < 1e-6);
    const Inball ib = inball(ball_at(0.8, exp_origin(0.5, 0.2)));
    CHECK(std::abs(ib.radius - 0.8) < 1e-6);
    CHECK(dist(ib.center, exp_origin(0.5, 0.2)) < 1e-5);
}

TEST_CASE("offsets") {
    const Body e = offset(sausage(2.0, 1.0), -R2);
    CHECK(std::abs(e.area()) < 1e-6);
    CHECK(std::abs(e.perimeter() - 4.0) < 1e-6);
    CHECK(closure_residual(e.boundary()) < 1e-8);
    CHECK(e.meta().value("collapse_clamped", false));

    const Body g = offset(ball(1.0), 0.5);
    CHECK(std::abs(g.area() - 8.497440) < 1e-6);
    CHECK(std::abs(g.perimeter() - 13.378657) < 1e-6);
    CHECK(std::abs(g.area() - ball(1.5).area()) < 1e-10);

    const Body h = offset(two_ball_hull(R2, 1.0), -0.2);
    bool concave = false;
    for (const Arc& a : h.boundary().arcs) concave = concave || a.kappa <= -std::tanh(0.2) + 1e-9;
    CHECK(concave);
    CHECK_FALSE(h.convex());
    CHECK(closure_residual(h.boundary()) < 1e-8);

    try {
        (void)offset(ball(1.0), -1.5);
        FAIL("expected DegenerateBody");
    } catch (const DegenerateBody& ex) {
        CHECK(ex.arc_index == 0);
    }

}

TEST_CASE("thick erosions stay convex and agree with the scalar flow") {
    for (const Thick& t : thick_bodies()) {
        const double cap = arccoth(t.lambda);
        for (double rho : {0.1, 0.3, 0.5}) {
            if (rho >= cap) continue;
            const Body e = offset(t.body, -rho);
            for (const Arc& a : e.boundary().arcs) CHECK(a.kappa >= -1e-9);
            const InnerFlowResult f = inner_flow(t.body.measure(), rho);
            CHECK(std::abs(e.area() - f.measure.area) < 1e-8);
            CHECK(std::abs(e.perimeter() - f.measure.perimeter) < 1e-8);
            const Body back = offset(e, rho);
            CHECK(std::abs(back.area() - t.body.area()) < 1e-8);
            CHECK(std::abs(back.perimeter() - t.body.perimeter()) < 1e-8);
        }
        for (double rho : {0.3, 1.0}) {
            const Body d = offset(t.body, rho);
            const BodyMeasure f = outer_flow(t.body.measure(), rho);
            CHECK(std::abs(d.area() - f.area) < 1e-8 * std::max(1.0, f.area));
            CHECK(std::abs(d.perimeter() - f.perimeter) < 1e-8 * std::max(1.0, f.perimeter));
        }
    }
    const Body s = sausage(2.0, 1.0);
    const Body d = offset(s, 0.3);
    const BodyMeasure f = outer_flow(s.measure(), 0.3);
    CHECK(std::abs(d.area() - f.area) < 1e-8);
}

TEST_CASE("erosion monotonicity on nested pairs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 50) {
        const Isometry g = random_motion(rng);
        const double lambda = 1.5 + 3.0 * u(rng);
        Body outer;
        switch (checked % 3) {
            case 0: outer = transformed(sausage(lambda, 0.3 + 2.0 * u(rng)), g); break;
            case 1: outer = transformed(ball(0.5 + u(rng)), g); break;
            default: outer = transformed(two_ball_hull(arccoth(lambda), 0.3 + u(rng)), g); break;
        }
        const Inball ib = inball(outer);
        const Vec3 w(0.0, std::cos(kTwoPi * u(rng)), std::sin(kTwoPi * u(rng)));
        const Vec3 v = w + lorentz(w, ib.center.x()) * ib.center.x();
        const Point c = exp_map(ib.center, 0.5 * ib.radius * u(rng) / std::sqrt(lorentz(v, v)) * v);
        const double r_inner = 0.3 * ib.radius + 0.5 * ib.radius * u(rng);
        const Body inner = ball_at(std::min(r_inner, signed_distance(outer, c) - 1e-6), c);
        if (!contains_body(outer, inner, 720)) continue;
        const double rho = inradius(inner) * (0.1 + 0.8 * u(rng));
        CHECK(contains_body(offset(outer, -rho), offset(inner, -rho), 720));
        ++checked;
    }
}

TEST_CASE("rolling ball") {
    const RollReport s = rolls_freely(sausage(2.0, 1.0), 2.0, 720);
    CHECK(s.ok);
    CHECK(s.rho == doctest::Approx(R2).epsilon(1e-15));
    CHECK(s.worst_margin >= -1e-9);
    CHECK(rolls_freely(ball(R2), 2.0, 720).ok);
    const RollReport q = rolls_freely(q_counterexample(2.0, 0.1), 2.0, 720);
    CHECK_FALSE(q.ok);
    CHECK(q.worst_margin <= -1e-3);
    REQUIRE(q.witness.has_value());
    REQUIRE(q.witness_center.has_value());
    CHECK(std::abs(dist(*q.witness, *q.witness_center) - R2) < 1e-9);
    CHECK(rolls_freely(random_thick_body(2.0, 12, 5), 2.0, 720).ok);
}

TEST_CASE("isometries move bodies rigidly") {
    std::mt19937_64 rng(1);
    const Body s = sausage(2.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const Isometry g = random_motion(rng);
        const Body t = transformed(s, g);
        CHECK(std::abs(t.area() - s.area()) < 1e-12);
        CHECK(closure_residual(t.boundary()) < 1e-9);
        CHECK(contains_point(t, g(fermi_point(0.5, 0.2))));
        CHECK(std::abs(inradius(t) - R2) < 1e-6);
    }
}

TEST_CASE("body json round trip") {
    for (const Body& b : {sausage(2.0, 1.0), ball(1.0), two_ball_hull(R2, 1.0), q_counterexample(2.0, 0.1),
                          random_thick_body(2.0, 12, 1)}) {
        const std::string text = body_to_json(b);
        const Body back = body_from_json(nlohmann::json::parse(text));
        CHECK(std::abs(back.area() - b.area()) <= 1e-12);
        CHECK(std::abs(back.perimeter() - b.perimeter()) <= 1e-12);
        CHECK(back.lambda() == b.lambda());
        CHECK(back.meta() == b.meta());
        CHECK(body_to_json(back) == text);
    }
}
