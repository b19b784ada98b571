#pragma once

// Named bodies, containment, inradius, parallel bodies and the rolling test.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypiso/arc_spline.hpp"
#include "hypiso/steiner_flow.hpp"

namespace hypiso {

inline constexpr double kContainTol = 1e-9;
/// Radius given to a circle arc eroded exactly down to its centre.
inline constexpr double kCollapseRadius = 1e-9;

class Body {
public:
    Body() = default;

    /// Caches measures and flags. `lambda` is stored as metadata and, when
    /// the boundary passes check_thickness for it, also as thick_for().
    static Body from_spline(ArcSpline boundary, std::optional<double> lambda = std::nullopt,
                            nlohmann::json meta = nlohmann::json::object());

    const ArcSpline& boundary() const { return boundary_; }
    const BodyMeasure& measure() const { return measure_; }
    double area() const { return measure_.area; }
    double perimeter() const { return measure_.perimeter; }
    bool convex() const { return convex_; }
    std::optional<double> lambda() const { return lambda_; }
    std::optional<double> thick_for() const { return thick_for_; }
    const nlohmann::json& meta() const { return meta_; }
    /// Arc start frames plus the end frame.
    const std::vector<Frame>& frames() const { return frames_; }

private:
    ArcSpline boundary_;
    BodyMeasure measure_;
    bool convex_ = false;
    std::optional<double> lambda_;
    std::optional<double> thick_for_;
    nlohmann::json meta_ = nlohmann::json::object();
    std::vector<Frame> frames_;
};

Body sausage(double lambda, double d);
Body ball(double r);
Body ball_at(double r, const Point& center);
/// Convex hull of two radius-R balls centred at Fermi coordinates (+-d, 0).
Body two_ball_hull(double R, double d);
/// Cap curvature lambda, side curvature 1/lambda - eps, cap centres at
/// Fermi coordinates (+-d, 0) as for the sausage.
Body q_counterexample(double lambda, double eps, double d = 1.0);

Body transformed(const Body& b, const Isometry& g);

/// Positive inside, negative outside.
double signed_distance(const Body& b, const Point& q);
NearestPoint nearest_boundary_point(const Body& b, const Point& q);

bool contains_point(const Body& b, const Point& q, double tol = kContainTol);
bool contains_body(const Body& outer, const Body& inner, int n_samples, double tol = kContainTol);

struct Inball {
    double radius = 0.0;
    Point center;
};

/// Largest inscribed ball. Throws NonSimpleBoundary.
Inball inball(const Body& b);
double inradius(const Body& b);

/// Parallel body: rho > 0 dilates, rho < 0 erodes. Throws DegenerateBody when
/// a circle arc would be eroded past its centre.
Body offset(const Body& b, double rho);

struct RollReport {
    double lambda = 0.0;
    double rho = 0.0;
    bool ok = false;
    double worst_margin = 0.0;
    std::optional<Point> witness;
    /// Centre of the rolling ball placed at the witness.
    std::optional<Point> witness_center;
    int samples = 0;
};

/// Places the radius-arccoth(lambda) ball tangent from inside at n_samples
/// boundary points and measures how far it sticks out.
RollReport rolls_freely(const Body& b, double lambda, int n_samples = 720, double tol = kContainTol);

/// Steiner-consistent deficit report with the polygonal area oracle attached.
DeficitReport body_deficit(const Body& b, double lambda, int oracle_samples = 20000);

/// Spline JSON plus optional "lambda" and "meta" members.
std::string body_to_json(const Body& b);
Body body_from_json(const nlohmann::json& j);

}  // namespace hypiso
