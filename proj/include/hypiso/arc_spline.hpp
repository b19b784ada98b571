#pragma once

// Closed, tangent-continuous chains of constant-curvature arcs.
//
// Curvature is signed: positive bends towards the frame normal n, which for
// a counter-clockwise boundary is the interior side. Each arc starts where
// the previous one ended, so corners cannot be represented.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypiso/geom_core.hpp"

namespace hypiso {

inline constexpr double kClosureTol = 1e-9;

struct Arc {
    double kappa = 0.0;
    double length = 0.0;
};

struct ArcSpline {
    Frame start;
    std::vector<Arc> arcs;
};

/// Coefficients of exp(sA) = I + f1 A + f2 A^2 for the Frenet matrix A of
/// curvature kappa; c = d f1/ds. The regime (trigonometric, polynomial,
/// hyperbolic) follows the horocycle band.
struct FrenetCoefficients {
    double f1;
    double f2;
    double c;
};
FrenetCoefficients frenet_coefficients(double kappa, double s);

/// exp(sA) in the coordinates of the starting frame: column 0 is the end
/// position, columns 1 and 2 the end tangent and normal.
Mat3 transport_matrix(double kappa, double s);

/// End frame of an arc, re-orthonormalised.
Frame transport(const Frame& f, const Arc& a);

/// Frame at arclength s along the constant-curvature curve leaving f.
Frame frame_at(const Frame& f, double kappa, double s);
Point point_at(const Frame& f, double kappa, double s);

/// Frames at the start of each arc plus the end frame (size arcs + 1).
std::vector<Frame> arc_frames(const ArcSpline& s);
Frame end_frame(const ArcSpline& s);

double closure_residual(const ArcSpline& s);
double perimeter(const ArcSpline& s);
double total_turning(const ArcSpline& s);

/// Sum of kappa_i l_i - 2 pi. Throws NotClosed if the closure residual
/// exceeds reject_tol.
double area_gauss_bonnet(const ArcSpline& s, double reject_tol = 1e-7);

/// Independent area oracle: geodesic fan over at least n_samples boundary
/// points, each triangle measured by its angle defect. Throws DomainError for
/// fewer than 3 samples and NonSimpleBoundary for self-intersecting curves.
double area_polygonal(const ArcSpline& s, int n_samples);

struct BoundarySample {
    Frame frame;
    std::size_t arc;
    double s;  // arclength within the arc
};

/// n samples equally spaced in arclength, the first at the spline start.
std::vector<BoundarySample> sample_uniform(const ArcSpline& s, int n);

/// At least n points, always including every arc endpoint.
std::vector<Point> sample_with_endpoints(const ArcSpline& s, int n);

/// Coarse self-intersection test on an n-point polyline in the disk view.
bool is_simple(const ArcSpline& s, int n = 400);

/// Splits every arc into k equal sub-arcs.
ArcSpline refine(const ArcSpline& s, int k);

struct ThicknessViolation {
    std::size_t arc;
    double kappa;
    double bound;
    bool lower;  // true: kappa < 1/lambda, false: kappa > lambda
};

struct ThicknessCertificate {
    double lambda = 0.0;
    bool ok = false;
    bool convex = false;
    bool closed = false;
    std::vector<ThicknessViolation> violations;
};

inline constexpr double kThicknessTol = 1e-12;

ThicknessCertificate check_thickness(const ArcSpline& s, double lambda);

struct NearestPoint {
    double distance = 0.0;
    /// Positive when the query point lies on the normal (interior) side.
    double signed_distance = 0.0;
    std::size_t arc = 0;
    double s = 0.0;
    Frame frame;
};

/// Exact nearest point of q on one arc leaving `start`.
NearestPoint nearest_on_arc(const Point& q, const Frame& start, const Arc& a);

/// Nearest boundary point; frames as returned by arc_frames.
NearestPoint nearest_on_boundary(const ArcSpline& s, const std::vector<Frame>& frames,
                                 const Point& q);

nlohmann::json frame_to_json(const Frame& f);
Frame frame_from_json(const nlohmann::json& j);

/// Canonical spline JSON with 17 significant digits:
///   {"start": {"p": [..], "t": [..], "n": [..]}, "arcs": [{"kappa": k, "length": l}, ..]}
std::string spline_to_json(const ArcSpline& s);
ArcSpline spline_from_json(const nlohmann::json& j);

/// 17 significant digits, as used by every text output.
std::string format_real(double x);

}  // namespace hypiso
