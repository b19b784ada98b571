#pragma once

// Euclidean images of constant-curvature curves in the planar models.
//
// A curve leaving frame f with curvature k lies in the plane <x, W> = -k,
// W = k p + n, and every such plane section projects to a Euclidean circle
// or line in both the Poincare disk and the upper half-plane.

#include "hypiso/arc_spline.hpp"

namespace hypiso {

enum class Model { Disk, HalfPlane };

struct ModelCircle {
    bool is_line = false;
    Complex center;  // circle only
    double radius = 0.0;
};

/// Image of the full curve carrying the arc.
ModelCircle model_circle(const Frame& start, double kappa, Model model);

Complex to_model(const Point& p, Model model);
Point from_model(Complex z, Model model);

/// Arc parameter s of a point x lying on the full curve leaving `start`;
/// for closed curves s is taken in [0, circumference).
double curve_parameter(const Frame& start, double kappa, const Point& x);

struct ModelArc {
    ModelCircle circle;
    Complex from;
    Complex to;
    /// Signed Euclidean angle swept about the circle centre, counter-clockwise
    /// positive; zero for lines.
    double sweep = 0.0;
};

ModelArc model_arc(const Frame& start, const Arc& a, Model model);

/// Number of crossings of the ray q + t u (t > 0) with the arc, counting arc
/// parameters in the half-open range [0, length).
int disk_ray_crossings(Complex q, Complex u, const Frame& start, const Arc& a);

}  // namespace hypiso
