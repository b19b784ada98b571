#pragma once

// Parallel-body calculus on the pair (area, perimeter).
//
// Offsetting a convex body outward by rho acts on (area + 2 pi, perimeter)
// as a hyperbolic rotation; inward offsets apply the inverse rotation as long
// as the inner parallel body stays a genuine convex body.

#include <string>

#include <Eigen/Dense>

#include "json.hpp"

namespace hypiso {

struct BodyMeasure {
    double area = 0.0;
    double perimeter = 0.0;
};

/// Result of an inner flow; past_inradius marks outputs with negative area or
/// perimeter beyond 1e-6, i.e. flows evaluated past the collapse point.
struct InnerFlowResult {
    BodyMeasure measure;
    bool past_inradius = false;
};

BodyMeasure outer_flow(const BodyMeasure& m, double rho);
InnerFlowResult inner_flow(const BodyMeasure& m, double rho);

/// [[cosh rho, -sinh rho], [-sinh rho, cosh rho]], acting on (area + 2 pi, perimeter).
Eigen::Matrix2d boost_matrix(double rho);

/// (area + 2 pi)^2 - perimeter^2, preserved by both flows.
double flow_invariant(const BodyMeasure& m);

/// Area of the outer body whose inner parallel body at distance rho has the
/// given measures.
double reconstruct_from_inner(const BodyMeasure& inner, double rho);

enum class SignConvention { SteinerConsistent, AsPrinted };

const char* to_string(SignConvention c);

/// 2 pi (1 - sqrt(1 - 1/lambda^2)).
double curvature_gap_term(double lambda);

/// Reverse isoperimetric lower bound P/lambda -+ 2 pi (1 - sqrt(1 - 1/lambda^2)).
/// SteinerConsistent takes the minus sign.
double area_bound(double perimeter, double lambda,
                  SignConvention convention = SignConvention::SteinerConsistent);

struct DeficitReport {
    double lambda = 0.0;
    BodyMeasure measure;
    SignConvention sign_convention = SignConvention::SteinerConsistent;
    double bound_value = 0.0;
    double deficit = 0.0;
    /// The other convention, always carried along for side-by-side reporting.
    double as_printed_bound = 0.0;
    double as_printed_deficit = 0.0;
    double steiner_bound = 0.0;
    double steiner_deficit = 0.0;
    bool oracle_checked = false;
    double oracle_area = 0.0;
};

DeficitReport deficit(const BodyMeasure& m, double lambda,
                      SignConvention convention = SignConvention::SteinerConsistent);

nlohmann::json to_json(const DeficitReport& r);

/// Bound in the plane of curvature -c^2 (same sign convention as deficit);
/// switches to its series below c = 1e-4. Throws DomainError for c >= lambda.
double bound_scaled(double perimeter, double lambda, double c);

}  // namespace hypiso
