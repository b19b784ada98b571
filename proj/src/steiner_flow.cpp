#include "hypiso/steiner_flow.hpp"

#include <cmath>

#include "hypiso/errors.hpp"
#include "hypiso/geom_core.hpp"

namespace hypiso {

BodyMeasure outer_flow(const BodyMeasure& m, double rho) {
    if (!(rho >= 0.0)) throw DomainError("outer flow distance must be non-negative");
    const double ch = std::cosh(rho), sh = std::sinh(rho);
    return {m.perimeter * sh + kTwoPi * (ch - 1.0) + m.area * ch, sh * (m.area + kTwoPi) + ch * m.perimeter};
}

InnerFlowResult inner_flow(const BodyMeasure& m, double rho) {
    if (!(rho >= 0.0)) throw DomainError("inner flow distance must be non-negative");
    const double ch = std::cosh(rho), sh = std::sinh(rho);
    InnerFlowResult r;
    r.measure = {-m.perimeter * sh + kTwoPi * (ch - 1.0) + m.area * ch, -sh * (m.area + kTwoPi) + ch * m.perimeter};
    r.past_inradius = r.measure.area < -1e-6 || r.measure.perimeter < -1e-6;
    return r;
}

Eigen::Matrix2d boost_matrix(double rho) {
    Eigen::Matrix2d b;
    b << std::cosh(rho), -std::sinh(rho), -std::sinh(rho), std::cosh(rho);
    return b;
}

double flow_invariant(const BodyMeasure& m) {
    const double a = m.area + kTwoPi;
    return a * a - m.perimeter * m.perimeter;
}

double reconstruct_from_inner(const BodyMeasure& inner, double rho) {
    if (!(rho >= 0.0)) throw DomainError("reconstruction distance must be non-negative");
    const Eigen::Vector2d outer = boost_matrix(-rho) * Eigen::Vector2d(inner.area + kTwoPi, inner.perimeter);
    const double outer_perimeter = outer[1];
    return inner.area * sech(rho) + outer_perimeter * std::tanh(rho) + kTwoPi * (sech(rho) - 1.0);
}

const char* to_string(SignConvention c) {
    return c == SignConvention::SteinerConsistent ? "steiner_consistent" : "as_printed";
}

double curvature_gap_term(double lambda) {
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1");
    // 1 - sqrt(1 - x) = x / (1 + sqrt(1 - x)) avoids cancellation for large lambda
    const double x = 1.0 / (lambda * lambda);
    return kTwoPi * x / (1.0 + std::sqrt(1.0 - x));
}

double area_bound(double perimeter, double lambda, SignConvention convention) {
    const double gap = curvature_gap_term(lambda);
    return perimeter / lambda + (convention == SignConvention::SteinerConsistent ? -gap : gap);
}

DeficitReport deficit(const BodyMeasure& m, double lambda, SignConvention convention) {
    DeficitReport r;
    r.lambda = lambda;
    r.measure = m;
    r.sign_convention = convention;
    r.steiner_bound = area_bound(m.perimeter, lambda, SignConvention::SteinerConsistent);
    r.as_printed_bound = area_bound(m.perimeter, lambda, SignConvention::AsPrinted);
    r.steiner_deficit = m.area - r.steiner_bound;
    r.as_printed_deficit = m.area - r.as_printed_bound;
    r.bound_value = convention == SignConvention::SteinerConsistent ? r.steiner_bound : r.as_printed_bound;
    r.deficit = m.area - r.bound_value;
    return r;
}

nlohmann::json to_json(const DeficitReport& r) {
    return {
        {"lambda", r.lambda},
        {"area", r.measure.area},
        {"perimeter", r.measure.perimeter},
        {"sign_convention", to_string(r.sign_convention)},
        {"bound_value", r.bound_value},
        {"deficit", r.deficit},
        {"conventions",
         {{"steiner_consistent", {{"bound", r.steiner_bound}, {"deficit", r.steiner_deficit}}},
          {"as_printed", {{"bound", r.as_printed_bound}, {"deficit", r.as_printed_deficit}}}}},
        {"oracle_checked", r.oracle_checked},
        {"oracle_area", r.oracle_checked ? nlohmann::json(r.oracle_area) : nlohmann::json(nullptr)},
    };
}

double bound_scaled(double perimeter, double lambda, double c) {
    if (!(c > 0.0)) throw DomainError("curvature scale c must be positive");
    if (!(c < lambda)) throw DomainError("curvature scale c must be below lambda");
    const double l2 = lambda * lambda;
    double gap;
    if (c < 1e-4) {
        const double c2 = c * c;
        gap = kPi / l2 + kPi * c2 / (4.0 * l2 * l2) + kPi * c2 * c2 / (8.0 * l2 * l2 * l2);
    } else {
        const double x = c * c / l2;
        gap = kTwoPi / (c * c) * x / (1.0 + std::sqrt(1.0 - x));
    }
    return perimeter / lambda - gap;
}

}  // namespace hypiso
