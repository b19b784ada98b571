#pragma once

// Fixed-perimeter minimisation of total curvature over thick arc-splines and
// a seeded generator of random thick bodies.
//
// A spline is encoded by its curvatures and lengths only; the start frame is
// the origin frame. Closure is measured on M = E_1 ... E_n, the product of
// the per-arc transport matrices, which equals the identity exactly when the
// curve closes up with matching tangent.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "hypiso/arc_spline.hpp"
#include "hypiso/bodies.hpp"

namespace hypiso {

/// Sides and caps of the sausage with this perimeter: d = (P - 2 pi sinh R) / (4 cosh R).
double perimeter_to_d(double lambda, double P);

/// 2 pi sinh(arccoth lambda), the circumference of the lambda-ball.
double min_thick_perimeter(double lambda);

/// Total curvature 2 pi cosh R + 4 d sinh R of the sausage with perimeter P.
double sausage_objective(double lambda, double P);

/// Three closure residuals (two translations, one rotation) read off M - I.
Eigen::Vector3d closure_vector(const std::vector<Arc>& arcs);

/// 3 x 2n Jacobian of closure_vector: columns 0..n-1 are d/d kappa_i,
/// columns n..2n-1 are d/d length_i.
Eigen::MatrixXd closure_jacobian(const std::vector<Arc>& arcs);

struct ShapeProblem {
    double lambda = 2.0;
    double perimeter_target = 0.0;
    int n_arcs = 16;
    double closure_tol = 1e-9;
    double kkt_tol = 1e-7;
    int max_iters = 10000;
    int starts = 8;
};

/// Throws DomainError for malformed problems and Infeasible for perimeters
/// below the lambda-ball circumference.
void validate(const ShapeProblem& p);

struct Candidate {
    std::vector<double> kappas;
    std::vector<double> lengths;
    double objective = 0.0;
    double closure_residual = 0.0;
    double kkt_residual = 0.0;
    bool converged = false;
    int iterations = 0;
    std::uint64_t seed = 0;

    /// Arcs of positive length, starting at the origin frame.
    ArcSpline spline() const;
};

/// Single local solve from a seeded random feasible start.
Candidate solve(const ShapeProblem& p, std::uint64_t seed);

struct RunReport {
    ShapeProblem problem;
    std::uint64_t seed = 0;
    std::vector<Candidate> candidates;
    std::size_t best = 0;
    double sausage_objective = 0.0;
    double gap = 0.0;  // best objective minus sausage objective
};

/// problem.starts independent solves; the best converged candidate wins, or
/// the best overall when none converged.
RunReport solve_multistart(const ShapeProblem& p, std::uint64_t seed);

/// Fraction of the total length carried by arcs whose curvature is within
/// tol of 1/lambda or lambda.
double bang_bang_fraction(const Candidate& c, double lambda, double tol = 1e-3);

nlohmann::json to_json(const ShapeProblem& p);
nlohmann::json to_json(const RunReport& r);

/// Curvatures drawn uniformly in [1/lambda, lambda]; lengths follow from a
/// continuation out of a ball that keeps the curve closed. Throws
/// std::runtime_error naming the seed after 100 failed restarts.
Body random_thick_body(double lambda, int n_arcs, std::uint64_t seed);

}  // namespace hypiso
