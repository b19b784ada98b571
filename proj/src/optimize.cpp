#include "hypiso/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "hypiso/errors.hpp"

namespace hypiso {

double min_thick_perimeter(double lambda) {
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1");
    return kTwoPi * std::sinh(arccoth(lambda));
}

double perimeter_to_d(double lambda, double P) {
    const double floor = min_thick_perimeter(lambda);
    if (!(P >= floor)) throw Infeasible("perimeter " + format_real(P) + " is below the lambda-ball circumference " +
                                        format_real(floor));
    return (P - floor) / (4.0 * std::cosh(arccoth(lambda)));
}

double sausage_objective(double lambda, double P) {
    const double R = arccoth(lambda);
    return kTwoPi * std::cosh(R) + 4.0 * perimeter_to_d(lambda, P) * std::sinh(R);
}

namespace {

Eigen::Vector3d residual_of(const Mat3& m) {
    return {0.5 * (m(1, 0) + m(0, 1)), 0.5 * (m(2, 0) + m(0, 2)), 0.5 * (m(2, 1) - m(1, 2))};
}

Mat3 frenet_generator(double kappa) {
    Mat3 a;
    a << 0.0, 1.0, 0.0, 1.0, 0.0, -kappa, 0.0, kappa, 0.0;
    return a;
}

// d f1 / d sigma and d f2 / d sigma at fixed s, sigma = 1 - kappa^2.
std::pair<double, double> coefficient_sigma_derivatives(double kappa, double s) {
    const double sigma = 1.0 - kappa * kappa;
    const double s2 = s * s;
    if (std::abs(sigma) * s2 < 0.5) {
        // f1 = sum sigma^k s^(2k+1) / (2k+1)!, f2 = sum sigma^k s^(2k+2) / (2k+2)!
        double d1 = 0.0, d2 = 0.0;
        double sig_pow = 1.0;  // sigma^(k-1)
        double t1 = s * s2 / 6.0, t2 = s2 * s2 / 24.0;  // s^(2k+1)/(2k+1)!, s^(2k+2)/(2k+2)! at k = 1
        for (int k = 1; k < 30; ++k) {
            d1 += k * sig_pow * t1;
            d2 += k * sig_pow * t2;
            sig_pow *= sigma;
            t1 *= s2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            t2 *= s2 / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
        }
        return {d1, d2};
    }
    if (sigma > 0.0) {
        const double w = std::sqrt(sigma), x = w * s;
        return {(x * std::cosh(x) - std::sinh(x)) / (2.0 * w * w * w),
                (0.5 * x * std::sinh(x) - (std::cosh(x) - 1.0)) / (sigma * sigma)};
    }
    const double w = std::sqrt(-sigma), x = w * s;
    return {(std::sin(x) - x * std::cos(x)) / (2.0 * w * w * w),
            (1.0 - std::cos(x) - 0.5 * x * std::sin(x)) / (sigma * sigma)};
}

Mat3 transport_kappa_derivative(double kappa, double s) {
    const auto fc = frenet_coefficients(kappa, s);
    const auto [d1, d2] = coefficient_sigma_derivatives(kappa, s);
    const Mat3 a = frenet_generator(kappa);
    Mat3 b;
    b << 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0;
    const double ds = -2.0 * kappa;
    return ds * d1 * a + fc.f1 * b + ds * d2 * a * a + fc.f2 * (a * b + b * a);
}

}  // namespace

Eigen::Vector3d closure_vector(const std::vector<Arc>& arcs) {
    Mat3 m = Mat3::Identity();
    for (const Arc& a : arcs) m = m * transport_matrix(a.kappa, a.length);
    return residual_of(m);
}

Eigen::MatrixXd closure_jacobian(const std::vector<Arc>& arcs) {
    const std::size_t n = arcs.size();
    std::vector<Mat3> e(n), prefix(n + 1), suffix(n + 1);
    for (std::size_t i = 0; i < n; ++i) e[i] = transport_matrix(arcs[i].kappa, arcs[i].length);
    prefix[0] = Mat3::Identity();
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * e[i];
    suffix[n] = Mat3::Identity();
    for (std::size_t i = n; i-- > 0;) suffix[i] = e[i] * suffix[i + 1];

    Eigen::MatrixXd j(3, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat3 dk = transport_kappa_derivative(arcs[i].kappa, arcs[i].length);
        const Mat3 dl = frenet_generator(arcs[i].kappa) * e[i];
        j.col(i) = residual_of(prefix[i] * dk * suffix[i + 1]);
        j.col(n + i) = residual_of(prefix[i] * dl * suffix[i + 1]);
    }
    return j;
}

namespace {

constexpr double kRestoreTol = 1e-13;

// Curvatures and lengths packed as x = (kappa_0..kappa_{n-1}, length_0..length_{n-1}).
struct State {
    Eigen::VectorXd x;
    std::size_t n() const { return x.size() / 2; }
    std::vector<Arc> arcs() const {
        std::vector<Arc> a(n());
        for (std::size_t i = 0; i < n(); ++i) a[i] = {x[i], x[n() + i]};
        return a;
    }
    double objective() const { return x.head(n()).dot(x.tail(n())); }
};

struct Constraints {
    std::optional<double> perimeter;  // adds sum(lengths) = P as a fourth row

    int rows() const { return perimeter ? 4 : 3; }

    Eigen::VectorXd value(const State& s) const {
        Eigen::VectorXd c(rows());
        c.head<3>() = closure_vector(s.arcs());
        if (perimeter) c[3] = s.x.tail(s.n()).sum() - *perimeter;
        return c;
    }

    // Distance of the closing transport from the identity (plus the perimeter
    // error), relative to the rounding scale of the product. Unlike the three
    // residuals it also rules out closing up after a half turn.
    double merit(const State& s) const {
        const auto arcs = s.arcs();
        std::vector<Mat3> suffix(arcs.size() + 1, Mat3::Identity());
        for (std::size_t i = arcs.size(); i-- > 0;)
            suffix[i] = transport_matrix(arcs[i].kappa, arcs[i].length) * suffix[i + 1];
        Mat3 prefix = Mat3::Identity();
        double scale = 1.0;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            scale = std::max(scale, prefix.cwiseAbs().maxCoeff() * suffix[i].cwiseAbs().maxCoeff());
            prefix = prefix * transport_matrix(arcs[i].kappa, arcs[i].length);
        }
        double v = (suffix[0] - Mat3::Identity()).cwiseAbs().maxCoeff() / scale;
        if (perimeter) v = std::max(v, std::abs(s.x.tail(s.n()).sum() - *perimeter));
        return v;
    }

    Eigen::MatrixXd jacobian(const State& s) const {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(rows(), s.x.size());
        j.topRows<3>() = closure_jacobian(s.arcs());
        if (perimeter) j.row(3).tail(s.n()).setOnes();
        return j;
    }
};

struct Box {
    Eigen::VectorXd lo, hi;
    Eigen::VectorXd clip(const Eigen::VectorXd& x) const { return x.cwiseMax(lo).cwiseMin(hi); }
};

Box thick_box(double lambda, std::size_t n) {
    Box b;
    b.lo.resize(2 * n);
    b.hi.resize(2 * n);
    b.lo.head(n).setConstant(1.0 / lambda);
    b.hi.head(n).setConstant(lambda);
    b.lo.tail(n).setZero();
    b.hi.tail(n).setConstant(std::numeric_limits<double>::infinity());
    return b;
}

// Weighted minimum-norm Gauss-Newton onto the constraint set, moving only
// the variables flagged in `movable`.
bool restore(State& s, const Constraints& con, const Box& box, const Eigen::VectorXd& weight,
             const std::vector<char>& movable, int max_steps = 40) {
    Eigen::VectorXd c = con.value(s);
    double norm = con.merit(s);
    for (int step = 0; step < max_steps; ++step) {
        if (!std::isfinite(norm)) return false;
        if (norm <= kRestoreTol) return true;
        Eigen::MatrixXd j = con.jacobian(s);
        Eigen::VectorXd w = weight;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (!movable[i]) w[i] = 0.0;
        const Eigen::MatrixXd jw = j * w.asDiagonal();
        const Eigen::MatrixXd normal = jw * j.transpose();
        const Eigen::VectorXd y = normal.completeOrthogonalDecomposition().solve(c);
        const Eigen::VectorXd delta = -(jw.transpose() * y);
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-6) {
            State trial{box.clip(s.x + t * delta)};
            const double nt = con.merit(trial);
            if (std::isfinite(nt) && nt < (1.0 - 0.25 * t) * norm) {
                s = trial;
                c = con.value(trial);
                norm = nt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) return norm <= kRestoreTol;
    }
    return norm <= kRestoreTol;
}

// Moves the curvatures linearly from their current values to `target`,
// re-closing with the lengths after every step. Returns the fraction of the
// path that was completed.
double continue_curvatures(State& s, const Eigen::VectorXd& target, const Constraints& con, const Box& box,
                           bool relative_weights) {
    const std::size_t n = s.n();
    const Eigen::VectorXd origin = s.x.head(n);
    std::vector<char> movable(2 * n, 0);
    std::fill(movable.begin() + n, movable.end(), 1);
    double t = 0.0, dt = 0.25;
    while (t < 1.0 && dt > 1e-3) {
        const double t2 = std::min(1.0, t + dt);
        State trial = s;
        trial.x.head(n) = origin + t2 * (target - origin);
        Eigen::VectorXd weight = Eigen::VectorXd::Ones(2 * n);
        if (relative_weights) weight.tail(n) = trial.x.tail(n).cwiseAbs2();
        if (restore(trial, con, box, weight, movable) && trial.x.tail(n).minCoeff() > 0.0) {
            s = trial;
            t = t2;
            dt = std::min(2.0 * dt, 0.5);
        } else {
            dt *= 0.5;
        }
    }
    return t;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

struct KktStep {
    Eigen::VectorXd direction;
    double kkt = 0.0;
    double decrease = 0.0;  // squared scaled norm of the reduced gradient
};

// Projected reduced gradient in the metric diag(weight). Bound variables stay
// fixed unless their multiplier has the wrong sign, in which case the worst
// one is released and the projection recomputed.
KktStep reduced_gradient(const State& s, const Constraints& con, const Box& box, const Eigen::VectorXd& weight) {
    const Eigen::Index m = s.x.size();
    const std::size_t n = s.n();
    Eigen::VectorXd g(m);
    g.head(n) = s.x.tail(n);
    g.tail(n) = s.x.head(n);
    const Eigen::MatrixXd j = con.jacobian(s);

    std::vector<char> at_lo(m), at_hi(m), free(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double scale = std::sqrt(weight[i]);
        at_lo[i] = s.x[i] <= box.lo[i] + 1e-13 * scale;
        at_hi[i] = s.x[i] >= box.hi[i] - 1e-13 * scale;
        free[i] = !at_lo[i] && !at_hi[i];
    }

    Eigen::VectorXd rg;
    double violation = 0.0;
    for (Eigen::Index pass = 0; pass <= m; ++pass) {
        Eigen::VectorXd w = weight;
        for (Eigen::Index i = 0; i < m; ++i)
            if (!free[i]) w[i] = 0.0;
        const Eigen::MatrixXd jw = j * w.asDiagonal();
        const Eigen::VectorXd mu = (jw * j.transpose()).completeOrthogonalDecomposition().solve(jw * g);
        rg = g - j.transpose() * mu;
        violation = 0.0;
        Eigen::Index worst = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (free[i]) continue;
            const double v = std::sqrt(weight[i]) * (at_lo[i] ? -rg[i] : rg[i]);
            if (v > violation) violation = v, worst = i;
        }
        if (worst < 0) break;
        free[worst] = 1;
    }

    KktStep out;
    out.direction = Eigen::VectorXd::Zero(m);
    double reduced = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!free[i]) continue;
        out.direction[i] = -weight[i] * rg[i];
        const double scaled = std::sqrt(weight[i]) * rg[i];
        reduced = std::max(reduced, std::abs(scaled));
        out.decrease += scaled * scaled;
    }
    out.kkt = std::max(reduced, violation);
    return out;
}

// A closed thick curve: a ball of curvature kb split into unequal arcs, with
// the curvatures then moved to uniform draws in [1/lambda, lambda].
std::optional<State> random_closed_state(double lambda, std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(1.0 / lambda, lambda);
    std::uniform_real_distribution<double> share(0.5, 1.5);
    std::uniform_real_distribution<double> ball_frac(0.25, 1.0);
    const double kb = 1.0 + (lambda - 1.0) * ball_frac(rng);
    const double circumference = kTwoPi * std::sinh(arccoth(kb));
    State s;
    s.x.resize(2 * n);
    s.x.head(n).setConstant(kb);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (s.x[n + i] = share(rng));
    s.x.tail(n) *= circumference / total;

    Eigen::VectorXd target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = unif(rng);
    if (continue_curvatures(s, target, Constraints{}, thick_box(lambda, n), true) < 1.0) return std::nullopt;
    return s;
}

// Moves the perimeter of a closed curve to P, letting every variable adjust.
bool continue_perimeter(State& s, double P, const Box& box, const Eigen::VectorXd& weight) {
    const double P0 = s.x.tail(s.n()).sum();
    const std::vector<char> movable(s.x.size(), 1);
    double t = 0.0, dt = 0.25;
    while (t < 1.0 && dt > 1e-4) {
        const double t2 = std::min(1.0, t + dt);
        State trial = s;
        if (restore(trial, Constraints{P0 + t2 * (P - P0)}, box, weight, movable)) {
            s = trial;
            t = t2;
            dt = std::min(2.0 * dt, 0.5);
        } else {
            dt *= 0.5;
        }
    }
    return t >= 1.0;
}

}  // namespace

void validate(const ShapeProblem& p) {
    if (!(p.lambda > 1.0) || !std::isfinite(p.lambda)) throw DomainError("lambda must be a finite number above 1");
    if (p.n_arcs < 4) throw DomainError("need at least 4 arcs");
    if (p.starts < 1) throw DomainError("need at least one start");
    if (p.max_iters < 1) throw DomainError("need at least one iteration");
    if (!std::isfinite(p.perimeter_target)) throw DomainError("perimeter target must be finite");
    const double floor = min_thick_perimeter(p.lambda);
    if (p.perimeter_target < floor * (1.0 - 1e-12))
        throw Infeasible("perimeter " + format_real(p.perimeter_target) +
                         " is below the lambda-ball circumference " + format_real(floor));
}

ArcSpline Candidate::spline() const {
    ArcSpline s;
    for (std::size_t i = 0; i < kappas.size(); ++i)
        if (lengths[i] > 0.0) s.arcs.push_back({kappas[i], lengths[i]});
    return s;
}

Candidate solve(const ShapeProblem& p, std::uint64_t seed) {
    validate(p);
    const std::size_t n = static_cast<std::size_t>(p.n_arcs);
    const double lambda = p.lambda, P = p.perimeter_target;
    const Box box = thick_box(lambda, n);
    const Constraints con{P};

    Eigen::VectorXd weight(2 * n);
    weight.head(n).setConstant(std::pow(lambda - 1.0 / lambda, 2));
    weight.tail(n).setConstant(std::pow(P / n, 2));

    // feasible start: a random closed thick curve carried to perimeter P
    State s;
    bool started = false;
    const bool at_floor = P <= min_thick_perimeter(lambda) * (1.0 + 1e-6);
    for (std::uint64_t attempt = 0; attempt < 100 && !started && !at_floor; ++attempt) {
        auto rng = make_rng(seed, attempt);
        auto closed = random_closed_state(lambda, n, rng);
        if (!closed) continue;
        s = *closed;
        started = continue_perimeter(s, P, box, weight);
    }
    if (!started) {
        // near the lambda-ball floor: a ball of perimeter P cut into unequal arcs
        auto rng = make_rng(seed, 0xba11);
        std::uniform_real_distribution<double> share(0.5, 1.5);
        s.x.resize(2 * n);
        s.x.head(n).setConstant(std::min(lambda, std::sqrt(1.0 + std::pow(kTwoPi / P, 2))));
        for (std::size_t i = 0; i < n; ++i) s.x[n + i] = share(rng);
        s.x.tail(n) *= P / s.x.tail(n).sum();
    }

    Candidate c;
    c.seed = seed;
    double alpha = 0.1;
    int iter = 0;
    for (; iter < p.max_iters; ++iter) {
        const KktStep step = reduced_gradient(s, con, box, weight);
        c.kkt_residual = step.kkt;
        if (step.kkt < p.kkt_tol) {
            c.converged = true;
            break;
        }
        const double f0 = s.objective();
        alpha = std::min(1e3, 2.0 * alpha);
        bool accepted = false;
        while (alpha > 1e-14) {
            State trial{box.clip(s.x + alpha * step.direction)};
            std::vector<char> movable(2 * n);
            for (std::size_t i = 0; i < 2 * n; ++i)
                movable[i] = trial.x[i] > box.lo[i] && trial.x[i] < box.hi[i];
            if (restore(trial, con, box, weight, movable) &&
                trial.objective() <= f0 - 1e-4 * alpha * step.decrease) {
                s = trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    c.iterations = iter;
    c.kappas.assign(s.x.data(), s.x.data() + n);
    c.lengths.assign(s.x.data() + n, s.x.data() + 2 * n);
    c.objective = s.objective();
    c.closure_residual = closure_residual(c.spline());
    if (c.closure_residual >= p.closure_tol) c.converged = false;
    return c;
}

RunReport solve_multistart(const ShapeProblem& p, std::uint64_t seed) {
    validate(p);
    RunReport r;
    r.problem = p;
    r.seed = seed;
    for (int k = 0; k < p.starts; ++k) r.candidates.push_back(solve(p, seed * 1000003ULL + k));
    auto better = [&](std::size_t a, std::size_t b) {
        const Candidate &ca = r.candidates[a], &cb = r.candidates[b];
        if (ca.converged != cb.converged) return ca.converged;
        return ca.objective < cb.objective;
    };
    for (std::size_t k = 1; k < r.candidates.size(); ++k)
        if (better(k, r.best)) r.best = k;
    r.sausage_objective = sausage_objective(p.lambda, p.perimeter_target);
    r.gap = r.candidates[r.best].objective - r.sausage_objective;
    return r;
}

double bang_bang_fraction(const Candidate& c, double lambda, double tol) {
    double total = 0.0, extreme = 0.0;
    for (std::size_t i = 0; i < c.kappas.size(); ++i) {
        total += c.lengths[i];
        if (std::abs(c.kappas[i] - lambda) <= tol || std::abs(c.kappas[i] - 1.0 / lambda) <= tol)
            extreme += c.lengths[i];
    }
    return total > 0.0 ? extreme / total : 0.0;
}

nlohmann::json to_json(const ShapeProblem& p) {
    return {{"lambda", p.lambda},         {"perimeter_target", p.perimeter_target},
            {"n_arcs", p.n_arcs},         {"closure_tol", p.closure_tol},
            {"kkt_tol", p.kkt_tol},       {"max_iters", p.max_iters},
            {"starts", p.starts}};
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json starts = nlohmann::json::array();
    for (const Candidate& c : r.candidates)
        starts.push_back({{"seed", c.seed},
                          {"objective", c.objective},
                          {"closure_residual", c.closure_residual},
                          {"kkt_residual", c.kkt_residual},
                          {"converged", c.converged},
                          {"iterations", c.iterations}});
    const Candidate& best = r.candidates[r.best];
    return {{"problem", to_json(r.problem)},
            {"seed", r.seed},
            {"starts", starts},
            {"best_start", r.best},
            {"best",
             {{"objective", best.objective},
              {"area", best.objective - kTwoPi},
              {"converged", best.converged},
              {"kkt_residual", best.kkt_residual},
              {"closure_residual", best.closure_residual},
              {"bang_bang_fraction", bang_bang_fraction(best, r.problem.lambda)},
              {"spline", nlohmann::json::parse(spline_to_json(best.spline()))}}},
            {"sausage_objective", r.sausage_objective},
            {"sausage_d", perimeter_to_d(r.problem.lambda, r.problem.perimeter_target)},
            {"gap", r.gap}};
}

Body random_thick_body(double lambda, int n_arcs, std::uint64_t seed) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be a finite number above 1");
    if (n_arcs < 4) throw DomainError("need at least 4 arcs");
    const std::size_t n = static_cast<std::size_t>(n_arcs);
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        auto rng = make_rng(seed, attempt);
        const auto s = random_closed_state(lambda, n, rng);
        if (!s) continue;
        ArcSpline spline;
        spline.arcs = s->arcs();
        if (closure_residual(spline) >= kClosureTol) continue;
        if (!check_thickness(spline, lambda).ok) continue;
        return Body::from_spline(std::move(spline), lambda,
                                 {{"kind", "random"}, {"seed", seed}, {"attempt", attempt}});
    }
    throw std::runtime_error("random thick body: closure failed after 100 restarts (seed " + std::to_string(seed) +
                             ")");
}

}  // namespace hypiso
