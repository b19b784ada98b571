#include "hypiso/model_view.hpp"

#include <cmath>

#include "hypiso/errors.hpp"

namespace hypiso {

namespace {

constexpr double kLineTol = 1e-13;

ModelCircle circle_from_quadric(double quad, double bx, double by, double constant, double scale) {
    // quad |z|^2 - 2 (bx x + by y) + constant = 0
    ModelCircle c;
    if (std::abs(quad) <= kLineTol * scale) {
        c.is_line = true;
        return c;
    }
    c.center = Complex(bx / quad, by / quad);
    c.radius = std::sqrt(std::max(0.0, std::norm(c.center) - constant / quad));
    return c;
}

double wrap(double a) {
    while (a > kPi) a -= kTwoPi;
    while (a <= -kPi) a += kTwoPi;
    return a;
}

}  // namespace

ModelCircle model_circle(const Frame& start, double kappa, Model model) {
    const Vec3 w = kappa * start.p.x() + start.n;
    const double scale = w.cwiseAbs().maxCoeff() + std::abs(kappa);
    if (model == Model::Disk) {
        // -(W0 + k)|z|^2 + 2 (W1 x + W2 y) + (k - W0) = 0
        const double a = w[0] + kappa;
        return circle_from_quadric(a, w[1], w[2], -(kappa - w[0]), scale);
    }
    // (W1 - W0)|w|^2 - 2 W2 u + 2 k y - (W0 + W1) = 0
    const double a = w[1] - w[0];
    return circle_from_quadric(a, w[2], -kappa, -(w[0] + w[1]), scale);
}

Complex to_model(const Point& p, Model model) { return model == Model::Disk ? to_disk(p) : to_uhp(p); }

Point from_model(Complex z, Model model) { return model == Model::Disk ? from_disk(z) : from_uhp(z); }

double curve_parameter(const Frame& start, double kappa, const Point& x) {
    // frame coordinates of x are (1 + f2, f1, k f2)
    const double alpha = -lorentz(x.x(), start.p.x());
    const double beta = lorentz(x.x(), start.t);
    const double sigma = 1.0 - kappa * kappa;
    if (std::abs(kappa - 1.0) <= kHorocycleBand) return beta;
    if (sigma < 0.0) {
        const double w = std::sqrt(-sigma);
        double phi = std::atan2(w * beta, 1.0 - w * w * (alpha - 1.0));
        if (phi < 0.0) phi += kTwoPi;
        return phi / w;
    }
    const double w = std::sqrt(sigma);
    return std::asinh(w * beta) / w;
}

ModelArc model_arc(const Frame& start, const Arc& a, Model model) {
    ModelArc out;
    out.circle = model_circle(start, a.kappa, model);
    out.from = to_model(start.p, model);
    out.to = to_model(point_at(start, a.kappa, a.length), model);
    if (out.circle.is_line) return out;
    constexpr int kSteps = 32;
    double sweep = 0.0;
    double prev = std::arg(out.from - out.circle.center);
    for (int i = 1; i <= kSteps; ++i) {
        const Complex z = to_model(point_at(start, a.kappa, a.length * i / kSteps), model);
        const double ang = std::arg(z - out.circle.center);
        sweep += wrap(ang - prev);
        prev = ang;
    }
    out.sweep = sweep;
    return out;
}

int disk_ray_crossings(Complex q, Complex u, const Frame& start, const Arc& a) {
    const Vec3 w = a.kappa * start.p.x() + start.n;
    // F(z) = -A|z|^2 + 2 (W.z) + (k - W0) restricted to z = q + t u, |u| = 1
    const double A = w[0] + a.kappa;
    const double wq = w[1] * q.real() + w[2] * q.imag();
    const double wu = w[1] * u.real() + w[2] * u.imag();
    const double qu = q.real() * u.real() + q.imag() * u.imag();
    const double c2 = -A;
    const double c1 = 2.0 * (wu - A * qu);
    const double c0 = -A * std::norm(q) + 2.0 * wq + (a.kappa - w[0]);

    double roots[2];
    int nroots = 0;
    if (c2 == 0.0) {
        if (c1 != 0.0) roots[nroots++] = -c0 / c1;
    } else {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0) return 0;
        const double r = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
        if (r != 0.0) {
            roots[nroots++] = r / c2;
            roots[nroots++] = c0 / r;
        } else {
            roots[nroots++] = 0.0;
        }
    }

    int crossings = 0;
    for (int i = 0; i < nroots; ++i) {
        const double t = roots[i];
        if (!(t > 0.0)) continue;
        const Complex z = q + t * u;
        if (!(std::norm(z) < 1.0)) continue;
        const double s = curve_parameter(start, a.kappa, from_disk(z));
        if (s >= 0.0 && s < a.length) ++crossings;
    }
    return crossings;
}

}  // namespace hypiso
