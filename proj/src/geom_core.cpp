#include "hypiso/geom_core.hpp"

#include <algorithm>
#include <cmath>

#include "hypiso/errors.hpp"

namespace hypiso {

Point Point::from_ambient(const Vec3& x) {
    const double q = lorentz(x, x);
    if (!(q < 0.0) || !(x[0] > 0.0) || !x.allFinite())
        throw DomainError("point is not on the upper sheet of the hyperboloid");
    return unchecked(x / std::sqrt(-q));
}

Frame Frame::from_point_normal(const Point& p, const Vec3& n) {
    Frame f;
    f.p = p;
    f.n = n;
    f.t = lorentz_cross(n, p.x());
    return reorthonormalize(f);
}

double Frame::orthonormality_error() const {
    const Vec3& x = p.x();
    double e = std::abs(lorentz(x, x) + 1.0);
    e = std::max(e, std::abs(lorentz(t, t) - 1.0));
    e = std::max(e, std::abs(lorentz(n, n) - 1.0));
    e = std::max(e, std::abs(lorentz(x, t)));
    e = std::max(e, std::abs(lorentz(x, n)));
    e = std::max(e, std::abs(lorentz(t, n)));
    return e;
}

Frame reorthonormalize(const Frame& f) {
    Vec3 p = f.p.x();
    p /= std::sqrt(-lorentz(p, p));
    if (p[0] < 0.0) p = -p;
    Vec3 t = f.t + lorentz(f.t, p) * p;
    t /= std::sqrt(lorentz(t, t));
    Vec3 n = f.n + lorentz(f.n, p) * p - lorentz(f.n, t) * t;
    n /= std::sqrt(lorentz(n, n));
    return Frame{Point::unchecked(p), t, n};
}

double dist(const Point& a, const Point& b) {
    const double c = std::max(1.0, -lorentz(a.x(), b.x()));
    if (c < 2.0) {
        // chord form: <a-b, a-b> = 4 sinh^2(d/2), well conditioned near 0
        const Vec3 diff = a.x() - b.x();
        const double chord2 = std::max(0.0, lorentz(diff, diff));
        return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
    }
    return std::acosh(c);
}

Point exp_map(const Point& p, const Vec3& v) {
    const double len = std::sqrt(std::max(0.0, lorentz(v, v)));
    if (len == 0.0) return p;
    return Point::unchecked(std::cosh(len) * p.x() + std::sinh(len) / len * v);
}

Point exp_origin(double v1, double v2) {
    return exp_map(Point::origin(), Vec3(0.0, v1, v2));
}

Point fermi_point(double s, double t) {
    return Point::unchecked(Vec3(std::cosh(t) * std::cosh(s), std::cosh(t) * std::sinh(s), std::sinh(t)));
}

Vec3 parallel_transport(const Point& a, const Point& b, const Vec3& v) {
    const double ab = lorentz(a.x(), b.x());
    return v + lorentz(b.x(), v) / (1.0 - ab) * (a.x() + b.x());
}

Isometry Isometry::translation(double s, double phi) {
    Mat3 boost = Mat3::Identity();
    boost(0, 0) = std::cosh(s);
    boost(0, 1) = std::sinh(s);
    boost(1, 0) = std::sinh(s);
    boost(1, 1) = std::cosh(s);
    return rotation(phi) * Isometry(boost) * rotation(-phi);
}

Isometry Isometry::rotation(double theta) {
    Mat3 r = Mat3::Identity();
    r(1, 1) = std::cos(theta);
    r(1, 2) = -std::sin(theta);
    r(2, 1) = std::sin(theta);
    r(2, 2) = std::cos(theta);
    return Isometry(r);
}

Isometry Isometry::to_frame(const Frame& f) {
    Mat3 m;
    m.col(0) = f.p.x();
    m.col(1) = f.t;
    m.col(2) = f.n;
    return Isometry(m);
}

Point Isometry::operator()(const Point& p) const { return Point::unchecked(m_ * p.x()); }

Frame Isometry::operator()(const Frame& f) const {
    return reorthonormalize(Frame{(*this)(f.p), m_ * f.t, m_ * f.n});
}

Isometry Isometry::inverse() const {
    // Lorentz matrices satisfy M^-1 = J M^T J with J = diag(-1, 1, 1)
    const Eigen::DiagonalMatrix<double, 3> j(-1.0, 1.0, 1.0);
    return Isometry(j * m_.transpose() * j);
}

const char* to_string(CurveKind k) {
    switch (k) {
        case CurveKind::Geodesic: return "geodesic";
        case CurveKind::Hypercircle: return "hypercircle";
        case CurveKind::Horocycle: return "horocycle";
        case CurveKind::Circle: return "circle";
    }
    return "?";
}

CurveClass classify_curvature(double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw DomainError("curvature must be finite and non-negative");
    if (kappa == 0.0) return {CurveKind::Geodesic, std::nullopt};
    if (std::abs(kappa - 1.0) <= kHorocycleBand) return {CurveKind::Horocycle, std::nullopt};
    if (kappa < 1.0) return {CurveKind::Hypercircle, std::atanh(kappa)};
    return {CurveKind::Circle, arccoth(kappa)};
}

namespace {
void check_angle(double beta) {
    if (!(beta > 0.0 && beta < kPi / 2))
        throw DomainError("boundary angle must lie in (0, pi/2)");
}
}  // namespace

double hypercircle_curvature_from_angle(double beta) {
    check_angle(beta);
    return std::cos(beta);
}

double hypercircle_distance_from_angle(double beta) {
    check_angle(beta);
    const double via_tanh = std::atanh(std::cos(beta));
    const double via_half_plane = -std::log(std::tan(beta / 2));
    // artanh(cos b) loses ~eps/b^2 as b -> 0; the half-plane form does not
    const double tol = 1e-12 + 1e-15 / (beta * beta);
    if (std::abs(via_tanh - via_half_plane) > tol)
        throw std::logic_error("hypercircle distance formulas disagree");
    return via_half_plane;
}

double sausage_side_curvature(double lambda) {
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1");
    const double k = std::tanh(arccoth(lambda));
    if (std::abs(k - 1.0 / lambda) > 1e-12) throw std::logic_error("tanh(arccoth l) != 1/l");
    return k;
}

double curvature_scaled(double c, double R) {
    if (!(c > 0.0) || !(R > 0.0)) throw DomainError("c and R must be positive");
    return c * std::tanh(c * R);
}

double disk_curvature_at_origin(double euclidean_kappa) { return 0.5 * euclidean_kappa; }

Complex to_disk(const Point& p) {
    const Vec3& x = p.x();
    return {x[1] / (1.0 + x[0]), x[2] / (1.0 + x[0])};
}

Point from_disk(Complex z) {
    const double r2 = std::norm(z);
    if (!(r2 < 1.0)) throw DomainError("point outside the unit disk");
    const double den = 1.0 - r2;
    return Point::unchecked(Vec3((1.0 + r2) / den, 2.0 * z.real() / den, 2.0 * z.imag() / den));
}

Complex disk_to_uhp(Complex z) {
    const Complex i(0.0, 1.0);
    return i * (1.0 + z) / (1.0 - z);
}

Complex uhp_to_disk(Complex w) {
    const Complex i(0.0, 1.0);
    return (w - i) / (w + i);
}

Complex to_uhp(const Point& p) {
    // closed form of disk_to_uhp(to_disk(p)), free of the pole at z = 1
    const Vec3& x = p.x();
    return Complex(-x[2], 1.0) / (x[0] - x[1]);
}

Point from_uhp(Complex w) {
    if (!(w.imag() > 0.0)) throw DomainError("point outside the upper half-plane");
    const double y = w.imag();
    const double r2 = std::norm(w);
    return Point::unchecked(Vec3((1.0 + r2) / (2.0 * y), (r2 - 1.0) / (2.0 * y), -w.real() / y));
}

}  // namespace hypiso
