#pragma once

// Hyperbolic plane primitives on the upper sheet of the hyperboloid
//   -x0^2 + x1^2 + x2^2 = -1,  x0 > 0
// with views into the Poincare disk and the upper half-plane.
// Curvature is -1 unless a scale parameter c is passed explicitly.

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace hypiso {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHorocycleBand = 1e-12;

/// Minkowski form <a,b> = -a0 b0 + a1 b1 + a2 b2.
inline double lorentz(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Vector Lorentz-orthogonal to both arguments; for a positive frame
/// (p, t, n) this gives t = lorentz_cross(n, p).
inline Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    Vec3 c = a.cross(b);
    c[0] = -c[0];
    return c;
}

inline double coth(double x) { return 1.0 / std::tanh(x); }
inline double arccoth(double x) { return std::atanh(1.0 / x); }
inline double sech(double x) { return 1.0 / std::cosh(x); }

class Point {
public:
    /// Hyperboloid origin (1, 0, 0).
    Point() : x_(1.0, 0.0, 0.0) {}

    /// Validates and renormalises an ambient vector onto the upper sheet.
    /// Throws DomainError if the vector is not future timelike.
    static Point from_ambient(const Vec3& x);

    /// Skips validation; for internal use on values known to be on the sheet.
    static Point unchecked(const Vec3& x) {
        Point p;
        p.x_ = x;
        return p;
    }

    static Point origin() { return Point(); }

    const Vec3& x() const { return x_; }
    double operator[](int i) const { return x_[i]; }

private:
    Vec3 x_;
};

/// Position plus Lorentz-orthonormal tangent t and normal n, with n equal to
/// t rotated by +pi/2 (det[p, t, n] = +1).
struct Frame {
    Point p;
    Vec3 t{0.0, 1.0, 0.0};
    Vec3 n{0.0, 0.0, 1.0};

    static Frame origin() { return Frame{}; }

    /// Builds the positive frame at p whose normal is n.
    static Frame from_point_normal(const Point& p, const Vec3& n);

    /// Max deviation from the orthonormality relations.
    double orthonormality_error() const;
};

/// Lorentz Gram-Schmidt on (p, t, n), preserving orientation.
Frame reorthonormalize(const Frame& f);

double dist(const Point& a, const Point& b);

/// Exponential map at p of the tangent vector v (<p, v> = 0).
Point exp_map(const Point& p, const Vec3& v);

/// Exponential map at the origin of the planar tangent vector (v1, v2).
Point exp_origin(double v1, double v2);

/// Fermi coordinates about the geodesic x2 = 0: arclength s along it and
/// signed distance t off it (t > 0 towards +x2).
Point fermi_point(double s, double t);

/// Parallel transport of a tangent vector along the geodesic from a to b.
Vec3 parallel_transport(const Point& a, const Point& b, const Vec3& v);

/// Orientation-preserving isometry (an element of SO+(2,1)).
class Isometry {
public:
    Isometry() : m_(Mat3::Identity()) {}
    explicit Isometry(const Mat3& m) : m_(m) {}

    /// Translation by s along the geodesic through the origin at angle phi.
    static Isometry translation(double s, double phi = 0.0);
    static Isometry rotation(double theta);
    /// Moves the origin frame onto f.
    static Isometry to_frame(const Frame& f);

    Point operator()(const Point& p) const;
    Vec3 apply(const Vec3& v) const { return m_ * v; }
    Frame operator()(const Frame& f) const;
    Isometry operator*(const Isometry& o) const { return Isometry(m_ * o.m_); }
    Isometry inverse() const;
    const Mat3& matrix() const { return m_; }

private:
    Mat3 m_;
};

enum class CurveKind { Geodesic, Hypercircle, Horocycle, Circle };

struct CurveClass {
    CurveKind kind = CurveKind::Geodesic;
    /// Circle radius or hypercircle distance; empty for geodesics and horocycles.
    std::optional<double> parameter;
};

const char* to_string(CurveKind k);

CurveClass classify_curvature(double kappa);

/// Curvature cos(beta) of a hypercircle meeting the ideal boundary at beta.
double hypercircle_curvature_from_angle(double beta);

/// Distance of that hypercircle from its base geodesic. Evaluates both
/// artanh(cos beta) and -log(tan(beta/2)) and checks their agreement.
double hypercircle_distance_from_angle(double beta);

/// Curvature of the side hypercircle of a thick sausage, tanh(arccoth lambda).
double sausage_side_curvature(double lambda);

/// Hypercircle curvature c*tanh(c R) in the plane of curvature -c^2.
double curvature_scaled(double c, double R);

/// Geodesic curvature at the disk origin of a curve with the given
/// Euclidean curvature there.
double disk_curvature_at_origin(double euclidean_kappa);

Complex to_disk(const Point& p);
Point from_disk(Complex z);
Complex to_uhp(const Point& p);
Point from_uhp(Complex w);

/// Cayley maps between the two planar models.
Complex disk_to_uhp(Complex z);
Complex uhp_to_disk(Complex w);

}  // namespace hypiso
