#include "hypiso/arc_spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hypiso/errors.hpp"

namespace hypiso {

FrenetCoefficients frenet_coefficients(double kappa, double s) {
    const double sigma = 1.0 - kappa * kappa;
    if (std::abs(kappa - 1.0) <= kHorocycleBand) {
        const double s2 = s * s;
        return {s + sigma * s * s2 / 6.0, s2 / 2.0 + sigma * s2 * s2 / 24.0, 1.0 + sigma * s2 / 2.0};
    }
    if (sigma < 0.0) {
        const double w = std::sqrt(-sigma);
        const double x = w * s;
        const double h = std::sin(0.5 * x);
        return {std::sin(x) / w, 2.0 * h * h / (w * w), std::cos(x)};
    }
    const double w = std::sqrt(sigma);
    const double x = w * s;
    const double h = std::sinh(0.5 * x);
    return {std::sinh(x) / w, 2.0 * h * h / sigma, std::cosh(x)};
}

Mat3 transport_matrix(double kappa, double s) {
    const auto [f1, f2, c] = frenet_coefficients(kappa, s);
    Mat3 e;
    e << 1.0 + f2, f1, -kappa * f2,
         f1, c, -kappa * f1,
         kappa * f2, kappa * f1, 1.0 - kappa * kappa * f2;
    return e;
}

namespace {

Mat3 frame_matrix(const Frame& f) {
    Mat3 m;
    m.col(0) = f.p.x();
    m.col(1) = f.t;
    m.col(2) = f.n;
    return m;
}

Frame frame_of(const Mat3& m) {
    return reorthonormalize(Frame{Point::unchecked(m.col(0)), m.col(1), m.col(2)});
}

}  // namespace

Frame frame_at(const Frame& f, double kappa, double s) {
    return frame_of(frame_matrix(f) * transport_matrix(kappa, s));
}

Point point_at(const Frame& f, double kappa, double s) {
    const auto [f1, f2, c] = frenet_coefficients(kappa, s);
    const Vec3 x = (1.0 + f2) * f.p.x() + f1 * f.t + kappa * f2 * f.n;
    return Point::unchecked(x / std::sqrt(-lorentz(x, x)));
}

Frame transport(const Frame& f, const Arc& a) { return frame_at(f, a.kappa, a.length); }

// Products are accumulated in the coordinates of the start frame, whose
// entries stay far smaller than ambient coordinates of distant points.
std::vector<Frame> arc_frames(const ArcSpline& s) {
    std::vector<Frame> frames;
    frames.reserve(s.arcs.size() + 1);
    frames.push_back(s.start);
    const Mat3 f0 = frame_matrix(s.start);
    Mat3 m = Mat3::Identity();
    for (const Arc& a : s.arcs) {
        m = m * transport_matrix(a.kappa, a.length);
        frames.push_back(frame_of(f0 * m));
    }
    return frames;
}

Frame end_frame(const ArcSpline& s) { return arc_frames(s).back(); }

double closure_residual(const ArcSpline& s) {
    Mat3 m = Mat3::Identity();
    for (const Arc& a : s.arcs) m = m * transport_matrix(a.kappa, a.length);
    const Frame end = frame_of(m);
    const Point origin;
    const double position = dist(end.p, origin);
    const Vec3 t = parallel_transport(end.p, origin, end.t);
    const double angle = std::abs(std::atan2(t[2], t[1]));
    return std::max(position, angle);
}

double perimeter(const ArcSpline& s) {
    double total = 0.0;
    for (const Arc& a : s.arcs) total += a.length;
    return total;
}

double total_turning(const ArcSpline& s) {
    double total = 0.0;
    for (const Arc& a : s.arcs) total += a.kappa * a.length;
    return total;
}

double area_gauss_bonnet(const ArcSpline& s, double reject_tol) {
    if (s.arcs.empty()) throw DomainError("spline has no arcs");
    const double residual = closure_residual(s);
    if (!(residual <= reject_tol))
        throw NotClosed("spline is not closed (residual " + format_real(residual) + ")");
    return total_turning(s) - kTwoPi;
}

std::vector<BoundarySample> sample_uniform(const ArcSpline& s, int n) {
    if (n < 1) throw DomainError("need at least one sample");
    if (s.arcs.empty()) throw DomainError("spline has no arcs");
    const auto frames = arc_frames(s);
    const double total = perimeter(s);
    const double step = total / n;
    std::vector<BoundarySample> out;
    out.reserve(n);
    std::size_t arc = 0;
    double arc_begin = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pos = i * step;
        while (arc + 1 < s.arcs.size() && pos >= arc_begin + s.arcs[arc].length) {
            arc_begin += s.arcs[arc].length;
            ++arc;
        }
        const double local = std::clamp(pos - arc_begin, 0.0, s.arcs[arc].length);
        out.push_back({frame_at(frames[arc], s.arcs[arc].kappa, local), arc, local});
    }
    return out;
}

std::vector<Point> sample_with_endpoints(const ArcSpline& s, int n) {
    if (s.arcs.empty()) throw DomainError("spline has no arcs");
    const auto frames = arc_frames(s);
    const double total = perimeter(s);
    std::vector<Point> out;
    out.reserve(n + s.arcs.size());
    for (std::size_t i = 0; i < s.arcs.size(); ++i) {
        const Arc& a = s.arcs[i];
        const int m = std::max(1, static_cast<int>(std::ceil(n * a.length / total)));
        for (int j = 0; j < m; ++j) out.push_back(point_at(frames[i], a.kappa, a.length * j / m));
    }
    return out;
}

namespace {

double orient(Complex a, Complex b, Complex c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
    const double scale = 1e-14;
    const double d1 = orient(c, d, a), d2 = orient(c, d, b);
    const double d3 = orient(a, b, c), d4 = orient(a, b, d);
    if (((d1 > scale && d2 < -scale) || (d1 < -scale && d2 > scale)) &&
        ((d3 > scale && d4 < -scale) || (d3 < -scale && d4 > scale)))
        return true;
    auto on = [&](double o, Complex p, Complex q, Complex x) {
        return std::abs(o) <= scale && std::min(p.real(), q.real()) - scale <= x.real() &&
               x.real() <= std::max(p.real(), q.real()) + scale && std::min(p.imag(), q.imag()) - scale <= x.imag() &&
               x.imag() <= std::max(p.imag(), q.imag()) + scale;
    };
    return on(d1, c, d, a) || on(d2, c, d, b) || on(d3, a, b, c) || on(d4, a, b, d);
}

/// Interior angle at a of the geodesic triangle (a, b, c).
double vertex_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = b + lorentz(a, b) * a;
    const Vec3 v = c + lorentz(a, c) * a;
    Mat3 m;
    m << a, u, v;
    return std::abs(std::atan2(m.determinant(), lorentz(u, v)));
}

}  // namespace

bool is_simple(const ArcSpline& s, int n) {
    const auto pts = sample_with_endpoints(s, n);
    std::vector<Complex> z;
    z.reserve(pts.size());
    for (const Point& p : pts) z.push_back(to_disk(p));
    const std::size_t m = z.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;
            if (segments_cross(z[i], z[(i + 1) % m], z[j], z[(j + 1) % m])) return false;
        }
    }
    return true;
}

double area_polygonal(const ArcSpline& s, int n_samples) {
    if (n_samples < 3) throw DomainError("polygonal area needs at least 3 samples");
    if (!is_simple(s)) throw NonSimpleBoundary("boundary intersects itself");
    const auto pts = sample_with_endpoints(s, n_samples);
    Vec3 centroid = Vec3::Zero();
    for (const Point& p : pts) centroid += p.x();
    const Vec3 o = centroid / std::sqrt(-lorentz(centroid, centroid));

    // signed fan: correct for any simple polygon, star-shaped or not
    double area = 0.0;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec3& a = pts[i].x();
        const Vec3& b = pts[(i + 1) % m].x();
        Mat3 tri;
        tri << o, a, b;
        const double orientation = tri.determinant();
        if (orientation == 0.0) continue;
        const double defect = kPi - vertex_angle(o, a, b) - vertex_angle(a, b, o) - vertex_angle(b, o, a);
        area += orientation > 0.0 ? defect : -defect;
    }
    return area;
}

ArcSpline refine(const ArcSpline& s, int k) {
    if (k < 1) throw DomainError("refinement factor must be positive");
    ArcSpline out{s.start, {}};
    out.arcs.reserve(s.arcs.size() * k);
    for (const Arc& a : s.arcs)
        for (int j = 0; j < k; ++j) out.arcs.push_back({a.kappa, a.length / k});
    return out;
}

ThicknessCertificate check_thickness(const ArcSpline& s, double lambda) {
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1");
    ThicknessCertificate cert;
    cert.lambda = lambda;
    cert.closed = !s.arcs.empty() && closure_residual(s) <= kClosureTol * 10;
    cert.convex = cert.closed && total_turning(s) > kTwoPi - 1e-9;
    for (std::size_t i = 0; i < s.arcs.size(); ++i) {
        const double k = s.arcs[i].kappa;
        if (k < -kThicknessTol) cert.convex = false;
        if (k < 1.0 / lambda - kThicknessTol) cert.violations.push_back({i, k, 1.0 / lambda, true});
        else if (k > lambda + kThicknessTol) cert.violations.push_back({i, k, lambda, false});
    }
    cert.ok = cert.convex && cert.violations.empty();
    return cert;
}

NearestPoint nearest_on_arc(const Point& q, const Frame& start, const Arc& arc) {
    const double kappa = arc.kappa;
    const double len = arc.length;
    const double a = -lorentz(q.x(), start.p.x());
    const double b = lorentz(q.x(), start.t);
    const double c = lorentz(q.x(), start.n);
    // <q, x(s)> = -a + b f1(s) + K f2(s); the nearest point maximises it
    const double K = c * kappa - a;
    const double sigma = 1.0 - kappa * kappa;

    double candidates[8];
    int count = 0;
    candidates[count++] = 0.0;
    candidates[count++] = len;
    auto push = [&](double s) {
        if (s > 0.0 && s < len && count < 8) candidates[count++] = s;
    };
    if (std::abs(kappa - 1.0) <= kHorocycleBand) {
        if (K != 0.0) push(-b / K);
    } else if (sigma < 0.0) {
        const double w = std::sqrt(-sigma);
        // g'(phi) ~ b cos(phi) + (K/w) sin(phi) vanishes at phi0 + pi/2 + j pi
        const double phi0 = std::atan2(K / w, b);
        const double span = w * len;
        double phi = phi0 + kPi / 2;
        phi -= kPi * std::ceil(phi / kPi);  // largest root <= 0
        for (phi += kPi; phi < span && count < 8; phi += kPi) push(phi / w);
    } else {
        const double w = std::sqrt(sigma);
        if (K != 0.0) {
            const double r = -b * w / K;
            if (std::abs(r) < 1.0) push(std::atanh(r) / w);
        }
    }

    NearestPoint best;
    best.distance = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const Point x = point_at(start, kappa, candidates[i]);
        const double d = dist(q, x);
        if (d < best.distance) {
            best.distance = d;
            best.s = candidates[i];
        }
    }
    best.frame = frame_at(start, kappa, best.s);
    best.signed_distance = lorentz(q.x(), best.frame.n) >= 0.0 ? best.distance : -best.distance;
    return best;
}

NearestPoint nearest_on_boundary(const ArcSpline& s, const std::vector<Frame>& frames,
                                 const Point& q) {
    NearestPoint best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.arcs.size(); ++i) {
        NearestPoint np = nearest_on_arc(q, frames[i], s.arcs[i]);
        if (np.distance < best.distance) {
            np.arc = i;
            best = np;
        }
    }
    return best;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json frame_to_json(const Frame& f) {
    auto v = [](const Vec3& x) { return nlohmann::json::array({x[0], x[1], x[2]}); };
    return {{"p", v(f.p.x())}, {"t", v(f.t)}, {"n", v(f.n)}};
}

Frame frame_from_json(const nlohmann::json& j) {
    auto v = [&](const char* key) {
        const auto& a = j.at(key);
        if (!a.is_array() || a.size() != 3) throw DomainError(std::string("frame field '") + key + "' must have 3 entries");
        return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
    };
    Frame f{Point::from_ambient(v("p")), v("t"), v("n")};
    if (f.orthonormality_error() > 1e-9) throw DomainError("start frame is not Lorentz-orthonormal");
    return f;
}

namespace {
std::string vec_text(const Vec3& x) {
    return "[" + format_real(x[0]) + ", " + format_real(x[1]) + ", " + format_real(x[2]) + "]";
}
}  // namespace

std::string spline_to_json(const ArcSpline& s) {
    std::string out = "{\n  \"start\": {\"p\": " + vec_text(s.start.p.x()) + ", \"t\": " + vec_text(s.start.t) +
                      ", \"n\": " + vec_text(s.start.n) + "},\n  \"arcs\": [";
    for (std::size_t i = 0; i < s.arcs.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        out += "    {\"kappa\": " + format_real(s.arcs[i].kappa) + ", \"length\": " + format_real(s.arcs[i].length) + "}";
    }
    out += "\n  ]\n}";
    return out;
}

ArcSpline spline_from_json(const nlohmann::json& j) {
    ArcSpline s;
    if (j.contains("start") && !j.at("start").is_null()) s.start = frame_from_json(j.at("start"));
    for (const auto& a : j.at("arcs")) {
        Arc arc{a.at("kappa").get<double>(), a.at("length").get<double>()};
        if (!std::isfinite(arc.kappa) || !(arc.length > 0.0) || !std::isfinite(arc.length))
            throw DomainError("arc needs finite curvature and positive length");
        s.arcs.push_back(arc);
    }
    if (s.arcs.empty()) throw DomainError("spline has no arcs");
    return s;
}

}  // namespace hypiso
