#include "hypiso/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypiso/errors.hpp"
#include "hypiso/model_view.hpp"

namespace hypiso {

Body Body::from_spline(ArcSpline boundary, std::optional<double> lambda, nlohmann::json meta) {
    Body b;
    b.boundary_ = std::move(boundary);
    b.frames_ = arc_frames(b.boundary_);
    b.measure_ = {area_gauss_bonnet(b.boundary_), hypiso::perimeter(b.boundary_)};
    b.convex_ = std::all_of(b.boundary_.arcs.begin(), b.boundary_.arcs.end(),
                            [](const Arc& a) { return a.kappa >= -kThicknessTol; });
    b.lambda_ = lambda;
    if (lambda && *lambda > 1.0 && check_thickness(b.boundary_, *lambda).ok) b.thick_for_ = lambda;
    b.meta_ = meta.is_null() ? nlohmann::json::object() : std::move(meta);
    return b;
}

namespace {

void require_lambda(double lambda) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be a finite number above 1");
}

Vec3 tangent_part(const Point& at, const Vec3& v) {
    return v + lorentz(v, at.x()) * at.x();
}

Vec3 unit(const Vec3& v) { return v / std::sqrt(lorentz(v, v)); }

nlohmann::json vec_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 mirror_t(const Vec3& v) { return {v[0], v[1], -v[2]}; }
Vec3 mirror_s(const Vec3& v) { return {v[0], -v[1], v[2]}; }

// Two radius-R caps centred at Fermi (+-d, 0), joined by arcs at distance h
// from a geodesic lying at distance R - h from both centres.
Body capped_body(double R, double h, double d, std::optional<double> lambda, nlohmann::json meta) {
    const Point c = fermi_point(d, 0.0);
    const double gh = std::asinh(std::sinh(R - h) / std::cosh(d));
    const Vec3 m(std::sinh(gh), 0.0, std::cosh(gh));
    const Vec3 u = unit(tangent_part(c, m));
    const Point foot = Point::unchecked(c.x() * std::cosh(R - h) + u * std::sinh(R - h));
    const Vec3 x = c.x() * std::cosh(R) + u * std::sinh(R);
    const Vec3 nx = -(c.x() * std::sinh(R) + u * std::cosh(R));

    const Vec3 es(std::sinh(d), std::cosh(d), 0.0);
    const Vec3 et(0.0, 0.0, 1.0);
    const double psi = std::atan2(lorentz(u, et), lorentz(u, es));
    const double cap_length = 2.0 * psi * std::sinh(R);
    const double side_length = std::cosh(h) * dist(foot, Point::unchecked(mirror_s(foot.x())));
    const double side_kappa = std::tanh(h);

    ArcSpline s;
    s.start = Frame::from_point_normal(Point::from_ambient(mirror_t(x)), mirror_t(nx));
    const Arc cap{coth(R), cap_length};
    const Arc side{side_kappa, side_length};
    s.arcs = {cap, side, cap, side};

    meta["core"] = {vec_json(fermi_point(-d, 0.0).x()), vec_json(c.x())};
    meta["cap_radius"] = R;
    meta["side_distance"] = h;
    meta["half_separation"] = d;
    meta["cap_angle"] = 2.0 * psi;
    meta["cap_length"] = cap_length;
    meta["side_length"] = side_length;
    return Body::from_spline(std::move(s), lambda, std::move(meta));
}

}  // namespace

Body sausage(double lambda, double d) {
    require_lambda(lambda);
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("sausage half-length d must be a finite number >= 0");
    const double R = arccoth(lambda);
    ArcSpline s;
    s.start.p = fermi_point(d, -R);
    s.start.t = Vec3(std::sinh(d), std::cosh(d), 0.0);
    s.start.n = Vec3(-std::sinh(R) * std::cosh(d), -std::sinh(R) * std::sinh(d), std::cosh(R));
    s.start = reorthonormalize(s.start);
    const Arc cap{lambda, kPi * std::sinh(R)};
    const Arc side{1.0 / lambda, 2.0 * d * std::cosh(R)};
    if (d > 0.0)
        s.arcs = {cap, side, cap, side};
    else
        s.arcs = {cap, cap};
    nlohmann::json meta = {{"kind", "sausage"}, {"cap_radius", R}, {"half_separation", d}};
    if (d > 0.0) meta["core"] = {vec_json(fermi_point(-d, 0.0).x()), vec_json(fermi_point(d, 0.0).x())};
    return Body::from_spline(std::move(s), lambda, std::move(meta));
}

Body ball(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ball radius must be a finite positive number");
    ArcSpline s;
    s.start.p = fermi_point(0.0, -r);
    s.start.t = Vec3(0.0, 1.0, 0.0);
    s.start.n = Vec3(-std::sinh(r), 0.0, std::cosh(r));
    s.arcs = {{coth(r), kTwoPi * std::sinh(r)}};
    return Body::from_spline(std::move(s), std::nullopt, {{"kind", "ball"}, {"radius", r}});
}

Body ball_at(double r, const Point& center) {
    return transformed(ball(r), Isometry::to_frame(Frame::from_point_normal(
                                    center, unit(tangent_part(center, Vec3(0.0, 0.0, 1.0))))));
}

Body two_ball_hull(double R, double d) {
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("hull ball radius must be a finite positive number");
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("hull half-separation must be a finite positive number");
    return capped_body(R, 0.0, d, std::nullopt, {{"kind", "hull2"}});
}

Body q_counterexample(double lambda, double eps, double d) {
    require_lambda(lambda);
    if (!(eps > 0.0) || !(eps < 1.0 / lambda)) throw DomainError("eps must lie in (0, 1/lambda)");
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("half-separation must be a finite positive number");
    const double h = std::atanh(1.0 / lambda - eps);
    return capped_body(arccoth(lambda), h, d, lambda, {{"kind", "qbody"}, {"eps", eps}});
}

Body transformed(const Body& b, const Isometry& g) {
    ArcSpline s = b.boundary();
    s.start = g(s.start);
    nlohmann::json meta = b.meta();
    if (meta.contains("core"))
        for (auto& p : meta["core"]) p = vec_json(g.apply(Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>())));
    return Body::from_spline(std::move(s), b.lambda(), std::move(meta));
}

NearestPoint nearest_boundary_point(const Body& b, const Point& q) {
    return nearest_on_boundary(b.boundary(), b.frames(), q);
}

double signed_distance(const Body& b, const Point& q) { return nearest_boundary_point(b, q).signed_distance; }

bool contains_point(const Body& b, const Point& q, double tol) {
    if (std::abs(signed_distance(b, q)) <= tol) return true;
    const Complex z = to_disk(q);
    const Complex dir = std::polar(1.0, 0.7390851332151607);
    int crossings = 0;
    const auto& arcs = b.boundary().arcs;
    for (std::size_t i = 0; i < arcs.size(); ++i) crossings += disk_ray_crossings(z, dir, b.frames()[i], arcs[i]);
    return crossings % 2 == 1;
}

bool contains_body(const Body& outer, const Body& inner, int n_samples, double tol) {
    for (const auto& smp : sample_uniform(inner.boundary(), n_samples))
        if (!contains_point(outer, smp.frame.p, tol)) return false;
    return true;
}

Inball inball(const Body& b) {
    if (!is_simple(b.boundary())) throw NonSimpleBoundary("inradius needs a simple boundary");

    const auto samples = sample_uniform(b.boundary(), 512);
    Vec3 mean = Vec3::Zero();
    for (const auto& smp : samples) mean += smp.frame.p.x();
    const Point o = Point::from_ambient(mean);
    const Isometry g = Isometry::to_frame(Frame::from_point_normal(o, unit(tangent_part(o, Vec3(0.0, 0.0, 1.0)))));
    const Isometry ginv = g.inverse();

    double umin = 0.0, umax = 0.0, vmin = 0.0, vmax = 0.0;
    for (const auto& smp : samples) {
        const Vec3 y = ginv(smp.frame.p).x();
        const double r = std::hypot(y[1], y[2]);
        const double rho = std::asinh(r);
        const double u = r > 0.0 ? rho * y[1] / r : 0.0;
        const double v = r > 0.0 ? rho * y[2] / r : 0.0;
        umin = std::min(umin, u), umax = std::max(umax, u);
        vmin = std::min(vmin, v), vmax = std::max(vmax, v);
    }

    auto value = [&](double u, double v) { return signed_distance(b, g(exp_origin(u, v))); };

    constexpr int kGrid = 32;
    const double du = (umax - umin) / kGrid, dv = (vmax - vmin) / kGrid;
    struct Cand {
        double f, u, v;
    };
    std::vector<Cand> grid;
    for (int i = 0; i <= kGrid; ++i)
        for (int j = 0; j <= kGrid; ++j) {
            const double u = umin + du * i, v = vmin + dv * j;
            grid.push_back({value(u, v), u, v});
        }
    std::stable_sort(grid.begin(), grid.end(), [](const Cand& a, const Cand& c) { return a.f > c.f; });

    constexpr int kStarts = 6;
    constexpr int kDirs = 8;
    Cand best = grid.front();
    for (int k = 0; k < std::min<int>(kStarts, grid.size()); ++k) {
        Cand cur = grid[k];
        double step = std::max(du, dv);
        while (step > 1e-10) {
            bool moved = false;
            for (int dir = 0; dir < kDirs; ++dir) {
                const double a = kTwoPi * dir / kDirs;
                const double u = cur.u + step * std::cos(a), v = cur.v + step * std::sin(a);
                const double f = value(u, v);
                if (f > cur.f) {
                    cur = {f, u, v};
                    moved = true;
                    break;
                }
            }
            if (!moved) step *= 0.5;
        }
        if (cur.f > best.f) best = cur;
    }
    return {best.f, g(exp_origin(best.u, best.v))};
}

double inradius(const Body& b) { return inball(b).radius; }

Body offset(const Body& b, double rho) {
    if (!std::isfinite(rho)) throw DomainError("offset distance must be finite");
    constexpr double kCollapseTol = 1e-9;
    const auto& arcs = b.boundary().arcs;

    // delta is the shift along the inward normal. A circle arc eroded to
    // (almost) exactly its centre pulls delta back so that its radius becomes
    // kCollapseRadius; the whole boundary moves together and stays closed.
    double delta = -rho;
    bool clamped = false;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const double k = arcs[i].kappa;
        if (std::abs(k) <= 1.0 + kHorocycleBand) continue;
        const double sign = k > 0.0 ? 1.0 : -1.0;
        const double r = arccoth(std::abs(k));
        const double r2 = r - sign * delta;
        if (r2 < -kCollapseTol) throw DegenerateBody("offset passes the centre of a circle arc", i);
        if (r2 < kCollapseRadius) {
            delta = sign * (r - kCollapseRadius);
            clamped = true;
        }
    }

    ArcSpline s;
    const Frame& f = b.boundary().start;
    const double ch = std::cosh(delta), sh = std::sinh(delta);
    s.start = reorthonormalize(Frame{Point::unchecked(ch * f.p.x() + sh * f.n), f.t, sh * f.p.x() + ch * f.n});

    for (const Arc& a : arcs) {
        const double k = a.kappa;
        Arc out;
        if (std::abs(k - 1.0) <= kHorocycleBand) {
            out = {k, a.length * std::exp(-delta)};
        } else if (std::abs(k + 1.0) <= kHorocycleBand) {
            out = {k, a.length * std::exp(delta)};
        } else if (std::abs(k) < 1.0) {
            const double h = std::atanh(k);
            const double h2 = h - delta;
            out = {std::tanh(h2), a.length * std::cosh(h2) / std::cosh(h)};
        } else {
            // circle centred on the inward side (k > 1) or the outward side (k < -1)
            const double sign = k > 0.0 ? 1.0 : -1.0;
            const double r = arccoth(std::abs(k));
            const double r2 = std::max(r - sign * delta, kCollapseRadius);
            out = {sign * coth(r2), a.length * std::sinh(r2) / std::sinh(r)};
        }
        s.arcs.push_back(out);
    }
    nlohmann::json meta = b.meta();
    meta["offset"] = meta.contains("offset") ? meta["offset"].get<double>() + rho : rho;
    if (clamped) meta["collapse_clamped"] = true;
    return Body::from_spline(std::move(s), b.lambda(), std::move(meta));
}

RollReport rolls_freely(const Body& b, double lambda, int n_samples, double tol) {
    require_lambda(lambda);
    if (n_samples < 1) throw DomainError("rolling test needs at least one sample");
    RollReport r;
    r.lambda = lambda;
    r.rho = arccoth(lambda);
    r.samples = n_samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    const double ch = std::cosh(r.rho), sh = std::sinh(r.rho);
    Point worst, worst_center;
    for (const auto& smp : sample_uniform(b.boundary(), n_samples)) {
        const Point c = Point::unchecked(ch * smp.frame.p.x() + sh * smp.frame.n);
        const double margin = signed_distance(b, c) - r.rho;
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            worst = smp.frame.p;
            worst_center = c;
        }
    }
    r.ok = r.worst_margin >= -tol;
    if (!r.ok) {
        r.witness = worst;
        r.witness_center = worst_center;
    }
    return r;
}

DeficitReport body_deficit(const Body& b, double lambda, int oracle_samples) {
    DeficitReport r = deficit(b.measure(), lambda);
    try {
        r.oracle_area = area_polygonal(b.boundary(), oracle_samples);
        r.oracle_checked = true;
    } catch (const NonSimpleBoundary&) {
        r.oracle_checked = false;
    }
    return r;
}

std::string body_to_json(const Body& b) {
    std::string s = spline_to_json(b.boundary());
    std::string extra;
    if (b.lambda()) extra += "  \"lambda\": " + format_real(*b.lambda()) + ",\n";
    if (!b.meta().empty()) extra += "  \"meta\": " + b.meta().dump() + ",\n";
    s.insert(2, extra);
    return s;
}

Body body_from_json(const nlohmann::json& j) {
    std::optional<double> lambda;
    if (j.contains("lambda") && !j.at("lambda").is_null()) lambda = j.at("lambda").get<double>();
    nlohmann::json meta = j.contains("meta") ? j.at("meta") : nlohmann::json::object();
    return Body::from_spline(spline_from_json(j), lambda, std::move(meta));
}

}  // namespace hypiso
