#include "hypiso/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hypiso/errors.hpp"
#include "hypiso/optimize.hpp"
#include "hypiso/steiner_flow.hpp"

namespace hypiso::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double x) { return format_real(x); }

std::vector<double> parse_grid(const std::string& text, const std::string& name) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad number '" + item + "' in --" + name);
        }
    }
    if (out.empty()) throw UsageError("--" + name + " grid is empty");
    return out;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
}

Body load_body(const std::string& path) {
    const nlohmann::json j = read_json(path);
    try {
        return body_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed body in " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw IoError("cannot write " + path);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        write_text(path, text);
    }
}

std::string measures_record(const std::string& kind, const Body& b) {
    std::string inr = "nan";
    try {
        inr = num(inradius(b));
    } catch (const NonSimpleBoundary&) {
    }
    return kind + "," + num(b.area()) + "," + num(b.perimeter()) + "," + inr + "\n";
}

// ---------------------------------------------------------------- rendering

struct View {
    double cx, cy, scale;
};

std::string pt(Complex z) { return num(z.real()) + " " + num(z.imag()); }

Vec3 unit_vec(const Vec3& v) { return v / std::sqrt(lorentz(v, v)); }

Frame frame_towards(const Point& a, const Point& b) {
    const Vec3 t = unit_vec(b.x() + lorentz(b.x(), a.x()) * a.x());
    Frame f = Frame::from_point_normal(a, lorentz_cross(a.x(), t));
    if (lorentz(f.t, t) < 0.0) f = Frame::from_point_normal(a, -lorentz_cross(a.x(), t));
    return f;
}

class SvgWriter {
public:
    SvgWriter(const RenderSpec& spec, const View& view) : spec_(spec), view_(view) {}

    void arc(const Frame& start, const Arc& a, const std::string& cls, const std::string& color, bool whole) {
        const ModelArc m = model_arc(start, a, spec_.model);
        const std::string attrs = " class=\"" + cls + "\" data-kappa=\"" + num(a.kappa) + "\" stroke=\"" + color + "\"";
        if (m.circle.is_line) {
            body_ << "    <path" << attrs << " d=\"M " << pt(m.from) << " L " << pt(m.to) << "\"/>\n";
        } else if (whole) {
            body_ << "    <circle" << attrs << " cx=\"" << num(m.circle.center.real()) << "\" cy=\""
                  << num(m.circle.center.imag()) << "\" r=\"" << num(m.circle.radius) << "\"/>\n";
        } else {
            body_ << "    <path" << attrs << " data-cx=\"" << num(m.circle.center.real()) << "\" data-cy=\""
                  << num(m.circle.center.imag()) << "\" d=\"M " << pt(m.from) << " A " << num(m.circle.radius) << " "
                  << num(m.circle.radius) << " 0 " << (std::abs(m.sweep) > kPi ? 1 : 0) << " "
                  << (m.sweep > 0.0 ? 1 : 0) << " " << pt(m.to) << "\"/>\n";
        }
    }

    // The whole curve carrying an arc of |kappa| < 1, up to the ideal boundary.
    void extension(const Frame& start, const Arc& a) {
        const ModelCircle c = model_circle(start, a.kappa, spec_.model);
        const std::string attrs = " class=\"extension\" data-kappa=\"" + num(a.kappa) + "\" stroke=\"" +
                                  spec_.extension_color + "\" stroke-dasharray=\"6 4\"";
        if (c.is_line) {
            const Complex p = to_model(start.p, spec_.model);
            const Complex q = to_model(point_at(start, a.kappa, 1.0), spec_.model);
            Complex dir = (q - p) / std::abs(q - p);
            Complex e1, e2;
            if (spec_.model == Model::Disk) {
                // |p + t dir| = 1
                const double b = p.real() * dir.real() + p.imag() * dir.imag();
                const double disc = std::sqrt(std::max(0.0, b * b - std::norm(p) + 1.0));
                e1 = p + (-b - disc) * dir;
                e2 = p + (-b + disc) * dir;
            } else {
                if (dir.imag() < 0.0) dir = -dir;
                e1 = dir.imag() > 1e-15 ? p - (p.imag() / dir.imag()) * dir : p - 1e3 * dir;
                e2 = p + 1e3 * dir;
            }
            body_ << "    <path" << attrs << " d=\"M " << pt(e1) << " L " << pt(e2) << "\"/>\n";
            return;
        }
        Complex p1, p2;
        if (spec_.model == Model::Disk) {
            const double dc = std::abs(c.center);
            const Complex u = c.center / dc;
            const double along = (1.0 + dc * dc - c.radius * c.radius) / (2.0 * dc);
            const double across = std::sqrt(std::max(0.0, 1.0 - along * along));
            p1 = along * u + across * Complex(-u.imag(), u.real());
            p2 = along * u - across * Complex(-u.imag(), u.real());
        } else {
            const double half = std::sqrt(std::max(0.0, c.radius * c.radius - c.center.imag() * c.center.imag()));
            p1 = Complex(c.center.real() - half, 0.0);
            p2 = Complex(c.center.real() + half, 0.0);
        }
        const double t1 = std::arg(p1 - c.center);
        double span = std::arg(p2 - c.center) - t1;
        while (span < 0.0) span += kTwoPi;
        const Complex mid = c.center + std::polar(c.radius, t1 + 0.5 * span);
        const bool inside = spec_.model == Model::Disk ? std::norm(mid) < 1.0 : mid.imag() > 0.0;
        const double sweep = inside ? span : span - kTwoPi;
        body_ << "    <path" << attrs << " data-cx=\"" << num(c.center.real()) << "\" data-cy=\""
              << num(c.center.imag()) << "\" data-r=\"" << num(c.radius) << "\" d=\"M " << pt(p1) << " A "
              << num(c.radius) << " " << num(c.radius) << " 0 " << (std::abs(sweep) > kPi ? 1 : 0) << " "
              << (sweep > 0.0 ? 1 : 0) << " " << pt(p2) << "\"/>\n";
    }

    std::string finish(double xmin, double xmax) const {
        std::ostringstream o;
        o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec_.width_px << "\" height=\""
          << spec_.height_px << "\" viewBox=\"0 0 " << spec_.width_px << " " << spec_.height_px << "\">\n";
        o << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        o << "  <g transform=\"translate(" << num(view_.cx) << " " << num(view_.cy) << ") scale(" << num(view_.scale)
          << " " << num(-view_.scale) << ")\" fill=\"none\" stroke-width=\"" << num(spec_.stroke_width)
          << "\" vector-effect=\"non-scaling-stroke\" style=\"vector-effect:non-scaling-stroke\">\n";
        if (spec_.model == Model::Disk)
            o << "    <circle class=\"ideal-boundary\" cx=\"0\" cy=\"0\" r=\"1\" stroke=\"" << spec_.boundary_color
              << "\"/>\n";
        else
            o << "    <path class=\"ideal-boundary\" d=\"M " << num(xmin) << " 0 L " << num(xmax) << " 0\" stroke=\""
              << spec_.boundary_color << "\"/>\n";
        o << body_.str();
        o << "  </g>\n</svg>\n";
        return o.str();
    }

private:
    const RenderSpec& spec_;
    View view_;
    std::ostringstream body_;
};

}  // namespace

std::string render_svg(const Body& b, const RenderSpec& spec) {
    if (spec.width_px <= 0 || spec.height_px <= 0) throw DomainError("image size must be positive");
    if (!(spec.stroke_width > 0.0)) throw DomainError("stroke width must be positive");

    View view{0.5 * spec.width_px, 0.5 * spec.height_px, 0.5 * std::min(spec.width_px, spec.height_px)};
    double xmin = -1.0, xmax = 1.0;
    if (spec.model == Model::HalfPlane) {
        double umin = 1e300, umax = -1e300, vmax = -1e300;
        for (const auto& smp : sample_uniform(b.boundary(), 512)) {
            const Complex w = to_uhp(smp.frame.p);
            umin = std::min(umin, w.real()), umax = std::max(umax, w.real()), vmax = std::max(vmax, w.imag());
        }
        const double span = std::max(umax - umin, vmax);
        const double pad = 0.15 * span;
        xmin = umin - pad, xmax = umax + pad;
        const double ytop = vmax + pad, ybot = -0.05 * span;
        view.scale = std::min(spec.width_px / (xmax - xmin), spec.height_px / (ytop - ybot));
        view.cx = 0.5 * spec.width_px - view.scale * 0.5 * (xmin + xmax);
        view.cy = 0.5 * spec.height_px + view.scale * 0.5 * (ytop + ybot);
        xmin = (0.0 - view.cx) / view.scale, xmax = (spec.width_px - view.cx) / view.scale;
    }

    SvgWriter svg(spec, view);
    const auto& arcs = b.boundary().arcs;
    const auto& frames = b.frames();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (std::abs(arcs[i].kappa) < 1.0 - kHorocycleBand) svg.extension(frames[i], arcs[i]);
    const bool single_circle = arcs.size() == 1 && arcs[0].kappa > 1.0 + kHorocycleBand;
    for (std::size_t i = 0; i < arcs.size(); ++i) svg.arc(frames[i], arcs[i], "arc", spec.body_color, single_circle);

    if (spec.core_geodesic && b.meta().contains("core")) {
        const auto& core = b.meta()["core"];
        auto point = [](const nlohmann::json& p) {
            return Point::from_ambient(Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>()));
        };
        const Point a = point(core[0]), c = point(core[1]);
        svg.arc(frame_towards(a, c), Arc{0.0, dist(a, c)}, "core", spec.overlay_color, false);
    }
    if (spec.inscribed_balls) {
        const Inball in = inball(b);
        const Body ib = ball_at(in.radius, in.center);
        svg.arc(ib.frames()[0], ib.boundary().arcs[0], "inball", spec.overlay_color, true);
    }
    if (spec.rolling_witness) {
        if (!spec.lambda) throw DomainError("the rolling witness overlay needs lambda");
        const RollReport r = rolls_freely(b, *spec.lambda);
        if (r.witness_center) {
            const Body rb = ball_at(r.rho, *r.witness_center);
            svg.arc(rb.frames()[0], rb.boundary().arcs[0], "witness", spec.overlay_color, true);
        }
    }
    return svg.finish(xmin, xmax);
}

double comparison_tolerance() {
    const char* env = std::getenv("HYPISO_TOL");
    if (!env || !*env) return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string("HYPISO_TOL must be a positive number, got '") + env + "'");
    return v;
}

namespace {

// ---------------------------------------------------------------- commands

struct Options {
    std::optional<double> lambda, d, r, rho, eps, perimeter;
    std::uint64_t seed = 1;
    std::optional<int> n_arcs;
    std::string model = "disk";
    std::string out;
};

double need(const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError(std::string("missing ") + flag);
    return *v;
}

int cmd_construct(const std::string& kind, const Options& o, std::ostream& out) {
    Body b;
    if (kind == "sausage") {
        b = sausage(need(o.lambda, "--lambda"), need(o.d, "--d"));
    } else if (kind == "ball") {
        b = ball(need(o.r, "--r"));
        if (o.lambda) b = Body::from_spline(b.boundary(), o.lambda, b.meta());
    } else if (kind == "hull2") {
        double R;
        if (o.r)
            R = *o.r;
        else if (o.lambda)
            R = arccoth(*o.lambda);
        else
            throw UsageError("hull2 needs --r or --lambda");
        b = two_ball_hull(R, need(o.d, "--d"));
    } else if (kind == "qbody") {
        b = q_counterexample(need(o.lambda, "--lambda"), need(o.eps, "--eps"), o.d.value_or(1.0));
    } else if (kind == "random") {
        b = random_thick_body(need(o.lambda, "--lambda"), o.n_arcs.value_or(12), o.seed);
    } else {
        throw UsageError("unknown body kind '" + kind + "' (sausage, ball, hull2, qbody, random)");
    }
    if (!o.out.empty()) write_text(o.out, body_to_json(b));
    out << measures_record(kind, b);
    return kExitOk;
}

int cmd_offset(const std::string& path, const Options& o, std::ostream& out, std::ostream& err) {
    const Body b = load_body(path);
    const double rho = need(o.rho, "--rho");
    try {
        const Body r = offset(b, rho);
        if (!o.out.empty()) write_text(o.out, body_to_json(r));
        out << measures_record("offset", r);
        return kExitOk;
    } catch (const DegenerateBody& e) {
        err << "error: " << e.what() << " (arc " << e.arc_index << ")\n";
        return kExitCheckFailed;
    }
}

struct Check {
    std::string name;
    std::string status;  // pass, fail, skip
    std::string detail;
};

int cmd_verify(const std::string& path, const Options& o, std::ostream& out) {
    const double tol = comparison_tolerance();
    const Body b = load_body(path);
    std::optional<double> lam = o.lambda ? o.lambda : b.lambda();
    if (!lam) throw UsageError("verify needs --lambda (the body file has none)");
    const double lambda = *lam;
    if (!(lambda > 1.0)) throw UsageError("lambda must exceed 1");

    std::vector<Check> checks;
    nlohmann::json report;
    report["lambda"] = lambda;
    report["tolerance"] = tol;

    const double closure = closure_residual(b.boundary());
    checks.push_back({"closure", closure < std::max(tol, kClosureTol) ? "pass" : "fail", "residual " + num(closure)});
    report["closure_residual"] = closure;

    const ThicknessCertificate cert = check_thickness(b.boundary(), lambda);
    {
        std::string detail = cert.ok ? "all arcs in [1/lambda, lambda]" : "";
        for (const auto& v : cert.violations)
            detail += (detail.empty() ? "" : "; ") + std::string("arc ") + std::to_string(v.arc) + " kappa " +
                      num(v.kappa) + (v.lower ? " < " : " > ") + num(v.bound);
        if (!cert.convex) detail += (detail.empty() ? "" : "; ") + std::string("not convex");
        checks.push_back({"thickness", cert.ok ? "pass" : "fail", detail});
        nlohmann::json viol = nlohmann::json::array();
        for (const auto& v : cert.violations)
            viol.push_back({{"arc", v.arc}, {"kappa", v.kappa}, {"bound", v.bound}, {"side", v.lower ? "lower" : "upper"}});
        report["thickness"] = {{"ok", cert.ok}, {"convex", cert.convex}, {"closed", cert.closed}, {"violations", viol}};
    }

    const DeficitReport def = body_deficit(b, lambda);
    report["deficit"] = to_json(def);
    if (cert.ok) {
        checks.push_back({"deficit", def.deficit >= -tol ? "pass" : "fail",
                          "steiner_consistent " + num(def.steiner_deficit) + ", as_printed " +
                              num(def.as_printed_deficit)});
    } else {
        checks.push_back({"deficit", "skip",
                          "not thick; steiner_consistent " + num(def.steiner_deficit) + ", as_printed " +
                              num(def.as_printed_deficit)});
    }
    if (def.oracle_checked) {
        const double gap = std::abs(def.oracle_area - b.area());
        checks.push_back({"area_oracle", gap <= 1e-6 ? "pass" : "fail", "polygonal area differs by " + num(gap)});
    }

    if (b.convex()) {
        const RollReport roll = rolls_freely(b, lambda, 720, tol);
        checks.push_back({"rolling", roll.ok ? "pass" : "fail", "worst margin " + num(roll.worst_margin)});
        report["rolling"] = {{"ok", roll.ok}, {"rho", roll.rho}, {"worst_margin", roll.worst_margin}, {"samples", roll.samples}};
        if (roll.witness) {
            const Vec3& w = roll.witness->x();
            report["rolling"]["witness"] = {w[0], w[1], w[2]};
        }
    } else {
        checks.push_back({"rolling", "skip", "body not convex"});
    }

    nlohmann::json flows = nlohmann::json::array();
    constexpr double kFlowTol = 1e-8;
    for (double rho : {0.1, 0.25, 0.4}) {
        const BodyMeasure outer = outer_flow(b.measure(), rho);
        const Body dil = offset(b, rho);
        double worst = std::max(std::abs(outer.area - dil.area()), std::abs(outer.perimeter - dil.perimeter()));
        nlohmann::json row = {{"rho", rho}, {"outer_mismatch", worst}};
        try {
            const Body ero = offset(b, -rho);
            const InnerFlowResult inner = inner_flow(b.measure(), rho);
            const double mis = std::max(std::abs(inner.measure.area - ero.area()),
                                        std::abs(inner.measure.perimeter - ero.perimeter()));
            row["inner_mismatch"] = mis;
            worst = std::max(worst, mis);
        } catch (const DegenerateBody&) {
            row["inner_mismatch"] = nullptr;
        }
        flows.push_back(row);
        checks.push_back({"steiner rho=" + num(rho), worst <= kFlowTol ? "pass" : "fail", "max mismatch " + num(worst)});
    }
    report["steiner"] = flows;

    bool ok = true;
    nlohmann::json jchecks = nlohmann::json::array();
    out << "check                    status  detail\n";
    for (const Check& c : checks) {
        if (c.status == "fail") ok = false;
        std::string name = c.name;
        name.resize(std::max<std::size_t>(name.size(), 24), ' ');
        std::string status = c.status;
        status.resize(6, ' ');
        out << name << " " << status << "  " << c.detail << "\n";
        jchecks.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    }
    out << (ok ? "result: pass\n" : "result: fail\n");
    report["checks"] = jchecks;
    report["ok"] = ok;
    if (!o.out.empty()) write_text(o.out, report.dump(2));
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_optimize(const Options& o, int starts, int max_iters, std::ostream& out) {
    ShapeProblem p;
    p.lambda = need(o.lambda, "--lambda");
    if (!(p.lambda > 1.0)) throw UsageError("lambda must exceed 1");
    if (o.perimeter)
        p.perimeter_target = *o.perimeter;
    else if (o.d)
        p.perimeter_target = sausage(p.lambda, *o.d).perimeter();
    else
        throw UsageError("optimize needs --perimeter or --d");
    p.n_arcs = o.n_arcs.value_or(16);
    p.starts = starts;
    p.max_iters = max_iters;
    const RunReport r = solve_multistart(p, o.seed);
    emit(o.out, to_json(r).dump(2), out);
    return r.candidates[r.best].converged ? kExitOk : kExitCheckFailed;
}

int cmd_render(const std::string& path, const Options& o, const std::string& overlays, int width, int height,
               std::ostream& out) {
    RenderSpec spec;
    if (o.model == "disk")
        spec.model = Model::Disk;
    else if (o.model == "uhp")
        spec.model = Model::HalfPlane;
    else
        throw UsageError("--model must be disk or uhp");
    spec.width_px = width;
    spec.height_px = height;
    std::stringstream ss(overlays);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "core")
            spec.core_geodesic = true;
        else if (item == "inball")
            spec.inscribed_balls = true;
        else if (item == "witness")
            spec.rolling_witness = true;
        else
            throw UsageError("unknown overlay '" + item + "' (core, inball, witness)");
    }
    const Body b = load_body(path);
    spec.lambda = o.lambda ? o.lambda : b.lambda();
    if (spec.rolling_witness && !spec.lambda) throw UsageError("the witness overlay needs --lambda");
    emit(o.out, render_svg(b, spec), out);
    return kExitOk;
}

struct TableOptions {
    std::string lambdas = "1.5,2,5";
    std::string ds = "0,1,3";
    std::string rhos = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    std::string cs = "1,0.1,0.01,0.001";
    std::string body;
    std::optional<double> area;
};

int cmd_table(const std::string& kind, const Options& o, const TableOptions& t, std::ostream& out) {
    std::string csv;
    if (kind == "deficit") {
        const auto lambdas = parse_grid(t.lambdas, "lambdas");
        const auto ds = parse_grid(t.ds, "ds");
        csv = "lambda,d,area,perimeter,bound,deficit,as_printed_deficit\n";
        for (double lambda : lambdas)
            for (double d : ds) {
                const Body b = sausage(lambda, d);
                const DeficitReport r = deficit(b.measure(), lambda);
                csv += num(lambda) + "," + num(d) + "," + num(b.area()) + "," + num(b.perimeter()) + "," +
                       num(r.steiner_bound) + "," + num(r.steiner_deficit) + "," + num(r.as_printed_deficit) + "\n";
            }
    } else if (kind == "steiner") {
        const auto rhos = parse_grid(t.rhos, "rhos");
        BodyMeasure m;
        if (!t.body.empty())
            m = load_body(t.body).measure();
        else if (t.area || o.perimeter)
            m = {need(t.area, "--area"), need(o.perimeter, "--perimeter")};
        else
            m = ball(o.r.value_or(1.0)).measure();
        csv = "rho,outer_area,outer_perimeter,outer_invariant,inner_area,inner_perimeter,inner_invariant,"
              "past_inradius\n";
        for (double rho : rhos) {
            const BodyMeasure outer = outer_flow(m, rho);
            const InnerFlowResult inner = inner_flow(m, rho);
            csv += num(rho) + "," + num(outer.area) + "," + num(outer.perimeter) + "," + num(flow_invariant(outer)) +
                   "," + num(inner.measure.area) + "," + num(inner.measure.perimeter) + "," +
                   num(flow_invariant(inner.measure)) + "," + (inner.past_inradius ? "1" : "0") + "\n";
        }
    } else if (kind == "limit") {
        const auto cs = parse_grid(t.cs, "cs");
        const double lambda = o.lambda.value_or(2.0);
        const double P = o.perimeter.value_or(10.0);
        csv = "c,euclidean_limit,bound_scaled\n";
        for (double c : cs)
            csv += num(c) + "," + num(P / lambda - kPi / (lambda * lambda)) + "," + num(bound_scaled(P, lambda, c)) +
                   "\n";
    } else {
        throw UsageError("unknown table '" + kind + "' (deficit, steiner, limit)");
    }
    emit(o.out, csv, out);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constant-curvature bodies in the hyperbolic plane", "hypiso"};
    app.require_subcommand(1);
    Options o;
    std::string target;
    int starts = 8, max_iters = 10000, width = 800, height = 800;
    std::string overlays;
    TableOptions t;

    auto lambda_opt = [&](CLI::App* c, const char* help) { c->add_option("--lambda", o.lambda, help); };
    auto out_opt = [&](CLI::App* c, const char* help) { c->add_option("--out", o.out, help); };

    auto* construct = app.add_subcommand("construct", "build a named body and print kind,area,perimeter,inradius");
    construct->add_option("kind", target, "sausage | ball | hull2 | qbody | random")->required();
    lambda_opt(construct, "curvature bound lambda > 1 (sausage, qbody, random; hull2 radius arccoth lambda)");
    construct->add_option("--d", o.d, "half-length of the core segment");
    construct->add_option("--r", o.r, "ball radius");
    construct->add_option("--eps", o.eps, "side curvature defect of the Q body");
    construct->add_option("--seed", o.seed, "random seed");
    construct->add_option("--n-arcs", o.n_arcs, "number of arcs of a random body (default 12)");
    out_opt(construct, "body JSON file to write");

    auto* off = app.add_subcommand("offset", "parallel body of a body file");
    off->add_option("body", target, "body JSON")->required();
    off->add_option("--rho", o.rho, "offset distance (negative erodes)")->required();
    out_opt(off, "body JSON file to write");

    auto* verify = app.add_subcommand("verify", "thickness, deficit, rolling and Steiner checks");
    verify->add_option("body", target, "body JSON")->required();
    lambda_opt(verify, "curvature bound lambda > 1 (default: the body file's lambda)");
    out_opt(verify, "JSON report file to write");

    auto* opt = app.add_subcommand("optimize", "minimise area at fixed perimeter over thick bodies");
    lambda_opt(opt, "curvature bound lambda > 1");
    opt->add_option("--perimeter", o.perimeter, "target perimeter");
    opt->add_option("--d", o.d, "target perimeter of the sausage with this half-length");
    opt->add_option("--n-arcs", o.n_arcs, "number of arcs (default 16)");
    opt->add_option("--seed", o.seed, "random seed");
    opt->add_option("--starts", starts, "number of random starts");
    opt->add_option("--max-iters", max_iters, "iteration cap per start");
    out_opt(opt, "JSON report file (default stdout)");

    auto* render = app.add_subcommand("render", "SVG figure of a body");
    render->add_option("body", target, "body JSON")->required();
    render->add_option("--model", o.model, "disk | uhp");
    render->add_option("--width", width, "image width in pixels");
    render->add_option("--height", height, "image height in pixels");
    render->add_option("--overlay", overlays, "comma list of core, inball, witness");
    lambda_opt(render, "rolling ball curvature for the witness overlay");
    out_opt(render, "SVG file (default stdout)");

    auto* table = app.add_subcommand("table", "CSV sweeps: deficit | steiner | limit");
    table->add_option("kind", target, "deficit | steiner | limit")->required();
    table->add_option("--lambdas", t.lambdas, "lambda grid (deficit)");
    table->add_option("--ds", t.ds, "d grid (deficit)");
    table->add_option("--rhos", t.rhos, "rho grid (steiner)");
    table->add_option("--body", t.body, "body JSON (steiner)");
    table->add_option("--area", t.area, "area (steiner)");
    table->add_option("--r", o.r, "ball radius when no body or measures are given (steiner)");
    table->add_option("--cs", t.cs, "curvature-scale grid (limit)");
    lambda_opt(table, "curvature bound (limit, default 2)");
    table->add_option("--perimeter", o.perimeter, "perimeter (steiner; limit, default 10)");
    out_opt(table, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*construct) return cmd_construct(target, o, out);
        if (*off) return cmd_offset(target, o, out, err);
        if (*verify) return cmd_verify(target, o, out);
        if (*opt) return cmd_optimize(o, starts, max_iters, out);
        if (*render) return cmd_render(target, o, overlays, width, height, out);
        if (*table) return cmd_table(target, o, t, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Infeasible& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotClosed& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NonSimpleBoundary& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("hypiso");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hypiso::cli
