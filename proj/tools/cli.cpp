#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "obl/eds/eds.hpp"
#include "obl/periodic/periodic.hpp"
#include "obl/verify/verify.hpp"
#include "svg.hpp"

namespace obl::cli {

namespace {

using nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Table after applying --mode.
using Working = std::variant<PolygonQ, PolygonF, Ellipse>;

bool integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

Working resolve(const Table& t, const std::string& mode) {
    if (mode == "auto") return t;
    if (mode == "float") {
        if (const auto* q = std::get_if<PolygonQ>(&t)) return to_float(*q);
        return t;
    }
    // exact
    if (const auto* q = std::get_if<PolygonQ>(&t)) return *q;
    if (const auto* f = std::get_if<PolygonF>(&t)) {
        std::vector<PointQ> vs;
        for (const auto& p : f->vertices()) {
            if (!integral(p.x) || !integral(p.y))
                throw InputError("exact mode needs rational coordinates; write them as \"p/q\" strings");
            vs.push_back(to_exact(p));
        }
        return PolygonQ(vs);
    }
    throw InputError("exact mode is only available for polygon tables");
}

Rational parse_exact(const std::string& s) {
    const auto dot = s.find('.');
    if (dot == std::string::npos) return cas::parse_rational(s);
    // Plain decimal: d.ddd -> integer / 10^k.
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t k = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw InputError("malformed number '" + s + "'");
    std::string den = "1" + std::string(k, '0');
    try {
        return cas::parse_rational(digits + "/" + den);
    } catch (const std::invalid_argument&) {
        throw InputError("malformed number '" + s + "'");
    }
}

double parse_float(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        const Rational q = cas::parse_rational(s);
        return q.get_d();
    }
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InputError("malformed number '" + s + "'");
    }
    if (used != s.size()) throw InputError("malformed number '" + s + "'");
    return v;
}

template <class T>
T parse_scalar(const std::string& s) {
    try {
        if constexpr (Scalar<T>::exact)
            return parse_exact(s);
        else
            return parse_float(s);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

template <class T>
Point<T> parse_point(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError("expected a point as x,y but got '" + s + "'");
    return Point<T>(parse_scalar<T>(s.substr(0, comma)), parse_scalar<T>(s.substr(comma + 1)));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

/// Writes to --out when given, else to `out`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}
    void write(const std::string& text) {
        if (path_.empty()) {
            fallback_ << text;
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw InputError("cannot write " + path_);
        f << text;
    }

private:
    std::string path_;
    std::ostream& fallback_;
};

ordered_json num_json(double v, bool exact) {
    if (exact) return cas::to_string(Rational(v));
    return v;
}

struct Common {
    std::string table_path;
    std::string mode = "auto";
    std::string out;
};

Working load(const Common& c) {
    return resolve(load_table_file(c.table_path).table, c.mode);
}

// step / orbit

int do_orbit(const Common& c, const std::string& point, std::size_t steps, bool single, std::ostream& out,
             std::ostream& err) {
    const Working w = load(c);
    return std::visit(
        [&](const auto& table) -> int {
            using Tab = std::decay_t<decltype(table)>;
            using T = std::conditional_t<std::is_same_v<Tab, PolygonQ>, Rational, double>;
            const Point<T> z = parse_point<T>(point);
            const auto s = orbit(table, z, steps);
            if (s.termination == Termination::interior && s.stop_step == 0)
                throw InputError("starting point lies in the closed table");
            std::ostringstream os;
            if (single) {
                if (s.points.size() > 1)
                    os << Scalar<T>::str(s.points[1].x) << ',' << Scalar<T>::str(s.points[1].y) << '\n';
            } else {
                write_orbit_csv(os, table, s);
            }
            Sink(c.out, out).write(os.str());
            if (s.termination == Termination::completed) return ok;
            err << "obl: orbit stopped at step " << s.stop_step << ": " << to_string(s.termination) << " point\n";
            return s.termination == Termination::singular ? singular : input_error;
        },
        w);
}

// scan4

int do_scan4(const Common& c, double inflate, const std::string& expect, std::ostream& out, std::ostream& err) {
    const Working w = load(c);
    const Box box = default_region(std::visit([](const auto& t) { return Table(t); }, w), inflate);
    return std::visit(
        [&](const auto& table) -> int {
            using Tab = std::decay_t<decltype(table)>;
            if constexpr (std::is_same_v<Tab, Ellipse>) {
                throw InputError("scan4 needs a polygon table");
            } else {
                std::string json, verdict;
                if constexpr (std::is_same_v<Tab, PolygonQ>) {
                    const auto rep = period4_scan(table, to_exact(box.lo), to_exact(box.hi));
                    json = rep.to_json();
                    verdict = rep.verdict();
                } else {
                    const auto rep = period4_scan(table, box.lo, box.hi);
                    json = rep.to_json();
                    verdict = rep.verdict();
                }
                Sink(c.out, out).write(json);
                if (!expect.empty() && expect != verdict) {
                    err << "obl: expected " << expect << " but the scan reports " << verdict << '\n';
                    return check_failed;
                }
                return ok;
            }
        },
        w);
}

// measure

struct MeasureArgs {
    std::string region = "annulus";
    std::string center, lo, hi, radius, inner;
    double inflate = 3.0;
    MeasureOptions opts;
    std::string expect;
};

int do_measure(const Common& c, MeasureArgs m, std::ostream& out, std::ostream& err) {
    const Table raw = load_table_file(c.table_path).table;
    const Working w = resolve(raw, c.mode);
    const Table t = std::visit([](const auto& x) { return Table(x); }, w);
    const bool exact = std::holds_alternative<PolygonQ>(w);
    m.opts.exact = exact;

    auto req = [](const std::string& v, const char* name) {
        if (v.empty()) throw InputError(std::string("measure: --") + name + " is required for this region");
        return v;
    };
    SampleRegion region;
    if (m.region == "box") {
        region = SampleRegion::box(parse_point<double>(req(m.lo, "lo")), parse_point<double>(req(m.hi, "hi")));
    } else if (m.region == "disk") {
        region = SampleRegion::disk(parse_point<double>(req(m.center, "center")),
                                    parse_float(req(m.radius, "radius")));
    } else if (!m.center.empty() || !m.radius.empty() || !m.inner.empty()) {
        region = SampleRegion::annulus(parse_point<double>(req(m.center, "center")),
                                       parse_float(req(m.inner, "inner")), parse_float(req(m.radius, "radius")));
    } else {
        region = bounding_annulus(t, m.inflate);
    }
    if (m.opts.tol <= 0) throw InputError("measure: --tol must be positive");

    const MeasureResult r = measure_estimate(t, region, m.opts);

    ordered_json j;
    j["table"] = ordered_json::parse(table_to_json(t));
    ordered_json reg;
    switch (region.kind) {
        case SampleRegion::Kind::box:
            reg = {{"kind", "box"},
                   {"lo", {num_json(region.lo.x, exact), num_json(region.lo.y, exact)}},
                   {"hi", {num_json(region.hi.x, exact), num_json(region.hi.y, exact)}}};
            break;
        case SampleRegion::Kind::disk:
            reg = {{"kind", "disk"},
                   {"center", {num_json(region.center.x, exact), num_json(region.center.y, exact)}},
                   {"radius", num_json(region.r_outer, exact)}};
            break;
        case SampleRegion::Kind::annulus:
            reg = {{"kind", "annulus"},
                   {"center", {num_json(region.center.x, exact), num_json(region.center.y, exact)}},
                   {"inner", num_json(region.r_inner, exact)},
                   {"outer", num_json(region.r_outer, exact)}};
            break;
    }
    j["region"] = reg;
    j["mode"] = exact ? "exact" : "float";
    j["period"] = m.opts.period;
    j["tol"] = num_json(m.opts.tol, exact);
    j["seed"] = m.opts.seed;
    j["samples"] = r.samples;
    j["periodic"] = r.periodic;
    j["singular"] = r.singular;
    if (exact)
        j["fraction"] = cas::to_string(Rational(cas::ratio(static_cast<long>(r.periodic), static_cast<long>(r.samples))));
    else
        j["fraction"] = r.fraction;
    j["wilson95"] = ordered_json::array({num_json(r.wilson_lo, exact), num_json(r.wilson_hi, exact)});
    Sink(c.out, out).write(j.dump(2) + "\n");

    if (m.expect == "zero" && r.periodic != 0) {
        err << "obl: expected fraction 0 but " << r.periodic << " of " << r.samples << " samples are periodic\n";
        return check_failed;
    }
    if (m.expect == "positive" && r.periodic == 0) {
        err << "obl: expected a positive fraction but no sample is periodic\n";
        return check_failed;
    }
    return ok;
}

// family-check

struct FamilyArgs {
    std::string square;
    std::vector<std::string> quad;
    double radius = 0.05;
    int grid = 21;
    std::string family = "midpoint";
    double fd_step = 1e-4;
    bool expect_integral = false;
};

int do_family(const FamilyArgs& a, const std::string& mode, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    if (mode == "exact") throw InputError("family-check runs in floating point only");
    eds::Quad q0;
    if (!a.quad.empty()) {
        if (a.quad.size() != 4) throw InputError("--quad needs four points");
        for (std::size_t k = 0; k < 4; ++k) q0.z[k] = parse_point<double>(a.quad[k]);
    } else {
        const PointF p = parse_point<double>(a.square.empty() ? std::string("0.3,-0.4") : a.square);
        q0 = eds::Quad{{p, PointF(2 - p.x, -p.y), PointF(p.x, p.y + 2), PointF(-p.x, -p.y)}};
    }
    if (a.radius <= 0 || a.grid < 1 || a.fd_step <= 0) throw InputError("radius, grid and fd-step must be positive");

    eds::FamilyPatch fp;
    try {
        if (a.family == "midpoint") {
            fp = eds::midpoint_family(q0, a.radius, a.grid);
            fp.fd_step = a.fd_step;
        } else {
            fp = eds::warped_midpoint_family(q0, a.radius, a.grid, a.fd_step);
        }
    } catch (const eds::DegenerateQuad& e) {
        err << "obl: " << e.what() << '\n';
        return singular;
    }

    auto j = ordered_json::parse(eds::family_report_json(fp));
    const auto st = eds::structure_residuals(fp);
    const auto dd = eds::ddelta_check(fp);
    j["family"] = a.family;
    j["structure_max"] = {{"dtheta", st.dtheta}, {"rel", st.rel}, {"domega", st.domega}, {"area", st.area},
                          {"area_integral", st.area_integral}};
    j["ddelta_max"] = {{"ddelta1", dd.ddelta1}, {"ddelta2", dd.ddelta2}, {"skipped", dd.skipped}};
    Sink(out_path, out).write(j.dump(2) + "\n");

    if (a.expect_integral) {
        const double theta = j["theta_residual_max"].get<double>();
        const double h2 = 10 * a.fd_step * a.fd_step;
        if (theta > 1e-10 || st.dtheta > h2 || st.rel > h2 || st.domega > h2 || st.area > h2) {
            err << "obl: family residuals exceed tolerance\n";
            return check_failed;
        }
    }
    return ok;
}

// render

std::vector<PointF> points_of(const ordered_json& arr) {
    auto val = [](const ordered_json& v) { return v.is_string() ? parse_float(v.get<std::string>()) : v.get<double>(); };
    std::vector<PointF> out;
    for (const auto& p : arr) out.emplace_back(val(p.at(0)), val(p.at(1)));
    return out;
}

struct RenderArgs {
    std::string orbit_csv, scan_json;
    int singular_depth = -1;
    int width = 800;
};

int do_render(const Common& c, const RenderArgs& a, std::ostream& out) {
    const Table t = load_table_file(c.table_path).table;
    RenderInput in = [&] {
        if (const auto* e = std::get_if<Ellipse>(&t)) return RenderInput(*e);
        if (const auto* q = std::get_if<PolygonQ>(&t)) return RenderInput(to_float(*q));
        return RenderInput(std::get<PolygonF>(t));
    }();
    in.width = a.width;

    if (!a.orbit_csv.empty()) {
        std::istringstream csv(read_file(a.orbit_csv));
        std::string line;
        if (!std::getline(csv, line) || line.rfind("k,x,y", 0) != 0) throw InputError("malformed orbit CSV header");
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
            if (line.back() == ',') f.emplace_back();
            if (f.size() != 5) throw InputError("malformed orbit CSV row: " + line);
            in.orbit.emplace_back(parse_float(f[1]), parse_float(f[2]));
            if (!f[3].empty() && !f[4].empty()) in.tangencies.emplace_back(parse_float(f[3]), parse_float(f[4]));
        }
    }
    if (!a.scan_json.empty()) {
        ordered_json j;
        try {
            j = ordered_json::parse(read_file(a.scan_json));
            const auto box = points_of(j.at("region"));
            in.view = std::pair{box.at(0), box.at(1)};
            for (const auto& cell : j.at("zero_translation")) in.cells.push_back(points_of(cell.at("region_vertices")));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("malformed scan report: ") + e.what());
        }
    }
    if (a.singular_depth >= 0) {
        const auto* p = std::get_if<PolygonF>(&in.table);
        if (!p) throw InputError("singular lines need a polygon table");
        const Box box = default_region(t, 3.0);
        const auto lo = in.view ? in.view->first : box.lo;
        const auto hi = in.view ? in.view->second : box.hi;
        if (!in.view) in.view = std::pair{lo, hi};
        if (const auto* q = std::get_if<PolygonQ>(&t)) {
            const auto arr = singular_lines(*q, a.singular_depth, to_exact(lo), to_exact(hi));
            for (const auto& s : arr.segments) in.singular.push_back({to_double(s.a), to_double(s.b), s.forward});
        } else {
            const auto arr = singular_lines(*p, a.singular_depth, lo, hi);
            for (const auto& s : arr.segments) in.singular.push_back({s.a, s.b, s.forward});
        }
    }
    Sink(c.out, out).write(render_svg(in));
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Outer billiard dynamics, period-4 scans and EDS checks", "obl"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool needs_table) {
        auto* opt = sub->add_option("--table", common.table_path, "table JSON file");
        if (needs_table) opt->required();
        sub->add_option("--mode", common.mode, "exact | float (default: exact for rational tables)")
            ->check(CLI::IsMember({"auto", "exact", "float"}));
        sub->add_option("--out", common.out, "output file (default: stdout)");
    };

    std::string point;
    std::size_t steps = 4;
    auto* step_cmd = app.add_subcommand("step", "one application of the map");
    add_common(step_cmd, true);
    step_cmd->add_option("--point", point, "x,y (p/q or decimal)")->required();

    auto* orbit_cmd = app.add_subcommand("orbit", "iterate and write k,x,y,tx,ty CSV");
    add_common(orbit_cmd, true);
    orbit_cmd->add_option("--point", point, "x,y (p/q or decimal)")->required();
    orbit_cmd->add_option("--steps", steps, "number of steps")->check(CLI::NonNegativeNumber);

    double inflate = 3.0;
    std::string expect;
    auto* scan_cmd = app.add_subcommand("scan4", "classify all period-4 itineraries");
    add_common(scan_cmd, true);
    scan_cmd->add_option("--inflate", inflate, "region = table bounding box scaled by this")->check(CLI::PositiveNumber);
    scan_cmd->add_option("--expect", expect, "open-period-4-set | empty-interior")
        ->check(CLI::IsMember({"open-period-4-set", "empty-interior"}));

    MeasureArgs m;
    auto* measure_cmd = app.add_subcommand("measure", "Monte Carlo fraction of period-n points");
    add_common(measure_cmd, true);
    measure_cmd->add_option("--region", m.region, "box | disk | annulus")
        ->check(CLI::IsMember({"box", "disk", "annulus"}));
    measure_cmd->add_option("--center", m.center, "disk/annulus center x,y");
    measure_cmd->add_option("--radius", m.radius, "disk radius or annulus outer radius");
    measure_cmd->add_option("--inner", m.inner, "annulus inner radius");
    measure_cmd->add_option("--lo", m.lo, "box corner x,y");
    measure_cmd->add_option("--hi", m.hi, "box corner x,y");
    measure_cmd->add_option("--inflate", m.inflate, "default annulus outer/inner ratio")->check(CLI::PositiveNumber);
    measure_cmd->add_option("--samples", m.opts.samples, "sample count")->check(CLI::PositiveNumber);
    measure_cmd->add_option("--seed", m.opts.seed, "RNG seed");
    measure_cmd->add_option("--tol", m.opts.tol, "periodicity tolerance (float mode)");
    measure_cmd->add_option("--period", m.opts.period, "period n")->check(CLI::PositiveNumber);
    measure_cmd->add_option("--expect", m.expect, "zero | positive")->check(CLI::IsMember({"zero", "positive"}));

    FamilyArgs fa;
    auto* family_cmd = app.add_subcommand("family-check", "EDS residuals on a midpoint family of quadrilaterals");
    family_cmd->add_option("--square", fa.square, "base point x1,y1 of a square-table orbit (default 0.3,-0.4)");
    family_cmd->add_option("--quad", fa.quad, "four base vertices x,y (counterclockwise)")->expected(4);
    family_cmd->add_option("--radius", fa.radius, "half-width of the parameter grid");
    family_cmd->add_option("--grid", fa.grid, "grid points per axis");
    family_cmd->add_option("--family", fa.family, "midpoint | warped")->check(CLI::IsMember({"midpoint", "warped"}));
    family_cmd->add_option("--fd-step", fa.fd_step, "finite-difference step");
    family_cmd->add_flag("--expect-integral", fa.expect_integral, "fail unless residuals are within tolerance");
    family_cmd->add_option("--mode", common.mode)->check(CLI::IsMember({"auto", "exact", "float"}));
    family_cmd->add_option("--out", common.out, "output file (default: stdout)");

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "exact symbolic identity suite");
    verify_cmd->add_option("--suite", suite, "all | factorization | ab | compatibility | three-period | degenerate | inversion");
    verify_cmd->add_option("--out", common.out, "output file (default: stdout)");

    RenderArgs ra;
    auto* render_cmd = app.add_subcommand("render", "SVG of a table with optional orbit, scan cells and singular lines");
    add_common(render_cmd, true);
    render_cmd->add_option("--orbit", ra.orbit_csv, "orbit CSV written by `obl orbit`");
    render_cmd->add_option("--scan", ra.scan_json, "scan report written by `obl scan4`");
    render_cmd->add_option("--singular", ra.singular_depth, "draw singular lines up to this generation");
    render_cmd->add_option("--width", ra.width, "image width in pixels")->check(CLI::Range(100, 10000));

    std::vector<const char*> argv{"obl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "obl: " << e.what() << '\n';
        return input_error;
    }

    try {
        if (*step_cmd) return do_orbit(common, point, 1, true, out, err);
        if (*orbit_cmd) return do_orbit(common, point, steps, false, out, err);
        if (*scan_cmd) return do_scan4(common, inflate, expect, out, err);
        if (*measure_cmd) return do_measure(common, m, out, err);
        if (*family_cmd) return do_family(fa, common.mode, common.out, out, err);
        if (*verify_cmd) {
            const auto rep = verify::run_suite(suite);
            Sink(common.out, out).write(rep.to_json() + "\n");
            if (!rep.all_pass()) {
                err << "obl: verification failed\n";
                return check_failed;
            }
            return ok;
        }
        if (*render_cmd) return do_render(common, ra, out);
    } catch (const SingularPoint& e) {
        err << "obl: " << e.what() << '\n';
        return singular;
    } catch (const std::exception& e) {
        err << "obl: " << e.what() << '\n';
        return input_error;
    }
    return input_error;
}

}  // namespace obl::cli
