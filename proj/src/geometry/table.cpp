#include "obl/geometry/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "obl/geometry/tangency.hpp"

namespace obl {

std::string Scalar<double>::str(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

template <class T>
int turn_sign(const Point<T>& a, const Point<T>& b, const Point<T>& c, double tol) {
    return Scalar<T>::sign(cross(Point<T>(b - a), Point<T>(c - b)), tol);
}

}  // namespace

template <class T>
Polygon<T>::Polygon(std::vector<Point<T>> vertices, bool reorient) : v_(std::move(vertices)) {
    const std::size_t n = v_.size();
    if (n < 3) throw ConvexityError("polygon needs at least 3 vertices", n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (v_[i] == v_[j]) throw ConvexityError("repeated vertex", j);

    const double d = diameter();
    const double tol = kSingularTol * d * d;
    const int orient = Scalar<T>::sign(polygon_area_twice(), tol);
    if (orient == 0) throw ConvexityError("degenerate polygon with zero area", 0);
    for (std::size_t i = 0; i < n; ++i)
        if (turn_sign(v_[(i + n - 1) % n], v_[i], v_[(i + 1) % n], tol) != orient)
            throw ConvexityError("convexity violation", i);
    if (orient < 0) {
        if (!reorient) throw ConvexityError("clockwise orientation", 0);
        std::reverse(v_.begin(), v_.end());
        reoriented_ = true;
    }
    // Local convexity plus positive area still admits polygons winding more
    // than once; require every vertex strictly left of every edge.
    for (std::size_t i = 0; i < n; ++i) {
        const Point<T> e = v_[(i + 1) % n] - v_[i];
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || k == (i + 1) % n) continue;
            if (Scalar<T>::sign(cross(e, Point<T>(v_[k] - v_[i])), tol) <= 0)
                throw ConvexityError("convexity violation", k);
        }
    }
}

template <class T>
T Polygon<T>::polygon_area_twice() const {
    T s(0);
    for (std::size_t i = 0; i < v_.size(); ++i) s += cross(v_[i], v_[(i + 1) % v_.size()]);
    return s;
}

template <class T>
double Polygon<T>::diameter() const {
    double d = 0;
    for (std::size_t i = 0; i < v_.size(); ++i)
        for (std::size_t j = i + 1; j < v_.size(); ++j) d = std::max(d, norm(to_double(Point<T>(v_[i] - v_[j]))));
    return d;
}

template <class T>
std::pair<Point<T>, Point<T>> Polygon<T>::bounds() const {
    Point<T> lo = v_[0], hi = v_[0];
    for (const auto& p : v_) {
        if (p.x < lo.x) lo.x = p.x;
        if (p.y < lo.y) lo.y = p.y;
        if (p.x > hi.x) hi.x = p.x;
        if (p.y > hi.y) hi.y = p.y;
    }
    return {lo, hi};
}

template class Polygon<double>;
template class Polygon<Rational>;

Ellipse::Ellipse(PointF c, double a_, double b_) : center(c), a(a_), b(b_) {
    if (!(a > 0) || !(b > 0) || !std::isfinite(a) || !std::isfinite(b))
        throw GeometryError("degenerate ellipse: semi-axes must be positive");
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw GeometryError("ellipse center must be finite");
}

PointF Ellipse::at(double t) const { return PointF(center.x + a * std::cos(t), center.y + b * std::sin(t)); }

PointF Ellipse::tangent(double t) const { return PointF(-a * std::sin(t), b * std::cos(t)); }

double Ellipse::level(const PointF& z) const {
    const double u = (z.x - center.x) / a, w = (z.y - center.y) / b;
    return u * u + w * w - 1.0;
}

namespace {

using nlohmann::json;

enum class Mode { unknown, number, rational };

struct CoordReader {
    Mode mode = Mode::unknown;

    void note(Mode m) {
        if (mode == Mode::unknown) mode = m;
        if (mode != m) throw TableParseError("table mixes numeric and \"p/q\" coordinates");
    }

    double as_double(const json& j) {
        if (j.is_number()) {
            note(Mode::number);
            const double v = j.get<double>();
            if (!std::isfinite(v)) throw TableParseError("non-finite coordinate");
            return v;
        }
        return to_double(as_rational(j));
    }

    Rational as_rational(const json& j) {
        if (j.is_string()) {
            note(Mode::rational);
            try {
                return cas::parse_rational(j.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw TableParseError(e.what());
            }
        }
        if (j.is_number()) {
            note(Mode::number);
            return Rational(j.get<double>());
        }
        throw TableParseError("coordinate must be a number or a \"p/q\" string");
    }

    std::pair<json, json> pair_of(const json& j, const char* what) {
        if (!j.is_array() || j.size() != 2) throw TableParseError(std::string(what) + " must be a 2-element array");
        return {j[0], j[1]};
    }
};

}  // namespace

LoadedTable load_table(std::string_view json_text, const LoadOptions& opts) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw TableParseError(std::string("table JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string())
        throw TableParseError("table JSON needs a string \"type\" field");
    const std::string type = doc["type"];
    CoordReader rd;
    if (type == "polygon") {
        if (!doc.contains("vertices") || !doc["vertices"].is_array())
            throw TableParseError("polygon needs a \"vertices\" array");
        const json& vs = doc["vertices"];
        // Pass 1 fixes the coordinate mode and rejects mixing.
        for (const auto& v : vs) {
            auto [x, y] = rd.pair_of(v, "vertex");
            for (const json* c : {&x, &y}) {
                if (c->is_number())
                    rd.note(Mode::number);
                else if (c->is_string())
                    rd.note(Mode::rational);
                else
                    throw TableParseError("coordinate must be a number or a \"p/q\" string");
            }
        }
        if (rd.mode == Mode::rational) {
            std::vector<PointQ> pts;
            for (const auto& v : vs) pts.emplace_back(rd.as_rational(v[0]), rd.as_rational(v[1]));
            PolygonQ p(std::move(pts), opts.reorient);
            return {Table(p), p.reoriented()};
        }
        std::vector<PointF> pts;
        for (const auto& v : vs) pts.emplace_back(rd.as_double(v[0]), rd.as_double(v[1]));
        PolygonF p(std::move(pts), opts.reorient);
        return {Table(p), p.reoriented()};
    }
    if (type == "ellipse") {
        if (!doc.contains("center") || !doc.contains("semi_axes"))
            throw TableParseError("ellipse needs \"center\" and \"semi_axes\"");
        auto [cx, cy] = rd.pair_of(doc["center"], "center");
        auto [a, b] = rd.pair_of(doc["semi_axes"], "semi_axes");
        const double x = rd.as_double(cx), y = rd.as_double(cy);
        const double aa = rd.as_double(a), bb = rd.as_double(b);
        return {Table(Ellipse(PointF(x, y), aa, bb)), false};
    }
    throw TableParseError("unknown table type '" + type + "'");
}

LoadedTable load_table_file(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableParseError("cannot open table file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_table(ss.str(), opts);
}

namespace {

nlohmann::json coord(double v) { return v; }
nlohmann::json coord(const Rational& v) { return cas::to_string(v); }

}  // namespace

std::string table_to_json(const Table& table) {
    nlohmann::json j;
    std::visit(
        [&](const auto& t) {
            using U = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<U, Ellipse>) {
                j["type"] = "ellipse";
                j["center"] = {t.center.x, t.center.y};
                j["semi_axes"] = {t.a, t.b};
            } else {
                j["type"] = "polygon";
                j["vertices"] = nlohmann::json::array();
                for (const auto& p : t.vertices()) j["vertices"].push_back({coord(p.x), coord(p.y)});
            }
        },
        table);
    return j.dump();
}

bool is_exact(const Table& table) { return std::holds_alternative<PolygonQ>(table); }

double table_diameter(const Table& table) {
    return std::visit([](const auto& t) { return t.diameter(); }, table);
}

std::pair<PointF, PointF> table_bounds(const Table& table) {
    return std::visit(
        [](const auto& t) -> std::pair<PointF, PointF> {
            using U = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<U, Ellipse>) {
                return {PointF(t.center.x - t.a, t.center.y - t.b), PointF(t.center.x + t.a, t.center.y + t.b)};
            } else {
                auto [lo, hi] = t.bounds();
                return {to_double(lo), to_double(hi)};
            }
        },
        table);
}

PolygonF to_float(const PolygonQ& p) {
    std::vector<PointF> v;
    for (const auto& q : p.vertices()) v.push_back(to_double(q));
    return PolygonF(std::move(v));
}

}  // namespace obl
