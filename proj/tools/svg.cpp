#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace obl::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

struct Frame {
    PointF lo, hi;
    double scale = 1, pad = 20;
    int width = 800, height = 800;

    double X(double x) const { return pad + (x - lo.x) * scale; }
    double Y(double y) const { return pad + (hi.y - y) * scale; }
    std::string pt(const PointF& p) const { return fmt(X(p.x)) + "," + fmt(Y(p.y)); }
};

void grow(PointF& lo, PointF& hi, const PointF& p) {
    lo = PointF(std::min(lo.x, p.x), std::min(lo.y, p.y));
    hi = PointF(std::max(hi.x, p.x), std::max(hi.y, p.y));
}

std::pair<PointF, PointF> table_box(const RenderInput& in) {
    if (const auto* p = std::get_if<PolygonF>(&in.table)) return p->bounds();
    const auto& e = std::get<Ellipse>(in.table);
    return {PointF(e.center.x - e.a, e.center.y - e.b), PointF(e.center.x + e.a, e.center.y + e.b)};
}

Frame make_frame(const RenderInput& in) {
    PointF lo, hi;
    if (in.view) {
        std::tie(lo, hi) = *in.view;
    } else {
        std::tie(lo, hi) = table_box(in);
        for (const auto& p : in.orbit) grow(lo, hi, p);
        for (const auto& c : in.cells)
            for (const auto& p : c) grow(lo, hi, p);
        const PointF mid((lo.x + hi.x) / 2, (lo.y + hi.y) / 2);
        const double half = 0.6 * std::max({hi.x - lo.x, hi.y - lo.y, 1e-9});
        lo = PointF(mid.x - half, mid.y - half);
        hi = PointF(mid.x + half, mid.y + half);
    }
    Frame f;
    f.lo = lo;
    f.hi = hi;
    f.width = in.width;
    const double span = std::max(hi.x - lo.x, hi.y - lo.y);
    f.scale = (in.width - 2 * f.pad) / span;
    f.height = static_cast<int>(std::lround(2 * f.pad + (hi.y - lo.y) * f.scale)) + 70;
    return f;
}

}  // namespace

std::string render_svg(const RenderInput& in) {
    const Frame f = make_frame(in);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
       << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (!in.cells.empty()) {
        os << "<g id=\"cells\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"#3182bd\" stroke-width=\"0.5\">\n";
        for (const auto& c : in.cells) {
            os << "<polygon points=\"";
            for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << f.pt(c[k]);
            os << "\"/>\n";
        }
        os << "</g>\n";
    }

    if (!in.singular.empty()) {
        os << "<g id=\"singular\" stroke-width=\"0.8\">\n";
        for (const auto& s : in.singular) {
            os << "<line x1=\"" << fmt(f.X(s.a.x)) << "\" y1=\"" << fmt(f.Y(s.a.y)) << "\" x2=\"" << fmt(f.X(s.b.x))
               << "\" y2=\"" << fmt(f.Y(s.b.y)) << "\" stroke=\"" << (s.forward ? "#de2d26" : "#fc9272") << "\"/>\n";
        }
        os << "</g>\n";
    }

    os << "<g id=\"table\" fill=\"#d9d9d9\" stroke=\"black\" stroke-width=\"1.5\">\n";
    if (const auto* p = std::get_if<PolygonF>(&in.table)) {
        os << "<polygon points=\"";
        for (std::size_t k = 0; k < p->size(); ++k) os << (k ? " " : "") << f.pt((*p)[k]);
        os << "\"/>\n";
    } else {
        const auto& e = std::get<Ellipse>(in.table);
        os << "<ellipse cx=\"" << fmt(f.X(e.center.x)) << "\" cy=\"" << fmt(f.Y(e.center.y)) << "\" rx=\""
           << fmt(e.a * f.scale) << "\" ry=\"" << fmt(e.b * f.scale) << "\"/>\n";
    }
    os << "</g>\n";

    if (!in.orbit.empty()) {
        os << "<g id=\"orbit\">\n<polyline fill=\"none\" stroke=\"#31a354\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < in.orbit.size(); ++k) os << (k ? " " : "") << f.pt(in.orbit[k]);
        os << "\"/>\n";
        for (const auto& p : in.orbit)
            os << "<circle cx=\"" << fmt(f.X(p.x)) << "\" cy=\"" << fmt(f.Y(p.y)) << "\" r=\"2.5\" fill=\"#31a354\"/>\n";
        for (const auto& p : in.tangencies)
            os << "<rect x=\"" << fmt(f.X(p.x) - 3) << "\" y=\"" << fmt(f.Y(p.y) - 3)
               << "\" width=\"6\" height=\"6\" fill=\"#756bb1\"/>\n";
        os << "</g>\n";
    }

    // Legend.
    std::vector<std::pair<std::string, std::string>> items{{"#d9d9d9", "table"}};
    if (!in.orbit.empty()) items.emplace_back("#31a354", "orbit");
    if (!in.tangencies.empty()) items.emplace_back("#756bb1", "tangency points");
    if (!in.singular.empty()) items.emplace_back("#de2d26", "singular lines");
    if (!in.cells.empty()) items.emplace_back("#9ecae1", "period-4 cells");
    const double y0 = f.height - 60;
    os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t k = 0; k < items.size(); ++k) {
        const double x = f.pad + 140.0 * static_cast<double>(k % 5);
        const double y = y0 + 22.0 * static_cast<double>(k / 5);
        os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"12\" height=\"12\" fill=\"" << items[k].first
           << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        os << "<text x=\"" << fmt(x + 18) << "\" y=\"" << fmt(y + 10) << "\">" << items[k].second << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace obl::cli
