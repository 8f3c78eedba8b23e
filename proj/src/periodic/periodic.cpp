#include "obl/periodic/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "obl/util/parallel.hpp"

namespace obl {

Itinerary::Itinerary(std::vector<std::size_t> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 2) throw std::invalid_argument("itinerary needs at least 2 entries");
    for (std::size_t k = 0; k + 1 < v_.size(); ++k)
        if (v_[k] == v_[k + 1])
            throw std::invalid_argument("itinerary repeats vertex " + std::to_string(v_[k]) + " at position " +
                                        std::to_string(k + 1));
}

namespace {

template <class T>
void check_indices(const Polygon<T>& table, const Itinerary& itin) {
    for (std::size_t v : itin.vertices())
        if (v >= table.size()) throw std::out_of_range("itinerary vertex index " + std::to_string(v));
}

/// z_n = eps * z0 + offset after following the itinerary.
template <class T>
Point<T> composed_offset(const Polygon<T>& table, const Itinerary& itin) {
    Point<T> c(T(0), T(0));
    for (std::size_t k = 0; k < itin.period(); ++k) c = reflect(table[itin[k]], c);
    return c;
}

}  // namespace

template <class T>
Point<T> translation_of(const Polygon<T>& table, const Itinerary& itin) {
    if (itin.period() % 2 != 0)
        throw std::invalid_argument("translation_of: odd period composes to a point reflection");
    check_indices(table, itin);
    return composed_offset(table, itin);
}

template <class T>
bool Cell<T>::contains(const Point<T>& z) const {
    return std::all_of(halfplanes.begin(), halfplanes.end(), [&](const auto& h) { return h.eval(z) > 0; });
}

namespace {

/// Relative area below which a float cell is treated as possibly empty and
/// handed to the exact classifier.
constexpr double kAreaMargin = 1e-9;

}  // namespace

template <class T>
Cell<T> cell_for_itinerary(const Polygon<T>& table, const Itinerary& itin, const Point<T>& lo, const Point<T>& hi) {
    check_indices(table, itin);
    Cell<T> cell{itin, {}, {}, T(0), false, {}, false};
    // z_k = eps * z0 + c; each tangency constraint at z_k pulls back to z0.
    int eps = 1;
    Point<T> c(T(0), T(0));
    for (std::size_t k = 0; k < itin.period(); ++k) {
        const std::size_t j = itin[k];
        for (std::size_t w = 0; w < table.size(); ++w) {
            if (w == j) continue;
            const HalfPlane<T> h = left_of(table[j], table[w]);
            cell.halfplanes.push_back(HalfPlane<T>{T(eps * h.a), T(eps * h.b), T(h.a * c.x + h.b * c.y + h.c)});
        }
        eps = -eps;
        c = reflect(table[j], c);
    }
    cell.offset = c;

    std::vector<Point<T>> poly = box_polygon(lo, hi);
    for (const auto& h : cell.halfplanes) {
        poly = clip(poly, h);
        if (poly.size() < 3) {
            poly.clear();
            break;
        }
    }
    cell.region = std::move(poly);
    cell.area = cell.region.empty() ? T(0) : polygon_area(cell.region);
    if constexpr (Scalar<T>::exact) {
        cell.nonempty = cell.area > 0;
    } else {
        const PointF span = to_double(Point<T>(hi - lo));
        const double margin = kAreaMargin * (span.x * span.x + span.y * span.y);
        cell.nonempty = cell.area > margin;
        cell.near_degenerate = !cell.region.empty() && !cell.nonempty;
    }
    return cell;
}

Box default_region(const Table& table, double inflate) {
    auto [lo, hi] = table_bounds(table);
    const PointF c(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
    const PointF half(0.5 * inflate * (hi.x - lo.x), 0.5 * inflate * (hi.y - lo.y));
    return {c - half, c + half};
}

namespace {

nlohmann::ordered_json scalar_json(double v) { return v; }
nlohmann::ordered_json scalar_json(const Rational& v) { return cas::to_string(v); }

template <class T>
nlohmann::ordered_json point_json(const Point<T>& p) {
    return nlohmann::ordered_json::array({scalar_json(p.x), scalar_json(p.y)});
}

}  // namespace

template <class T>
std::string ScanReport<T>::to_json() const {
    nlohmann::ordered_json j;
    j["table"] = nlohmann::ordered_json::parse(table_json);
    j["region"] = nlohmann::ordered_json::array({point_json(lo), point_json(hi)});
    j["cells_examined"] = cells_examined;
    j["nonempty"] = nonempty;
    j["zero_translation"] = nlohmann::ordered_json::array();
    for (const auto& c : zero_translation) {
        nlohmann::ordered_json e;
        e["itinerary"] = c.itinerary.vertices();
        e["translation"] = point_json(c.offset);
        e["region_vertices"] = nlohmann::ordered_json::array();
        for (const auto& p : c.region) e["region_vertices"].push_back(point_json(p));
        j["zero_translation"].push_back(e);
    }
    j["verdict"] = verdict();
    if constexpr (!Scalar<T>::exact) j["rechecked_exactly"] = rechecked;
    return j.dump(2) + "\n";
}

template <class T>
ScanReport<T> period4_scan(const Polygon<T>& table, const Point<T>& lo, const Point<T>& hi) {
    const std::size_t n = table.size();
    ScanReport<T> rep;
    rep.table_json = table_to_json(Table(table));
    rep.lo = lo;
    rep.hi = hi;

    struct Slot {
        std::size_t examined = 0, nonempty = 0, rechecked = 0;
        std::vector<Cell<T>> zero;
    };
    // One task per (v1, v2) prefix; slots are merged in index order.
    std::vector<Slot> slots(n * n);
    parallel_for(n * n, [&](std::size_t task) {
        const std::size_t a = task / n, b = task % n;
        if (a == b) return;
        Slot& s = slots[task];
        for (std::size_t c = 0; c < n; ++c) {
            if (c == b) continue;
            for (std::size_t d = 0; d < n; ++d) {
                if (d == c) continue;
                ++s.examined;
                const Itinerary itin({a, b, c, d});
                Cell<T> cell = cell_for_itinerary(table, itin, lo, hi);
                if constexpr (!Scalar<T>::exact) {
                    if (cell.near_degenerate) {
                        // Doubles are dyadic rationals: rerun exactly.
                        std::vector<PointQ> vq;
                        for (const auto& p : table.vertices()) vq.push_back(to_exact(p));
                        const auto exact = cell_for_itinerary(PolygonQ(vq), itin, to_exact(to_double(lo)),
                                                              to_exact(to_double(hi)));
                        cell.nonempty = exact.nonempty;
                        ++s.rechecked;
                    }
                }
                if (!cell.nonempty) continue;
                ++s.nonempty;
                const bool zero = [&] {
                    if constexpr (Scalar<T>::exact)
                        return cell.offset.x == 0 && cell.offset.y == 0;
                    else
                        return norm(cell.offset) <= 1e-12 * table.diameter();
                }();
                if (zero) s.zero.push_back(std::move(cell));
            }
        }
    });
    for (auto& s : slots) {
        rep.cells_examined += s.examined;
        rep.nonempty += s.nonempty;
        rep.rechecked += s.rechecked;
        for (auto& c : s.zero) rep.zero_translation.push_back(std::move(c));
    }
    return rep;
}

template Point<double> translation_of(const PolygonF&, const Itinerary&);
template Point<Rational> translation_of(const PolygonQ&, const Itinerary&);
template struct Cell<double>;
template struct Cell<Rational>;
template Cell<double> cell_for_itinerary(const PolygonF&, const Itinerary&, const PointF&, const PointF&);
template Cell<Rational> cell_for_itinerary(const PolygonQ&, const Itinerary&, const PointQ&, const PointQ&);
template struct ScanReport<double>;
template struct ScanReport<Rational>;
template ScanReport<double> period4_scan(const PolygonF&, const PointF&, const PointF&);
template ScanReport<Rational> period4_scan(const PolygonQ&, const PointQ&, const PointQ&);

SampleRegion SampleRegion::box(PointF lo, PointF hi) {
    if (!(lo.x < hi.x && lo.y < hi.y)) throw std::invalid_argument("sample box is empty");
    SampleRegion r;
    r.kind = Kind::box;
    r.lo = lo;
    r.hi = hi;
    return r;
}

SampleRegion SampleRegion::disk(PointF c, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("disk radius must be positive");
    SampleRegion r;
    r.kind = Kind::disk;
    r.center = c;
    r.r_outer = radius;
    return r;
}

SampleRegion SampleRegion::annulus(PointF c, double r_in, double r_out) {
    if (!(r_in >= 0 && r_out > r_in)) throw std::invalid_argument("annulus needs 0 <= inner < outer");
    SampleRegion r;
    r.kind = Kind::annulus;
    r.center = c;
    r.r_inner = r_in;
    r.r_outer = r_out;
    return r;
}

SampleRegion bounding_annulus(const Table& table, double inflate) {
    auto [lo, hi] = table_bounds(table);
    const PointF c(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
    const double r = norm(PointF(hi - c));
    return SampleRegion::annulus(c, r, inflate * r);
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double nn = static_cast<double>(n);
    const double denom = 1 + z * z / nn;
    const double centre = (p + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PointF sample_point(const SampleRegion& r, std::mt19937_64& rng) {
    switch (r.kind) {
        case SampleRegion::Kind::box:
            return PointF(r.lo.x + (r.hi.x - r.lo.x) * unit(rng), r.lo.y + (r.hi.y - r.lo.y) * unit(rng));
        case SampleRegion::Kind::disk:
        case SampleRegion::Kind::annulus: {
            const double a2 = r.r_inner * r.r_inner, b2 = r.r_outer * r.r_outer;
            const double rad = std::sqrt(a2 + (b2 - a2) * unit(rng));
            const double t = 2 * M_PI * unit(rng);
            return PointF(r.center.x + rad * std::cos(t), r.center.y + rad * std::sin(t));
        }
    }
    return r.center;
}

template <class T>
bool in_closed_polygon(const Polygon<T>& p, const Point<T>& z) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (cross(Point<T>(p[i + 1] - p[i]), Point<T>(z - p[i])) < 0) return false;
    return true;
}

enum class Outcome { periodic, not_periodic, singular };

template <class Tab, class T>
Outcome classify(const Tab& table, const Point<T>& z, std::size_t n, double tol) {
    const auto s = orbit(table, z, n);
    if (s.termination != Termination::completed) return Outcome::singular;
    if constexpr (Scalar<T>::exact)
        return s.points.back() == z ? Outcome::periodic : Outcome::not_periodic;
    else
        return norm(PointF(s.points.back() - z)) <= tol ? Outcome::periodic : Outcome::not_periodic;
}

}  // namespace

MeasureResult measure_estimate(const Table& table, const SampleRegion& region, const MeasureOptions& opts) {
    if (opts.samples < 1) throw std::invalid_argument("measure_estimate: samples must be at least 1");
    if (opts.period < 1) throw std::invalid_argument("measure_estimate: period must be at least 1");
    if (opts.partitions < 1) throw std::invalid_argument("measure_estimate: partitions must be at least 1");
    std::optional<PolygonF> float_copy;
    if (const auto* q = std::get_if<PolygonQ>(&table); q && !opts.exact) float_copy = to_float(*q);

    auto outside = [&](const PointF& z) {
        if (const auto* e = std::get_if<Ellipse>(&table)) return e->level(z) > 0;
        if (const auto* f = std::get_if<PolygonF>(&table)) return !in_closed_polygon(*f, z);
        return !in_closed_polygon(std::get<PolygonQ>(table), to_exact(z));
    };
    auto judge = [&](const PointF& z) -> Outcome {
        if (float_copy) return classify(*float_copy, z, opts.period, opts.tol);
        if (const auto* q = std::get_if<PolygonQ>(&table)) return classify(*q, to_exact(z), opts.period, opts.tol);
        if (const auto* f = std::get_if<PolygonF>(&table)) return classify(*f, z, opts.period, opts.tol);
        return classify(std::get<Ellipse>(table), z, opts.period, opts.tol);
    };

    struct Part {
        std::size_t hits = 0, singular = 0;
    };
    std::vector<Part> parts(opts.partitions);
    parallel_for(opts.partitions, [&](std::size_t p) {
        std::size_t quota = opts.samples / opts.partitions + (p < opts.samples % opts.partitions ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(p)};
        std::mt19937_64 rng(seq);
        std::size_t rejected = 0;
        while (quota > 0) {
            const PointF z = sample_point(region, rng);
            if (!outside(z)) {
                if (++rejected > 1000 * (opts.samples + 1))
                    throw std::invalid_argument("measure_estimate: sample region lies inside the table");
                continue;
            }
            --quota;
            switch (judge(z)) {
                case Outcome::periodic: ++parts[p].hits; break;
                case Outcome::singular: ++parts[p].singular; break;
                case Outcome::not_periodic: break;
            }
        }
    });
    MeasureResult r;
    r.samples = opts.samples;
    for (const auto& p : parts) {
        r.periodic += p.hits;
        r.singular += p.singular;
    }
    r.fraction = static_cast<double>(r.periodic) / static_cast<double>(r.samples);
    std::tie(r.wilson_lo, r.wilson_hi) = wilson_interval(r.periodic, r.samples);
    return r;
}

namespace {

struct Sym2 {
    double a, b, c;  // [[a, b], [b, c]]
};

/// Singular values of the 2x2 matrix with columns j0, j1.
std::pair<double, double> singular_values(const PointF& j0, const PointF& j1) {
    const Sym2 g{dot(j0, j0), dot(j0, j1), dot(j1, j1)};
    const double tr = g.a + g.c, det = g.a * g.c - g.b * g.b;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    const double l1 = tr / 2 + disc, l2 = std::max(0.0, tr / 2 - disc);
    return {std::sqrt(l2), std::sqrt(l1)};
}

}  // namespace

RefineResult refine_periodic_smooth(const Ellipse& table, const PointF& z0, std::size_t n, const RefineOptions& opts) {
    if (n < 1) throw std::invalid_argument("refine_periodic_smooth: period must be positive");
    if (table.level(z0) <= 0) throw InteriorPoint();
    auto F = [&](const PointF& z) {
        PointF w = z;
        try {
            for (std::size_t k = 0; k < n; ++k) w = step(table, w);
        } catch (const GeometryError& e) {
            throw RefinementError(std::string("refinement step failed: ") + e.what());
        }
        return PointF(w - z);
    };
    const double scale = norm(z0) + table.diameter();
    const double h = opts.fd_step * scale;
    auto jacobian = [&](const PointF& z, PointF& j0, PointF& j1) {
        j0 = (1.0 / (2 * h)) * PointF(F(z + PointF(h, 0)) - F(z - PointF(h, 0)));
        j1 = (1.0 / (2 * h)) * PointF(F(z + PointF(0, h)) - F(z - PointF(0, h)));
    };

    RefineResult res;
    PointF z = z0;
    PointF fz = F(z);
    double r = norm(fz);
    double mu = 1e-3;
    std::size_t it = 0;
    for (; it < opts.max_iterations && r > opts.target * scale; ++it) {
        PointF j0, j1;
        jacobian(z, j0, j1);
        const Sym2 g{dot(j0, j0), dot(j0, j1), dot(j1, j1)};
        const PointF rhs(-dot(j0, fz), -dot(j1, fz));
        bool improved = false;
        while (mu < 1e12) {
            const double damp = mu * std::max(g.a, g.c);
            const double a = g.a + damp, c = g.c + damp;
            const double det = a * c - g.b * g.b;
            const PointF dz((c * rhs.x - g.b * rhs.y) / det, (a * rhs.y - g.b * rhs.x) / det);
            const PointF zn = z + dz;
            if (table.level(zn) > 0) {
                const PointF fn = F(zn);
                if (norm(fn) < r) {
                    z = zn;
                    fz = fn;
                    r = norm(fn);
                    mu = std::max(mu / 3, 1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 4;
        }
        if (!improved) break;
    }
    res.point = z;
    res.residual = r;
    res.iterations = it;
    if (r > std::max(opts.target * scale, opts.accept))
        throw RefinementError("refine_periodic_smooth: no convergence after " + std::to_string(it) +
                              " iterations (residual " + std::to_string(r) + ")");
    PointF j0, j1;
    jacobian(z, j0, j1);
    const auto [smin, smax] = singular_values(j0, j1);
    res.degenerate = smax == 0 || smin / smax < opts.degeneracy;
    return res;
}

}  // namespace obl
