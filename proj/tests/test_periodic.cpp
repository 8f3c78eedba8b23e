#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

#include "obl/periodic/periodic.hpp"

using namespace obl;
using cas::ratio;

namespace {

PolygonQ unit_square() { return PolygonQ({PointQ(0, 0), PointQ(1, 0), PointQ(1, 1), PointQ(0, 1)}); }
PolygonQ kite() { return PolygonQ({PointQ(0, 0), PointQ(2, 0), PointQ(3, 2), PointQ(0, 1)}); }
PolygonQ slanted() { return PolygonQ({PointQ(0, 0), PointQ(3, 0), PointQ(4, 1), PointQ(1, 1)}); }

PointQ region_lo(const PolygonQ& p) { return to_exact(default_region(Table(p)).lo); }
PointQ region_hi(const PolygonQ& p) { return to_exact(default_region(Table(p)).hi); }

/// Rational point on the unit circle for parameter t (stereographic).
PointQ circle_point(const Rational& t) {
    const Rational d = 1 + t * t;
    return PointQ(Rational((1 - t * t) / d), Rational(2 * t / d));
}

double angle_of(const PointQ& p) { return std::atan2(to_double(p.y), to_double(p.x)); }

/// Random convex n-gon inscribed in the unit circle; with `rectangle`, two
/// antipodal pairs are included so the polygon has parallelogram corners.
PolygonQ random_inscribed(std::mt19937_64& rng, std::size_t n, bool rectangle) {
    std::uniform_int_distribution<long> num(-40, 40);
    for (;;) {
        std::vector<PointQ> pts;
        auto add = [&](const PointQ& p) {
            for (const auto& q : pts)
                if (q == p) return false;
            pts.push_back(p);
            return true;
        };
        if (rectangle) {
            for (int k = 0; k < 2; ++k) {
                Rational t = ratio(num(rng), 7);
                if (t == 0) t = ratio(1, 3);
                add(circle_point(t));
                add(circle_point(Rational(-1 / t)));
            }
        }
        while (pts.size() < n) add(circle_point(ratio(num(rng), 9)));
        if (pts.size() != n) continue;
        std::sort(pts.begin(), pts.end(), [](const PointQ& a, const PointQ& b) { return angle_of(a) < angle_of(b); });
        try {
            return PolygonQ(pts);
        } catch (const ConvexityError&) {
        }
    }
}

}  // namespace

TEST_CASE("translation_of examples") {
    const auto sq = unit_square();
    CHECK(translation_of(sq, Itinerary({1, 2, 3, 0})) == PointQ(0, 0));
    // Oracle: compose the four reflections on a symbolic start z -> 2c - z.
    const auto q = kite();
    PointQ c(0, 0);
    for (std::size_t v : {0, 1, 2, 3}) c = PointQ(2 * q[v].x - c.x, 2 * q[v].y - c.y);
    CHECK(c == PointQ(-2, -2));
    CHECK(translation_of(q, Itinerary({0, 1, 2, 3})) == PointQ(-2, -2));
    CHECK(translation_of(q, Itinerary({0, 2})) == PointQ(6, 4));
    CHECK_THROWS_AS(translation_of(q, Itinerary({0, 1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(Itinerary({0, 0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Itinerary({3}), std::invalid_argument);
}

TEST_CASE("cell_for_itinerary examples") {
    const auto sq = unit_square();
    const auto cell = cell_for_itinerary(sq, Itinerary({1, 2, 3, 0}), region_lo(sq), region_hi(sq));
    CHECK(cell.nonempty);
    CHECK(cell.contains(PointQ(ratio(3, 10), ratio(-2, 5))));
    CHECK(cell.offset == PointQ(0, 0));
    const auto rev = cell_for_itinerary(sq, Itinerary({1, 0, 3, 2}), region_lo(sq), region_hi(sq));
    CHECK_FALSE(rev.nonempty);
    // Float mode reaches the same classification.
    const auto cf = cell_for_itinerary(to_float(sq), Itinerary({1, 2, 3, 0}), PointF(-1, -1), PointF(2, 2));
    CHECK(cf.nonempty);
    CHECK(cf.area == doctest::Approx(to_double(cell.area)));
}

TEST_CASE("period4_scan examples") {
    for (const auto& [table, open] : {std::pair{unit_square(), true}, {slanted(), true}, {kite(), false}}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = period4_scan(table, region_lo(table), region_hi(table));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(secs < 5.0);
        CHECK(rep.open_set() == open);
        CHECK(rep.cells_examined == 4 * 3 * 3 * 3);
        CHECK(rep.nonempty > 0);
        for (const auto& c : rep.zero_translation) CHECK(c.nonempty);
    }
    const auto rep = period4_scan(unit_square(), PointQ(-1, -1), PointQ(2, 2));
    CHECK(std::string(rep.verdict()) == "open-period-4-set");
    const std::string js = rep.to_json();
    CHECK(js.find("\"verdict\": \"open-period-4-set\"") != std::string::npos);
    CHECK(js.find('.') == std::string::npos);
    CHECK(std::string(period4_scan(kite(), PointQ(-5, -5), PointQ(5, 5)).verdict()) == "empty-interior");
}

TEST_CASE("float scan agrees with the exact scan") {
    for (const auto& t : {unit_square(), slanted(), kite()}) {
        const auto box = default_region(Table(t));
        const auto ex = period4_scan(t, to_exact(box.lo), to_exact(box.hi));
        const auto fl = period4_scan(to_float(t), box.lo, box.hi);
        CHECK(ex.nonempty == fl.nonempty);
        CHECK(ex.zero_translation.size() == fl.zero_translation.size());
    }
}

TEST_CASE("zero-translation cells and parallelogram corners on a random corpus") {
    std::mt19937_64 rng(2024);
    int tables = 0, with_corners = 0, realized = 0;
    for (std::size_t n : {4, 5, 6}) {
        for (int k = 0; k < 8; ++k) {
            const bool rect = k % 2 == 0;
            const auto poly = random_inscribed(rng, n, rect);
            const auto corners = parallelogram_corners(poly);
            const auto rep = period4_scan(poly, region_lo(poly), region_hi(poly));
            ++tables;
            with_corners += !corners.empty();
            // Every zero-translation cell runs over parallelogram corners.
            for (const auto& c : rep.zero_translation) {
                std::array<std::size_t, 4> s{};
                std::copy(c.itinerary.vertices().begin(), c.itinerary.vertices().end(), s.begin());
                std::sort(s.begin(), s.end());
                CHECK(std::find(corners.begin(), corners.end(), s) != corners.end());
            }
            // No parallelogram corners: no open period-4 set.
            if (corners.empty()) CHECK_FALSE(rep.open_set());
            // A quadrilateral has open period-4 cells exactly when it is a parallelogram.
            if (n == 4) CHECK(rep.open_set() == !corners.empty());
            realized += rep.open_set();
        }
    }
    CHECK(tables >= 20);
    CHECK(with_corners >= 12);
    MESSAGE("tables with corners: " << with_corners << ", open period-4 sets realized: " << realized);
}

TEST_CASE("cells sharing a first vertex are disjoint") {
    for (const auto& t : {unit_square(), kite()}) {
        const PointQ lo = region_lo(t), hi = region_hi(t);
        std::vector<Cell<Rational>> cells;
        const std::size_t n = t.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t d = 0; d < n; ++d) {
                        if (a == b || b == c || c == d) continue;
                        auto cell = cell_for_itinerary(t, Itinerary({a, b, c, d}), lo, hi);
                        if (cell.nonempty) cells.push_back(std::move(cell));
                    }
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                if (cells[i].itinerary[0] != cells[j].itinerary[0]) continue;
                auto poly = cells[i].region;
                for (const auto& h : cells[j].halfplanes) poly = clip(poly, h);
                REQUIRE((poly.size() < 3 || polygon_area(poly) == 0));
            }
    }
}

TEST_CASE("direct iteration agrees with the containing cell") {
    for (const auto& t : {unit_square(), kite()}) {
        const PointQ lo = region_lo(t), hi = region_hi(t);
        std::vector<Cell<Rational>> cells;
        const std::size_t n = t.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t d = 0; d < n; ++d) {
                        if (a == b || b == c || c == d) continue;
                        auto cell = cell_for_itinerary(t, Itinerary({a, b, c, d}), lo, hi);
                        if (cell.nonempty) cells.push_back(std::move(cell));
                    }
        std::mt19937_64 rng(77);
        const double lx = to_double(lo.x), ly = to_double(lo.y);
        const double wx = to_double(hi.x) - lx, wy = to_double(hi.y) - ly;
        std::uniform_real_distribution<double> u(0, 1);
        int compared = 0;
        while (compared < 10000) {
            const PointQ z = to_exact(PointF(lx + wx * u(rng), ly + wy * u(rng)));
            const auto s = orbit(t, z, 4);
            if (s.termination != Termination::completed) continue;
            std::vector<std::size_t> seen;
            for (const auto& r : s.tangencies) seen.push_back(r.vertex);
            const Cell<Rational>* hit = nullptr;
            int hits = 0;
            for (const auto& c : cells)
                if (c.contains(z)) {
                    hit = &c;
                    ++hits;
                }
            REQUIRE(hits == 1);
            REQUIRE(hit->itinerary.vertices() == seen);
            REQUIRE(PointQ(s.points[4] - z) == hit->offset);
            ++compared;
        }
    }
}

TEST_CASE("measure_estimate examples") {
    const Table sq(unit_square());
    MeasureOptions o;
    o.samples = 200;
    o.seed = 42;
    const auto disk = SampleRegion::disk(PointF(0.5, -0.5), 0.1);
    const auto r = measure_estimate(sq, disk, o);
    CHECK(r.fraction == 1.0);
    CHECK(r.periodic == 200);
    // Oracle: the whole disk lies in the open cell of the corner itinerary.
    const auto cell = cell_for_itinerary(unit_square(), Itinerary({1, 2, 3, 0}), PointQ(-1, -1), PointQ(2, 2));
    for (int k = 0; k < 64; ++k) {
        const double a = 2 * M_PI * k / 64;
        CHECK(cell.contains(to_exact(PointF(0.5 + 0.1 * std::cos(a), -0.5 + 0.1 * std::sin(a)))));
    }

    MeasureOptions f;
    f.samples = 100000;
    f.tol = 1e-9;
    f.exact = false;
    const auto m = measure_estimate(Table(kite()), bounding_annulus(Table(kite())), f);
    CHECK(m.fraction == 0.0);
    CHECK(m.wilson_hi < 1e-4);

    o.samples = 0;
    CHECK_THROWS_AS(measure_estimate(sq, disk, o), std::invalid_argument);
}

TEST_CASE("measure_estimate is reproducible across worker counts") {
    MeasureOptions o;
    o.samples = 3000;
    o.seed = 9;
    o.exact = false;
    const Table sq(unit_square());
    const auto box = default_region(sq);
    setenv("OBL_THREADS", "1", 1);
    const auto a = measure_estimate(sq, SampleRegion::box(box.lo, box.hi), o);
    setenv("OBL_THREADS", "4", 1);
    const auto b = measure_estimate(sq, SampleRegion::box(box.lo, box.hi), o);
    unsetenv("OBL_THREADS");
    CHECK(a.periodic == b.periodic);
    CHECK(a.singular == b.singular);
    CHECK(a.fraction > 0.0);
    o.seed = 10;
    const auto c = measure_estimate(sq, SampleRegion::box(box.lo, box.hi), o);
    CHECK(c.periodic != a.periodic);
}

TEST_CASE("wilson interval") {
    const auto [lo, hi] = wilson_interval(0, 100000);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(3.8414 / (100000 + 3.8414)).epsilon(1e-3));
    const auto [l2, h2] = wilson_interval(50, 100);
    CHECK(l2 == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(h2 == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("refine_periodic_smooth on the circle") {
    const Ellipse circle(PointF(0, 0), 1, 1);
    const auto r = refine_periodic_smooth(circle, PointF(1.5, 0), 4);
    CHECK(r.residual <= 1e-9);
    // Oracle: 4 * 2 * acos(1/d) = 2 pi gives d = sqrt(2).
    CHECK(norm(r.point) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.degenerate);

    const auto s = refine_periodic_smooth(circle, PointF(std::sqrt(2.0), 0), 4);
    CHECK(s.residual <= 1e-12);
    CHECK(s.iterations == 0);
    CHECK(s.degenerate);

    CHECK_THROWS_AS(refine_periodic_smooth(circle, PointF(0.2, 0), 4), InteriorPoint);
}

TEST_CASE("refine_periodic_smooth on an ellipse never returns a non-periodic point") {
    const Ellipse e(PointF(0, 0), 2, 1);
    for (const PointF z0 : {PointF(30, 20), PointF(-50, 5), PointF(3, 0)}) {
        try {
            const auto r = refine_periodic_smooth(e, z0, 4);
            PointF w = r.point;
            for (int k = 0; k < 4; ++k) w = step(e, w);
            CHECK(norm(PointF(w - r.point)) <= 1e-9);
        } catch (const RefinementError&) {
            // Reported divergence is an allowed outcome.
        }
    }
}
