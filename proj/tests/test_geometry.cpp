#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obl/geometry/convex.hpp"
#include "obl/geometry/tangency.hpp"

using namespace obl;
using cas::ratio;

namespace {

PolygonQ unit_square() {
    return PolygonQ({PointQ(0, 0), PointQ(1, 0), PointQ(1, 1), PointQ(0, 1)});
}

PointQ q(long x, long dx, long y, long dy) { return PointQ(ratio(x, dx), ratio(y, dy)); }

/// Oracle for the left-tangency predicate: brute force over all vertices.
template <class T>
bool all_left(const Polygon<T>& p, const Point<T>& z, std::size_t j) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (k != j && !(cross(Point<T>(p[j] - z), Point<T>(p[k] - z)) > 0)) return false;
    return true;
}

}  // namespace

TEST_CASE("load_table accepts the unit square in both modes") {
    auto exact = load_table(R"({"type":"polygon","vertices":[["0","0"],["1","0"],["1","1"],["0","1"]]})");
    REQUIRE(std::holds_alternative<PolygonQ>(exact.table));
    CHECK(std::get<PolygonQ>(exact.table).size() == 4);
    auto flt = load_table(R"({"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]})");
    CHECK(std::holds_alternative<PolygonF>(flt.table));
    auto ell = load_table(R"({"type":"ellipse","center":[0,0],"semi_axes":[2,1]})");
    REQUIRE(std::holds_alternative<Ellipse>(ell.table));
    CHECK(std::get<Ellipse>(ell.table).a == 2.0);
}

TEST_CASE("load_table rejections") {
    try {
        load_table(R"({"type":"polygon","vertices":[[0,0],[2,0],[1,0.1],[0,1]]})");
        FAIL("reflex vertex accepted");
    } catch (const ConvexityError& e) {
        CHECK(e.vertex() == 2);
    }
    CHECK_THROWS_AS(load_table(R"({"type":"polygon","vertices":[["0","0"],[1,0],[1,1]]})"), TableParseError);
    CHECK_THROWS_AS(load_table(R"({"type":"polygon","vertices":[[0,0],[1,0],[1,0],[0,1]]})"), ConvexityError);
    CHECK_THROWS_AS(load_table(R"({"type":"polygon","vertices":[[0,0],[1,0],[2,0],[0,1]]})"), ConvexityError);
    CHECK_THROWS_AS(load_table(R"({"type":"ellipse","center":[0,0],"semi_axes":[2,0]})"), GeometryError);
    CHECK_THROWS_AS(load_table(R"({"type":"polygon","vertices":[[0,0],[1,0]]})"), ConvexityError);
    CHECK_THROWS_AS(load_table("{not json"), TableParseError);
    CHECK_THROWS_AS(load_table(R"({"type":"circle"})"), TableParseError);
    CHECK_THROWS_AS(load_table(R"({"type":"polygon","vertices":[["1/0","0"],["1","0"],["0","1"]]})"),
                    TableParseError);

    const char* cw = R"({"type":"polygon","vertices":[[0,0],[0,1],[1,1],[1,0]]})";
    CHECK_THROWS_AS(load_table(cw), ConvexityError);
    auto fixed = load_table(cw, LoadOptions{true});
    CHECK(fixed.reoriented);
    CHECK(all_left(std::get<PolygonF>(fixed.table), PointF(0.3, -0.4), 0));
}

TEST_CASE("a pentagram winds twice and is rejected") {
    std::vector<PointF> star;
    for (int k = 0; k < 5; ++k) {
        const double a = 2 * M_PI * (2 * k) / 5.0;
        star.emplace_back(std::cos(a), std::sin(a));
    }
    CHECK_THROWS_AS(PolygonF{star}, ConvexityError);
}

TEST_CASE("table JSON round trip") {
    const auto t = load_table(R"({"type":"polygon","vertices":[["0","0"],["3/2","0"],["1","1"]]})").table;
    const auto back = load_table(table_to_json(t)).table;
    CHECK(std::get<PolygonQ>(back).vertices() == std::get<PolygonQ>(t).vertices());
}

TEST_CASE("tangency on the unit square") {
    const auto sq = unit_square();
    auto r = tangency(sq, q(3, 10, -2, 5));
    CHECK(r.tau == PointQ(1, 0));
    CHECK(r.vertex == 1);
    CHECK_FALSE(r.singular);
    r = tangency(sq, q(17, 10, 2, 5));
    CHECK(r.tau == PointQ(1, 1));

    // Behind the edge (0,0)->(1,0): both of its endpoints are supporting.
    r = tangency(sq, PointQ(-1, 0));
    CHECK(r.singular);
    CHECK(r.other_vertex.has_value());
    // Beyond (1,0) along the same edge only (1,1) supports with the table on the left.
    r = tangency(sq, PointQ(2, 0));
    CHECK_FALSE(r.singular);
    CHECK(r.tau == PointQ(1, 1));

    CHECK_THROWS_AS(tangency(sq, q(1, 2, 1, 2)), InteriorPoint);
    CHECK_THROWS_AS(tangency(sq, q(1, 2, 0, 1)), InteriorPoint);
}

TEST_CASE("non-singular tangency leaves every other vertex strictly left") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> coord(-300, 400);
    const PolygonQ hex({PointQ(0, 0), PointQ(2, 0), PointQ(3, 1), PointQ(2, 3), PointQ(0, 3), PointQ(-1, 1)});
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const PointQ z(ratio(coord(rng), 50), ratio(coord(rng), 50));
        try {
            const auto r = tangency(hex, z);
            if (r.singular) continue;
            REQUIRE(all_left(hex, z, r.vertex));
            ++checked;
        } catch (const InteriorPoint&) {
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("tangency is equivariant under orientation-preserving affine maps") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-9, 9);
    const auto sq = unit_square();
    int maps = 0;
    while (maps < 100) {
        const Rational a = c(rng), b = c(rng), cc = c(rng), d = c(rng);
        if (a * d - b * cc <= 0) continue;
        ++maps;
        const PointQ t(ratio(c(rng), 7), ratio(c(rng), 3));
        auto A = [&](const PointQ& p) { return PointQ(Rational(a * p.x + b * p.y + t.x), Rational(cc * p.x + d * p.y + t.y)); };
        std::vector<PointQ> img;
        for (const auto& v : sq.vertices()) img.push_back(A(v));
        const PolygonQ sq2(img);
        for (int k = 0; k < 20; ++k) {
            const PointQ z(ratio(c(rng), 2), ratio(c(rng), 2));
            try {
                const auto r1 = tangency(sq, z);
                const auto r2 = tangency(sq2, A(z));
                REQUIRE(r1.singular == r2.singular);
                if (!r1.singular) REQUIRE(r1.vertex == r2.vertex);
            } catch (const InteriorPoint&) {
                CHECK_THROWS_AS(tangency(sq2, A(z)), InteriorPoint);
            }
        }
    }
}

TEST_CASE("rational and float tangency agree away from singular lines") {
    const PolygonQ quad({PointQ(0, 0), PointQ(2, 0), PointQ(3, 2), PointQ(0, 1)});
    const PolygonF quadf = to_float(quad);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4, 6);
    const double diam = quadf.diameter();
    int compared = 0;
    for (int i = 0; i < 3000; ++i) {
        const PointF zf(u(rng), u(rng));
        // Distance from every edge line must exceed 1e-6 * diameter.
        bool near = false;
        for (std::size_t k = 0; k < 4; ++k) {
            const PointF e = quadf[k + 1] - quadf[k];
            if (std::abs(cross(e, PointF(zf - quadf[k]))) / norm(e) <= 1e-6 * diam) near = true;
        }
        if (near) continue;
        try {
            const auto rq = tangency(quad, to_exact(zf));
            const auto rf = tangency(quadf, zf);
            REQUIRE(rq.vertex == rf.vertex);
            ++compared;
        } catch (const InteriorPoint&) {
        }
    }
    CHECK(compared > 2000);
}

TEST_CASE("ellipse_tangency on the unit circle") {
    const Ellipse circle(PointF(0, 0), 1, 1);
    // Oracle: tangent from (d,0) touches at angle acos(1/d) on the left side.
    auto r = ellipse_tangency(circle, PointF(2, 0));
    CHECK(r.kind == TangencyKind::smooth);
    CHECK(r.tau.x == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(r.tau.y == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));
    r = ellipse_tangency(circle, PointF(0, 2));
    CHECK(r.tau.x == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(1e-13));
    CHECK(r.tau.y == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(ellipse_tangency(circle, PointF(0.5, 0)), InteriorPoint);
}

TEST_CASE("ellipse tangency satisfies the tangency and left conditions") {
    const Ellipse e(PointF(0.5, -1), 2, 1);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI), rad(1.01, 20);
    for (int i = 0; i < 500; ++i) {
        const double t = ang(rng), s = rad(rng);
        const PointF z(e.center.x + s * e.a * std::cos(t), e.center.y + s * e.b * std::sin(t));
        const auto r = ellipse_tangency(e, z);
        const PointF d = r.tau - z;
        REQUIRE(std::abs(cross(d, e.tangent(r.parameter))) <= 1e-9 * norm(d) * norm(e.tangent(r.parameter)));
        // The center, an interior point, must be left of z -> tau.
        REQUIRE(cross(d, PointF(e.center - z)) > 0);
    }
}

TEST_CASE("parallelogram_corners") {
    const auto sq = parallelogram_corners(unit_square());
    REQUIRE(sq.size() == 1);
    CHECK(sq[0] == std::array<std::size_t, 4>{0, 1, 2, 3});

    const PolygonQ quad({PointQ(0, 0), PointQ(2, 0), PointQ(3, 2), PointQ(0, 1)});
    CHECK(parallelogram_corners(quad).empty());

    std::vector<PointF> hex;
    for (int k = 0; k < 6; ++k) hex.emplace_back(std::cos(k * M_PI / 3), std::sin(k * M_PI / 3));
    const auto h = parallelogram_corners(PolygonF(hex));
    // Oracle: choose two of the three antipodal pairs.
    CHECK(h.size() == 3);
    for (const auto& t : h) {
        const PointF s = PointF(hex[t[0]] + hex[t[2]]) - hex[t[1]] - hex[t[3]];
        CHECK(norm(s) < 1e-12);
    }
}

TEST_CASE("halfplane clipping") {
    const auto box = box_polygon(PointQ(-1, -1), PointQ(1, 1));
    CHECK(polygon_area(box) == 4);
    const auto half = clip(box, HalfPlane<Rational>{1, 0, 0});
    CHECK(polygon_area(half) == 2);
    const auto none = clip(half, HalfPlane<Rational>{-1, 0, -2});
    CHECK(none.empty());
    const auto seg = clip_segment(PointQ(-2, 0), PointQ(2, 0), box_halfplanes(PointQ(-1, -1), PointQ(1, 1)));
    REQUIRE(seg.has_value());
    CHECK(seg->first == PointQ(-1, 0));
    CHECK(seg->second == PointQ(1, 0));
    CHECK_FALSE(clip_segment(PointQ(-2, 5), PointQ(2, 5), box_halfplanes(PointQ(-1, -1), PointQ(1, 1))).has_value());
}
