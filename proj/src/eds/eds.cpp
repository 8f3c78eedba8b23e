#include "obl/eds/eds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "obl/util/parallel.hpp"

namespace obl::eds {

namespace {

double edge_scale(const Quad& q) {
    double s = 0;
    for (std::size_t i = 0; i < 4; ++i) s = std::max(s, norm(q[i + 1] - q[i]));
    return s;
}

double tangent_scale(const Tangent& d) {
    double s = 0;
    for (const auto& p : d.dz) s = std::max(s, norm(p));
    return s;
}

Tangent difference(const Quad& p, const Quad& m, double inv) {
    Tangent out;
    for (std::size_t i = 0; i < 4; ++i) out.dz[i] = (p.z[i] - m.z[i]) * inv;
    return out;
}

// omega^i ^ omega^{i+1} on (a, b).
double omega_wedge(std::size_t i, const Quad& q, const Tangent& a, const Tangent& b) {
    return omega(i, q, a) * omega(i + 1, q, b) - omega(i, q, b) * omega(i + 1, q, a);
}

std::string at(double s, double t) {
    std::ostringstream os;
    os.precision(17);
    os << "(s, t) = (" << s << ", " << t << ")";
    return os.str();
}

void check_grid(const FamilyPatch& fp) {
    for (double s : fp.axis())
        for (double t : fp.axis())
            if (!nondegenerate(fp.config(s, t)))
                throw DegenerateQuad("degenerate quadrilateral in family at " + at(s, t));
}

// Midpoint family: z_k = z_k^0 + (-1)^k w, which is z_{k+1} = 2 zeta_k^0 - z_k
// written so that w = 0 returns the base point exactly.
Quad midpoint_config(const Quad& q0, PointF w) {
    Quad q;
    for (std::size_t k = 0; k < 4; ++k) q.z[k] = k % 2 == 0 ? q0.z[k] + w : q0.z[k] - w;
    return q;
}

Tangent alternating(PointF d) {
    return Tangent{{d, -d, d, -d}};
}

template <class F>
std::vector<F> per_grid_point(const FamilyPatch& fp, const std::function<F(double, double)>& body) {
    const auto ax = fp.axis();
    const std::size_t m = ax.size();
    std::vector<F> out(m * m);
    parallel_for(m * m, [&](std::size_t k) { out[k] = body(ax[k / m], ax[k % m]); });
    return out;
}

}  // namespace

bool nondegenerate(const Quad& q, double tol) {
    const double sc = edge_scale(q);
    if (!(sc > 0) || !std::isfinite(sc)) return false;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (norm(q[i] - q[j]) <= tol * sc) return false;
    for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(delta(q, i)) <= tol * sc * sc) return false;
    return true;
}

std::vector<double> FamilyPatch::axis() const {
    if (n <= 1) return {0.0};
    std::vector<double> ax(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ax[static_cast<std::size_t>(k)] = -radius + 2.0 * radius * k / (n - 1);
    return ax;
}

std::pair<Tangent, Tangent> FamilyPatch::fd_tangents(double s, double t, double h) const {
    const double inv = 1.0 / (2.0 * h);
    return {difference(config(s + h, t), config(s - h, t), inv),
            difference(config(s, t + h), config(s, t - h), inv)};
}

std::pair<Tangent, Tangent> FamilyPatch::tangents(double s, double t) const {
    if (derivatives) return derivatives(s, t);
    return fd_tangents(s, t, fd_step);
}

FamilyPatch midpoint_family(const Quad& q0, double r, int n) {
    if (!nondegenerate(q0)) throw DegenerateQuad("degenerate base quadrilateral");
    FamilyPatch fp;
    fp.radius = r;
    fp.n = n;
    fp.fd_step = n > 1 ? 2.0 * r / (n - 1) : 1e-4;
    fp.config = [q0](double s, double t) { return midpoint_config(q0, PointF(s, t)); };
    fp.derivatives = [](double, double) {
        return std::pair<Tangent, Tangent>{alternating(PointF(1.0, 0.0)), alternating(PointF(0.0, 1.0))};
    };
    check_grid(fp);
    return fp;
}

FamilyPatch warped_midpoint_family(const Quad& q0, double r, int n, double fd_step) {
    if (!nondegenerate(q0)) throw DegenerateQuad("degenerate base quadrilateral");
    FamilyPatch fp;
    fp.radius = r;
    fp.n = n;
    fp.fd_step = fd_step;
    fp.config = [q0](double s, double t) { return midpoint_config(q0, PointF(s + s * s / 2 + s * s * s / 6, t + s * t / 2)); };
    fp.derivatives = [](double s, double t) {
        return std::pair<Tangent, Tangent>{alternating(PointF(1.0 + s + s * s / 2, t / 2)),
                                           alternating(PointF(0.0, 1.0 + s / 2))};
    };
    check_grid(fp);
    return fp;
}

double family_residual(const FamilyPatch& fp) {
    const auto vals = per_grid_point<double>(fp, [&](double s, double t) {
        const Quad q = fp.config(s, t);
        const auto [a, b] = fp.tangents(s, t);
        double m = 0;
        for (std::size_t i = 0; i < 4; ++i) m = std::max({m, std::abs(theta(i, q, a)), std::abs(theta(i, q, b))});
        return m;
    });
    return *std::max_element(vals.begin(), vals.end());
}

namespace {

StructureResiduals point_residuals(const FamilyPatch& fp, double s, double t, double two_s0) {
    StructureResiduals r;
    const Quad q = fp.config(s, t);
    const auto [a, b] = fp.tangents(s, t);
    const auto d = deltas(q);

    std::array<double, 4> dxdy{}, ratio{};
    for (std::size_t i = 0; i < 4; ++i) {
        dxdy[i] = cross(a[i], b[i]);
        ratio[i] = omega_wedge(i, q, a, b) / d[i];
    }
    for (std::size_t i = 0; i < 4; ++i) {
        r.dtheta = std::max(r.dtheta, std::abs(dxdy[i] - dxdy[0]));
        r.rel = std::max(r.rel, std::abs(ratio[i] - ratio[0]));
        r.area = std::max(r.area, std::abs(dxdy[(i + 1) % 4] + ratio[i]));
    }

    const double h = fp.fd_step;
    for (std::size_t i = 0; i < 4; ++i) {
        auto om_s = [&](double ss, double tt) { return omega(i, fp.config(ss, tt), fp.tangents(ss, tt).first); };
        auto om_t = [&](double ss, double tt) { return omega(i, fp.config(ss, tt), fp.tangents(ss, tt).second); };
        const double dom = (om_t(s + h, t) - om_t(s - h, t)) / (2 * h) - (om_s(s, t + h) - om_s(s, t - h)) / (2 * h);
        r.domega = std::max(r.domega, std::abs(dom - 4.0 * ratio[i]));
    }

    r.area_integral = std::max(std::abs(d[0] + d[2] - two_s0), std::abs(d[1] + d[3] - two_s0));
    return r;
}

}  // namespace

StructureResiduals structure_residuals(const FamilyPatch& fp) {
    const double two_s0 = 2.0 * area(fp.config(0.0, 0.0));
    const auto vals = per_grid_point<StructureResiduals>(
        fp, [&](double s, double t) { return point_residuals(fp, s, t, two_s0); });
    StructureResiduals out;
    for (const auto& r : vals) {
        out.dtheta = std::max(out.dtheta, r.dtheta);
        out.rel = std::max(out.rel, r.rel);
        out.domega = std::max(out.domega, r.domega);
        out.area = std::max(out.area, r.area);
        out.area_integral = std::max(out.area_integral, r.area_integral);
    }
    return out;
}

const char* to_string(ElementCase c) {
    switch (c) {
        case ElementCase::generic: return "generic";
        case ElementCase::deg_omega13: return "deg_omega13";
        case ElementCase::deg_D: return "deg_D";
    }
    return "?";
}

IntegralElement integral_element(const Quad& q, const Tangent& a, const Tangent& b, double theta_tol,
                                 double degeneracy) {
    const double sc = edge_scale(q);
    const double ta = tangent_scale(a), tb = tangent_scale(b);
    for (std::size_t i = 0; i < 4; ++i) {
        const double ra = std::abs(theta(i, q, a)), rb = std::abs(theta(i, q, b));
        if (ra > theta_tol * sc * ta || rb > theta_tol * sc * tb) {
            std::ostringstream os;
            os << "directions are not annihilated by theta^" << (i + 1) << " (|theta| = " << std::max(ra, rb) << ")";
            throw NotIntegral(os.str());
        }
    }
    const auto d = deltas(q);
    const auto wa = omegas(q, a), wb = omegas(q, b);

    IntegralElement e;
    e.D = d[1] * d[3] - d[0] * d[2];
    e.omega13 = wa[0] * wb[2] - wb[0] * wa[2];
    const double sc4 = sc * sc * sc * sc;
    if (std::abs(e.D) <= degeneracy * sc4) {
        e.tag = ElementCase::deg_D;
    } else if (std::abs(e.omega13) <= degeneracy * sc * sc * ta * tb) {
        e.tag = ElementCase::deg_omega13;
    }
    if (e.tag != ElementCase::generic) {
        e.v = e.u = e.fit_residual = e.wedge2413_residual = std::numeric_limits<double>::quiet_NaN();
        return e;
    }

    // Rows (coefficient of v, measured value), two per direction.
    std::array<std::pair<double, double>, 4> rows;
    std::size_t k = 0;
    for (const auto* w : {&wa, &wb}) {
        rows[k++] = {d[1] * (*w)[0] + d[0] * (*w)[2], (*w)[1]};
        rows[k++] = {-(d[2] * (*w)[0] + d[3] * (*w)[2]), (*w)[3]};
    }
    double num = 0, den = 0;
    for (const auto& [c, y] : rows) {
        num += c * y;
        den += c * c;
    }
    e.v = num / den;
    e.u = e.v * (d[1] - d[2]);
    e.fit_residual = 0;
    for (const auto& [c, y] : rows) e.fit_residual = std::max(e.fit_residual, std::abs(c * e.v - y));
    const double w24 = wa[1] * wb[3] - wb[1] * wa[3];
    e.wedge2413_residual = std::abs(w24 + e.v * e.v * e.D * e.omega13);
    return e;
}

std::pair<double, double> theta56(const Quad& q, const Tangent& d) {
    const auto D = deltas(q);
    const auto w = omegas(q, d);
    return {D[1] * w[0] + (D[2] - D[1]) * w[1] + D[0] * w[2], D[2] * w[0] + D[3] * w[2] + (D[1] - D[2]) * w[3]};
}

std::array<std::array<double, 8>, 2> theta56_coefficients(const Quad& q) {
    const auto D = deltas(q);
    return {{{0, 0, 0, 0, D[1], D[2] - D[1], D[0], 0}, {0, 0, 0, 0, D[2], 0, D[3], D[1] - D[2]}}};
}

int rank2x8(const std::array<std::array<double, 8>, 2>& m, double tol) {
    double n0 = 0, n1 = 0, big = 0;
    for (std::size_t j = 0; j < 8; ++j) {
        n0 += m[0][j] * m[0][j];
        n1 += m[1][j] * m[1][j];
        big = std::max({big, std::abs(m[0][j]), std::abs(m[1][j])});
    }
    if (big == 0) return 0;
    // Largest 2x2 minor against the product of row norms.
    double minor = 0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = i + 1; j < 8; ++j)
            minor = std::max(minor, std::abs(m[0][i] * m[1][j] - m[0][j] * m[1][i]));
    return minor > tol * std::sqrt(n0 * n1) ? 2 : 1;
}

double tangency_direction(const Quad& q, const Tangent& d, std::size_t i, double tol) {
    const PointF seg = q[i + 1] - q[i];
    const PointF m = (d[i] + d[i + 1]) * 0.5;
    const double len2 = dot(seg, seg);
    if (!(len2 > 0)) throw DegenerateQuad("segment " + std::to_string(i % 4 + 1) + " has zero length");
    const double th = theta(i, q, d);
    if (std::abs(th) > tol * std::sqrt(len2) * std::max(norm(m), std::sqrt(len2))) {
        std::ostringstream os;
        os << "midpoint velocity of segment " << (i % 4 + 1) << " is not parallel to it (theta = " << th << ")";
        throw NotIntegral(os.str());
    }
    return dot(m, seg) / len2;
}

namespace {

std::array<double, 2> ddelta_rhs(const Quad& q, const Tangent& d, double v) {
    const auto D = deltas(q);
    const auto w = omegas(q, d);
    const double r1 = D[2] / D[3] * (1 - v * (D[0] + D[3])) * w[0] + D[0] / D[1] * (-1 - v * (D[1] + D[2])) * w[2];
    const double r2 = D[1] / D[0] * (1 + v * (D[0] + D[3])) * w[0] + D[3] / D[2] * (-1 + v * (D[1] + D[2])) * w[2];
    return {r1, r2};
}

}  // namespace

DdeltaResidual ddelta_check(const FamilyPatch& fp) {
    const double h = fp.fd_step;
    const auto vals = per_grid_point<DdeltaResidual>(fp, [&](double s, double t) {
        DdeltaResidual r;
        const Quad q = fp.config(s, t);
        const auto [a, b] = fp.tangents(s, t);
        const IntegralElement ie = integral_element(q, a, b, std::numeric_limits<double>::infinity());
        if (ie.tag != ElementCase::generic) {
            r.skipped = 1;
            return r;
        }
        const Quad sp = fp.config(s + h, t), sm = fp.config(s - h, t);
        const Quad tp = fp.config(s, t + h), tm = fp.config(s, t - h);
        const auto ra = ddelta_rhs(q, a, ie.v), rb = ddelta_rhs(q, b, ie.v);
        for (std::size_t k = 0; k < 2; ++k) {
            const double fa = (delta(sp, k) - delta(sm, k)) / (2 * h);
            const double fb = (delta(tp, k) - delta(tm, k)) / (2 * h);
            const double res = std::max(std::abs(fa - ra[k]), std::abs(fb - rb[k]));
            (k == 0 ? r.ddelta1 : r.ddelta2) = res;
        }
        return r;
    });
    DdeltaResidual out;
    for (const auto& r : vals) {
        out.ddelta1 = std::max(out.ddelta1, r.ddelta1);
        out.ddelta2 = std::max(out.ddelta2, r.ddelta2);
        out.skipped += r.skipped;
    }
    return out;
}

std::string family_report_json(const FamilyPatch& fp) {
    using nlohmann::ordered_json;
    struct Row {
        double theta = 0;
        StructureResiduals st;
        IntegralElement ie;
        bool integral = true;
    };
    const double two_s0 = 2.0 * area(fp.config(0.0, 0.0));
    const auto rows = per_grid_point<Row>(fp, [&](double s, double t) {
        Row r;
        const Quad q = fp.config(s, t);
        const auto [a, b] = fp.tangents(s, t);
        for (std::size_t i = 0; i < 4; ++i)
            r.theta = std::max({r.theta, std::abs(theta(i, q, a)), std::abs(theta(i, q, b))});
        r.st = point_residuals(fp, s, t, two_s0);
        try {
            r.ie = integral_element(q, a, b);
        } catch (const NotIntegral&) {
            r.integral = false;
        }
        return r;
    });

    auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
    ordered_json j;
    j["grid"] = {{"radius", fp.radius}, {"n", fp.n}, {"fd_step", fp.fd_step}};
    j["s"] = fp.axis();
    j["t"] = fp.axis();
    ordered_json th = ordered_json::array(), dth = th, rel = th, dom = th, ar = th, ai = th, v = th, u = th, tag = th;
    double worst = 0;
    for (const auto& r : rows) {
        th.push_back(r.theta);
        dth.push_back(r.st.dtheta);
        rel.push_back(r.st.rel);
        dom.push_back(r.st.domega);
        ar.push_back(r.st.area);
        ai.push_back(r.st.area_integral);
        v.push_back(r.integral ? num(r.ie.v) : ordered_json(nullptr));
        u.push_back(r.integral ? num(r.ie.u) : ordered_json(nullptr));
        tag.push_back(r.integral ? to_string(r.ie.tag) : "not-integral");
        worst = std::max(worst, r.theta);
    }
    j["theta_residual_max"] = worst;
    j["residuals"] = {{"theta", th}, {"dtheta", dth}, {"rel", rel}, {"domega", dom}, {"area", ar},
                      {"area_integral", ai}};
    j["v"] = v;
    j["u"] = u;
    j["case"] = tag;
    return j.dump(2);
}

}  // namespace obl::eds
