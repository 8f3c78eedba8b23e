#include "obl/verify/verify.hpp"

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace obl::verify {

using cas::Context;
using nlohmann::ordered_json;

namespace {

struct Deltas {
    RationalFunction D1, D2, D3, D4, S;
};

Deltas substituted(const Context& ctx) {
    const auto D1 = ctx.var("D1"), D2 = ctx.var("D2"), S = ctx.var("S");
    return {D1, D2, ctx.num(2) * S - D1, ctx.num(2) * S - D2, S};
}

RationalFunction swap12(const RationalFunction& f, const Context& ctx) {
    return f.substitute({{"D1", ctx.var("D2")}, {"D2", ctx.var("D1")}});
}

std::string str(const RationalFunction& f) { return f.to_string(); }

ordered_json terms_json(const Polynomial& p) {
    ordered_json out = ordered_json::array();
    const auto& names = p.vars()->names();
    for (const auto& [m, c] : p.terms()) {
        ordered_json e = ordered_json::object();
        for (std::size_t i = 0; i < names.size(); ++i)
            if (m[i] != 0) e[names[i]] = m[i];
        out.push_back({{"coefficient", cas::to_string(c)}, {"exponents", e}});
    }
    return out;
}

using Matrix2 = std::array<std::array<RationalFunction, 2>, 2>;

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    Matrix2 out{{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
                 {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
    return out;
}

RationalFunction det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

bool is_identity(const Matrix2& m) {
    return m[0][0].is_constant() && m[0][0].constant_value() == 1 && m[1][1].is_constant() &&
           m[1][1].constant_value() == 1 && m[0][1].is_zero() && m[1][0].is_zero();
}

}  // namespace

FactorizationResult verify_D_factorization() {
    const Context ctx({"D1", "D2", "S"});
    const auto d = substituted(ctx);
    FactorizationResult r{false, ctx.num(0), 0, false};
    const auto D = d.D2 * d.D4 - d.D1 * d.D3;
    r.difference = D - (d.D1 - d.D2) * (d.D2 - d.D3);
    r.ok = r.difference.is_zero();
    r.spot = D.eval(std::map<std::string, Rational>{{"D1", 2}, {"D2", 5}, {"S", 4}});

    const Context free({"D1", "D2", "D3", "D4"});
    const auto f1 = free.var("D1"), f2 = free.var("D2"), f3 = free.var("D3"), f4 = free.var("D4");
    r.needs_substitution = !(f2 * f4 - f1 * f3 - (f1 - f2) * (f2 - f3)).is_zero();
    return r;
}

DuCoefficients build_ab() {
    Context ctx({"D1", "D2", "S", "u"});
    const auto d = substituted(ctx);
    const auto one = ctx.num(1);
    const auto q = d.S / (d.D2 - d.D3);
    const auto D = d.D2 * d.D4 - d.D1 * d.D3;
    DuCoefficients ab{ctx, ctx.num(0), ctx.num(0), ctx.num(0), ctx.num(0)};
    ab.a1 = d.D4 / d.D1 * (one + q) + d.D2 / d.D3 * (-one + q);
    ab.a2 = d.D1 / d.D4 * (-one + q) + d.D3 / d.D2 * (one + q);
    ab.b1 = (d.D4 / d.D1 * (d.D1 + d.D2) * (d.S + d.D2 - d.D3) - d.D2 / d.D3 * (d.D3 + d.D4) * (d.S - d.D2 + d.D3)) / D;
    ab.b2 = (d.D1 / d.D4 * (d.D3 + d.D4) * (d.S - d.D2 + d.D3) - d.D3 / d.D2 * (d.D1 + d.D2) * (d.S + d.D2 - d.D3)) / D;
    return ab;
}

const char* to_string(Convention c) { return c == Convention::printed_signs ? "printed-signs" : "rederived-signs"; }

Polynomial printed_polynomial(const Context& ctx) {
    return ctx
        .parse("-D1^4 + 4*D1^3*S + 5*D1^2*D2^2 - 10*D1^2*D2*S - 3*D1^2*S^2 + 20*D1*D2*S^2"
               " - 2*D1*S^3 - 10*D1*D2^2*S - 2*S^3*D2 - D2^4 + 4*D2^3*S - 3*D2^2*S^2")
        .numerator();
}

CompatibilityReport compatibility_polynomial(Convention c) {
    const auto ab = build_ab();
    const auto& ctx = ab.ctx;
    const auto d = substituted(ctx);
    const auto u = ctx.var("u");
    const auto K = (ab.a2 * ab.b1 - ab.a1 * ab.b2) / (ctx.num(8) * d.S);
    // The u slot keeps "+" in both conventions; they differ in the constant slot.
    const auto s2 = c == Convention::printed_signs ? ctx.num(1) : ctx.num(-1);

    CompatibilityReport r{c, ctx.num(0), false, std::nullopt, false};
    r.E = u * (ab.a1.partial("D2") - ab.a2.partial("D1") + K) + ab.b1.partial("D2") - ab.b2.partial("D1") + s2 * K;

    const Polynomial u1 = (u - ctx.num(1)).numerator();
    r.u_minus_1_divides = !r.E.is_zero() && divide_exact(r.E.numerator(), u1).has_value();
    if (r.u_minus_1_divides) {
        const auto D = d.D2 * d.D4 - d.D1 * d.D3;
        const auto cleared = r.E * d.D1 * d.D2 * d.D3 * d.D4 * D / (d.S * (u - ctx.num(1)));
        if (cleared.is_polynomial()) {
            Polynomial p = cleared.numerator() * (Rational(1) / cleared.denominator().constant_value());
            r.match = p == printed_polynomial(ctx);
            r.cleared = std::move(p);
        }
    }
    return r;
}

CompatibilityReport matching_compatibility() {
    for (Convention c : {Convention::printed_signs, Convention::rederived_signs}) {
        auto r = compatibility_polynomial(c);
        if (r.match) return r;
    }
    throw VerifyError("no sign convention reproduces the printed compatibility polynomial");
}

ThreePeriodResult three_period_check() {
    const Context ctx({"S"});
    using Form = std::array<RationalFunction, 2>;  // coefficients on (omega^1, omega^2)
    auto wedge = [](const Form& x, const Form& y) { return x[0] * y[1] - x[1] * y[0]; };
    const Form w1{ctx.num(1), ctx.num(0)}, w2{ctx.num(0), ctx.num(1)};
    const RationalFunction W = wedge(w1, w2);

    // Unknown omega^3 = a omega^1 + b omega^2. The constraints
    // omega^2 ^ omega^3 = W and omega^3 ^ omega^1 = W are linear in (a, b);
    // their matrix is read off at the unit vectors.
    const std::array<std::function<RationalFunction(const Form&)>, 2> lhs{
        [&](const Form& f) { return wedge(w2, f); }, [&](const Form& f) { return wedge(f, w1); }};
    Matrix2 A{{{ctx.num(0), ctx.num(0)}, {ctx.num(0), ctx.num(0)}}};
    for (std::size_t k = 0; k < 2; ++k) {
        A[k][0] = lhs[k](w1);
        A[k][1] = lhs[k](w2);
    }

    ThreePeriodResult r{ctx.num(0), ctx.num(0), det(A), ctx.num(0), false};
    if (r.determinant.is_zero()) return r;
    r.a = (W * A[1][1] - A[0][1] * W) / r.determinant;
    r.b = (A[0][0] * W - W * A[1][0]) / r.determinant;

    // omega^1 + omega^2 + omega^3 = (1 + a) omega^1 + (1 + b) omega^2.
    const auto one = ctx.num(1);
    const bool sum_vanishes = (one + r.a).is_zero() && (one + r.b).is_zero();
    // Each d omega^i = (3/S) W, so d(omega^1 + omega^2 + omega^3) = (9/S) W.
    const auto dw = ctx.num(3) / ctx.var("S");
    r.obstruction = (dw + dw + dw) * W;
    r.ok = sum_vanishes && r.a == -one && r.b == -one && !r.obstruction.is_zero();
    return r;
}

std::vector<DegenerateBranch> degenerate_case_check() {
    std::vector<DegenerateBranch> out;
    const Context free({"D1", "D2", "D3", "D4", "v"});
    const auto D1 = free.var("D1"), D2 = free.var("D2"), D3 = free.var("D3"), D4 = free.var("D4"), v = free.var("v");
    const auto one = free.num(1);
    const auto D = D2 * D4 - D1 * D3;

    {
        // b2 = -D4/D1 and b2 = -D3/D2.
        const auto diff = (-D4 / D1) - (-D3 / D2);
        const bool ok = diff == -D / (D1 * D2);
        out.push_back({"b2-expressions", ok, "-D4/D1 + D3/D2 = -(D2 D4 - D1 D3)/(D1 D2)"});
    }
    {
        const Context ctx({"D1", "D2", "S"});
        const auto d = substituted(ctx);
        const auto Dsub = d.D2 * d.D4 - d.D1 * d.D3;
        const bool dzero = Dsub == (d.D1 - d.D2) * (d.D1 - d.D4);
        const bool expanded = Dsub == (d.D1 - d.D2) * (d.D1 + d.D2 - ctx.num(2) * d.S);
        out.push_back({"D-factorization", dzero && expanded,
                       "D2 D4 - D1 D3 = (D1 - D2)(D1 - D4) = +(D1 - D2)(D1 + D2 - 2S)"});
        const auto lhs = (d.D3 - d.D4).substitute({{"D2", ctx.var("D1")}});
        out.push_back({"D1=D2 implies D3=D4", lhs.is_zero(), "D3 - D4 vanishes after D2 -> D1"});
    }

    // dDelta_1, dDelta_2 as coefficient pairs on (omega^1, omega^3).
    const std::array<RationalFunction, 2> dd1{D3 / D4 * (one - v * (D1 + D4)), D1 / D2 * (-one - v * (D2 + D3))};
    const std::array<RationalFunction, 2> dd2{D2 / D1 * (one + v * (D1 + D4)), D4 / D3 * (-one + v * (D2 + D3))};
    {
        // D1 = D2 (so D3 = D4) on an open set: dDelta_1 - dDelta_2 = 0.
        const std::map<std::string, RationalFunction> sub{{"D2", D1}, {"D4", D3}};
        const auto c1 = (dd1[0] - dd2[0]).substitute(sub), c3 = (dd1[1] - dd2[1]).substitute(sub);
        const auto expect = free.num(-2) * v * (D1 + D3);
        const bool ok = c1 == expect && c3 == expect;
        out.push_back({"D1=D2 forces v(D1+D4)=0", ok,
                       "dDelta1 - dDelta2 = -2 v (D1 + D4) (omega^1 + omega^3) with D2 = D1, D4 = D3"});
    }
    {
        // D1 = D4 (so D2 = D3): dDelta_1 + dDelta_2 = d(D1 - D4) = 0.
        const std::map<std::string, RationalFunction> sub{{"D4", D1}, {"D3", D2}};
        const auto c1 = (dd1[0] + dd2[0]).substitute(sub), c3 = (dd1[1] + dd2[1]).substitute(sub);
        const bool ok = c1 == free.num(2) * D2 / D1 && c3 == free.num(-2) * D1 / D2;
        out.push_back({"D1=D4 contradiction", ok,
                       "dDelta1 + dDelta2 = 2 (D2/D1) omega^1 - 2 (D1/D2) omega^3, never zero"});
    }
    return out;
}

InversionResult invert_delta_forms() {
    const Context ctx({"D1", "D2", "S", "u"});
    const auto d = substituted(ctx);
    const auto u = ctx.var("u");
    const auto D = d.D2 * d.D4 - d.D1 * d.D3;
    const auto v = u / (d.D2 - d.D3);
    const auto Dv = D * v;
    const auto s8 = ctx.num(8) * d.S;

    // dDelta^k = M[k][0] omega^2 + M[k][1] omega^4.
    const Matrix2 M{{{d.D3 / (d.D2 * Dv) * (d.D1 + d.D2 - Dv), d.D1 / (d.D4 * Dv) * (d.D3 + d.D4 + Dv)},
                     {d.D4 / (d.D1 * Dv) * (d.D1 + d.D2 + Dv), d.D2 / (d.D3 * Dv) * (d.D3 + d.D4 - Dv)}}};
    // omega^2 = N[0][0] dDelta^1 + N[0][1] dDelta^2; omega^4 likewise.
    const Matrix2 N{{{-(d.D2 / d.D3) * (d.D3 + d.D4 - Dv) / s8, d.D1 / d.D4 * (d.D3 + d.D4 + Dv) / s8},
                     {d.D4 / d.D1 * (d.D1 + d.D2 + Dv) / s8, -(d.D3 / d.D2) * (d.D1 + d.D2 - Dv) / s8}}};

    InversionResult r{false, false, false, false, ctx.num(0), ctx.num(0)};
    r.product_identity = is_identity(multiply(N, M));
    r.reverse_identity = is_identity(multiply(M, N));
    r.det_del_om = det(M);
    r.det_om_delta = det(N);
    r.determinants_reciprocal = r.det_del_om * r.det_om_delta == ctx.num(1);

    const std::map<std::string, Rational> at{{"D1", 2}, {"D2", 5}, {"S", 4}, {"u", 3}};
    std::array<std::array<Rational, 2>, 2> m, n;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m[i][j] = M[i][j].eval(at);
            n[i][j] = N[i][j].eval(at);
        }
    bool spot = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Rational e = Rational(n[i][0] * m[0][j] + n[i][1] * m[1][j]);
            spot = spot && e == (i == j ? 1 : 0);
        }
    r.spot_identity = spot;
    return r;
}

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

std::string VerifyReport::to_json() const {
    ordered_json j;
    j["conventions"] = {{"substitution", "D3 = 2S - D1, D4 = 2S - D2"},
                        {"partials", "d/dD1 and d/dD2 with S held fixed, after substitution"}};
    ordered_json list = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json e;
        e["name"] = c.name;
        e["status"] = c.pass ? "pass" : "fail";
        const ordered_json fields = ordered_json::parse(c.json);
        for (const auto& [k, v] : fields.items()) e[k] = v;
        list.push_back(e);
    }
    j["checks"] = list;
    j["all_pass"] = all_pass();
    return j.dump(2);
}

namespace {

CheckEntry factorization_entry() {
    const auto r = verify_D_factorization();
    ordered_json j;
    j["difference"] = str(r.difference);
    j["spot_D_at_2_5_4"] = cas::to_string(r.spot);
    j["fails_without_substitution"] = r.needs_substitution;
    return {"verify_D_factorization", r.ok && r.needs_substitution && r.spot == 3, 0, j.dump()};
}

CheckEntry ab_entry() {
    const auto ab = build_ab();
    const auto& ctx = ab.ctx;
    const Rational spot = ab.a1.eval(std::map<std::string, Rational>{{"D1", 2}, {"D2", 5}, {"S", 4}, {"u", 0}});
    const bool swap_a = ab.a2 == swap12(ab.a1, ctx);
    const bool swap_b = ab.b2 == swap12(ab.b1, ctx);
    // Poles of a1: D1 = 0, D3 = 0, D2 = D3.
    auto den = ab.a1.denominator();
    bool poles = true;
    for (const auto& f : {ctx.parse("D1"), ctx.parse("2*S - D1"), ctx.parse("D1 + D2 - 2*S")}) {
        auto q = divide_exact(den, f.numerator());
        poles = poles && q.has_value();
        if (q) den = *q;
    }
    poles = poles && den.is_constant();
    ordered_json j;
    j["a1"] = str(ab.a1);
    j["a2"] = str(ab.a2);
    j["b1"] = str(ab.b1);
    j["b2"] = str(ab.b2);
    j["a1_at_2_5_4"] = cas::to_string(spot);
    j["swap_symmetry_a"] = swap_a;
    j["swap_symmetry_b"] = swap_b;
    j["a1_poles"] = ordered_json::array({"D1", "2*S - D1", "D1 + D2 - 2*S"});
    return {"build_ab", spot == cas::ratio(-26, 3) && swap_a && swap_b && poles, 0, j.dump()};
}

CheckEntry compatibility_entry() {
    ordered_json j;
    ordered_json tried = ordered_json::array();
    std::optional<CompatibilityReport> hit;
    for (Convention c : {Convention::printed_signs, Convention::rederived_signs}) {
        auto r = compatibility_polynomial(c);
        tried.push_back({{"convention", to_string(c)}, {"u_minus_1_divides", r.u_minus_1_divides}, {"match", r.match}});
        if (r.match && !hit) hit = std::move(r);
    }
    j["tried"] = tried;
    bool pass = false;
    if (hit) {
        const auto& p = *hit->cleared;
        const cas::Context ctx = build_ab().ctx;
        const auto swapped = RationalFunction(p).substitute({{"D1", ctx.var("D2")}, {"D2", ctx.var("D1")}});
        const bool symmetric = swapped.numerator() == p;
        const Rational at_one = p.eval(std::vector<Rational>{1, 1, 1, 0});
        j["convention"] = to_string(hit->convention);
        j["u_minus_1_divides"] = hit->u_minus_1_divides;
        j["cleared"] = p.to_string();
        j["terms"] = terms_json(p);
        j["term_count"] = p.term_count();
        j["symmetric_in_D1_D2"] = symmetric;
        j["value_at_1_1_1"] = cas::to_string(at_one);
        pass = hit->u_minus_1_divides && p.term_count() == 12 && symmetric && at_one == 1;
    } else {
        j["convention"] = nullptr;
    }
    return {"compatibility_polynomial", pass, 0, j.dump()};
}

CheckEntry three_period_entry() {
    const auto r = three_period_check();
    ordered_json j;
    j["a"] = str(r.a);
    j["b"] = str(r.b);
    j["determinant"] = str(r.determinant);
    j["obstruction_coefficient"] = str(r.obstruction);
    return {"three_period_check", r.ok, 0, j.dump()};
}

CheckEntry degenerate_entry() {
    const auto branches = degenerate_case_check();
    ordered_json list = ordered_json::array();
    bool pass = true;
    for (const auto& b : branches) {
        list.push_back({{"branch", b.name}, {"status", b.ok ? "pass" : "fail"}, {"detail", b.detail}});
        pass = pass && b.ok;
    }
    ordered_json j;
    j["branches"] = list;
    return {"degenerate_case_check", pass, 0, j.dump()};
}

CheckEntry inversion_entry() {
    const auto r = invert_delta_forms();
    ordered_json j;
    j["product_identity"] = r.product_identity;
    j["reverse_identity"] = r.reverse_identity;
    j["det_del_om"] = str(r.det_del_om);
    j["det_om_delta"] = str(r.det_om_delta);
    j["determinants_reciprocal"] = r.determinants_reciprocal;
    j["spot_identity_at_2_5_4_3"] = r.spot_identity;
    return {"invert_delta_forms", r.ok(), 0, j.dump()};
}

}  // namespace

VerifyReport run_suite(const std::string& suite) {
    const std::vector<std::pair<std::string, std::function<CheckEntry()>>> all{
        {"factorization", factorization_entry}, {"ab", ab_entry},
        {"compatibility", compatibility_entry}, {"three-period", three_period_entry},
        {"degenerate", degenerate_entry},       {"inversion", inversion_entry}};
    VerifyReport rep;
    bool found = false;
    for (const auto& [name, fn] : all) {
        if (suite != "all" && suite != name) continue;
        found = true;
        const auto t0 = std::chrono::steady_clock::now();
        CheckEntry e = fn();
        e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.checks.push_back(std::move(e));
    }
    if (!found) throw std::invalid_argument("unknown verify suite: " + suite);
    return rep;
}

}  // namespace obl::verify
