// Multivariate GCD over Q by content/primitive-part recursion on the highest
// variable present, with a subresultant PRS for the univariate step. The
// coefficient domain at each level is Q[x_0 .. x_{k-1}].

#include <optional>
#include <stdexcept>

#include "obl/cas/polynomial.hpp"

namespace obl::cas {
namespace {

Polynomial one_like(const Polynomial& p) { return Polynomial::constant(p.vars(), Rational(1)); }

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("gcd: expected exact division failed");
    return std::move(*q);
}

std::optional<std::size_t> top_variable(const Polynomial& a, const Polynomial& b, std::size_t limit) {
    for (std::size_t k = limit; k-- > 0;)
        if (a.involves(k) || b.involves(k)) return k;
    return std::nullopt;
}

Polynomial normalized(Polynomial p) {
    if (p.is_zero()) return p;
    p *= integer_normalizer(p);
    return p;
}

Polynomial gcd_below(const Polynomial& a, const Polynomial& b, std::size_t limit);

/// gcd of the coefficients of p viewed as a polynomial in `var`.
Polynomial content_in(const Polynomial& p, std::size_t var) {
    const auto coeffs = p.coefficients_in(var);
    for (const auto& c : coeffs)
        if (!c.is_zero() && c.is_constant()) return one_like(p);
    Polynomial g(p.vars());
    for (const auto& c : coeffs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? normalized(c) : gcd_below(g, c, var);
        if (g.is_constant()) return one_like(p);
    }
    return g;
}

Polynomial primitive_part_in(const Polynomial& p, std::size_t var) {
    if (p.is_zero()) return p;
    return exact_quotient(p, content_in(p, var));
}

/// Subresultant PRS gcd of two polynomials primitive in `var`, both of
/// positive degree in `var`. Returns a primitive polynomial.
Polynomial subresultant_gcd(Polynomial a, Polynomial b, std::size_t var) {
    if (a.degree(var) < b.degree(var)) std::swap(a, b);
    Polynomial g = one_like(a);
    Polynomial h = one_like(a);
    for (;;) {
        const unsigned delta = a.degree(var) - b.degree(var);
        Polynomial r = pseudo_remainder(a, b, var);
        if (r.is_zero()) return primitive_part_in(b, var);
        if (r.degree(var) == 0) return one_like(a);
        a = std::move(b);
        b = exact_quotient(r, g * h.pow(delta));
        g = a.leading_coefficient_in(var);
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = exact_quotient(g.pow(delta), h.pow(delta - 1));
    }
}

Polynomial gcd_below(const Polynomial& a, const Polynomial& b, std::size_t limit) {
    if (a.is_zero()) return normalized(b);
    if (b.is_zero()) return normalized(a);
    if (a.is_constant() || b.is_constant()) return one_like(a);
    if (a.term_count() == b.term_count()) {
        Polynomial na = normalized(a), nb = normalized(b);
        if (na == nb) return na;
    }
    const auto top = top_variable(a, b, limit);
    if (!top) return one_like(a);
    const std::size_t k = *top;
    if (!a.involves(k)) return gcd_below(a, content_in(b, k), k);
    if (!b.involves(k)) return gcd_below(content_in(a, k), b, k);

    const Polynomial ca = content_in(a, k);
    const Polynomial cb = content_in(b, k);
    const Polynomial c = gcd_below(ca, cb, k);
    const Polynomial g = subresultant_gcd(exact_quotient(a, ca), exact_quotient(b, cb), k);
    return normalized(c * g);
}

}  // namespace

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
    if (b.is_zero()) throw std::invalid_argument("pseudo-remainder by zero");
    const unsigned db = b.degree(var);
    if (a.degree(var) < db || a.is_zero()) return a;
    const Polynomial lb = b.leading_coefficient_in(var);
    int e = static_cast<int>(a.degree(var) - db) + 1;
    Polynomial r = a;
    Monomial shift;
    while (!r.is_zero() && r.degree(var) >= db) {
        shift.set(var, r.degree(var) - db);
        Polynomial t = r.leading_coefficient_in(var) * Polynomial::monomial(a.vars(), shift, Rational(1));
        r = lb * r - t * b;
        --e;
    }
    if (e > 0) r = lb.pow(static_cast<unsigned>(e)) * r;
    return r;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (!(a.vars() == b.vars() || *a.vars() == *b.vars())) throw std::invalid_argument("gcd: variable mismatch");
    if (a.is_zero() && b.is_zero()) return a;
    // Integer primitive inputs keep every PRS intermediate in Z[x] (Gauss's
    // lemma), which avoids rational coefficient growth.
    return normalized(gcd_below(normalized(a), normalized(b), a.nvars()));
}

}  // namespace obl::cas
