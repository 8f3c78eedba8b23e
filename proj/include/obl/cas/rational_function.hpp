#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "obl/cas/polynomial.hpp"

namespace obl::cas {

/// Quotient of two polynomials over a shared variable set, always kept in
/// canonical form: numerator and denominator coprime, the denominator with
/// coprime integer coefficients and a positive leading coefficient, and zero
/// stored as 0/1. Structural equality is therefore mathematical equality.
class RationalFunction {
public:
    explicit RationalFunction(VarsPtr vars);
    explicit RationalFunction(Polynomial numerator);
    /// Throws DivisionByZero when the denominator is the zero polynomial.
    RationalFunction(Polynomial numerator, Polynomial denominator);

    static RationalFunction constant(VarsPtr vars, const Rational& c);
    static RationalFunction variable(VarsPtr vars, std::string_view name);

    const VarsPtr& vars() const noexcept { return num_.vars(); }
    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    /// Precondition: is_constant().
    Rational constant_value() const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    /// Throws DivisionByZero when b is identically zero.
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    RationalFunction pow(int e) const;

    /// Exact partial derivative (quotient rule). Throws UnknownVariable.
    RationalFunction partial(std::string_view var) const;
    RationalFunction partial(std::size_t var) const;

    /// Throws PoleError when the denominator vanishes.
    Rational eval(std::span<const Rational> values) const;
    /// Assignment must cover every variable; throws std::invalid_argument
    /// otherwise.
    Rational eval(const std::map<std::string, Rational>& assignment) const;

    /// Simultaneous substitution of variables by rational functions over the
    /// same variable set. Unlisted variables stay as they are.
    RationalFunction substitute(const std::map<std::string, RationalFunction>& values) const;

    /// Canonical text, re-parseable by parse_expr with the same variables.
    std::string to_string() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

/// Re-applies canonicalization; the result is structurally identical to the
/// input because every constructor and operation already normalizes.
RationalFunction normalize(const RationalFunction& f);

/// Convenience for the fixed-variable-set idiom:
///   auto D1 = ctx.var("D1"); auto two = ctx.num(2);
class Context {
public:
    explicit Context(std::vector<std::string> names) : vars_(Variables::make(std::move(names))) {}

    const VarsPtr& vars() const noexcept { return vars_; }
    RationalFunction var(std::string_view name) const { return RationalFunction::variable(vars_, name); }
    RationalFunction num(const Rational& c) const { return RationalFunction::constant(vars_, c); }
    RationalFunction num(long c) const { return num(Rational(c)); }
    RationalFunction parse(std::string_view text) const;

private:
    VarsPtr vars_;
};

}  // namespace obl::cas
