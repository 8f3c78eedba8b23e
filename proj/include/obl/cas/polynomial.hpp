#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obl/cas/rational.hpp"

namespace obl::cas {

inline constexpr std::size_t kMaxVariables = 8;

/// Exponent vector with its total degree cached in front, so that comparing
/// two monomials lexicographically is exactly the graded-lex order (total
/// degree first, then the first variable most significant).
class Monomial {
public:
    Monomial() = default;
    Monomial(std::initializer_list<unsigned> exps);

    unsigned operator[](std::size_t var) const { return data_[var + 1]; }
    void set(std::size_t var, unsigned exponent);
    unsigned degree() const noexcept { return data_[0]; }
    bool is_one() const noexcept { return data_[0] == 0; }

    /// Componentwise sum; throws std::overflow_error past 65535.
    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    std::array<std::uint16_t, kMaxVariables + 1> data_{};
};

/// Largest monomial first in graded-lex order.
using GrlexGreater = std::greater<Monomial>;

/// An ordered, immutable list of variable names. Polynomials only combine
/// when they share the same variable set (pointer or content equality).
class Variables {
public:
    explicit Variables(std::vector<std::string> names);

    static std::shared_ptr<const Variables> make(std::vector<std::string> names) {
        return std::make_shared<const Variables>(std::move(names));
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Throws UnknownVariable.
    std::size_t require(std::string_view name) const;

    friend bool operator==(const Variables& a, const Variables& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
};

using VarsPtr = std::shared_ptr<const Variables>;

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are stored in a map keyed by exponent vectors in graded-lex order,
/// so two polynomials are mathematically equal iff they compare equal
/// structurally. Zero coefficients are never stored.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexGreater>;

    explicit Polynomial(VarsPtr vars);

    static Polynomial constant(VarsPtr vars, const Rational& c);
    static Polynomial variable(VarsPtr vars, std::size_t index);
    static Polynomial variable(VarsPtr vars, std::string_view name);
    static Polynomial monomial(VarsPtr vars, const Monomial& exps, const Rational& c);

    const VarsPtr& vars() const noexcept { return vars_; }
    std::size_t nvars() const noexcept { return vars_->size(); }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Constant value; zero for the zero polynomial. Only meaningful when
    /// is_constant().
    Rational constant_value() const;

    /// Leading term in graded-lex order. Precondition: nonzero.
    const Monomial& leading_exponents() const;
    const Rational& leading_coefficient() const;

    unsigned total_degree() const;
    /// Degree in one variable; 0 for the zero polynomial.
    unsigned degree(std::size_t var) const;
    bool involves(std::size_t var) const;

    /// Coefficients with respect to `var`, index = power. Each coefficient is
    /// a polynomial over the same variable set not involving `var`.
    std::vector<Polynomial> coefficients_in(std::size_t var) const;
    /// Coefficient of var^degree(var).
    Polynomial leading_coefficient_in(std::size_t var) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b);

    Polynomial pow(unsigned e) const;
    Polynomial partial(std::size_t var) const;

    /// `values` is indexed like the variable set and must cover it.
    Rational eval(std::span<const Rational> values) const;

    std::string to_string() const;

    /// Adds c·x^exps. Used by builders; keeps the no-zero-coefficient invariant.
    void add_term(const Monomial& exps, const Rational& c);

private:
    void check_compatible(const Polynomial& o) const;

    VarsPtr vars_;
    TermMap terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a. Throws
/// DivisionByZero when b is zero.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

/// Greatest common divisor over Q, normalized to integer coprime coefficients
/// with a positive leading coefficient. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Pseudo-remainder of a by b with respect to `var`:
/// lc(b)^(deg a - deg b + 1) · a  mod  b.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var);

/// The nonzero rational c such that c·p has coprime integer coefficients and
/// a positive leading coefficient. Precondition: p ≠ 0.
Rational integer_normalizer(const Polynomial& p);

}  // namespace obl::cas
