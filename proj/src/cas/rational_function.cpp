#include "obl/cas/rational_function.hpp"

#include <stdexcept>

#include "obl/cas/errors.hpp"
#include "obl/cas/parser.hpp"

namespace obl::cas {
namespace {

Polynomial quotient(const Polynomial& a, const Polynomial& b) {
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("rational function: inexact cancellation");
    return std::move(*q);
}

}  // namespace

RationalFunction::RationalFunction(VarsPtr vars)
    : num_(vars), den_(Polynomial::constant(vars, Rational(1))) {}

RationalFunction::RationalFunction(Polynomial numerator)
    : num_(std::move(numerator)), den_(Polynomial::constant(num_.vars(), Rational(1))) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw DivisionByZero();
    if (!(num_.vars() == den_.vars() || *num_.vars() == *den_.vars())) throw VariableMismatch();
    normalize();
}

RationalFunction RationalFunction::constant(VarsPtr vars, const Rational& c) {
    return RationalFunction(Polynomial::constant(std::move(vars), c));
}

RationalFunction RationalFunction::variable(VarsPtr vars, std::string_view name) {
    return RationalFunction(Polynomial::variable(std::move(vars), name));
}

Rational RationalFunction::constant_value() const {
    if (!is_constant()) throw std::logic_error("not a constant rational function");
    return num_.constant_value() / den_.constant_value();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.vars(), Rational(1));
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = quotient(num_, g);
            den_ = quotient(den_, g);
        }
    }
    const Rational k = integer_normalizer(den_);
    num_ *= k;
    den_ *= k;
}

RationalFunction normalize(const RationalFunction& f) {
    return RationalFunction(f.numerator(), f.denominator());
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    if (a.den_.is_constant() || b.den_.is_constant())
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    const Polynomial g = gcd(a.den_, b.den_);
    const Polynomial ad = quotient(a.den_, g);
    const Polynomial bd = quotient(b.den_, g);
    return RationalFunction(a.num_ * bd + b.num_ * ad, ad * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction(a.vars());
    // Cross-cancel first; both factors are already in lowest terms.
    const Polynomial g1 = gcd(a.num_, b.den_);
    const Polynomial g2 = gcd(b.num_, a.den_);
    return RationalFunction(quotient(a.num_, g1) * quotient(b.num_, g2),
                            quotient(a.den_, g2) * quotient(b.den_, g1));
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DivisionByZero();
    RationalFunction inv(b.vars());
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    inv.normalize();
    return a * inv;
}

RationalFunction RationalFunction::pow(int e) const {
    if (e < 0) return RationalFunction::constant(vars(), Rational(1)) / pow(-e);
    RationalFunction r(vars());
    r.num_ = num_.pow(static_cast<unsigned>(e));
    r.den_ = den_.pow(static_cast<unsigned>(e));
    r.normalize();
    return r;
}

RationalFunction RationalFunction::partial(std::string_view var) const { return partial(vars()->require(var)); }

RationalFunction RationalFunction::partial(std::size_t var) const {
    if (var >= vars()->size()) throw std::out_of_range("variable index");
    if (den_.is_constant()) return RationalFunction(num_.partial(var), den_);
    return RationalFunction(num_.partial(var) * den_ - num_ * den_.partial(var), den_ * den_);
}

Rational RationalFunction::eval(std::span<const Rational> values) const {
    const Rational d = den_.eval(values);
    if (d == 0) throw PoleError();
    return num_.eval(values) / d;
}

Rational RationalFunction::eval(const std::map<std::string, Rational>& assignment) const {
    std::vector<Rational> values;
    values.reserve(vars()->size());
    for (const auto& name : vars()->names()) {
        auto it = assignment.find(name);
        if (it == assignment.end()) throw std::invalid_argument("assignment is missing variable " + name);
        values.push_back(it->second);
    }
    return eval(values);
}

RationalFunction RationalFunction::substitute(const std::map<std::string, RationalFunction>& values) const {
    std::vector<RationalFunction> image;
    image.reserve(vars()->size());
    for (const auto& name : vars()->names()) {
        auto it = values.find(name);
        image.push_back(it == values.end() ? RationalFunction::variable(vars(), name) : it->second);
    }
    auto apply = [&](const Polynomial& p) {
        RationalFunction sum(vars());
        for (const auto& [e, c] : p.terms()) {
            RationalFunction t = RationalFunction::constant(vars(), c);
            for (std::size_t i = 0; i < image.size(); ++i)
                if (e[i] > 0) t *= image[i].pow(static_cast<int>(e[i]));
            sum += t;
        }
        return sum;
    };
    return apply(num_) / apply(den_);
}

std::string RationalFunction::to_string() const {
    if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction Context::parse(std::string_view text) const { return parse_expr(text, vars_); }

}  // namespace obl::cas
