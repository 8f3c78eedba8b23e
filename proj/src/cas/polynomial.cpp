#include "obl/cas/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "obl/cas/errors.hpp"

namespace obl::cas {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& t, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
        if (i == t.size()) return false;
        return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Monomial::Monomial(std::initializer_list<unsigned> exps) {
    if (exps.size() > kMaxVariables) throw std::invalid_argument("too many exponents");
    std::size_t i = 0;
    for (unsigned e : exps) set(i++, e);
}

void Monomial::set(std::size_t var, unsigned exponent) {
    if (var >= kMaxVariables) throw std::out_of_range("monomial variable index");
    const unsigned total = data_[0] - data_[var + 1] + exponent;
    if (exponent > 0xFFFFu || total > 0xFFFFu) throw std::overflow_error("monomial exponent overflow");
    data_[var + 1] = static_cast<std::uint16_t>(exponent);
    data_[0] = static_cast<std::uint16_t>(total);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < r.data_.size(); ++i) {
        const unsigned v = unsigned(a.data_[i]) + b.data_[i];
        if (v > 0xFFFFu) throw std::overflow_error("monomial exponent overflow");
        r.data_[i] = static_cast<std::uint16_t>(v);
    }
    return r;
}

Variables::Variables(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxVariables) throw std::invalid_argument("too many variables");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable " + names_[i]);
}

std::optional<std::size_t> Variables::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::size_t Variables::require(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw UnknownVariable(std::string(name));
}

Polynomial::Polynomial(VarsPtr vars) : vars_(std::move(vars)) {
    if (!vars_) throw std::invalid_argument("null variable set");
}

Polynomial Polynomial::constant(VarsPtr vars, const Rational& c) {
    Polynomial p(std::move(vars));
    p.add_term(Monomial{}, c);
    return p;
}

Polynomial Polynomial::variable(VarsPtr vars, std::size_t index) {
    Polynomial p(std::move(vars));
    if (index >= p.nvars()) throw std::out_of_range("variable index");
    Monomial e;
    e.set(index, 1);
    p.add_term(e, Rational(1));
    return p;
}

Polynomial Polynomial::variable(VarsPtr vars, std::string_view name) {
    const auto idx = vars->require(name);
    return variable(std::move(vars), idx);
}

Polynomial Polynomial::monomial(VarsPtr vars, const Monomial& exps, const Rational& c) {
    Polynomial p(std::move(vars));
    for (std::size_t i = p.nvars(); i < kMaxVariables; ++i)
        if (exps[i] != 0) throw std::invalid_argument("exponent outside the variable set");
    p.add_term(exps, c);
    return p;
}

bool Polynomial::is_constant() const noexcept {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    return terms_.begin()->first.is_one();
}

Rational Polynomial::constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& Polynomial::leading_exponents() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return terms_.begin()->second;
}

unsigned Polynomial::total_degree() const {
    if (terms_.empty()) return 0;
    return terms_.begin()->first.degree();
}

unsigned Polynomial::degree(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

bool Polynomial::involves(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] > 0; });
}

std::vector<Polynomial> Polynomial::coefficients_in(std::size_t var) const {
    std::vector<Polynomial> out(degree(var) + 1, Polynomial(vars_));
    for (const auto& [e, c] : terms_) {
        Monomial r = e;
        r.set(var, 0);
        out[e[var]].add_term(r, c);
    }
    return out;
}

Polynomial Polynomial::leading_coefficient_in(std::size_t var) const {
    const unsigned d = degree(var);
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] != d) continue;
        Monomial r = e;
        r.set(var, 0);
        out.add_term(r, c);
    }
    return out;
}

void Polynomial::add_term(const Monomial& exps, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Polynomial::check_compatible(const Polynomial& o) const {
    if (vars_ != o.vars_ && !(*vars_ == *o.vars_)) throw VariableMismatch();
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.vars_);
    Rational prod;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
            r.add_term(ea * eb, prod);
        }
    }
    return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.vars_ != b.vars_ && !(*a.vars_ == *b.vars_)) return false;
    return a.terms_ == b.terms_;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result = constant(vars_, Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e > 0) base *= base;
    }
    return result;
}

Polynomial Polynomial::partial(std::size_t var) const {
    if (var >= nvars()) throw std::out_of_range("variable index");
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Monomial d = e;
        d.set(var, e[var] - 1);
        r.add_term(d, c * e[var]);
    }
    return r;
}

Rational Polynomial::eval(std::span<const Rational> values) const {
    if (values.size() != nvars()) throw std::invalid_argument("assignment does not cover the variable set");
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < nvars(); ++i) {
            if (e[i] == 0) continue;
            Rational p;
            mpz_pow_ui(p.get_num_mpz_t(), values[i].get_num_mpz_t(), e[i]);
            mpz_pow_ui(p.get_den_mpz_t(), values[i].get_den_mpz_t(), e[i]);
            t *= p;
        }
        sum += t;
    }
    return sum;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool neg = c < 0;
        Rational mag = neg ? Rational(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        const bool is_const = e.is_one();
        bool need_star = false;
        if (is_const || mag != 1) {
            os << cas::to_string(mag);
            need_star = true;
        }
        for (std::size_t i = 0; i < nvars(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << '*';
            os << vars_->name(i);
            if (e[i] > 1) os << '^' << e[i];
            need_star = true;
        }
    }
    return os.str();
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (!(a.vars() == b.vars() || *a.vars() == *b.vars())) throw VariableMismatch();
    Polynomial q(a.vars());
    if (b.is_constant()) {
        q = a;
        q *= Rational(1) / b.constant_value();
        return q;
    }
    Polynomial r = a;
    const Monomial lb = b.leading_exponents();
    const Rational cb = b.leading_coefficient();
    Monomial shift;
    while (!r.is_zero()) {
        const Monomial& lr = r.leading_exponents();
        for (std::size_t i = 0; i < a.nvars(); ++i) {
            if (lr[i] < lb[i]) return std::nullopt;
            shift.set(i, lr[i] - lb[i]);
        }
        Polynomial t = Polynomial::monomial(a.vars(), shift, r.leading_coefficient() / cb);
        q += t;
        r -= t * b;
    }
    return q;
}

Rational integer_normalizer(const Polynomial& p) {
    if (p.is_zero()) throw std::logic_error("normalizer of zero polynomial");
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational k(den_lcm, num_gcd);
    k.canonicalize();
    if (p.leading_coefficient() < 0) k = -k;
    return k;
}

}  // namespace obl::cas
