#include "obl/cas/parser.hpp"

#include <cctype>

#include "obl/cas/errors.hpp"

namespace obl::cas {
namespace {

class Parser {
public:
    Parser(std::string_view text, const VarsPtr& vars) : text_(text), vars_(vars) {}

    RationalFunction run() {
        RationalFunction r = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return r;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RationalFunction expr() {
        RationalFunction acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    RationalFunction term() {
        RationalFunction acc = unary();
        for (;;) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                acc /= unary();
            } else {
                return acc;
            }
        }
    }

    RationalFunction unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    RationalFunction power() {
        RationalFunction base = primary();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError("expected nonnegative integer exponent", pos_);
            const std::string digits = read_digits();
            if (digits.size() > 6) throw ParseError("exponent too large", pos_ - digits.size());
            return base.pow(std::stoi(digits));
        }
        return base;
    }

    RationalFunction primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("expected operand", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return RationalFunction::constant(vars_, Rational(mpz_class(read_digits(), 10)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (!vars_->index_of(name)) throw UnknownVariable(name);
            return RationalFunction::variable(vars_, name);
        }
        if (c == '(') {
            ++pos_;
            RationalFunction inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::string read_digits() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    const VarsPtr& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_expr(std::string_view text, const VarsPtr& vars) { return Parser(text, vars).run(); }

RationalFunction parse_expr(std::string_view text, const std::vector<std::string>& vars) {
    return parse_expr(text, Variables::make(vars));
}

}  // namespace obl::cas
