#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace obl::cas {

class CasError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public CasError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : CasError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownVariable : public CasError {
public:
    explicit UnknownVariable(const std::string& name)
        : CasError("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DivisionByZero : public CasError {
public:
    DivisionByZero() : CasError("division by the zero polynomial") {}
};

/// Evaluation hit a zero denominator.
class PoleError : public CasError {
public:
    PoleError() : CasError("denominator vanishes at the evaluation point") {}
};

class VariableMismatch : public CasError {
public:
    VariableMismatch() : CasError("operands live in different variable sets") {}
};

}  // namespace obl::cas
