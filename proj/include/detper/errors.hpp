#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detper {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NotPrimeError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class DivisionByZeroError : public Error {
public:
    using Error::Error;
};

class SizeTooLargeError : public Error {
public:
    using Error::Error;
};

class BadRatioError : public Error {
public:
    using Error::Error;
};

class CtxMismatchError : public Error {
public:
    using Error::Error;
};

/// Parse failure; carries the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class BadRepeatError : public Error {
public:
    using Error::Error;
};

class UnboundVarError : public Error {
public:
    using Error::Error;
};

class EmptySetError : public Error {
public:
    using Error::Error;
};

class DimensionOutOfRangeError : public Error {
public:
    using Error::Error;
};

class OddDimensionError : public Error {
public:
    using Error::Error;
};

class ConfigInvalidError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class BudgetExceededError : public Error {
public:
    using Error::Error;
};

} // namespace detper
