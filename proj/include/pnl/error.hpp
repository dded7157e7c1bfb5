#pragma once

#include <stdexcept>
#include <string>

namespace pnl {

// Base of every error raised by the kernel. The CLI maps each subclass to an
// exit code (see tools/pnl.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0, int col = 0)
        : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(col) + ": " + msg : msg),
          msg_(msg), line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& message() const { return msg_; }

private:
    std::string msg_;
    int line_;
    int col_;
};

class TypeError : public Error {
public:
    using Error::Error;
};

// A precondition of a kernel operation does not hold (not a parse or sort issue).
class LogicError : public Error {
public:
    using Error::Error;
};

class FuelExhausted : public Error {
public:
    using Error::Error;
};

}  // namespace pnl
