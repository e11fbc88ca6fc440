// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace i2a {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// sim
class OutOfBounds : public Error { public: using Error::Error; };

// perception
class EmptyScene : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

// retrieval
class UnparsableQuery : public Error { public: using Error::Error; };
class EmptyCrop : public Error { public: using Error::Error; };
class AllExcluded : public Error { public: using Error::Error; };
class EndpointError : public Error { public: using Error::Error; };

// action
class EmptyMask : public Error { public: using Error::Error; };
class NoFreeSpace : public Error { public: using Error::Error; };
class IndexMismatch : public Error { public: using Error::Error; };

// prompt
class MissingAsset : public Error { public: using Error::Error; };
class DuplicateKey : public Error { public: using Error::Error; };
class InvalidInstruction : public Error { public: using Error::Error; };

// policy
/// Parse failure with a 1-based source position (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }
    virtual std::string kind() const { return "ParseError"; }

private:
    int line_;
    int column_;
};

#define I2A_PARSE_ERROR(Name)                                                                                          \
    class Name : public ParseError {                                                                                   \
    public:                                                                                                            \
        using ParseError::ParseError;                                                                                  \
        std::string kind() const override { return #Name; }                                                            \
    }
I2A_PARSE_ERROR(SyntaxError);
I2A_PARSE_ERROR(UnsupportedConstruct);
I2A_PARSE_ERROR(MultipleReturns);
I2A_PARSE_ERROR(MultipleDefs);
I2A_PARSE_ERROR(MissingReturn);
#undef I2A_PARSE_ERROR

class UnboundName : public Error { public: using Error::Error; };
class ReturnTypeError : public Error { public: using Error::Error; };

/// An API call failed; carries the statement index and the inner error kind.
class RuntimeApiError : public Error {
public:
    RuntimeApiError(std::size_t statement, std::string api, std::string inner_kind, const std::string& message)
        : Error("statement " + std::to_string(statement) + " (" + api + "): " + inner_kind + ": " + message),
          statement_(statement), api_(std::move(api)), inner_kind_(std::move(inner_kind))
    {
    }
    std::size_t statement() const { return statement_; }
    const std::string& api() const { return api_; }
    const std::string& inner_kind() const { return inner_kind_; }

private:
    std::size_t statement_;
    std::string api_;
    std::string inner_kind_;
};

// llm
class CassetteMiss : public Error { public: using Error::Error; };

/// Every generation trial failed; carries the last failure.
class ExhaustedTrials : public Error {
public:
    ExhaustedTrials(int trials, std::string last_kind, const std::string& last_message)
        : Error("no valid program after " + std::to_string(trials) + " trial(s); last failure " + last_kind + ": " +
                last_message),
          trials_(trials), last_kind_(std::move(last_kind))
    {
    }
    int trials() const { return trials_; }
    const std::string& last_kind() const { return last_kind_; }

private:
    int trials_;
    std::string last_kind_;
};

} // namespace i2a
