#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyclust {

/// Exit codes used by the CLI; every library error type maps onto one.
enum class errc : int {
    usage = 2,
    schema = 3,
    parse = 4,
    empty_input = 5,
    argument = 6,
    undefined_metric = 7,
    io = 8,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& w) : Error(errc::schema, w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(errc::parse, w) {}
};

struct EmptyInputError : Error {
    explicit EmptyInputError(const std::string& w) : Error(errc::empty_input, w) {}
};

struct ArgumentError : Error {
    explicit ArgumentError(const std::string& w) : Error(errc::argument, w) {}
};

struct UndefinedMetricError : Error {
    explicit UndefinedMetricError(const std::string& w) : Error(errc::undefined_metric, w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(errc::io, w) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(errc::usage, w) {}
};

}  // namespace fuzzyclust
