#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ssg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural problems in a graph (duplicate ids, dangling endpoints, sources).
class GraphError : public Error {
public:
    GraphError(std::string summary, std::vector<std::string> offenders)
        : Error(compose(summary, offenders)), offenders_(std::move(offenders)) {}

    const std::vector<std::string>& offenders() const noexcept { return offenders_; }

private:
    static std::string compose(const std::string& summary, const std::vector<std::string>& offenders) {
        std::string msg = summary;
        for (std::size_t i = 0; i < offenders.size(); ++i) {
            msg += (i == 0 ? ": " : ", ");
            msg += offenders[i];
        }
        return msg;
    }

    std::vector<std::string> offenders_;
};

/// A product or action that is not composable (d/t or range mismatch).
class CompositionError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain (e.g. non-constant degree).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A search or recursion exceeded one of its configured caps.
class CapExceeded : public Error {
public:
    CapExceeded(std::string cap_name, std::size_t cap_value)
        : Error(cap_name + " exceeded (" + std::to_string(cap_value) + ")"),
          cap_name_(std::move(cap_name)), cap_value_(cap_value) {}

    const std::string& cap_name() const noexcept { return cap_name_; }
    std::size_t cap_value() const noexcept { return cap_value_; }

private:
    std::string cap_name_;
    std::size_t cap_value_;
};

/// Lexical or grammatical error in a text input, with a 1-based location.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace ssg
