#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace simsketch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A similarity score has a zero denominator (empty multiset, all-zero sketch row).
class UndefinedSimilarity : public Error {
public:
    using Error::Error;
};

/// Two sketches were built with different shapes or hash families.
class IncompatibleSketches : public Error {
public:
    explicit IncompatibleSketches(std::vector<std::string> fields);

    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    std::vector<std::string> fields_;
};

/// Malformed line in a triplet stream; `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

}  // namespace simsketch
