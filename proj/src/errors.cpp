#include "simsketch/errors.hpp"

#include <utility>

namespace simsketch {

namespace {

std::string join_fields(const std::vector<std::string>& fields) {
    std::string out = "incompatible sketches; differing fields:";
    for (const auto& f : fields) {
        out += ' ';
        out += f;
    }
    return out;
}

}  // namespace

IncompatibleSketches::IncompatibleSketches(std::vector<std::string> fields)
    : Error(join_fields(fields)), fields_(std::move(fields)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace simsketch
