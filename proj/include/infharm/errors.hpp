#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace infharm {

// Base class for everything this library throws on bad input.
// Internal invariant breakage uses std::logic_error instead, so callers can
// tell "your problem is malformed" from "the solver is broken".
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lexical/structural failure while reading a problem document.
// `position` is the byte offset when known, 0 otherwise.
struct ParseError : Error {
    ParseError(const std::string& message, std::size_t position = 0)
        : Error(message), position(position) {}
    std::size_t position;
};

struct Violation {
    std::string code;     // short stable identifier, e.g. "disconnected"
    std::string message;  // human-readable detail
};

// A structurally readable problem that fails semantic validation.
struct ValidationError : Error {
    explicit ValidationError(std::vector<Violation> violations)
        : Error(join(violations)), violations(std::move(violations)) {}
    std::vector<Violation> violations;

private:
    static std::string join(const std::vector<Violation>& vs) {
        std::string out = "invalid problem:";
        for (const auto& v : vs) out += " [" + v.code + "] " + v.message + ";";
        return out;
    }
};

}  // namespace infharm
