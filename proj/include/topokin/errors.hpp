#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topokin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in an expression, with the byte offset where it occurred.
struct ParseError : Error {
    ParseError(std::size_t offset_, const std::string& what_)
        : Error(what_ + " (at offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

// Real-domain violation during evaluation (log of non-positive, division by
// zero, fractional power of a negative base, ...).
struct DomainError : Error {
    using Error::Error;
};

// Numerical routine failed to reach its tolerance; carries the best estimate.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what_, double best_)
        : Error(what_), best(best_) {}
    double best;
};

// Scene file problem, with the 1-based line it was found on.
struct SceneError : Error {
    SceneError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
    int line;
};

} // namespace topokin
