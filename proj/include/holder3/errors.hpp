#pragma once

#include <stdexcept>
#include <string>

namespace holder3 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary polynomial operations require equal (or unlimited) degree caps.
struct CapMismatch : Error {
    using Error::Error;
};

// Raised when an input violates a documented precondition of a pipeline stage.
struct StageError : Error {
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_name(std::move(stage)) {}
    std::string stage_name;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line_, int col_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
                ": " + what),
          line(line_), col(col_) {}
    int line = 0;
    int col = 0;
};

}  // namespace holder3
