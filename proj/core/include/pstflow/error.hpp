#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pstflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent case document. `offset` is the byte position of a
// syntax error (line/column derived from it), or npos for semantic errors.
class CaseError : public Error {
  public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit CaseError(const std::string& what, std::size_t offset = npos, std::size_t line = 0,
                       std::size_t column = 0)
        : Error(what), offset_(offset), line_(line), column_(column) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
};

// Precondition violated by a caller-supplied argument.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

enum class SolveFailure { max_iterations, singular_jacobian, disconnected };

class SolveError : public Error {
  public:
    SolveError(SolveFailure kind, const std::string& what, int iterations = 0,
               double last_mismatch_pu = 0.0)
        : Error(what), kind_(kind), iterations_(iterations), last_mismatch_pu_(last_mismatch_pu) {}

    SolveFailure kind() const noexcept { return kind_; }
    int iterations() const noexcept { return iterations_; }
    double last_mismatch_pu() const noexcept { return last_mismatch_pu_; }

  private:
    SolveFailure kind_;
    int iterations_;
    double last_mismatch_pu_;
};

}  // namespace pstflow
