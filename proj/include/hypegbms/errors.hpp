#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypegbms {

// Raised when a closed-form expression degenerates numerically
// (near-boundary atanh overflow, vanishing Mobius denominator).
class numeric_degenerate : public std::runtime_error {
public:
    explicit numeric_degenerate(const std::string& what) : std::runtime_error(what) {}
};

// Raised by iterative solvers that exhaust their iteration budget.
// Carries the last iterate and its gradient residual.
class convergence_failure : public std::runtime_error {
public:
    convergence_failure(const std::string& what, std::vector<double> last, double residual)
        : std::runtime_error(what), last_iterate(std::move(last)), residual(residual) {}

    std::vector<double> last_iterate;
    double residual;
};

// Raised on malformed input files; carries a 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, long line = -1)
        : std::runtime_error(what), line(line) {}

    long line;
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite or otherwise unusable numeric data; carries the offending row.
class invalid_data : public std::runtime_error {
public:
    explicit invalid_data(const std::string& what, long row = -1)
        : std::runtime_error(what), row(row) {}

    long row;
};

} // namespace hypegbms
