#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace igrm {

/// Invalid construction parameters (degree/continuity pairs, intervals, mesh sizes).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the parametric interval.
struct domain_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Operand shapes do not agree.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact zero pivot encountered during factorization.
struct singular_matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The discrete solution stopped being finite.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output could not be written or read back.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Floating-point operation counter used as the cost metric of the direct
// solvers. Counts one multiply and one add as two operations.
inline thread_local std::uint64_t flop_count = 0;

inline void count_flops(std::uint64_t n) { flop_count += n; }

/// Captures the number of operations performed within its lifetime.
class FlopScope {
public:
    FlopScope() : start_{flop_count} {}
    [[nodiscard]] std::uint64_t elapsed() const { return flop_count - start_; }

private:
    std::uint64_t start_;
};

}  // namespace igrm
