#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace halfourier {

using Complex = std::complex<double>;

// Quadrature gave up before meeting the requested tolerance. The best
// estimate so far and the error bound it did achieve come along, so callers
// can degrade gracefully (reports annotate the row instead of aborting).
class ToleranceNotReached : public std::runtime_error {
public:
    ToleranceNotReached(std::string what, Complex best_estimate, double achieved)
        : std::runtime_error(std::move(what)),
          best_estimate_(best_estimate),
          achieved_(achieved) {}

    Complex best_estimate() const noexcept { return best_estimate_; }
    double achieved() const noexcept { return achieved_; }

private:
    Complex best_estimate_;
    double achieved_;
};

// Kernel text did not match the grammar. `position` is a byte offset into
// the original input.
class KernelParseError : public std::runtime_error {
public:
    KernelParseError(std::string what, std::size_t position)
        : std::runtime_error(std::move(what)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Kernel text parsed but the parameters are outside the admissible range
// (p outside [0,1), delta <= 0, bad sample table, ...).
class KernelValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sample table file is missing or malformed.
class TableFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The far-tail search could not certify a finite kernel mass.
class NotSummableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mode simulation left the trusted amplitude range.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(std::string what, double t, double u)
        : std::runtime_error(std::move(what)), t_(t), u_(u) {}

    double at_time() const noexcept { return t_; }
    double amplitude() const noexcept { return u_; }

private:
    double t_;
    double u_;
};

}  // namespace halfourier
