#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace maglab {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Execution policy for the embarrassingly parallel sweeps. Serial is the
/// reference order; Parallel fans the same per-index work out over OpenMP
/// threads and keeps the reduction in ascending index order, so both modes
/// produce identical sums.
enum class Exec { Serial, Parallel };

// Failures that carry a measured quantity. Precondition violations use
// std::invalid_argument directly.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state leaked past the periodic box guard band.
class domain_truncation_error : public numeric_error {
public:
    domain_truncation_error(const std::string& what, double leakage)
        : numeric_error(what), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

/// A quadrature or grid was too coarse for the requested oscillation.
class resolution_error : public numeric_error {
public:
    resolution_error(const std::string& what, double achieved)
        : numeric_error(what), achieved_(achieved) {}
    /// Best estimate obtained before giving up.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class singular_phase_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class inconsistent_family_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class degenerate_band_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class order_swap_error : public numeric_error {
public:
    using numeric_error::numeric_error;
};

/// Run body(i) for i in [0, n). Exceptions thrown by body are rethrown on the
/// calling thread (first one in index order wins).
void par_for(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace maglab
