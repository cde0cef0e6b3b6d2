#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cpnsurf {

using complex = std::complex<double>;

inline std::string format_point(complex z)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
    return os.str();
}

/// Mismatched base points, orders or dimensions between operands.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A derivative was requested beyond the depth a jet carries.
class OrderExhaustedError : public std::runtime_error {
public:
    OrderExhaustedError(std::string const& direction, int requested, int available, std::string const& context = {})
        : std::runtime_error(context + "jet order exhausted: " + direction + " derivative needs depth "
                             + std::to_string(requested) + ", jet carries " + std::to_string(available)),
          direction_(direction), requested_(requested), available_(available)
    {}

    OrderExhaustedError with_context(std::string const& context) const
    {
        return {direction_, requested_, available_, context};
    }

    int requested() const noexcept { return requested_; }
    int available() const noexcept { return available_; }

private:
    std::string direction_;
    int requested_;
    int available_;
};

/// Division by a (numerically) vanishing quantity, e.g. |f|^2 at a common root.
class SingularityError : public std::runtime_error {
public:
    SingularityError(std::string const& detail, complex at)
        : std::runtime_error("normalization singularity at xi=" + format_point(at) + ": " + detail),
          detail_(detail), point_(at)
    {}

    complex point() const noexcept { return point_; }
    std::string const& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    complex point_;
};

/// Spectral parameter sits on a pole of the wavefunction (lambda = +1 or -1).
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature could not be carried out or did not converge.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cpnsurf
