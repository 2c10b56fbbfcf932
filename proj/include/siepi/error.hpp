#pragma once

#include <stdexcept>
#include <string>

namespace siepi {

/// Input outside the mathematical domain of an operation (bad parameter,
/// state outside the process state space, transform argument past the
/// critical exponent).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Operation is defined for one driver family only.
class UnsupportedModel : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace siepi
