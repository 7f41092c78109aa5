#pragma once

#include <stdexcept>
#include <string>

namespace xi {

/// Bad input: malformed set spec, violated precondition, non-nice set.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Not enough statistics to fit or bracket (e.g. zero survivors).
class StatisticalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace xi
