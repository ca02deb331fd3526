#pragma once

#include <stdexcept>
#include <string>

namespace fracflow {

// Error categories map one-to-one onto CLI exit codes:
//   config_error -> 2, numeric_error -> 3, io_error -> 4 (verification
// failures use a dedicated exit 5 path, not an exception).
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace fracflow
