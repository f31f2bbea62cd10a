#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace odi {

/// Largest state dimension supported by the stack-allocated vector types.
inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set-valued operation received an empty input.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

/// The implicit step equation could not be solved within the iteration caps.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// l_f(t + h) * h >= 1, so the implicit step equation may have no unique solution.
class StepSizeViolation : public Error {
 public:
  using Error::Error;
};

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace odi
