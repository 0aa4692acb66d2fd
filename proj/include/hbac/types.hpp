#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hbac {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

/// Level permutation; `(P * p)[P.indices()[i]] == p[i]`, i.e. population on
/// level i moves to level `indices()[i]`.
using Permutation = Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>;

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kClampTol = 1e-15;
inline constexpr double kStochasticTol = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration or composite construction would exceed its cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// No-go premises (R1-R3) do not hold for the requested verification.
class PremiseViolation : public Error {
 public:
  using Error::Error;
};

/// Qutrit closed-form cone requested for a state outside its beta-subset.
class WrongSubset : public Error {
 public:
  using Error::Error;
};

/// A round matrix whose eigenvalue-1 eigenspace is not one-dimensional.
class ReducibleMatrix : public Error {
 public:
  ReducibleMatrix(const std::string& what, std::size_t fixed_point_dimension)
      : Error(what), fixed_point_dimension_(fixed_point_dimension) {}
  std::size_t fixed_point_dimension() const noexcept { return fixed_point_dimension_; }

 private:
  std::size_t fixed_point_dimension_;
};

/// Cumulative CoP requested while the cumulative work is not positive.
class UndefinedCop : public Error {
 public:
  UndefinedCop(const std::string& what, double cumulative_work)
      : Error(what), cumulative_work_(cumulative_work) {}
  double cumulative_work() const noexcept { return cumulative_work_; }

 private:
  double cumulative_work_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hbac
