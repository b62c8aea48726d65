#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spectrace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Machine-readable failure category. The CLI reports it verbatim.
enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  singular_matrix,
  out_of_range,
  insufficient_samples,
  numerical_failure,
  io_error,
  schema_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Observation index set. Indices are 1-based, sorted ascending, distinct.
using IndexSet = std::vector<int>;

/// Sorts, checks for repeats and range [1, dim]. Throws on violation.
IndexSet normalize_omega(IndexSet omega, int dim);

/// Parses "1,2,4,7" or "1-5" style lists (ranges inclusive).
IndexSet parse_omega(const std::string& text);

std::string format_omega(const IndexSet& omega);

}  // namespace spectrace
