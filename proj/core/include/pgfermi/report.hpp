#pragma once

#include <string>
#include <vector>

#include "pgfermi/numerics.hpp"

namespace pgfermi {

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  // The identity being checked, written as a formula.
  std::string anchor;
};

class VerificationReport {
 public:
  /// Records |lhs - rhs| (max-entry) against tol scaled by max(|lhs|, |rhs|).
  Check& add(std::string name, std::string anchor, const Matrix& lhs, const Matrix& rhs,
             const Tolerance& tol);
  /// Records a residual against a fixed threshold.
  Check& add_residual(std::string name, std::string anchor, double residual, double threshold);
  /// Records a failed check for a step that could not be carried out.
  Check& add_failure(std::string name, std::string anchor, const std::string& reason);

  void append(const VerificationReport& other);

  const std::vector<Check>& checks() const { return checks_; }
  const Check* find(const std::string& name) const;
  bool overall() const;
  double worst_residual() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace pgfermi
