#include "pgfermi/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pgfermi {

Check& VerificationReport::add(std::string name, std::string anchor, const Matrix& lhs,
                               const Matrix& rhs, const Tolerance& tol) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    return add_failure(std::move(name), std::move(anchor), "shape mismatch");
  }
  const double scale = std::max(max_abs(lhs), max_abs(rhs));
  return add_residual(std::move(name), std::move(anchor), max_abs(lhs - rhs),
                      tol.threshold(scale));
}

Check& VerificationReport::add_residual(std::string name, std::string anchor, double residual,
                                        double threshold) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = residual;
  c.threshold = threshold;
  c.pass = std::isfinite(residual) && residual <= threshold;
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& VerificationReport::add_failure(std::string name, std::string anchor,
                                       const std::string& reason) {
  Check& c = add_residual(std::move(name), std::move(anchor) + " [" + reason + "]",
                          std::numeric_limits<double>::infinity(), 0.0);
  c.pass = false;
  return c;
}

void VerificationReport::append(const VerificationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

const Check* VerificationReport::find(const std::string& name) const {
  auto it = std::find_if(checks_.begin(), checks_.end(),
                         [&](const Check& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

bool VerificationReport::overall() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

double VerificationReport::worst_residual() const {
  double worst = 0.0;
  for (const auto& c : checks_) worst = std::max(worst, c.residual);
  return worst;
}

}  // namespace pgfermi
