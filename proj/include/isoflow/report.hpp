#pragma once

#include <string>
#include <vector>

#include "isoflow/numlin.hpp"

namespace isoflow {

struct CheckEntry {
  std::string check_id;
  double residual = 0.0;
  std::vector<Index> dims;
  bool pass = false;
  std::string reason;
};

/// Ordered list of verification results.
struct Report {
  std::vector<CheckEntry> entries;

  void add(std::string check_id, double residual, std::vector<Index> dims, bool pass,
           std::string reason = {});
  void append(const Report& other);
  /// True iff every entry passes; an empty report passes.
  bool pass() const;
  double max_residual() const;
  const CheckEntry* find(const std::string& check_id) const;
};

/// Residual in the golden-file notation: six digits after the point, bare
/// exponent, and anything below 1e-14 printed as 0.000000e0.
std::string format_residual(double value);

}  // namespace isoflow
