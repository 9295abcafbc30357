#include "isoflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace isoflow {

void Report::add(std::string check_id, double residual, std::vector<Index> dims,
                 bool pass, std::string reason) {
  entries.push_back(CheckEntry{std::move(check_id), residual, std::move(dims), pass,
                               std::move(reason)});
}

void Report::append(const Report& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool Report::pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const CheckEntry& e) { return e.pass; });
}

double Report::max_residual() const {
  double out = 0.0;
  for (const auto& e : entries) out = std::max(out, e.residual);
  return out;
}

const CheckEntry* Report::find(const std::string& check_id) const {
  for (const auto& e : entries) {
    if (e.check_id == check_id) return &e;
  }
  return nullptr;
}

std::string format_residual(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::abs(value) < 1e-14) return "0.000000e0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", value);
  std::string s(buf);
  const auto e = s.find('e');
  const std::string mantissa = s.substr(0, e);
  const int exponent = std::atoi(s.c_str() + e + 1);
  return mantissa + "e" + std::to_string(exponent);
}

}  // namespace isoflow
