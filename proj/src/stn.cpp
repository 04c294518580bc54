#include "btsff/stn.hpp"

#include <algorithm>

#include "btsff/instance.hpp"

namespace btsff {

void Stn::raise_lower(int k, double value) { lo_[k] = std::max(lo_[k], value); }
void Stn::lower_upper(int k, double value) { hi_[k] = std::min(hi_[k], value); }

std::optional<std::vector<double>> Stn::earliest() const {
  const int n = size();
  std::vector<double> t = lo_;
  for (int k = 0; k < n; ++k) {
    if (t[k] > hi_[k] + kEps) return std::nullopt;
  }
  for (int pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (const auto& e : edges_) {
      if (t[e.from] + e.w > t[e.to] + 1e-12) {
        t[e.to] = t[e.from] + e.w;
        if (t[e.to] > hi_[e.to] + kEps) return std::nullopt;
        changed = true;
      }
    }
    if (!changed) return t;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> Stn::latest() const {
  const int n = size();
  std::vector<double> t = hi_;
  for (int k = 0; k < n; ++k) {
    if (t[k] < lo_[k] - kEps) return std::nullopt;
  }
  for (int pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (const auto& e : edges_) {
      if (t[e.to] - e.w < t[e.from] - 1e-12) {
        t[e.from] = t[e.to] - e.w;
        if (t[e.from] < lo_[e.from] - kEps) return std::nullopt;
        changed = true;
      }
    }
    if (!changed) return t;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> Stn::project(const std::vector<double>& hint) const {
  Stn raised = *this;
  for (int k = 0; k < size(); ++k) raised.raise_lower(k, std::min(hint[k] - 1e-7, hi_[k]));
  if (auto t = raised.earliest()) return t;
  return earliest();
}

}  // namespace btsff
