#pragma once

#include <optional>
#include <vector>

namespace btsff {

/// Simple temporal network over visit times: bounds plus difference constraints.
class Stn {
 public:
  Stn(std::vector<double> lower, std::vector<double> upper) : lo_(std::move(lower)), hi_(std::move(upper)) {}

  void add_min_gap(int a, int b, double w) { edges_.push_back({a, b, w}); }      // t_b >= t_a + w
  void add_max_gap(int a, int b, double w) { edges_.push_back({b, a, -w}); }     // t_b - t_a <= w
  void raise_lower(int k, double value);
  void lower_upper(int k, double value);

  int size() const { return static_cast<int>(lo_.size()); }
  std::optional<std::vector<double>> earliest() const;
  std::optional<std::vector<double>> latest() const;
  /// Least feasible schedule not earlier than `hint` by more than the tolerance.
  std::optional<std::vector<double>> project(const std::vector<double>& hint) const;

 private:
  struct Edge {
    int from, to;
    double w;
  };
  std::vector<double> lo_, hi_;
  std::vector<Edge> edges_;
};

}  // namespace btsff
