#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "btsff/instance.hpp"

namespace btsff {


struct LinearRow {
  std::vector<int> index;
  std::vector<double> value;
  double lower = -kInf;
  double upper = kInf;
  std::string name;
};

/// Minimisation problem in row form.
struct LinearProblem {
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<bool> integer;
  std::vector<std::string> col_names;
  std::vector<LinearRow> rows;
  double offset = 0.0;

  int add_column(double c, double lo, double hi, bool is_int = false, std::string name = {});
  int add_row(LinearRow row);
  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

/// Writes the problem in free MPS form.
void write_mps(std::ostream& out, const LinearProblem& problem);

enum class SolveStatus { Optimal, Infeasible, TimeLimit, Interrupted, Unbounded, Error };
std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  bool has_solution = false;
  double objective = kInf;
  double bound = -kInf;
  std::vector<double> x;
  std::string message;
};

struct SolveOptions {
  double time_limit = kInf;  // seconds
  int threads = 1;
  int seed = 0;
  bool verbose = false;
  double mip_rel_gap = 1e-9;
};

/// Called on every improving MIP incumbent. Returning true rejects it and stops the
/// solve at the next opportunity with status Interrupted.
using IncumbentCallback = std::function<bool(const std::vector<double>& x, double objective)>;

class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const LinearProblem& problem, const SolveOptions& options,
                            const IncumbentCallback& on_incumbent = {}) = 0;
};

/// Backend named by `name`, or by BTSFF_BACKEND when `name` is empty. Only "highs" ships.
std::unique_ptr<MilpBackend> make_backend(const std::string& name = {});

}  // namespace btsff
