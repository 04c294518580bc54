#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "Highs.h"
#include "btsff/lp.hpp"

namespace btsff {

int LinearProblem::add_column(double c, double lo, double hi, bool is_int, std::string name) {
  cost.push_back(c);
  col_lower.push_back(lo);
  col_upper.push_back(hi);
  integer.push_back(is_int);
  col_names.push_back(std::move(name));
  return num_cols() - 1;
}

int LinearProblem::add_row(LinearRow row) {
  rows.push_back(std::move(row));
  return num_rows() - 1;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Interrupted: return "interrupted";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

void write_mps(std::ostream& out, const LinearProblem& p) {
  auto col = [&](int j) { return p.col_names[j].empty() ? "C" + std::to_string(j) : p.col_names[j]; };
  auto row = [&](int i) { return p.rows[i].name.empty() ? "R" + std::to_string(i) : p.rows[i].name; };
  std::vector<std::vector<std::pair<int, double>>> by_col(p.num_cols());
  for (int i = 0; i < p.num_rows(); ++i) {
    for (std::size_t k = 0; k < p.rows[i].index.size(); ++k) by_col[p.rows[i].index[k]].emplace_back(i, p.rows[i].value[k]);
  }
  out << std::setprecision(17) << "NAME btsff\nROWS\n N OBJ\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const auto& r = p.rows[i];
    char sense = r.lower == r.upper ? 'E' : (r.lower > -kInf ? 'G' : 'L');
    out << ' ' << sense << ' ' << row(i) << '\n';
  }
  out << "COLUMNS\n";
  bool in_int = false;
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.integer[j] != in_int) {
      out << " MARKER 'MARKER' " << (p.integer[j] ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = p.integer[j];
    }
    out << ' ' << col(j) << " OBJ " << p.cost[j] << '\n';
    for (auto [i, v] : by_col[j]) out << ' ' << col(j) << ' ' << row(i) << ' ' << v << '\n';
  }
  if (in_int) out << " MARKER 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const auto& r = p.rows[i];
    double rhs = r.lower > -kInf ? r.lower : r.upper;
    if (rhs != 0.0) out << " RHS " << row(i) << ' ' << rhs << '\n';
  }
  out << "RANGES\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const auto& r = p.rows[i];
    if (r.lower > -kInf && r.upper < kInf && r.lower != r.upper) out << " RNG " << row(i) << ' ' << r.upper - r.lower << '\n';
  }
  out << "BOUNDS\n";
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.col_lower[j] == p.col_upper[j]) {
      out << " FX BND " << col(j) << ' ' << p.col_lower[j] << '\n';
      continue;
    }
    if (p.col_lower[j] == -kInf) out << " MI BND " << col(j) << '\n';
    else if (p.col_lower[j] != 0.0) out << " LO BND " << col(j) << ' ' << p.col_lower[j] << '\n';
    if (p.col_upper[j] < kInf) out << " UP BND " << col(j) << ' ' << p.col_upper[j] << '\n';
  }
  out << "ENDATA\n";
}

namespace {

class HighsBackend final : public MilpBackend {
 public:
  std::string name() const override { return "highs"; }

  SolveResult solve(const LinearProblem& p, const SolveOptions& options,
                    const IncumbentCallback& on_incumbent) override {
    Highs highs;
    highs.setOptionValue("output_flag", options.verbose);
    highs.setOptionValue("random_seed", options.seed);
    highs.setOptionValue("threads", std::max(1, options.threads));
    highs.setOptionValue("mip_rel_gap", options.mip_rel_gap);
    highs.setOptionValue("mip_feasibility_tolerance", 1e-9);
    if (options.time_limit < kInf) highs.setOptionValue("time_limit", options.time_limit);

    HighsLp lp;
    lp.num_col_ = p.num_cols();
    lp.num_row_ = p.num_rows();
    lp.col_cost_ = p.cost;
    lp.col_lower_ = p.col_lower;
    lp.col_upper_ = p.col_upper;
    lp.offset_ = p.offset;
    lp.row_lower_.reserve(p.rows.size());
    lp.row_upper_.reserve(p.rows.size());
    // Column-wise matrix.
    std::vector<HighsInt> count(p.num_cols() + 1, 0);
    for (const auto& r : p.rows) {
      for (int j : r.index) ++count[j + 1];
    }
    for (int j = 0; j < p.num_cols(); ++j) count[j + 1] += count[j];
    lp.a_matrix_.format_ = MatrixFormat::kColwise;
    lp.a_matrix_.start_ = count;
    lp.a_matrix_.index_.resize(count.back());
    lp.a_matrix_.value_.resize(count.back());
    std::vector<HighsInt> fill(count.begin(), count.end() - 1);
    for (int i = 0; i < p.num_rows(); ++i) {
      const auto& r = p.rows[i];
      lp.row_lower_.push_back(r.lower);
      lp.row_upper_.push_back(r.upper);
      for (std::size_t k = 0; k < r.index.size(); ++k) {
        auto pos = fill[r.index[k]]++;
        lp.a_matrix_.index_[pos] = i;
        lp.a_matrix_.value_[pos] = r.value[k];
      }
    }
    bool mip = false;
    for (bool b : p.integer) mip = mip || b;
    if (mip) {
      lp.integrality_.resize(p.num_cols());
      for (int j = 0; j < p.num_cols(); ++j) {
        lp.integrality_[j] = p.integer[j] ? HighsVarType::kInteger : HighsVarType::kContinuous;
      }
    }
    SolveResult result;
    if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
      result.message = "model rejected by HiGHS";
      return result;
    }

    bool rejected = false;
    if (mip && on_incumbent) {
      const int ncol = p.num_cols();
      highs.setCallback([&](int type, const std::string&, const HighsCallbackDataOut* out, HighsCallbackDataIn* in, void*) {
        if (type == kCallbackMipImprovingSolution && !rejected) {
          std::vector<double> x(out->mip_solution, out->mip_solution + ncol);
          rejected = on_incumbent(x, out->objective_function_value);
        } else if (type == kCallbackMipInterrupt && rejected) {
          in->user_interrupt = 1;
        }
      });
      highs.startCallback(kCallbackMipImprovingSolution);
      highs.startCallback(kCallbackMipInterrupt);
    }

    const HighsStatus run = highs.run();
    const HighsModelStatus ms = highs.getModelStatus();
    const auto& info = highs.getInfo();
    if (run == HighsStatus::kError && ms != HighsModelStatus::kInterrupt) {
      result.message = "HiGHS run failed: " + highs.modelStatusToString(ms);
      return result;
    }
    switch (ms) {
      case HighsModelStatus::kOptimal: result.status = SolveStatus::Optimal; break;
      case HighsModelStatus::kInfeasible: result.status = SolveStatus::Infeasible; break;
      case HighsModelStatus::kUnboundedOrInfeasible:
      case HighsModelStatus::kUnbounded: result.status = SolveStatus::Unbounded; break;
      case HighsModelStatus::kTimeLimit: result.status = SolveStatus::TimeLimit; break;
      case HighsModelStatus::kInterrupt: result.status = SolveStatus::Interrupted; break;
      default:
        result.status = SolveStatus::Error;
        result.message = "HiGHS status: " + highs.modelStatusToString(ms);
    }
    if (rejected) result.status = SolveStatus::Interrupted;
    const bool has = mip ? info.primal_solution_status == kSolutionStatusFeasible
                         : (ms == HighsModelStatus::kOptimal);
    if (has) {
      result.has_solution = true;
      result.x = highs.getSolution().col_value;
      result.objective = info.objective_function_value;
    }
    result.bound = mip ? info.mip_dual_bound : result.objective;
    if (result.status == SolveStatus::Optimal && mip) result.bound = std::min(result.bound, result.objective);
    return result;
  }
};

}  // namespace

std::unique_ptr<MilpBackend> make_backend(const std::string& name) {
  std::string chosen = name;
  if (chosen.empty()) {
    const char* env = std::getenv("BTSFF_BACKEND");
    chosen = env != nullptr ? env : "highs";
  }
  if (chosen == "highs") return std::make_unique<HighsBackend>();
  throw std::invalid_argument("unknown MILP backend '" + chosen + "' (available: highs)");
}

}  // namespace btsff
