#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hcbo {

enum class VarKind { continuous, integer, categorical };

/// One design variable. Discrete variables (integer and categorical) are stored
/// as option indices 0..n_levels()-1; an integer variable's value is lower + index.
struct VariableDef {
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  int int_lower = 0;
  int int_upper = 0;
  int n_options = 0;
  std::string name;

  static VariableDef continuous(double lower, double upper, std::string name = {});
  static VariableDef integer(int lower, int upper, std::string name = {});
  static VariableDef categorical(int n_options, std::string name = {});

  bool is_discrete() const { return kind != VarKind::continuous; }
  bool is_continuous() const { return kind == VarKind::continuous; }
  int n_levels() const;
  double midpoint() const { return 0.5 * (lower + upper); }
};

struct DesignVector {
  std::vector<int> discrete;       // option index per discrete variable
  std::vector<double> continuous;  // value per continuous variable
  std::vector<bool> active;        // per variable, declaration order

  bool operator==(const DesignVector&) const = default;
};

/// Corrects discrete values and sets the activeness mask (declaration order) in
/// place. Called on clipped vectors with every variable initially active.
using CorrectionRule = std::function<void(std::vector<int>& discrete, std::vector<bool>& active)>;

struct ValueConstraint {
  std::string description;
  std::function<bool(std::span<const int> discrete)> satisfied;
};

class DesignSpace {
 public:
  DesignSpace() = default;
  explicit DesignSpace(std::vector<VariableDef> variables, CorrectionRule rule = {},
                       std::vector<ValueConstraint> value_constraints = {});

  const std::vector<VariableDef>& variables() const { return variables_; }
  std::size_t n_vars() const { return variables_.size(); }
  std::size_t n_discrete() const { return discrete_index_.size(); }
  std::size_t n_continuous() const { return continuous_index_.size(); }

  /// Variable index (declaration order) of the j-th discrete / i-th continuous variable.
  std::size_t discrete_var(std::size_t j) const { return discrete_index_[j]; }
  std::size_t continuous_var(std::size_t i) const { return continuous_index_[i]; }
  const VariableDef& discrete_def(std::size_t j) const { return variables_[discrete_index_[j]]; }
  const VariableDef& continuous_def(std::size_t i) const { return variables_[continuous_index_[i]]; }

  const std::vector<ValueConstraint>& value_constraints() const { return value_constraints_; }
  bool has_hierarchy() const { return static_cast<bool>(rule_); }

  /// Product of the discrete option counts (1 without discrete variables).
  double declared_discrete_count() const;

  /// Vector with every variable active; no repair applied.
  DesignVector make(std::vector<int> discrete, std::vector<double> continuous) const;

  /// Clip, correct and impute. Total, deterministic and idempotent.
  DesignVector repair(const DesignVector& raw) const;
  bool is_repaired(const DesignVector& x) const;
  bool satisfies_value_constraints(std::span<const int> discrete) const;

  /// Per-variable unit encoding: continuous (x-lo)/(hi-lo), integer index/(N-1),
  /// categorical the raw option index (compared by equality only).
  std::vector<double> encode(const DesignVector& x) const;

 private:
  std::vector<VariableDef> variables_;
  CorrectionRule rule_;
  std::vector<ValueConstraint> value_constraints_;
  std::vector<std::size_t> discrete_index_;
  std::vector<std::size_t> continuous_index_;
};

/// Normalized Euclidean distance over continuous variables plus Hamming distance
/// over discrete ones, combined as sqrt(sum_c d_c^2 + sum_d [a != b]).
double mixed_distance(const DesignSpace& space, const DesignVector& a, const DesignVector& b);

struct ValidDiscreteSet {
  std::vector<std::vector<int>> vectors;
  std::vector<std::vector<bool>> activeness;  // one row per vector, all variables

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
};

inline constexpr double kDefaultEnumerationCap = 1e7;

ValidDiscreteSet enumerate_valid_discrete(const DesignSpace& space, double cap = kDefaultEnumerationCap);

struct ImputationRatio {
  double discrete = 1.0;
  double continuous = 1.0;
  double overall = 1.0;
};

/// Discrete, continuous and overall imputation ratios. Without continuous
/// variables the continuous ratio is 1 by convention.
ImputationRatio imputation_ratio(const DesignSpace& space, const ValidDiscreteSet& valid);

struct RateDiversity {
  std::vector<double> per_variable;  // one per discrete variable
  double max = 0.0;
};

/// Spread of occurrence rates (inactive counted as its own category) per
/// discrete variable, over all valid discrete vectors.
RateDiversity rate_diversity(const DesignSpace& space, const ValidDiscreteSet& valid);

}  // namespace hcbo
