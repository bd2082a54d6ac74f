#include "hcbo/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hcbo/errors.hpp"

namespace hcbo {

VariableDef VariableDef::continuous(double lower, double upper, std::string name) {
  if (!(lower < upper)) throw ConfigError("continuous variable requires lower < upper");
  VariableDef v;
  v.kind = VarKind::continuous;
  v.lower = lower;
  v.upper = upper;
  v.name = std::move(name);
  return v;
}

VariableDef VariableDef::integer(int lower, int upper, std::string name) {
  if (lower > upper) throw ConfigError("integer variable requires lower <= upper");
  VariableDef v;
  v.kind = VarKind::integer;
  v.int_lower = lower;
  v.int_upper = upper;
  v.lower = lower;
  v.upper = upper;
  v.name = std::move(name);
  return v;
}

VariableDef VariableDef::categorical(int n_options, std::string name) {
  if (n_options < 2) throw ConfigError("categorical variable requires at least 2 options");
  VariableDef v;
  v.kind = VarKind::categorical;
  v.n_options = n_options;
  v.lower = 0;
  v.upper = n_options - 1;
  v.name = std::move(name);
  return v;
}

int VariableDef::n_levels() const {
  switch (kind) {
    case VarKind::integer:
      return int_upper - int_lower + 1;
    case VarKind::categorical:
      return n_options;
    case VarKind::continuous:
      break;
  }
  return 0;
}

DesignSpace::DesignSpace(std::vector<VariableDef> variables, CorrectionRule rule,
                         std::vector<ValueConstraint> value_constraints)
    : variables_(std::move(variables)), rule_(std::move(rule)), value_constraints_(std::move(value_constraints)) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].is_discrete())
      discrete_index_.push_back(i);
    else
      continuous_index_.push_back(i);
  }
}

double DesignSpace::declared_discrete_count() const {
  double n = 1.0;
  for (std::size_t j : discrete_index_) n *= variables_[j].n_levels();
  return n;
}

DesignVector DesignSpace::make(std::vector<int> discrete, std::vector<double> continuous) const {
  DesignVector x;
  x.discrete = std::move(discrete);
  x.continuous = std::move(continuous);
  x.active.assign(n_vars(), true);
  return x;
}

DesignVector DesignSpace::repair(const DesignVector& raw) const {
  if (raw.discrete.size() != n_discrete() || raw.continuous.size() != n_continuous()) {
    std::ostringstream msg;
    msg << "design vector has " << raw.discrete.size() << " discrete and " << raw.continuous.size()
        << " continuous values, space expects " << n_discrete() << " and " << n_continuous();
    throw InvalidVector(msg.str());
  }

  DesignVector x;
  x.discrete.resize(n_discrete());
  x.continuous.resize(n_continuous());
  for (std::size_t j = 0; j < n_discrete(); ++j)
    x.discrete[j] = std::clamp(raw.discrete[j], 0, discrete_def(j).n_levels() - 1);
  for (std::size_t i = 0; i < n_continuous(); ++i) {
    const auto& def = continuous_def(i);
    double v = raw.continuous[i];
    if (std::isnan(v)) v = def.midpoint();
    x.continuous[i] = std::clamp(v, def.lower, def.upper);
  }

  x.active.assign(n_vars(), true);
  if (rule_) rule_(x.discrete, x.active);

  for (std::size_t j = 0; j < n_discrete(); ++j)
    if (!x.active[discrete_index_[j]]) x.discrete[j] = 0;
  for (std::size_t i = 0; i < n_continuous(); ++i)
    if (!x.active[continuous_index_[i]]) x.continuous[i] = continuous_def(i).midpoint();
  return x;
}

bool DesignSpace::is_repaired(const DesignVector& x) const {
  if (x.discrete.size() != n_discrete() || x.continuous.size() != n_continuous() || x.active.size() != n_vars())
    return false;
  return repair(x) == x;
}

bool DesignSpace::satisfies_value_constraints(std::span<const int> discrete) const {
  return std::all_of(value_constraints_.begin(), value_constraints_.end(),
                     [&](const ValueConstraint& c) { return c.satisfied(discrete); });
}

std::vector<double> DesignSpace::encode(const DesignVector& x) const {
  std::vector<double> u(n_vars());
  for (std::size_t j = 0; j < n_discrete(); ++j) {
    const auto& def = discrete_def(j);
    const int n = def.n_levels();
    if (def.kind == VarKind::categorical)
      u[discrete_index_[j]] = x.discrete[j];
    else
      u[discrete_index_[j]] = n > 1 ? static_cast<double>(x.discrete[j]) / (n - 1) : 0.0;
  }
  for (std::size_t i = 0; i < n_continuous(); ++i) {
    const auto& def = continuous_def(i);
    u[continuous_index_[i]] = (x.continuous[i] - def.lower) / (def.upper - def.lower);
  }
  return u;
}

double mixed_distance(const DesignSpace& space, const DesignVector& a, const DesignVector& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < space.n_continuous(); ++i) {
    const auto& def = space.continuous_def(i);
    const double d = (a.continuous[i] - b.continuous[i]) / (def.upper - def.lower);
    d2 += d * d;
  }
  for (std::size_t j = 0; j < space.n_discrete(); ++j)
    if (a.discrete[j] != b.discrete[j]) d2 += 1.0;
  return std::sqrt(d2);
}

ValidDiscreteSet enumerate_valid_discrete(const DesignSpace& space, double cap) {
  const double n_declared = space.declared_discrete_count();
  if (n_declared > cap) {
    std::ostringstream msg;
    msg << "declared discrete product " << n_declared << " exceeds enumeration cap " << cap;
    throw CapExceeded(msg.str());
  }

  const std::size_t nd = space.n_discrete();
  std::vector<double> mid(space.n_continuous());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = space.continuous_def(i).midpoint();

  ValidDiscreteSet out;
  std::vector<int> levels(nd, 0);
  // Odometer over the declared product, last variable fastest.
  while (true) {
    DesignVector raw = space.make(levels, mid);
    DesignVector fixed = space.repair(raw);
    if (fixed.discrete == levels) {
      out.vectors.push_back(levels);
      out.activeness.push_back(fixed.active);
    }

    std::size_t k = nd;
    while (k > 0) {
      --k;
      if (++levels[k] < space.discrete_def(k).n_levels()) break;
      levels[k] = 0;
      if (k == 0) return out;
    }
    if (nd == 0) return out;
  }
}

ImputationRatio imputation_ratio(const DesignSpace& space, const ValidDiscreteSet& valid) {
  if (valid.empty()) throw EmptyValidSet("imputation ratio needs at least one valid discrete vector");

  ImputationRatio ir;
  const double n_valid = static_cast<double>(valid.size());
  ir.discrete = space.declared_discrete_count() / n_valid;

  const std::size_t nc = space.n_continuous();
  if (nc > 0) {
    double n_active = 0.0;
    for (const auto& row : valid.activeness)
      for (std::size_t i = 0; i < nc; ++i)
        if (row[space.continuous_var(i)]) n_active += 1.0;
    if (n_active == 0.0) throw DivisionDegenerate("no continuous variable is active in any valid vector");
    ir.continuous = n_valid * static_cast<double>(nc) / n_active;
  }
  ir.overall = ir.discrete * ir.continuous;
  return ir;
}

RateDiversity rate_diversity(const DesignSpace& space, const ValidDiscreteSet& valid) {
  if (valid.empty()) throw EmptyValidSet("rate diversity needs at least one valid discrete vector");

  RateDiversity rd;
  const double n = static_cast<double>(valid.size());
  for (std::size_t j = 0; j < space.n_discrete(); ++j) {
    const std::size_t var = space.discrete_var(j);
    // counts[0] is the inactive category, counts[1 + v] option v
    std::vector<double> counts(space.discrete_def(j).n_levels() + 1, 0.0);
    for (std::size_t l = 0; l < valid.size(); ++l) {
      if (valid.activeness[l][var])
        counts[1 + valid.vectors[l][j]] += 1.0;
      else
        counts[0] += 1.0;
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    const double value = (*hi - *lo) / n;
    rd.per_variable.push_back(value);
    rd.max = std::max(rd.max, value);
  }
  return rd;
}

}  // namespace hcbo
