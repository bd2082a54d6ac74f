#include "hcbo/pov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "hcbo/errors.hpp"

namespace hcbo {

std::string to_string(PovVariant v) {
  switch (v) {
    case PovVariant::rfc:
      return "rfc";
    case PovVariant::knn:
      return "knn";
    case PovVariant::rbf:
      return "rbf";
    case PovVariant::mdgp:
      return "mdgp";
  }
  return "?";
}

PovVariant parse_pov_variant(const std::string& name) {
  if (name == "rfc") return PovVariant::rfc;
  if (name == "knn") return PovVariant::knn;
  if (name == "rbf") return PovVariant::rbf;
  if (name == "mdgp") return PovVariant::mdgp;
  throw ConfigError("unknown PoV model '" + name + "'");
}

namespace {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double vote = 0.0;
};

using Tree = std::vector<TreeNode>;

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& u, const std::vector<int>& labels, int n_features_try,
              std::mt19937_64& rng)
      : u_(u), labels_(labels), mtry_(n_features_try), rng_(rng) {}

  Tree build(std::vector<int> samples) {
    tree_.clear();
    grow(std::move(samples));
    return std::move(tree_);
  }

 private:
  int grow(std::vector<int> samples) {
    const int id = static_cast<int>(tree_.size());
    tree_.emplace_back();
    int n1 = 0;
    for (int s : samples) n1 += labels_[s];
    const int n = static_cast<int>(samples.size());
    if (n1 == 0 || n1 == n) {
      tree_[id].vote = n1 == 0 ? 0.0 : 1.0;
      return id;
    }

    const int d = static_cast<int>(u_.front().size());
    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng_);

    double best_impurity = gini(n1, n) * n;
    int best_feature = -1;
    double best_threshold = 0.0;
    int tried = 0;
    std::vector<std::pair<double, int>> column(n);
    for (int f : features) {
      if (tried >= mtry_) break;
      for (int i = 0; i < n; ++i) column[i] = {u_[samples[i]][f], labels_[samples[i]]};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++tried;
      int left1 = 0;
      for (int i = 0; i + 1 < n; ++i) {
        left1 += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const int nl = i + 1, nr = n - nl;
        const double impurity = gini(left1, nl) * nl + gini(n1 - left1, nr) * nr;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = 0.5 * (column[i].first + column[i + 1].first);
        }
      }
    }

    if (best_feature < 0) {
      const double frac = static_cast<double>(n1) / n;
      tree_[id].vote = frac > 0.5 ? 1.0 : (frac < 0.5 ? 0.0 : 0.5);
      return id;
    }

    std::vector<int> left, right;
    for (int s : samples) (u_[s][best_feature] <= best_threshold ? left : right).push_back(s);
    samples.clear();
    samples.shrink_to_fit();
    tree_[id].feature = best_feature;
    tree_[id].threshold = best_threshold;
    const int l = grow(std::move(left));
    tree_[id].left = l;
    const int r = grow(std::move(right));
    tree_[id].right = r;
    return id;
  }

  static double gini(int n1, int n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(n1) / n;
    return 2.0 * p * (1.0 - p);
  }

  const std::vector<std::vector<double>>& u_;
  const std::vector<int>& labels_;
  int mtry_;
  std::mt19937_64& rng_;
  Tree tree_;
};

double tree_vote(const Tree& tree, const std::vector<double>& u) {
  int node = 0;
  while (tree[node].feature >= 0)
    node = u[tree[node].feature] <= tree[node].threshold ? tree[node].left : tree[node].right;
  return tree[node].vote;
}

}  // namespace

struct PovModel::Impl {
  DesignSpace space;
  std::vector<DesignVector> x;
  std::vector<int> labels;
  // rfc
  std::vector<Tree> trees;
  // knn
  int k = 5;
  // rbf
  double width = 1.0;
  double jitter = 0.0;
  double offset = 0.0;
  Eigen::VectorXd weights;
  // mdgp
  GpModel gp;
};

PovModel::PovModel() = default;
PovModel::~PovModel() = default;
PovModel::PovModel(PovModel&&) noexcept = default;
PovModel& PovModel::operator=(PovModel&&) noexcept = default;

std::vector<double> PovModel::length_scales() const {
  if (variant_ != PovVariant::mdgp || degenerate_ || !impl_) return {};
  return impl_->gp.length_scales();
}

PovModel PovModel::fit(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<int>& labels,
                       const PovOptions& options) {
  if (x.size() != labels.size()) throw ConfigError("PoV fit: x and labels sizes differ");
  if (x.size() < 2) throw TooFewPoints("PoV fit needs at least 2 points");

  PovModel m;
  m.variant_ = options.variant;
  m.impl_ = std::make_unique<Impl>();
  Impl& s = *m.impl_;
  s.space = space;
  s.x = x;
  s.labels.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) s.labels[i] = labels[i] != 0 ? 1 : 0;

  const int n1 = std::accumulate(s.labels.begin(), s.labels.end(), 0);
  const int n = static_cast<int>(s.labels.size());
  if (n1 == 0 || n1 == n) {
    m.degenerate_ = true;
    m.constant_ = n1 == 0 ? 0.0 : 1.0;
    return m;
  }

  switch (options.variant) {
    case PovVariant::rfc: {
      if (options.n_trees < 1) throw ConfigError("RFC needs at least one tree");
      std::vector<std::vector<double>> u(n);
      for (int i = 0; i < n; ++i) u[i] = space.encode(x[i]);
      const int d = static_cast<int>(space.n_vars());
      const int mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<int> pick(0, n - 1);
      TreeBuilder builder(u, s.labels, mtry, rng);
      s.trees.reserve(options.n_trees);
      for (int t = 0; t < options.n_trees; ++t) {
        std::vector<int> boot(n);
        for (auto& b : boot) b = pick(rng);
        s.trees.push_back(builder.build(std::move(boot)));
      }
      break;
    }
    case PovVariant::knn:
      if (options.k < 1) throw ConfigError("KNN needs k >= 1");
      s.k = std::min(options.k, n);
      break;
    case PovVariant::rbf: {
      std::vector<double> pair;
      Eigen::MatrixXd dist(n, n);
      for (int a = 0; a < n; ++a) {
        dist(a, a) = 0.0;
        for (int b = a + 1; b < n; ++b) {
          dist(a, b) = dist(b, a) = mixed_distance(space, x[a], x[b]);
          pair.push_back(dist(a, b));
        }
      }
      std::nth_element(pair.begin(), pair.begin() + pair.size() / 2, pair.end());
      s.width = pair[pair.size() / 2];
      if (!(s.width > 0.0)) s.width = 1.0;
      // Interpolate labels relative to their mean so far-away predictions revert to it.
      s.offset = static_cast<double>(n1) / n;
      Eigen::MatrixXd phi = (-(dist.array() / s.width).square()).exp().matrix();
      Eigen::VectorXd rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = s.labels[i] - s.offset;
      Eigen::LLT<Eigen::MatrixXd> llt;
      for (s.jitter = 1e-10; s.jitter <= 1.0001e-2; s.jitter *= 10.0) {
        Eigen::MatrixXd k = phi;
        k.diagonal().array() += s.jitter;
        llt.compute(k);
        if (llt.info() == Eigen::Success) break;
      }
      if (llt.info() != Eigen::Success) throw SingularKernel("RBF system not positive definite");
      s.weights = llt.solve(rhs);
      break;
    }
    case PovVariant::mdgp: {
      std::vector<double> y(s.labels.begin(), s.labels.end());
      s.gp = GpModel::fit(space, x, y, options.gp);
      break;
    }
  }
  return m;
}

double PovModel::predict(const DesignVector& x) const { return predict(std::vector<DesignVector>{x})[0]; }

std::vector<double> PovModel::predict(const std::vector<DesignVector>& xs) const {
  std::vector<double> out(xs.size(), constant_);
  if (degenerate_ || !impl_) return out;
  const Impl& s = *impl_;
  const int n = static_cast<int>(s.x.size());

  switch (variant_) {
    case PovVariant::rfc:
      for (std::size_t q = 0; q < xs.size(); ++q) {
        const auto u = s.space.encode(xs[q]);
        double votes = 0.0;
        for (const auto& t : s.trees) votes += tree_vote(t, u);
        out[q] = votes / static_cast<double>(s.trees.size());
      }
      break;
    case PovVariant::knn: {
      std::vector<std::pair<double, int>> d(n);
      for (std::size_t q = 0; q < xs.size(); ++q) {
        for (int i = 0; i < n; ++i) d[i] = {mixed_distance(s.space, xs[q], s.x[i]), i};
        // (distance, index) ordering gives the lower index on ties
        std::partial_sort(d.begin(), d.begin() + s.k, d.end());
        int viable = 0;
        for (int i = 0; i < s.k; ++i) viable += s.labels[d[i].second];
        out[q] = static_cast<double>(viable) / s.k;
      }
      break;
    }
    case PovVariant::rbf:
      for (std::size_t q = 0; q < xs.size(); ++q) {
        double v = s.offset;
        for (int i = 0; i < n; ++i) {
          const double r = mixed_distance(s.space, xs[q], s.x[i]);
          double phi = std::exp(-(r / s.width) * (r / s.width));
          if (r == 0.0) phi += s.jitter;
          v += s.weights[i] * phi;
        }
        out[q] = std::clamp(v, 0.0, 1.0);
      }
      break;
    case PovVariant::mdgp: {
      std::vector<double> mean, sd;
      s.gp.predict(xs, mean, sd);
      for (std::size_t q = 0; q < xs.size(); ++q) out[q] = std::clamp(mean[q], 0.0, 1.0);
      break;
    }
  }
  return out;
}

}  // namespace hcbo
