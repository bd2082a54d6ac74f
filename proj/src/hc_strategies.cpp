#include "hcbo/hc_strategies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcbo/errors.hpp"

namespace hcbo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

double parse_number(const std::string& text, const std::string& spec) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("bad number in strategy '" + spec + "'");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

StrategyConfig StrategyConfig::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ConfigError("empty strategy spec");
  StrategyConfig cfg;
  const auto bad = [&] { return ConfigError("unrecognized strategy spec '" + spec + "'"); };

  if (parts[0] == "rejection") {
    if (parts.size() != 1) throw bad();
    cfg.kind = StrategyKind::rejection;
  } else if (parts[0] == "replace") {
    cfg.kind = StrategyKind::replace;
    if (parts.size() < 2) throw bad();
    const std::string& mode = parts[1];
    if (mode == "global-max" && parts.size() == 2) {
      cfg.mode = ReplaceMode::global_max;
    } else if (mode == "closest" && parts.size() == 2) {
      cfg.mode = ReplaceMode::closest;
    } else if ((mode == "nearest-mean" || mode == "nearest-max") && parts.size() <= 3) {
      cfg.mode = mode == "nearest-mean" ? ReplaceMode::nearest_mean : ReplaceMode::nearest_max;
      if (parts.size() == 3) {
        const double n = parse_number(parts[2], spec);
        if (n != std::floor(n)) throw bad();
        cfg.n_nearest = static_cast<int>(n);
      }
    } else if (mode == "predicted-worst" && parts.size() <= 3) {
      cfg.mode = ReplaceMode::predicted_worst;
      if (parts.size() == 3) {
        if (parts[2].rfind("a=", 0) != 0) throw bad();
        cfg.alpha = parse_number(parts[2].substr(2), spec);
      }
    } else {
      throw bad();
    }
  } else if (parts[0] == "predict") {
    cfg.kind = StrategyKind::predict;
    if (parts.size() < 2 || parts.size() > 3) throw bad();
    cfg.model = parse_pov_variant(parts[1]);
    if (parts.size() == 3) {
      if (parts[2] == "penalty") {
        cfg.integration = PovIntegration::penalty;
      } else if (parts[2].rfind("pov=", 0) == 0) {
        cfg.integration = PovIntegration::constraint;
        cfg.pov_min = parse_number(parts[2].substr(4), spec);
      } else {
        throw bad();
      }
    }
  } else {
    throw bad();
  }
  cfg.validate();
  return cfg;
}

std::string StrategyConfig::to_string() const {
  switch (kind) {
    case StrategyKind::rejection:
      return "rejection";
    case StrategyKind::replace:
      switch (mode) {
        case ReplaceMode::global_max:
          return "replace:global-max";
        case ReplaceMode::closest:
          return "replace:closest";
        case ReplaceMode::nearest_mean:
          return "replace:nearest-mean:" + std::to_string(n_nearest);
        case ReplaceMode::nearest_max:
          return "replace:nearest-max:" + std::to_string(n_nearest);
        case ReplaceMode::predicted_worst:
          return "replace:predicted-worst:a=" + format_number(alpha);
      }
      break;
    case StrategyKind::predict:
      return "predict:" + hcbo::to_string(model) +
             (integration == PovIntegration::penalty ? std::string(":penalty") : ":pov=" + format_number(pov_min));
  }
  return "?";
}

void StrategyConfig::validate() const {
  if (kind == StrategyKind::replace) {
    if ((mode == ReplaceMode::nearest_mean || mode == ReplaceMode::nearest_max) && n_nearest < 1)
      throw ConfigError("n-nearest replacement needs n >= 1");
    if (mode == ReplaceMode::predicted_worst && !(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  }
  if (kind == StrategyKind::predict && integration == PovIntegration::constraint &&
      !(pov_min >= 0.0 && pov_min < 1.0))
    throw ConfigError("pov_min must lie in [0, 1)");
}

TrainingData build_training_sets(const DesignSpace& space, const std::vector<EvaluatedPoint>& archive,
                                 const StrategyConfig& cfg, const GpOptions& gp_options) {
  std::vector<std::size_t> viable, failed;
  for (std::size_t i = 0; i < archive.size(); ++i) (archive[i].viable ? viable : failed).push_back(i);
  if (viable.empty()) throw NoViablePoints("no viable point in the archive");

  const std::size_t n_out = archive[viable.front()].f.size() + archive[viable.front()].g.size();
  auto output = [&](std::size_t i, std::size_t k) {
    const auto& p = archive[i];
    return k < p.f.size() ? p.f[k] : p.g[k - p.f.size()];
  };

  TrainingData td;
  td.y.assign(n_out, {});

  if (cfg.kind != StrategyKind::replace || failed.empty()) {
    for (std::size_t i : viable) {
      td.x.push_back(archive[i].x);
      for (std::size_t k = 0; k < n_out; ++k) td.y[k].push_back(output(i, k));
    }
    if (cfg.kind == StrategyKind::predict) {
      td.has_labels = true;
      for (const auto& p : archive) {
        td.label_x.push_back(p.x);
        td.labels.push_back(p.viable ? 1 : 0);
      }
    }
    return td;
  }

  for (std::size_t i = 0; i < archive.size(); ++i) td.x.push_back(archive[i].x);
  for (std::size_t k = 0; k < n_out; ++k) {
    td.y[k].resize(archive.size());
    for (std::size_t i : viable) td.y[k][i] = output(i, k);
  }

  if (cfg.mode == ReplaceMode::global_max) {
    for (std::size_t k = 0; k < n_out; ++k) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t i : viable) worst = std::max(worst, output(i, k));
      for (std::size_t i : failed) td.y[k][i] = worst;
    }
    return td;
  }

  if (cfg.mode == ReplaceMode::predicted_worst) {
    std::vector<DesignVector> vx;
    for (std::size_t i : viable) vx.push_back(archive[i].x);
    std::vector<DesignVector> fx;
    for (std::size_t i : failed) fx.push_back(archive[i].x);
    for (std::size_t k = 0; k < n_out; ++k) {
      std::vector<double> vy;
      for (std::size_t i : viable) vy.push_back(output(i, k));
      std::vector<double> mean, sd;
      if (vx.size() >= 2) {
        GpModel::fit(space, vx, vy, gp_options).predict(fx, mean, sd);
      } else {
        mean.assign(fx.size(), vy.front());
        sd.assign(fx.size(), 0.0);
      }
      for (std::size_t q = 0; q < failed.size(); ++q) td.y[k][failed[q]] = mean[q] + cfg.alpha * sd[q];
    }
    return td;
  }

  // Neighborhood modes: viable points ordered by (distance, archive index).
  const std::size_t n_nb = cfg.mode == ReplaceMode::closest
                               ? 1
                               : std::min<std::size_t>(static_cast<std::size_t>(cfg.n_nearest), viable.size());
  std::vector<std::pair<double, std::size_t>> dist(viable.size());
  for (std::size_t i : failed) {
    for (std::size_t v = 0; v < viable.size(); ++v)
      dist[v] = {mixed_distance(space, archive[i].x, archive[viable[v]].x), viable[v]};
    std::partial_sort(dist.begin(), dist.begin() + n_nb, dist.end());
    for (std::size_t k = 0; k < n_out; ++k) {
      double acc = cfg.mode == ReplaceMode::nearest_max ? -std::numeric_limits<double>::infinity() : 0.0;
      for (std::size_t r = 0; r < n_nb; ++r) {
        const double v = output(dist[r].second, k);
        acc = cfg.mode == ReplaceMode::nearest_max ? std::max(acc, v) : acc + v;
      }
      if (cfg.mode != ReplaceMode::nearest_max) acc /= static_cast<double>(n_nb);
      td.y[k][i] = acc;
    }
  }
  return td;
}

std::function<double(const DesignVector&)> infill_constraint_pov(const PovModel& model, double pov_min) {
  return [&model, pov_min](const DesignVector& x) { return infill_constraint_pov(model.predict(x), pov_min); };
}

std::vector<double> infill_penalty_pov(const std::vector<double>& f, double pov) {
  std::vector<double> out(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) out[m] = infill_penalty_pov(f[m], pov);
  return out;
}

}  // namespace hcbo
