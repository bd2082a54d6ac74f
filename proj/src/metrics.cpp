#include "hcbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcbo/errors.hpp"

namespace hcbo {

namespace {

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strictly = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
    if (a[m] < b[m]) strictly = true;
  }
  return strictly;
}

// Area dominated by 2-D points below ref (points already filtered).
double hv2(PointSet pts, double r0, double r1) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0, y_prev = r1;
  for (const auto& p : pts) {
    if (p[1] >= y_prev) continue;
    area += (r0 - p[0]) * (y_prev - p[1]);
    y_prev = p[1];
  }
  return area;
}

}  // namespace

PointSet nondominated(const PointSet& points) {
  PointSet out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j)
      if (j != i && dominates(points[j], points[i])) keep = false;
    if (keep && std::find(out.begin(), out.end(), points[i]) == out.end()) out.push_back(points[i]);
  }
  return out;
}

double hypervolume(const PointSet& points, const std::vector<double>& ref) {
  const std::size_t nf = ref.size();
  if (nf < 1 || nf > 3) throw ConfigError("hypervolume supports 1 to 3 objectives");
  PointSet pts;
  for (const auto& p : points) {
    if (p.size() != nf) throw ConfigError("hypervolume: point dimension mismatch");
    bool inside = true;
    for (std::size_t m = 0; m < nf; ++m)
      if (!(p[m] < ref[m])) inside = false;
    if (inside) pts.push_back(p);
  }
  if (pts.empty()) return 0.0;

  if (nf == 1) {
    double best = pts.front()[0];
    for (const auto& p : pts) best = std::min(best, p[0]);
    return ref[0] - best;
  }
  pts = nondominated(pts);
  if (nf == 2) return hv2(pts, ref[0], ref[1]);

  // Slice along the third objective.
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  double volume = 0.0;
  PointSet slab;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    slab.push_back({pts[k][0], pts[k][1]});
    const double z_next = k + 1 < pts.size() ? pts[k + 1][2] : ref[2];
    const double depth = z_next - pts[k][2];
    if (depth > 0.0) volume += depth * hv2(slab, ref[0], ref[1]);
  }
  return volume;
}

std::vector<double> hv_reference_point(const PointSet& reference_front) {
  if (reference_front.empty()) throw ConfigError("reference front is empty");
  std::vector<double> lo = reference_front.front(), hi = reference_front.front();
  for (const auto& p : reference_front)
    for (std::size_t m = 0; m < p.size(); ++m) {
      lo[m] = std::min(lo[m], p[m]);
      hi[m] = std::max(hi[m], p[m]);
    }
  std::vector<double> ref(hi.size());
  for (std::size_t m = 0; m < hi.size(); ++m) {
    const double range = hi[m] - lo[m];
    ref[m] = hi[m] + 0.1 * (range > 0.0 ? range : std::max(1.0, std::abs(hi[m])));
  }
  return ref;
}

double delta_hv(const PointSet& current, const PointSet& reference_front, const std::vector<double>& ref_point) {
  const double hv_ref = hypervolume(reference_front, ref_point);
  if (!(hv_ref > 0.0)) throw ConfigError("reference front has zero hypervolume");
  if (current.empty()) return 1.0;
  const double hv = hypervolume(current, ref_point);
  return std::clamp((hv_ref - hv) / hv_ref, 0.0, 1.0);
}

double delta_hv_single(double f_best, double f_opt, double scale) {
  if (std::isnan(f_best)) return 1.0;
  const double denom = std::max(std::abs(f_opt), scale);
  if (!(denom > 0.0)) throw ConfigError("single-objective delta-HV needs a positive scale");
  return std::clamp((f_best - f_opt) / denom, 0.0, 1.0);
}

double regret(const std::vector<double>& evaluations, const std::vector<double>& delta_hv) {
  if (evaluations.empty() || evaluations.size() != delta_hv.size())
    throw ConfigError("regret needs matching, nonempty evaluation and delta-HV series");
  if (evaluations.size() == 1) return delta_hv.front();
  const double span = evaluations.back() - evaluations.front();
  if (!(span > 0.0)) throw ConfigError("regret needs increasing evaluation counts");
  double area = 0.0;
  for (std::size_t i = 1; i < evaluations.size(); ++i)
    area += 0.5 * (delta_hv[i] + delta_hv[i - 1]) * (evaluations[i] - evaluations[i - 1]);
  return area / span;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n1 = a.size(), n2 = b.size();
  if (n1 == 0 || n2 == 0) throw ConfigError("rank-sum test needs two nonempty samples");
  const std::size_t n = n1 + n2;

  std::vector<std::pair<double, int>> all;
  for (double v : a) all.emplace_back(v, 0);
  for (double v : b) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  // Midranks and tie groups.
  double rank_sum_a = 0.0, tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (all[k].second == 0) rank_sum_a += mid;
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    i = j;
  }
  const double u = rank_sum_a - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);

  if (!ties && n1 <= 30 && n2 <= 30) {
    // counts[k][u]: arrangements of k items from sample a among the first m values with statistic u.
    const std::size_t u_max = n1 * n2;
    std::vector<std::vector<double>> prev(n1 + 1, std::vector<double>(u_max + 1, 0.0));
    prev[0][0] = 1.0;
    for (std::size_t m = 1; m <= n; ++m) {
      auto next = prev;
      for (std::size_t k = 1; k <= std::min(m, n1); ++k) {
        const std::size_t b_before = m - k;  // b items ranked below this a item
        if (b_before > n2) continue;
        for (std::size_t s = b_before; s <= u_max; ++s) next[k][s] += prev[k - 1][s - b_before];
      }
      prev = std::move(next);
    }
    const auto& dist = prev[n1];
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    const auto ui = static_cast<std::size_t>(std::llround(u));
    double lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s <= u_max; ++s) {
      if (s <= ui) lower += dist[s];
      if (s >= ui) upper += dist[s];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
  }

  const double mu = d1 * d2 / 2.0;
  const double dn = static_cast<double>(n);
  const double var = d1 * d2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double diff = std::abs(u - mu);
  const double z = std::max(diff - 0.5, 0.0) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

StrategyRanking rank_strategies(const std::map<std::string, std::vector<double>>& samples, double alpha) {
  StrategyRanking out;
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [name, v] : samples) order.emplace_back(median(v), name);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  int rank = 0;
  std::string leader;
  for (const auto& [med, name] : order) {
    if (rank == 0 || mann_whitney_p(samples.at(leader), samples.at(name)) < alpha) {
      ++rank;
      leader = name;
    }
    out.strategies.push_back(name);
    out.ranks.push_back(rank);
  }
  return out;
}

std::map<std::string, RankAggregate> aggregate_ranks(const std::vector<StrategyRanking>& per_problem) {
  std::map<std::string, RankAggregate> out;
  std::map<std::string, int> count;
  for (const auto& r : per_problem) {
    for (std::size_t i = 0; i < r.strategies.size(); ++i) {
      auto& agg = out[r.strategies[i]];
      ++count[r.strategies[i]];
      if (r.ranks[i] == 1) agg.rank1 += 1.0;
      if (r.ranks[i] <= 2) agg.rank_le2 += 1.0;
    }
  }
  for (auto& [name, agg] : out) {
    agg.rank1 /= count[name];
    agg.rank_le2 /= count[name];
  }
  return out;
}

}  // namespace hcbo
