#include "hcbo/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "hcbo/errors.hpp"

namespace hcbo {

namespace {

// Joe & Kuo (new-joe-kuo-6.21201) primitive polynomials and initial direction
// numbers for dimensions 2..21; dimension 1 uses the identity.
struct DirectionInit {
  int degree;
  unsigned poly;
  std::array<unsigned, 8> m;
};

constexpr std::array<DirectionInit, kSobolMaxDims - 1> kDirections{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr int kBits = 32;

std::array<std::uint32_t, kBits> direction_numbers(int dim) {
  std::array<std::uint32_t, kBits> v{};
  if (dim == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
    return v;
  }
  const auto& init = kDirections[dim - 1];
  const int s = init.degree;
  for (int k = 0; k < s; ++k) v[k] = init.m[k] << (kBits - 1 - k);
  for (int k = s; k < kBits; ++k) {
    std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
    for (int b = 1; b < s; ++b)
      if ((init.poly >> (s - 1 - b)) & 1u) value ^= v[k - b];
    v[k] = value;
  }
  return v;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

int doe_size(const DoeConfig& cfg, int n_x) {
  if (n_x < 1) throw ConfigError("doe_size requires n_x >= 1");
  if (!(cfg.fr_expected >= 0.0 && cfg.fr_expected < 1.0)) throw ConfigError("expected fail rate must be in [0, 1)");
  if (!(cfg.k_doe > 0.0)) throw ConfigError("DoE multiplier must be positive");
  const double n = cfg.k_doe * n_x / (1.0 - cfg.fr_expected);
  // Round-off in (1 - fr) must not push an exact integer to the next one.
  return static_cast<int>(std::ceil(n - 1e-9));
}

Eigen::MatrixXd sobol_fill(int n_points, int n_dims, std::uint64_t seed, int skip) {
  if (n_dims < 1 || n_dims > kSobolMaxDims) throw ConfigError("sobol_fill supports 1.." +
                                                              std::to_string(kSobolMaxDims) + " dimensions");
  if (n_points < 0 || skip < 0) throw ConfigError("sobol_fill requires non-negative counts");

  std::vector<std::array<std::uint32_t, kBits>> dirs(n_dims);
  for (int d = 0; d < n_dims; ++d) dirs[d] = direction_numbers(d);

  std::vector<std::uint32_t> shift(n_dims, 0u);
  if (seed != 0) {
    std::uint64_t state = seed;
    for (auto& s : shift) s = static_cast<std::uint32_t>(splitmix64(state) >> 32);
  }

  // Gray-code construction: point i+1 flips the direction number of the lowest zero bit of i.
  std::vector<std::uint32_t> state(n_dims, 0u);
  Eigen::MatrixXd out(n_points, n_dims);
  const double scale = std::ldexp(1.0, -kBits);
  const long total = static_cast<long>(skip) + n_points;
  for (long i = 0; i < total; ++i) {
    if (i >= skip) {
      for (int d = 0; d < n_dims; ++d) out(i - skip, d) = static_cast<double>(state[d] ^ shift[d]) * scale;
    }
    const unsigned c = static_cast<unsigned>(std::countr_one(static_cast<unsigned long>(i)));
    if (c >= kBits) break;
    for (int d = 0; d < n_dims; ++d) state[d] ^= dirs[d][c];
  }
  return out;
}

std::vector<int> allocate_groups(int n, int n_groups, std::uint64_t seed) {
  if (n_groups <= 0) return {};
  std::vector<int> sizes(n_groups, n / n_groups);
  std::vector<int> order(n_groups);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (int r = 0; r < n % n_groups; ++r) ++sizes[order[r]];
  return sizes;
}

std::vector<DesignVector> hierarchical_sample(const DesignSpace& space, const ValidDiscreteSet& valid, int n,
                                              std::uint64_t seed) {
  if (valid.empty()) throw EmptyValidSet("hierarchical sampling needs at least one valid discrete vector");
  if (n < 1) throw ConfigError("hierarchical sampling needs n >= 1");

  // Groups keyed by activeness pattern, ordered by first occurrence.
  std::map<std::vector<bool>, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t l = 0; l < valid.size(); ++l) {
    auto [it, inserted] = group_of.try_emplace(valid.activeness[l], groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(l);
  }

  const auto sizes = allocate_groups(n, static_cast<int>(groups.size()), seed);
  std::mt19937_64 rng(seed ^ 0x5DEECE66Dull);

  std::vector<std::size_t> picks;
  picks.reserve(n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto members = groups[g];
    std::shuffle(members.begin(), members.end(), rng);
    const int want = sizes[g];
    const int unique = std::min<int>(want, static_cast<int>(members.size()));
    for (int k = 0; k < unique; ++k) picks.push_back(members[k]);
    std::uniform_int_distribution<std::size_t> any(0, members.size() - 1);
    for (int k = unique; k < want; ++k) picks.push_back(members[any(rng)]);
  }

  const int nc = static_cast<int>(space.n_continuous());
  Eigen::MatrixXd unit;
  if (nc > 0) unit = sobol_fill(n, nc, seed);

  std::vector<DesignVector> out;
  out.reserve(n);
  for (int p = 0; p < n; ++p) {
    const std::size_t l = picks[p];
    std::vector<double> cont(nc);
    for (int i = 0; i < nc; ++i) {
      const auto& def = space.continuous_def(i);
      cont[i] = valid.activeness[l][space.continuous_var(i)] ? def.lower + unit(p, i) * (def.upper - def.lower)
                                                             : def.midpoint();
    }
    out.push_back(space.repair(space.make(valid.vectors[l], std::move(cont))));
  }
  return out;
}

}  // namespace hcbo
