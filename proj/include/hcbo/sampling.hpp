#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hcbo/design_space.hpp"

namespace hcbo {

struct DoeConfig {
  double k_doe = 2.0;
  double fr_expected = 0.6;
  std::uint64_t seed = 0;
};

/// ceil(k_doe * n_x / (1 - fr_expected))
int doe_size(const DoeConfig& cfg, int n_x);

/// Highest dimension count supported by the bundled direction numbers.
inline constexpr int kSobolMaxDims = 21;

/// Sobol' points in [0,1)^{n_points x n_dims}, skipping the first `skip` points
/// of the sequence. A nonzero seed applies a random digital shift (XOR) per
/// dimension; seed 0 yields the plain sequence.
Eigen::MatrixXd sobol_fill(int n_points, int n_dims, std::uint64_t seed = 0, int skip = 1);

/// Groups valid discrete vectors by activeness pattern, spreads n evenly over
/// the groups, draws discrete vectors per group and fills active continuous
/// variables from one shared Sobol' stream.
std::vector<DesignVector> hierarchical_sample(const DesignSpace& space, const ValidDiscreteSet& valid, int n,
                                              std::uint64_t seed);

/// Number of samples each activeness group receives; exposed for testing.
std::vector<int> allocate_groups(int n, int n_groups, std::uint64_t seed);

}  // namespace hcbo
