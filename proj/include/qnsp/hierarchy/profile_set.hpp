#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qnsp/hierarchy/time_series.hpp"
#include "qnsp/solver/params.hpp"

namespace qnsp {

/// Time-sampled profiles of one expansion order. For order 0 the density
/// series holds zeros (n^(0) = 1 is implicit) and `divergence` is zero.
struct ProfileLevel {
  int order = 0;
  SampledSeries<ScalarField> n;
  SampledSeries<VectorField> u;
  SampledSeries<ScalarField> T;
  SampledSeries<ScalarField> phi;
  SampledSeries<ScalarField> divergence;  ///< prescribed div u^(k)

  std::size_t size() const { return u.size(); }
};

/// Profiles for orders 0..N on a shared grid and time cadence.
struct ProfileSet {
  Grid grid;
  PhysParams params;
  std::vector<ProfileLevel> levels;

  int order() const { return static_cast<int>(levels.size()) - 1; }
  bool empty() const { return levels.empty(); }
  std::size_t samples() const { return levels.empty() ? 0 : levels.front().size(); }
  double t0() const { return levels.at(0).u.t0(); }
  double spacing() const { return levels.at(0).u.spacing(); }
  double t_end() const { return levels.at(0).u.t_end(); }
  double time(std::size_t j) const { return levels.at(0).u.time(j); }

  const ProfileLevel& level(int k) const {
    if (k < 0 || k >= static_cast<int>(levels.size()))
      throw DependencyError("profile order " + std::to_string(k) + " has not been computed (have orders 0.." +
                            std::to_string(order()) + ")");
    return levels[k];
  }

  /// Copy truncated to orders 0..k.
  ProfileSet truncated(int k) const {
    ProfileSet out{grid, params, {}};
    for (int i = 0; i <= k; ++i) out.levels.push_back(level(i));
    out.params.order = k;
    return out;
  }
};

/// Profiles are shared read-only between ladder runs.
using SharedProfiles = std::shared_ptr<const ProfileSet>;

/// Forcings f_{k-1}, g_{k-1} of the order-k system at the profile samples.
struct ForcingPair {
  int order = 1;
  SampledSeries<VectorField> f;
  SampledSeries<ScalarField> g;
};

}  // namespace qnsp
