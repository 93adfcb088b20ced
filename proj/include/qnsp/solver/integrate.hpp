#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnsp/solver/stepper.hpp"

namespace qnsp {

enum class RunStatus { completed, blow_up, nan, timeout };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blow_up: return "blow_up";
    case RunStatus::nan: return "nan";
    case RunStatus::timeout: return "timeout";
  }
  return "unknown";
}

inline RunStatus run_status_from_string(const std::string& s) {
  if (s == "completed") return RunStatus::completed;
  if (s == "blow_up") return RunStatus::blow_up;
  if (s == "nan") return RunStatus::nan;
  if (s == "timeout") return RunStatus::timeout;
  throw ConfigurationError("unknown run status '" + s + "'");
}

struct IntegrateOptions {
  double sample_interval = 0.0;            ///< output cadence; 0 samples only the endpoints
  bool keep_states = true;                 ///< store samples in the trajectory
  std::optional<double> wall_limit_s;      ///< timeout budget
  StepOptions step;
  std::function<void(const FluidState&)> on_sample;
};

struct Trajectory {
  Grid grid;
  PhysParams params;
  Scheme scheme = Scheme::rk4_explicit;
  double dt = 0.0;
  std::vector<FluidState> states;
  RunStatus status = RunStatus::completed;
  std::string message;
  double t_reached = 0.0;
  std::size_t samples_emitted = 0;
};

/// Number of steps per output interval and the adjusted step size that lands
/// exactly on every sample time.
struct StepPlan {
  long steps_per_sample = 1;
  long samples = 1;
  double dt = 0.0;
};

inline StepPlan plan_steps(double tau, double dt_max, double sample_interval) {
  if (!(tau > 0.0)) throw UsageError("horizon must be positive");
  if (!(dt_max > 0.0)) throw UsageError("time step must be positive");
  const double interval = sample_interval > 0.0 ? sample_interval : tau;
  const double ratio = tau / interval;
  const long samples = std::lround(ratio);
  if (samples < 1 || std::abs(ratio - samples) > 1e-9 * std::max(1.0, ratio))
    throw ConfigurationError("horizon must be a whole multiple of the sample interval");
  StepPlan plan;
  plan.samples = samples;
  plan.steps_per_sample = static_cast<long>(std::ceil(interval / dt_max - 1e-9));
  plan.dt = interval / static_cast<double>(plan.steps_per_sample);
  return plan;
}

/// Integrate to t0 + tau. Failures end the run early and are reported through
/// the trajectory status; the last valid state is kept.
inline Trajectory integrate(const FluidState& state0, double tau, const PhysParams& p, double dt, Scheme scheme,
                            const IntegrateOptions& opt = {}) {
  p.validate();
  const StepPlan plan = plan_steps(tau, dt, opt.sample_interval);
  const auto start = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.grid = state0.grid();
  traj.params = p;
  traj.scheme = scheme;
  traj.dt = plan.dt;

  auto emit = [&](const FluidState& s) {
    if (opt.on_sample) opt.on_sample(s);
    if (opt.keep_states) traj.states.push_back(s);
    ++traj.samples_emitted;
  };

  FluidState s;
  try {
    s = finalize_state(state0, p, opt.step);
  } catch (const BlowUpError& e) {
    traj.status = RunStatus::blow_up;
    traj.message = e.what();
    return traj;
  } catch (const NumericalError& e) {
    traj.status = RunStatus::nan;
    traj.message = e.what();
    return traj;
  }
  const double t0 = s.t;
  emit(s);

  for (long k = 1; k <= plan.samples; ++k) {
    try {
      for (long j = 0; j < plan.steps_per_sample; ++j) s = step(s, plan.dt, p, scheme, opt.step);
    } catch (const BlowUpError& e) {
      traj.status = RunStatus::blow_up;
      traj.message = e.what();
      break;
    } catch (const NumericalError& e) {
      traj.status = RunStatus::nan;
      traj.message = e.what();
      break;
    }
    // Sample times are set exactly to avoid drift from accumulated additions.
    s.t = t0 + static_cast<double>(k * plan.steps_per_sample) * plan.dt;
    emit(s);
    if (opt.wall_limit_s) {
      const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (used > *opt.wall_limit_s && k < plan.samples) {
        traj.status = RunStatus::timeout;
        traj.message = "wall-clock budget exhausted at t = " + std::to_string(s.t);
        break;
      }
    }
  }
  traj.t_reached = s.t;
  return traj;
}

}  // namespace qnsp
