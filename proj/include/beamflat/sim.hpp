#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "beamflat/model.hpp"

namespace beamflat {

class Plan;

struct SimConfig {
  int nx = 300;          // 1/600 m on L = 0.5
  double dt = 2.5e-4;    // s
  double t_end = 3.0;    // s
  double snapshot_every = 0.01;  // s

  void validate() const;
};

/// Boundary input f(t) with its first two derivatives.
class ControlSignal {
 public:
  using Fn = std::function<double(double t, int order)>;

  ControlSignal(Fn fn, double horizon, bool constant = false);

  static ControlSignal constant(double c);
  static ControlSignal from_plan(std::shared_ptr<const Plan> plan);
  /// Uniformly spaced samples on [t0, t0 + dt (n - 1)], differentiated through
  /// a cubic B-spline.
  static ControlSignal from_samples(std::vector<double> values, double t0, double dt);

  double operator()(double t, int order = 0) const;
  double horizon() const noexcept { return horizon_; }
  bool is_constant() const noexcept { return constant_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend ControlSignal operator+(const ControlSignal& a, const ControlSignal& b);
  friend ControlSignal operator*(double s, const ControlSignal& a);

 private:
  Fn fn_;
  double horizon_;
  bool constant_;
  std::vector<std::string> warnings_;
};

struct SimResult {
  int nx = 0;
  double dt = 0.0;
  std::vector<double> snapshot_times;
  std::vector<BeamState> snapshots;  // decimated, including t = 0 and the end
  std::vector<double> energy;        // discrete shifted energy at snapshot times
  std::vector<double> tip_times, tip_w, tip_wx;  // every step
  BeamState terminal;
  bool constant_input = false;
};

/// Finite-difference semi-discretization with ghost-node closures and
/// Newmark average-acceleration time stepping on w - f.
SimResult simulate(const BeamParams& params, const BeamState& z0, const ControlSignal& f,
                   const SimConfig& cfg);

/// Max relative drift of the shifted energy over the run.
double energy_audit(const SimResult& result);

/// sup_t ||z_(f+df)(t) - z_f(t)||_Z / ||df||_C2.
double continuity_probe(const BeamParams& params, const BeamState& z0, const ControlSignal& f,
                        const ControlSignal& df, const SimConfig& cfg);

}  // namespace beamflat
