#pragma once

#include <string>
#include <vector>

#include "beamflat/gevrey.hpp"
#include "beamflat/io.hpp"
#include "beamflat/model.hpp"
#include "beamflat/sim.hpp"

namespace beamflat {

/// A checked-in transfer problem: parameters, reference trajectories, the
/// initial state rule and the published bounds.
struct ExampleSpec {
  std::string name;
  BeamParams params;
  TrajectoryGen y0 = TrajectoryGen::constant(0.0);
  TrajectoryGen yT = TrajectoryGen::constant(0.0);
  double T = 3.0;
  double s = 1.5;
  int N = 10;
  bool steady_z0 = false;  // z0 = [c, 0, 0, 0] instead of the planned state at t = 0
  double steady_c = 0.0;
  double bound_f5_f3 = 0.0, bound_f10_f5 = 0.0, bound_h2 = 0.0, bound_l2 = 0.0;
};

/// Loads data/example<id>.json together with the parameter file it names.
ExampleSpec load_example(const std::string& data_dir, int id);

struct ExampleReport {
  std::string name;
  int N = 0;
  double f5_f3 = 0.0, f10_f5 = 0.0;
  double terminal_h2 = 0.0, terminal_l2 = 0.0;
  double tip_deviation = 0.0;  // max_t |w_sim(0,t) - w_plan(0,t)|
  double f0 = 0.0, u0L = 0.0;
  std::vector<double> decay;  // ||f^n - f^(n-1)||, n = 3..10
  struct Check {
    std::string id;
    double value, bound;
    bool pass;
  };
  std::vector<Check> checks;
  bool pass() const;
  io::json to_json() const;
};

/// Stage identifiers are prefixed onto any Error raised by a stage.
ExampleReport run_example(const ExampleSpec& ex, const SimConfig& cfg, int N_override = -1);

}  // namespace beamflat
