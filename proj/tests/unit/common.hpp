#pragma once

#include <memory>
#include <random>

#include "beamflat/genfun.hpp"
#include "beamflat/model.hpp"
#include "beamflat/planner.hpp"

namespace beamflat::test {

inline BeamParams lab() { return BeamParams{}; }

// rho = EI = 1 on [0, 1]; the tip terms are made negligible because the
// parameter contract needs m, J > 0.
inline BeamParams uniform(double m = 1e-300, double J = 1e-300) {
  BeamParams p;
  p.length = 1.0;
  p.tip_mass = m;
  p.tip_inertia = J;
  p.rho = Profile::affine(1.0, 0.0);
  p.EI = Profile::affine(1.0, 0.0);
  return p;
}

inline std::shared_ptr<const GenTable> lab_table() {
  static const auto t = std::make_shared<const GenTable>(compute_gen_tables(lab(), 12, 2048));
  return t;
}

inline std::shared_ptr<const Plan> example_plan(int example, int N) {
  PlanSpec s;
  s.y0 = example == 1 ? TrajectoryGen::constant(0.3)
                      : TrajectoryGen::sum({TrajectoryGen::constant(1.0),
                                            TrajectoryGen::poly_exp({0.0, 0.0, 10.0}, -2.0)});
  s.N = N;
  return std::make_shared<const Plan>(lab_table(), s);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace beamflat::test
