// beamflat: generating functions, transfer planning, simulation, spectrum.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "beamflat/error.hpp"
#include "beamflat/genfun.hpp"
#include "beamflat/io.hpp"
#include "beamflat/kernels.hpp"
#include "beamflat/pipeline.hpp"
#include "beamflat/planner.hpp"
#include "beamflat/sim.hpp"
#include "beamflat/spectral.hpp"

namespace fs = std::filesystem;
using namespace beamflat;
using io::json;

namespace {

struct Globals {
  std::string config = std::string(BEAMFLAT_DATA_DIR) + "/beam_lab.json";
  std::string out;
  bool verbose = false;
} g;

void note(const std::string& msg) {
  if (g.verbose) std::cerr << "beamflat: " << msg << '\n';
}

void warn_all(const std::vector<std::string>& ws) {
  for (const auto& w : ws) std::cerr << "warning: " << w << '\n';
}

fs::path out_dir(const std::string& fallback) {
  fs::path p = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
  fs::create_directories(p);
  return p;
}

std::string out_file(const std::string& fallback) {
  fs::path p = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

// ---- genfun ----

struct GenfunOpts {
  int K = 12;
  int grid_n = 0;
};

int cmd_genfun(const GenfunOpts& o) {
  BeamParams P = io::load_params(g.config);
  const int n = o.grid_n > 0 ? o.grid_n : P.grid_n;
  note("computing " + std::to_string(o.K) + " levels on " + std::to_string(n) + " intervals");
  const GenTable t = compute_gen_tables(P, o.K, n);
  warn_all(t.warnings());
  const EnvelopeReport env = check_envelopes(t, envelope_constants(P));
  json j = io::to_json(t);
  j["envelope_violations"] = env.violations;
  io::write_json(out_file("gentable.json"), j);
  if (env.violations > 0) {
    std::cerr << "check failed [genfun.envelope]: " << env.violations << " envelope violations\n";
    return 1;
  }
  for (int k = 1; k <= t.K(); ++k)
    if (!(((k % 2) ? -t.gxL()[k] : t.gxL()[k]) > 0)) {
      std::cerr << "check failed [genfun.sign]: sign alternation breaks at k = " << k << '\n';
      return 1;
    }
  return 0;
}

// ---- plan ----

struct PlanOpts {
  int example = 0;
  std::vector<std::string> traj;
  double T = 3.0, s = 1.5;
  int N = 10, K = 0, samples = 2000;
  std::string field;
  int field_nx = 50, field_nt = 300;
};

std::shared_ptr<const Plan> build_plan(const BeamParams& P, const TrajectoryGen& y0,
                                       const TrajectoryGen& yT, double T, double s, int N, int K,
                                       int samples) {
  const int levels = K > 0 ? K : default_levels(N);
  auto table = std::make_shared<const GenTable>(compute_gen_tables(P, levels, P.grid_n));
  warn_all(table->warnings());
  PlanSpec ps;
  ps.y0 = y0;
  ps.yT = yT;
  ps.T = T;
  ps.s = s;
  ps.N = N;
  ps.samples = samples;
  return std::make_shared<const Plan>(table, ps);
}

int cmd_plan(const PlanOpts& o) {
  BeamParams P = io::load_params(g.config);
  TrajectoryGen y0 = TrajectoryGen::constant(0.0), yT = y0;
  double T = o.T, s = o.s;
  if (o.example) {
    const ExampleSpec ex = load_example(BEAMFLAT_DATA_DIR, o.example);
    y0 = ex.y0;
    yT = ex.yT;
  } else if (o.traj.size() == 2) {
    y0 = io::load_trajectory(o.traj[0]);
    yT = io::load_trajectory(o.traj[1]);
  } else {
    throw Error("cli.plan", "give --example 1|2 or --traj y0.json yT.json");
  }
  const auto plan = build_plan(P, y0, yT, T, s, o.N, o.K, o.samples);
  const auto ts = plan->time_grid();
  io::write_csv(out_file("plan.csv"), {"t", "f", "y"},
                {ts, plan->control_samples(), plan->y_samples()});
  if (!o.field.empty()) {
    std::vector<double> xs(static_cast<std::size_t>(o.field_nx) + 1), tt(static_cast<std::size_t>(o.field_nt) + 1);
    for (int i = 0; i <= o.field_nx; ++i) xs[i] = P.length * i / o.field_nx;
    for (int i = 0; i <= o.field_nt; ++i) tt[i] = T * i / o.field_nt;
    const auto w = kernels::sample_field(*plan, xs, tt, 0, 0);
    const auto wt = kernels::sample_field(*plan, xs, tt, 0, 1);
    std::vector<double> ct, cx;
    for (double t : tt)
      for (double x : xs) ct.push_back(t), cx.push_back(x);
    io::write_csv(o.field, {"t", "x", "w", "w_t"}, {ct, cx, w, wt});
  }
  const double uL = plan->w(P.length, 0.0);
  if (std::abs(plan->control(0.0) - uL) > 1e-8 * std::max(1.0, std::abs(uL))) {
    std::cerr << "check failed [plan.compat]: f(0) does not match the planned u(L)\n";
    return 1;
  }
  return 0;
}

// ---- simulate ----

struct SimOpts {
  std::string plan, input, z0;
  int example = 0;
  std::optional<double> constant;
  SimConfig cfg;
};

ControlSignal samples_signal(const io::Table& t, const std::string& col) {
  const auto ts = t.column("t");
  const auto f = t.column(col);
  if (ts.size() < 4) throw Error("input.samples", "need at least 4 input samples");
  const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - (ts.front() + dt * static_cast<double>(i))) > 1e-9 * std::max(1.0, ts.back()))
      throw Error("input.samples", "input samples must be uniformly spaced in t");
  return ControlSignal::from_samples(f, ts.front(), dt);
}

int cmd_simulate(SimOpts o) {
  BeamParams P = io::load_params(g.config);
  std::optional<ControlSignal> f;
  std::optional<BeamState> z0;
  double horizon = o.cfg.t_end;
  if (o.example) {
    const ExampleSpec ex = load_example(BEAMFLAT_DATA_DIR, o.example);
    const auto plan = build_plan(P, ex.y0, ex.yT, ex.T, ex.s, ex.N, 0, 2000);
    f = ControlSignal::from_plan(plan);
    z0 = ex.steady_z0 ? steady_state(P, ex.steady_c, o.cfg.nx) : plan->state_at(0.0, o.cfg.nx);
    horizon = ex.T;
  } else if (!o.plan.empty()) {
    f = samples_signal(io::read_csv(o.plan), "f");
  } else if (!o.input.empty()) {
    f = samples_signal(io::read_csv(o.input), "f");
  } else if (o.constant) {
    f = ControlSignal::constant(*o.constant);
  } else {
    throw Error("cli.simulate", "give --example, --plan, --input or --constant");
  }
  if (!o.z0.empty()) {
    z0 = io::load_state(o.z0);
  } else if (!z0) {
    if (!o.constant) throw Error("cli.simulate", "--z0 is required for sampled inputs");
    z0 = steady_state(P, *o.constant, o.cfg.nx);
  }
  warn_all(f->warnings());
  if (std::isfinite(f->horizon())) horizon = std::min(horizon, f->horizon());
  o.cfg.t_end = horizon;
  note("simulating " + std::to_string(horizon) + " s with nx = " + std::to_string(o.cfg.nx));
  const SimResult r = simulate(P, *z0, *f, o.cfg);

  const fs::path dir = out_dir("result");
  io::write_csv((dir / "tip.csv").string(), {"t", "w0", "wx0"}, {r.tip_times, r.tip_w, r.tip_wx});
  std::vector<double> ct, cx, cw, cv;
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    const auto& z = r.snapshots[s];
    for (int i = 0; i <= z.u.intervals(); ++i) {
      ct.push_back(r.snapshot_times[s]);
      cx.push_back(z.u.x(i));
      cw.push_back(z.u[i]);
      cv.push_back(z.v[i]);
    }
  }
  io::write_csv((dir / "field.csv").string(), {"t", "x", "w", "w_t"}, {ct, cx, cw, cv});
  io::save_state((dir / "terminal.csv").string(), r.terminal);
  json rep = {{"schema", "beamflat.simulate/1"},
              {"nx", r.nx},
              {"dt", r.dt},
              {"t_end", horizon},
              {"terminal_w_H2", h2_norm(r.terminal.u)},
              {"terminal_wt_L2", l2_norm(r.terminal.v)},
              {"terminal_Z", z_norm(r.terminal, P)},
              {"warnings", f->warnings()}};
  if (r.constant_input) rep["energy_drift"] = energy_audit(r);
  io::write_json((dir / "report.json").string(), rep);
  return 0;
}

// ---- eigen ----

struct EigenOpts {
  double omega_max = 2000.0;
  int n = 10;
  int grid_n = 256;
  std::string modes;
};

int cmd_eigen(const EigenOpts& o) {
  BeamParams P = io::load_params(g.config);
  const auto table = spectral_table(P, o.omega_max, o.grid_n);
  note("spectral table depth K = " + std::to_string(table->K()));
  const Spectrum sp = find_eigenvalues(table, o.omega_max, o.n);
  warn_all(sp.warnings);
  json arr = json::array();
  int bad = 0;
  for (const auto& m : sp.modes) {
    const auto& r = m.residuals;
    arr.push_back({{"omega", m.omega},
                   {"u0", m.u0},
                   {"denominator", m.denominator},
                   {"residuals", {{"uL", r.uL}, {"uxL", r.uxL}, {"shear", r.shear}, {"moment", r.moment}}}});
    if (std::max({r.uL, r.uxL, r.shear, r.moment}) > 1e-6 || !(m.denominator > 0)) ++bad;
  }
  io::write_json(out_file("spectrum.json"),
                 {{"schema", "beamflat.spectrum/1"}, {"omega_max", o.omega_max}, {"K", table->K()},
                  {"modes", arr}, {"warnings", sp.warnings}});
  if (!o.modes.empty() && !sp.modes.empty()) {
    std::vector<std::string> header{"x"};
    std::vector<std::vector<double>> cols;
    const auto& u0 = sp.modes.front().u;
    std::vector<double> xs(static_cast<std::size_t>(u0.intervals()) + 1);
    for (int i = 0; i <= u0.intervals(); ++i) xs[i] = u0.x(i);
    cols.push_back(xs);
    for (std::size_t k = 0; k < sp.modes.size(); ++k) {
      header.push_back("re_u" + std::to_string(k + 1));
      header.push_back("im_u" + std::to_string(k + 1));
      const auto v = sp.modes[k].u.values();
      cols.emplace_back(v.begin(), v.end());
      cols.emplace_back(v.size(), 0.0);
    }
    io::write_csv(o.modes, header, cols);
  }
  if (bad) {
    std::cerr << "check failed [eigen.residual]: " << bad << " modes above tolerance\n";
    return 1;
  }
  return 0;
}

// ---- validate ----

struct ValidateOpts {
  int example = 1;
  int N = -1;
  SimConfig cfg;
};

int cmd_validate(const ValidateOpts& o) {
  ExampleSpec ex = load_example(BEAMFLAT_DATA_DIR, o.example);
  if (!g.config.empty() && g.config != std::string(BEAMFLAT_DATA_DIR) + "/beam_lab.json")
    ex.params = io::load_params(g.config);
  note("running " + ex.name);
  const ExampleReport r = run_example(ex, o.cfg, o.N);
  const fs::path dir = out_dir("validate");
  io::write_json((dir / "report.json").string(), r.to_json());
  int failed = 0;
  for (const auto& c : r.checks) {
    std::printf("%-12s %.6e < %.3e  %s\n", c.id.c_str(), c.value, c.bound, c.pass ? "pass" : "FAIL");
    if (!c.pass) {
      std::cerr << "check failed [validate." << c.id << "]\n";
      ++failed;
    }
  }
  return failed ? 1 : 0;
}

void sim_options(CLI::App* sub, SimConfig& cfg) {
  sub->add_option("--nx", cfg.nx, "spatial intervals")->capture_default_str();
  sub->add_option("--dt", cfg.dt, "time step [s]")->capture_default_str();
  sub->add_option("--snapshot", cfg.snapshot_every, "snapshot interval [s]")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flatness-based motion planning for a beam with tip mass"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", g.config, "parameter file (JSON)");
  app.add_option("--out", g.out, "output file or directory");
  app.add_flag("--verbose,-v", g.verbose, "progress on stderr");

  GenfunOpts gen;
  auto* s_gen = app.add_subcommand("genfun", "generating-function boundary values");
  s_gen->add_option("--K", gen.K, "levels")->capture_default_str()->check(CLI::Range(1, 60));
  s_gen->add_option("--grid-n", gen.grid_n, "grid intervals (default from config)");

  PlanOpts pl;
  auto* s_plan = app.add_subcommand("plan", "plan a transfer and export f^N");
  auto* ex_opt = s_plan->add_option("--example", pl.example, "checked-in example (data/example<n>.json)")->check(CLI::Range(1, 2));
  s_plan->add_option("--traj", pl.traj, "y0.json yT.json")->expected(2)->excludes(ex_opt);
  s_plan->add_option("--T", pl.T, "horizon [s]")->capture_default_str();
  s_plan->add_option("--s", pl.s, "Gevrey order")->capture_default_str();
  s_plan->add_option("--N", pl.N, "truncation level")->capture_default_str()->check(CLI::Range(0, 40));
  s_plan->add_option("--K", pl.K, "table depth (default max(N + 2, 12))");
  s_plan->add_option("--samples", pl.samples, "time intervals")->capture_default_str();
  s_plan->add_option("--field", pl.field, "also write w.csv (t, x, w, w_t)");
  s_plan->add_option("--field-nx", pl.field_nx)->capture_default_str();
  s_plan->add_option("--field-nt", pl.field_nt)->capture_default_str();

  SimOpts so;
  auto* s_sim = app.add_subcommand("simulate", "finite-difference simulation");
  s_sim->add_option("--plan", so.plan, "plan.csv (columns t, f)");
  s_sim->add_option("--input", so.input, "f.csv (columns t, f)");
  s_sim->add_option("--example", so.example, "plan a checked-in example in-process")->check(CLI::Range(1, 2));
  s_sim->add_option("--constant", so.constant, "constant input f = c");
  s_sim->add_option("--z0", so.z0, "initial state CSV");
  s_sim->add_option("--t-end", so.cfg.t_end, "horizon [s]")->capture_default_str();
  sim_options(s_sim, so.cfg);

  EigenOpts eo;
  auto* s_eig = app.add_subcommand("eigen", "eigenfrequencies and mode shapes");
  s_eig->add_option("--omega-max", eo.omega_max, "search band [rad/s]")->capture_default_str();
  s_eig->add_option("--n", eo.n, "max modes")->capture_default_str();
  s_eig->add_option("--grid-n", eo.grid_n, "table grid")->capture_default_str();
  s_eig->add_option("--modes", eo.modes, "also write modes.csv");

  ValidateOpts vo;
  auto* s_val = app.add_subcommand("validate", "reproduce a checked-in example end to end");
  s_val->add_option("--example", vo.example, "1 or 2")->capture_default_str()->check(CLI::Range(1, 2));
  s_val->add_option("--N", vo.N, "truncation level override");
  sim_options(s_val, vo.cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    kernels::thread_count();
    if (s_gen->parsed()) return cmd_genfun(gen);
    if (s_plan->parsed()) return cmd_plan(pl);
    if (s_sim->parsed()) return cmd_simulate(so);
    if (s_eig->parsed()) return cmd_eigen(eo);
    if (s_val->parsed()) return cmd_validate(vo);
  } catch (const Error& e) {
    std::cerr << "error " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
