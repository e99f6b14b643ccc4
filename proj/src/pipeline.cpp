#include "beamflat/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <memory>

#include "beamflat/error.hpp"
#include "beamflat/planner.hpp"

namespace beamflat {

ExampleSpec load_example(const std::string& data_dir, int id) {
  namespace fs = std::filesystem;
  const fs::path dir(data_dir);
  const fs::path file = dir / ("example" + std::to_string(id) + ".json");
  if (!fs::exists(file)) throw Error("config.example", "no example file " + file.string());
  const io::json j = io::read_json(file.string());
  ExampleSpec ex;
  try {
    ex.name = j.at("name").get<std::string>();
    ex.params = io::load_params((dir / j.at("params").get<std::string>()).string());
    ex.y0 = io::trajectory_from_json(j.at("y0"));
    ex.yT = io::trajectory_from_json(j.at("yT"));
    ex.T = j.value("T", 3.0);
    ex.s = j.value("s", 1.5);
    ex.N = j.value("N", 10);
    const auto& z0 = j.at("z0");
    ex.steady_z0 = z0.at("kind").get<std::string>() == "steady";
    ex.steady_c = z0.value("c", 0.0);
    const auto& b = j.at("bounds");
    ex.bound_f5_f3 = b.at("f5_f3").get<double>();
    ex.bound_f10_f5 = b.at("f10_f5").get<double>();
    ex.bound_h2 = b.at("terminal_h2").get<double>();
    ex.bound_l2 = b.at("terminal_l2").get<double>();
  } catch (const io::json::exception& e) {
    throw Error("config.example", std::string("malformed example file: ") + e.what());
  }
  return ex;
}

bool ExampleReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

io::json ExampleReport::to_json() const {
  io::json cs = io::json::array();
  for (const auto& c : checks)
    cs.push_back({{"id", c.id}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  return {{"schema", "beamflat.validate/1"},
          {"example", name},
          {"N", N},
          {"norms",
           {{"f5_f3_L2", f5_f3},
            {"f10_f5_L2", f10_f5},
            {"terminal_w_H2", terminal_h2},
            {"terminal_wt_L2", terminal_l2}}},
          {"truncation_decay_n3_to_10", decay},
          {"tip_deviation_max", tip_deviation},
          {"compatibility", {{"f0", f0}, {"u0_L", u0L}}},
          {"checks", cs},
          {"pass", pass()}};
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string what = e.what();
    throw Error(std::string(name) + "." + e.id(), what.substr(e.id().size() + 2));
  }
}

}  // namespace

ExampleReport run_example(const ExampleSpec& ex, const SimConfig& cfg, int N_override) {
  const int N = N_override >= 0 ? N_override : ex.N;
  const int K = std::max(default_levels(N), default_levels(10));
  auto table = stage("genfun", [&] {
    return std::make_shared<const GenTable>(compute_gen_tables(ex.params, K, ex.params.grid_n));
  });

  auto make_plan = [&](int n) {
    PlanSpec ps;
    ps.y0 = ex.y0;
    ps.yT = ex.yT;
    ps.T = ex.T;
    ps.s = ex.s;
    ps.N = n;
    return std::make_shared<const Plan>(table, ps);
  };

  ExampleReport rep;
  rep.name = ex.name;
  rep.N = N;
  std::vector<std::shared_ptr<const Plan>> plans(11);
  stage("plan", [&] {
    for (int n = 2; n <= 10; ++n) plans[n] = make_plan(n);
    return 0;
  });
  auto gap = [&](int a, int b) {
    const auto& fa = plans[a]->control_samples();
    const auto& fb = plans[b]->control_samples();
    std::vector<double> d(fa.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = fa[i] - fb[i];
    return l2_time_norm(d, ex.T);
  };
  rep.f5_f3 = gap(5, 3);
  rep.f10_f5 = gap(10, 5);
  for (int n = 3; n <= 10; ++n) rep.decay.push_back(gap(n, n - 1));

  const auto plan = N >= 2 && N <= 10 ? plans[N] : stage("plan", [&] { return make_plan(N); });
  const BeamState z0 = ex.steady_z0 ? steady_state(ex.params, ex.steady_c, cfg.nx)
                                    : plan->state_at(0.0, cfg.nx);
  const ControlSignal f = ControlSignal::from_plan(plan);
  rep.f0 = f(0.0);
  rep.u0L = z0.u.back();

  SimConfig sc = cfg;
  sc.t_end = ex.T;
  const SimResult res = stage("simulate", [&] { return simulate(ex.params, z0, f, sc); });
  rep.terminal_h2 = h2_norm(res.terminal.u);
  rep.terminal_l2 = l2_norm(res.terminal.v);
  for (std::size_t i = 0; i < res.tip_times.size(); i += 8)
    rep.tip_deviation =
        std::max(rep.tip_deviation, std::abs(res.tip_w[i] - plan->w(0.0, res.tip_times[i])));

  auto check = [&](const char* id, double v, double b) {
    rep.checks.push_back({id, v, b, v < b});
  };
  check("f5_f3", rep.f5_f3, ex.bound_f5_f3);
  check("f10_f5", rep.f10_f5, ex.bound_f10_f5);
  check("terminal_h2", rep.terminal_h2, ex.bound_h2);
  check("terminal_l2", rep.terminal_l2, ex.bound_l2);
  return rep;
}

}  // namespace beamflat
