#include "beamflat/kernels.hpp"

#include <cstdlib>
#include <string>

#include "beamflat/error.hpp"
#include "beamflat/planner.hpp"
#include "beamflat/spectral.hpp"

namespace beamflat::kernels {

int thread_count() {
  if (const char* env = std::getenv("BEAMFLAT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
    throw Error("env.threads", "BEAMFLAT_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

template <class For>
std::vector<double> control_impl(For loop, const Plan& plan, std::span<const double> ts, int b) {
  std::vector<double> out(ts.size());
  loop(static_cast<int>(ts.size()), [&](int i) { out[i] = plan.control(ts[i], b); });
  return out;
}

template <class For>
std::vector<double> field_impl(For loop, const Plan& plan, std::span<const double> xs,
                               std::span<const double> ts, int dx, int dt) {
  std::vector<double> out(xs.size() * ts.size());
  loop(static_cast<int>(ts.size()), [&](int i) {
    const auto row = plan.w_row(ts[i], xs, dx, dt);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(i * xs.size()));
  });
  return out;
}

template <class For>
std::vector<double> scan_impl(For loop, const GenTableQ& table, std::span<const double> om) {
  std::vector<double> out(om.size());
  loop(static_cast<int>(om.size()), [&](int i) { out[i] = char_fn_imag_axis(table, om[i]); });
  return out;
}

const auto par = [](int n, auto&& f) { parallel_for(n, f); };
const auto ser = [](int n, auto&& f) { serial_for(n, f); };

}  // namespace

std::vector<double> sample_control(const Plan& plan, std::span<const double> ts, int dt_order) {
  return control_impl(par, plan, ts, dt_order);
}
std::vector<double> sample_control_serial(const Plan& plan, std::span<const double> ts,
                                          int dt_order) {
  return control_impl(ser, plan, ts, dt_order);
}

std::vector<double> sample_field(const Plan& plan, std::span<const double> xs,
                                 std::span<const double> ts, int dx, int dt) {
  return field_impl(par, plan, xs, ts, dx, dt);
}
std::vector<double> sample_field_serial(const Plan& plan, std::span<const double> xs,
                                        std::span<const double> ts, int dx, int dt) {
  return field_impl(ser, plan, xs, ts, dx, dt);
}

std::vector<double> scan_char_fn(const GenTableQ& table, std::span<const double> omegas) {
  return scan_impl(par, table, omegas);
}
std::vector<double> scan_char_fn_serial(const GenTableQ& table, std::span<const double> omegas) {
  return scan_impl(ser, table, omegas);
}

}  // namespace beamflat::kernels
