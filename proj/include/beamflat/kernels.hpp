#pragma once

#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace beamflat {

class Plan;
template <class Real>
class GenTableT;

namespace kernels {

/// Worker cap: BEAMFLAT_THREADS when set, otherwise the OpenMP default.
int thread_count();

/// Runs f(i) for i in [0, n) on the OpenMP team. Each index writes only its
/// own outputs, so results are identical to `serial_for`. The first exception
/// raised by any iteration is rethrown after the loop.
template <class F>
void parallel_for(int n, F&& f) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
  for (int i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical(beamflat_parallel_for)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

template <class F>
void serial_for(int n, F&& f) {
  for (int i = 0; i < n; ++i) f(i);
}

// f^N (or its dt_order-th derivative) at each time.
std::vector<double> sample_control(const Plan& plan, std::span<const double> ts, int dt_order = 0);
std::vector<double> sample_control_serial(const Plan& plan, std::span<const double> ts,
                                          int dt_order = 0);

// d^a/dx^a d^b/dt^b w on the tensor grid, row-major [t][x].
std::vector<double> sample_field(const Plan& plan, std::span<const double> xs,
                                 std::span<const double> ts, int dx, int dt);
std::vector<double> sample_field_serial(const Plan& plan, std::span<const double> xs,
                                        std::span<const double> ts, int dx, int dt);

// D(i omega) over a frequency grid.
std::vector<double> scan_char_fn(const GenTableT<__float128>& table,
                                 std::span<const double> omegas);
std::vector<double> scan_char_fn_serial(const GenTableT<__float128>& table,
                                        std::span<const double> omegas);

}  // namespace kernels
}  // namespace beamflat
