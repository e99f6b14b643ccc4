#include <cstdlib>
#include <stdexcept>

#include "beamflat/error.hpp"
#include "beamflat/kernels.hpp"
#include "doctest.h"

using namespace beamflat;

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  kernels::parallel_for(1000, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(kernels::parallel_for(100, [](int i) {
                    if (i == 42) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("BEAMFLAT_THREADS caps the team and rejects junk") {
  setenv("BEAMFLAT_THREADS", "1", 1);
  CHECK(kernels::thread_count() == 1);
  setenv("BEAMFLAT_THREADS", "two", 1);
  CHECK_THROWS_AS(kernels::thread_count(), Error);
  setenv("BEAMFLAT_THREADS", "0", 1);
  CHECK_THROWS_AS(kernels::thread_count(), Error);
  unsetenv("BEAMFLAT_THREADS");
  CHECK(kernels::thread_count() >= 1);
}
