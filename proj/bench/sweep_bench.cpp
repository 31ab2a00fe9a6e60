// Serial reference vs OpenMP sweep on the heavier kernels.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "qmeas/sweep.hpp"

using namespace qmeas;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void compare(const char* label, const SweepGrid& grid, const SweepKernel& kernel, int threads, int repeats) {
  double serial = 1e300, parallel = 1e300;
  std::string a, b;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    const SweepResult s = run_sweep_serial(grid, kernel);
    serial = std::min(serial, seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
    const SweepResult p = run_sweep(grid, kernel, threads);
    parallel = std::min(parallel, seconds_since(t0));
    a = to_csv(s);
    b = to_csv(p);
  }
  std::printf("%-28s points=%7zu  serial=%8.3fs  parallel(%d)=%8.3fs  speedup=%5.2fx  identical=%s\n", label,
              grid.size(), serial, threads, parallel, serial / parallel, a == b ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  int threads = omp_get_max_threads();
  int repeats = 3;
  for (int i = 1; i + 1 < argc; ++i) {
    if (!std::strcmp(argv[i], "--threads")) threads = std::stoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--repeats")) repeats = std::stoi(argv[i + 1]);
  }

  const SweepGrid corr({Axis::list("p", {0.0, 0.05, 0.2, 0.5}), Axis::range("t", 0.0, 1.0, 101)},
                       {{"c", 0.2}, {"c3", 0.6}, {"g", 0.6}});
  compare("correlations 4x101", corr, *make_kernel("correlations"), threads, repeats);

  const SweepGrid trade({Axis::range("t", 0.0, 1.0, 201), Axis::range("p", 0.0, 1.0, 201)},
                        {{"c", 0.4}, {"c3", 0.1}, {"g", 0.5}});
  compare("tradeoff 201x201", trade, *make_kernel("tradeoff"), threads, repeats);

  const SweepGrid nm({Axis::range("t", 0.0, 1.0, 101), Axis::range("theta", 0.0087, 1.5708, 181)},
                     {{"c", 0.1}, {"c3", 0.8}, {"g", 0.1}, {"p", 0.5}});
  compare("nonmarkov 101x181", nm, *make_kernel("nonmarkov"), threads, repeats);

  const SweepGrid bell({Axis::range("c", 0.0, 1.0, 401), Axis::range("t", 0.0, 1.0, 401)}, {{"g", 0.7}});
  KernelOptions crit;
  crit.critical_c3 = true;
  compare("bell 401x401", bell, *make_kernel("bell", crit), threads, repeats);
  return 0;
}
