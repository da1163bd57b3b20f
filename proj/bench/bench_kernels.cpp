// Serial reference vs OpenMP kernels: replication batches and the geometry
// oracle. Usage: bench_kernels [runs] [oracle_samples] [workers]

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <fmt/core.h>

#include "mmrelay/oracle.hpp"
#include "mmrelay/sim.hpp"

using namespace mmrelay;

namespace {

template <typename F>
double time_s(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool same) {
  fmt::print("{:<28} {:>10.3f} {:>10.3f} {:>8.2f}x  {}\n", name, serial, parallel, serial / parallel,
             same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int runs = argc > 1 ? std::atoi(argv[1]) : 2000;
  const std::uint64_t samples = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
  const int workers = argc > 3 ? std::atoi(argv[3]) : static_cast<int>(std::thread::hardware_concurrency());

  fmt::print("workers: {}\n{:<28} {:>10} {:>10} {:>9}\n", workers, "kernel", "serial_s", "omp_s", "speedup");

  ScenarioConfig cfg;
  cfg.runs = runs;
  for (Policy p : {Policy::DObs, Policy::RSS, Policy::CBF}) {
    std::vector<RunMetrics> a, b;
    const double ts = time_s([&] { a = run_replications_serial(cfg, p); });
    const double tp = time_s([&] { b = run_replications_parallel(cfg, p, workers); });
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      same = a[k].delivered == b[k].delivered && a[k].avg_throughput_bps == b[k].avg_throughput_bps &&
             a[k].avg_delay_steps == b[k].avg_delay_steps;
    }
    row(fmt::format("replications/{} x{}", to_string(p), runs), ts, tp, same);
  }

  oracle::AgreementReport a, b;
  const double ts = time_s([&] { a = oracle::run_agreement_serial(samples, 1); });
  const double tp = time_s([&] { b = oracle::run_agreement_parallel(samples, 1, workers); });
  row(fmt::format("geometry oracle x{}", samples), ts, tp, oracle::format_report(a) == oracle::format_report(b));
  return 0;
}
