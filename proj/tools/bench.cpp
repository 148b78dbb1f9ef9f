// Compares the serial reference path against the OpenMP path on the two
// Monte-Carlo suites and checks that both produce byte-identical CSV output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tribench/experiments.hpp"

namespace {

using namespace tribench;
using Clock = std::chrono::steady_clock;

template <typename Fn>
std::pair<double, std::string> timed_csv(const Fn& fn) {
  const auto start = Clock::now();
  auto records = fn();
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {seconds, to_csv_string(std::move(records))};
}

void compare(const std::string& label, double serial_s, double parallel_s,
             bool identical) {
  std::printf("%-24s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n",
              label.c_str(), serial_s, parallel_s, serial_s / parallel_s,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 100;
  if (argc > 1) trials = std::atoi(argv[1]);
  std::printf("OpenMP threads available: %d, trials per suite: %d\n\n",
              max_threads(), trials);

  bool all_identical = true;

  {
    SensitivityConfig cfg;
    cfg.conf = 1;
    cfg.kind = ErrorKind::Position;
    cfg.levels = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.trials = trials;
    cfg.mode = ExecMode::Serial;
    const auto [serial_s, serial_csv] = timed_csv([&] { return run_sensitivity(cfg); });
    cfg.mode = ExecMode::Parallel;
    const auto [parallel_s, parallel_csv] =
        timed_csv([&] { return run_sensitivity(cfg); });
    const bool identical = serial_csv == parallel_csv;
    all_identical = all_identical && identical;
    compare("sensitivity conf1", serial_s, parallel_s, identical);
  }

  {
    SfmSynthConfig cfg;
    cfg.n_cameras = 2;
    cfg.trials = trials;
    cfg.mode = ExecMode::Serial;
    const auto [serial_s, serial_csv] = timed_csv([&] { return run_sfm_synth(cfg); });
    cfg.mode = ExecMode::Parallel;
    const auto [parallel_s, parallel_csv] = timed_csv([&] { return run_sfm_synth(cfg); });
    const bool identical = serial_csv == parallel_csv;
    all_identical = all_identical && identical;
    compare("sfm-synth 2 cameras", serial_s, parallel_s, identical);
  }

  {
    SfmSynthConfig cfg;
    cfg.n_cameras = 3;
    cfg.trials = trials;
    cfg.mode = ExecMode::Serial;
    const auto [serial_s, serial_csv] = timed_csv([&] { return run_sfm_synth(cfg); });
    cfg.mode = ExecMode::Parallel;
    const auto [parallel_s, parallel_csv] = timed_csv([&] { return run_sfm_synth(cfg); });
    const bool identical = serial_csv == parallel_csv;
    all_identical = all_identical && identical;
    compare("sfm-synth 3 cameras", serial_s, parallel_s, identical);
  }

  return all_identical ? 0 : 1;
}
