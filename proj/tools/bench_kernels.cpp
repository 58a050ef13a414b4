// Benchmark: OpenMP-chunked pulse kernel vs. the serial reference, plus
// the event-driven kernel over the same simulated time. Verifies that the
// parallel and serial pulse kernels produce identical click streams.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpsqkd/model.hpp"
#include "dpsqkd/params.hpp"
#include "dpsqkd/sim.hpp"

using namespace dpsqkd;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void usage(const char* prog) {
  std::printf(
      "usage: %s [--slots N] [--loss DB] [--preset NAME] [--seed N] [--repeat N]\n", prog);
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t n_slots = 200000000ull;
  double loss_db = 30.0;
  std::string preset_name = "paper-dcr004";
  std::uint64_t seed = 1;
  int repeat = 3;

  for (int i = 1; i < argc; ++i) {
    const auto want = [&](const char* flag) {
      if (std::strcmp(argv[i], flag) != 0) return false;
      if (i + 1 >= argc) {
        usage(argv[0]);
        std::exit(2);
      }
      return true;
    };
    if (want("--slots")) n_slots = std::strtoull(argv[++i], nullptr, 10);
    else if (want("--loss")) loss_db = std::strtod(argv[++i], nullptr);
    else if (want("--preset")) preset_name = argv[++i];
    else if (want("--seed")) seed = std::strtoull(argv[++i], nullptr, 10);
    else if (want("--repeat")) repeat = static_cast<int>(std::strtol(argv[++i], nullptr, 10));
    else {
      usage(argv[0]);
      return 2;
    }
  }

  const auto preset = find_preset(preset_name);
  if (!preset) {
    std::fprintf(stderr, "unknown preset: %s\n", preset_name.c_str());
    return 2;
  }
  const SystemParams params = *preset;
  const ChannelSpec channel = ChannelSpec::from_loss(loss_db);
  const ClickProbabilities cp = click_probability(params, channel);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("pulse kernels: %llu slots, loss %.1f dB, p_click %.3e, %d thread(s)\n",
              static_cast<unsigned long long>(n_slots), loss_db, cp.p_click, threads);

  double best_serial = 1e300, best_parallel = 1e300;
  std::size_t clicks = 0;
  bool identical = true;
  for (int r = 0; r < repeat; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    const auto ref = simulate_pulse_level_reference(params, channel, n_slots, seed);
    const double ts = seconds_since(t0);
    best_serial = std::min(best_serial, ts);

    t0 = std::chrono::steady_clock::now();
    const auto par = simulate_pulse_level(params, channel, n_slots, seed);
    const double tp = seconds_since(t0);
    best_parallel = std::min(best_parallel, tp);

    clicks = par.stream.events.size();
    identical = identical && (ref.stream.events == par.stream.events);
  }

  std::printf("serial reference : %8.3f s  (%6.2f ns/slot)\n", best_serial,
              1e9 * best_serial / static_cast<double>(n_slots));
  std::printf("openmp chunked   : %8.3f s  (%6.2f ns/slot)  speedup %.2fx\n", best_parallel,
              1e9 * best_parallel / static_cast<double>(n_slots),
              best_serial / best_parallel);
  std::printf("clicks: %zu, streams identical: %s\n", clicks, identical ? "yes" : "NO");

  // event-driven kernel over the same simulated time
  const double duration_s = static_cast<double>(n_slots) / params.clock_rate_hz;
  double best_event = 1e300;
  std::size_t event_clicks = 0;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ev = simulate_event_driven(params, channel, duration_s, seed);
    best_event = std::min(best_event, seconds_since(t0));
    event_clicks = ev.events.size();
  }
  std::printf("event driven     : %8.3f s  (%zu clicks, %.1fx vs serial pulse)\n",
              best_event, event_clicks, best_serial / best_event);

  return identical ? 0 : 1;
}
