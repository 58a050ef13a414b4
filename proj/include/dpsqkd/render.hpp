#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpsqkd/config.hpp"
#include "dpsqkd/experiments.hpp"
#include "dpsqkd/model.hpp"
#include "dpsqkd/postprocess.hpp"
#include "dpsqkd/sim.hpp"

// Deterministic text rendering of results: CSV (with `#` metadata header
// lines) and a human-readable report format. All numbers go through
// locale-independent formatting, so equal inputs give byte-equal output.

namespace dpsqkd {

enum class OutputFormat { kCsv, kReport };
std::optional<OutputFormat> parse_output_format(std::string_view text);

using MetaRows = std::vector<std::pair<std::string, std::string>>;

/// `# key = value` header lines: version, generator, preset, resolved
/// configuration, plus caller extras.
std::string metadata_block(const RunConfig& config, const MetaRows& extra);

std::string render_analytic(const AnalyticPoint& point, double loss_db,
                            const RunConfig& config, OutputFormat format);

std::string render_sweep(const SweepResult& sweep, const RunConfig& config,
                         OutputFormat format);

struct SimulationSummary {
  std::string kernel;
  double loss_db = 0.0;
  double duration_s = 0.0;
  std::uint64_t n_slots = 0;
  std::uint64_t seed = 0;
  std::uint64_t clicks = 0;
  std::uint64_t signal_clicks = 0;
  std::uint64_t dark_clicks = 0;
  std::uint64_t sifted_bits = 0;
  double sifted_rate_bps = 0.0;
  std::optional<double> qber;
  std::vector<std::string> warnings;
};

SimulationSummary summarize(const ClickStream& stream, const SiftedKeyPair& pair);

std::string render_simulation(const SimulationSummary& sim, const SecureKeyReport& key,
                              const RunConfig& config, OutputFormat format);

std::string render_distill(const SimulationSummary& sim, const SecureKeyReport& key,
                           const RunConfig& config, OutputFormat format);

std::string render_reproduce(const ComparisonReport& report, const RunConfig& config,
                             OutputFormat format);

}  // namespace dpsqkd
