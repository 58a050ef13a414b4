// Command-line front end: analytic link-model evaluation, Monte Carlo
// simulation, loss sweeps, reference-experiment reproduction, and key
// distillation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpsqkd/config.hpp"
#include "dpsqkd/experiments.hpp"
#include "dpsqkd/model.hpp"
#include "dpsqkd/postprocess.hpp"
#include "dpsqkd/render.hpp"
#include "dpsqkd/sim.hpp"
#include "dpsqkd/textfmt.hpp"
#include "dpsqkd/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;

struct CommonArgs {
  std::string preset;
  std::string config_file;
  std::vector<std::string> sets;
  std::string output_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--preset", args.preset, "Parameter preset (paper-dcr004, paper-dcr001)");
  cmd->add_option("--config", args.config_file, "Config file with key = value lines");
  cmd->add_option("--set", args.sets, "Override a configuration key (key=value)")
      ->take_all();
  cmd->add_option("--output", args.output_path, "Write the result here instead of stdout");
  cmd->add_option("--format", args.format, "Output format: csv or report");
  cmd->add_option("--seed", args.seed, "Simulation seed");
  cmd->add_option("--seeds", args.seeds, "Number of independent seeds");
}

dpsqkd::RunConfig build_config(const CommonArgs& args) {
  dpsqkd::RunConfig cfg = dpsqkd::RunConfig::defaults();
  if (!args.preset.empty()) cfg.apply_preset(args.preset);
  if (!args.config_file.empty()) cfg.load_file(args.config_file);
  for (const std::string& assignment : args.sets) cfg.set_pair(assignment);
  if (!args.format.empty()) cfg.set("output.format", args.format);
  if (args.seed) cfg.set("sim.seed", dpsqkd::format_u64(*args.seed));
  if (args.seeds) cfg.set("sim.seeds", std::to_string(*args.seeds));
  return cfg;
}

dpsqkd::OutputFormat output_format(const dpsqkd::RunConfig& cfg) {
  const std::string& text = cfg.get_string("output.format");
  const auto parsed = dpsqkd::parse_output_format(text);
  if (!parsed)
    throw dpsqkd::ConfigError("invalid value for output.format: '" + text +
                              "' (expected csv or report)");
  return *parsed;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + output_path);
  out << text;
}

dpsqkd::ClickStream run_kernel(const dpsqkd::RunConfig& cfg, const dpsqkd::SystemParams& params,
                               const dpsqkd::ChannelSpec& channel) {
  const std::string& kernel = cfg.get_string("sim.kernel");
  const std::uint64_t seed = cfg.get_u64("sim.seed");
  if (kernel == "pulse") {
    return dpsqkd::simulate_pulse_level(params, channel, cfg.get_u64("sim.n_slots"), seed)
        .stream;
  }
  if (kernel == "event") {
    return dpsqkd::simulate_event_driven(params, channel, cfg.get_double("sim.duration_s"),
                                         seed);
  }
  throw dpsqkd::ConfigError("invalid value for sim.kernel: '" + kernel +
                            "' (expected pulse or event)");
}

void write_key_file(const dpsqkd::SecureKeyReport& report, const std::string& path,
                    const std::string& key_format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open key file: " + path);
  if (key_format == "hex") {
    out << dpsqkd::bits_to_hex(report.final_key) << "\n";
  } else if (key_format == "binary") {
    const auto bytes = dpsqkd::pack_bits_msb(report.final_key);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    throw dpsqkd::ConfigError("invalid key format: '" + key_format +
                              "' (expected hex or binary)");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Differential-phase-shift QKD link simulator and analysis tool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dpsqkd::kProjectName) + " " +
                                        dpsqkd::kVersion);

  CommonArgs analytic_args, simulate_args, sweep_args, reproduce_args, distill_args;
  std::string distill_key_out, distill_key_format = "hex";
  std::string simulate_key_out, simulate_key_format = "hex";

  CLI::App* analytic =
      app.add_subcommand("analytic", "Evaluate the closed-form link model at one point");
  add_common(analytic, analytic_args);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a Monte Carlo kernel and post-process the key");
  add_common(simulate, simulate_args);
  simulate->add_option("--key-out", simulate_key_out, "Write the final key to this file");
  simulate->add_option("--key-format", simulate_key_format, "Key file format: hex or binary");

  CLI::App* sweep = app.add_subcommand("sweep", "Analytic sweep over channel loss");
  add_common(sweep, sweep_args);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Compare model and simulation against the reference operating points");
  add_common(reproduce, reproduce_args);

  CLI::App* distill = app.add_subcommand(
      "distill", "Simulate, sift and distill a secure key; optionally write the key file");
  add_common(distill, distill_args);
  distill->add_option("--key-out", distill_key_out, "Write the final key to this file");
  distill->add_option("--key-format", distill_key_format, "Key file format: hex or binary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (analytic->parsed()) {
      const dpsqkd::RunConfig cfg = build_config(analytic_args);
      const dpsqkd::SystemParams params = cfg.system_params();
      const dpsqkd::ChannelSpec channel = cfg.channel();
      const dpsqkd::AnalyticPoint point = dpsqkd::analytic_point(params, channel);
      emit(dpsqkd::render_analytic(point, channel.loss_db, cfg, output_format(cfg)),
           analytic_args.output_path);
    } else if (simulate->parsed() || distill->parsed()) {
      const bool is_distill = distill->parsed();
      const CommonArgs& args = is_distill ? distill_args : simulate_args;
      const std::string& key_out = is_distill ? distill_key_out : simulate_key_out;
      const std::string& key_format = is_distill ? distill_key_format : simulate_key_format;
      const dpsqkd::RunConfig cfg = build_config(args);
      const dpsqkd::SystemParams params = cfg.system_params();
      const dpsqkd::ChannelSpec channel = cfg.channel();
      const dpsqkd::ClickStream stream = run_kernel(cfg, params, channel);
      const dpsqkd::SiftedKeyPair pair =
          dpsqkd::sift(stream, dpsqkd::phase_sequence_for(stream));
      const dpsqkd::SimulationSummary summary = dpsqkd::summarize(stream, pair);
      dpsqkd::SecureKeyReport report;
      if (pair.size() > 0) {
        dpsqkd::DistillOptions opts;
        opts.sample_fraction = cfg.get_double("distill.sample_fraction");
        opts.seed = cfg.get_u64("sim.seed");
        opts.hash_seed = cfg.get_u64("distill.hash_seed");
        report = dpsqkd::distill(pair, params, opts);
      } else {
        report.params = params;
        report.generator = dpsqkd::rng::kGeneratorName;
        report.hash_seed = cfg.get_u64("distill.hash_seed");
        report.status = dpsqkd::DistillStatus::kQberAboveThreshold;
      }
      const auto fmt = output_format(cfg);
      emit(is_distill ? dpsqkd::render_distill(summary, report, cfg, fmt)
                      : dpsqkd::render_simulation(summary, report, cfg, fmt),
           args.output_path);
      if (!key_out.empty()) write_key_file(report, key_out, key_format);
    } else if (sweep->parsed()) {
      const dpsqkd::RunConfig cfg = build_config(sweep_args);
      const dpsqkd::SystemParams params = cfg.system_params();
      const dpsqkd::SweepResult result =
          dpsqkd::sweep_loss(params, cfg.get_double("sweep.from_db"),
                             cfg.get_double("sweep.to_db"), cfg.get_double("sweep.step_db"));
      emit(dpsqkd::render_sweep(result, cfg, output_format(cfg)), sweep_args.output_path);
    } else if (reproduce->parsed()) {
      const dpsqkd::RunConfig cfg = build_config(reproduce_args);
      dpsqkd::ReproduceOptions opts;
      opts.seeds = cfg.get_int("sim.seeds");
      opts.duration_s = cfg.get_double("reproduce.duration_s");
      opts.base_seed = cfg.get_u64("sim.seed");
      const dpsqkd::ComparisonReport report = dpsqkd::reproduce_table1(opts);
      emit(dpsqkd::render_reproduce(report, cfg, output_format(cfg)),
           reproduce_args.output_path);
    }
  } catch (const dpsqkd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
