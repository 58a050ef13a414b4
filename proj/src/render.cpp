#include "dpsqkd/render.hpp"

#include "dpsqkd/textfmt.hpp"
#include "dpsqkd/version.hpp"

namespace dpsqkd {

namespace {

std::string num(double x) { return format_sig(x, 9); }

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

std::string pct(double q) { return format_sig(q * 100.0, 4) + " %"; }

std::string opt_pct(const std::optional<double>& q) {
  return q ? pct(*q) : std::string("n/a");
}

std::string check_text(const std::optional<bool>& c) {
  if (!c) return "";
  return *c ? "pass" : "fail";
}

std::string check_report(const std::optional<bool>& c) {
  if (!c) return "n/a";
  return *c ? "pass" : "fail";
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "report") return OutputFormat::kReport;
  return std::nullopt;
}

std::string metadata_block(const RunConfig& config, const MetaRows& extra) {
  std::string out;
  out += "# ";
  out += kProjectName;
  out += " ";
  out += kVersion;
  out += "\n# generator = ";
  out += rng::kGeneratorName;
  out += "\n";
  if (!config.preset().empty()) out += "# preset = " + config.preset() + "\n";
  for (const auto& [k, v] : config.resolved()) out += "# " + k + " = " + v + "\n";
  for (const auto& [k, v] : extra) out += "# " + k + " = " + v + "\n";
  return out;
}

std::string render_analytic(const AnalyticPoint& point, double loss_db,
                            const RunConfig& config, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    std::string out = metadata_block(config, {});
    out += "loss_db,p_signal,p_dark,p_click,sifted_bps,qber,secure_fraction,secure_bps\n";
    out += num(loss_db) + "," + num(point.p_signal) + "," + num(point.p_dark) + "," +
           num(point.p_click) + "," + num(point.sifted_rate_bps) + "," + num(point.qber) +
           "," + num(point.secure_fraction) + "," + num(point.secure_rate_bps) + "\n";
    return out;
  }
  std::string out = metadata_block(config, {});
  out += "channel loss: " + num(loss_db) + " dB\n";
  out += "p_signal: " + num(point.p_signal) + "\n";
  out += "p_dark: " + num(point.p_dark) + "\n";
  out += "p_click: " + num(point.p_click) + "\n";
  out += "sifted rate: " + num(point.sifted_rate_bps) + " bit/s\n";
  out += "qber: " + pct(point.qber) + "\n";
  out += "secure fraction: " + num(point.secure_fraction) + "\n";
  out += "secure rate: " + num(point.secure_rate_bps) + " bit/s\n";
  return out;
}

std::string render_sweep(const SweepResult& sweep, const RunConfig& config,
                         OutputFormat format) {
  MetaRows extra;
  if (sweep.secure_cutoff_db)
    extra.emplace_back("sweep.secure_cutoff_db", num(*sweep.secure_cutoff_db));
  if (format == OutputFormat::kCsv) {
    std::string out = metadata_block(config, extra);
    out += "loss_db,p_click,sifted_bps,qber,secure_bps\n";
    for (const SweepPoint& p : sweep.points) {
      out += num(p.loss_db) + "," + num(p.point.p_click) + "," +
             num(p.point.sifted_rate_bps) + "," + num(p.point.qber) + "," +
             num(p.point.secure_rate_bps) + "\n";
    }
    return out;
  }
  std::string out = metadata_block(config, extra);
  for (const SweepPoint& p : sweep.points) {
    out += "loss " + num(p.loss_db) + " dB: p_click=" + num(p.point.p_click) +
           ", sifted=" + num(p.point.sifted_rate_bps) + " bit/s, qber=" + pct(p.point.qber) +
           ", secure=" + num(p.point.secure_rate_bps) + " bit/s\n";
  }
  if (sweep.secure_cutoff_db)
    out += "secure-rate cutoff: " + num(*sweep.secure_cutoff_db) + " dB\n";
  else
    out += "secure-rate cutoff: none within range\n";
  return out;
}

SimulationSummary summarize(const ClickStream& stream, const SiftedKeyPair& pair) {
  SimulationSummary s;
  s.kernel = stream.kernel;
  s.loss_db = stream.channel.loss_db;
  s.duration_s = stream.duration_s();
  s.n_slots = stream.duration_slots;
  s.seed = stream.seed;
  s.clicks = stream.events.size();
  for (const ClickEvent& ev : stream.events)
    (ev.origin == ClickOrigin::kSignal ? s.signal_clicks : s.dark_clicks) += 1;
  s.sifted_bits = pair.size();
  s.sifted_rate_bps = static_cast<double>(pair.size()) / s.duration_s;
  s.qber = pair.measured_qber;
  s.warnings = stream.warnings;
  return s;
}

namespace {

MetaRows run_meta(const SimulationSummary& sim) {
  MetaRows extra;
  extra.emplace_back("run.kernel", sim.kernel);
  extra.emplace_back("run.seed", format_u64(sim.seed));
  extra.emplace_back("run.n_slots", format_u64(sim.n_slots));
  extra.emplace_back("run.duration_s", num(sim.duration_s));
  for (const std::string& w : sim.warnings) extra.emplace_back("warning", w);
  return extra;
}

}  // namespace

std::string render_simulation(const SimulationSummary& sim, const SecureKeyReport& key,
                              const RunConfig& config, OutputFormat format) {
  const double secure_rate =
      static_cast<double>(key.secure_length) / (sim.duration_s > 0 ? sim.duration_s : 1.0);
  if (format == OutputFormat::kCsv) {
    std::string out = metadata_block(config, run_meta(sim));
    out +=
        "kernel,loss_db,duration_s,n_slots,seed,clicks,signal_clicks,dark_clicks,"
        "sifted_bits,sifted_rate_bps,qber,secure_fraction,secure_length,secure_rate_bps,"
        "status\n";
    out += sim.kernel + "," + num(sim.loss_db) + "," + num(sim.duration_s) + "," +
           format_u64(sim.n_slots) + "," + format_u64(sim.seed) + "," +
           format_u64(sim.clicks) + "," + format_u64(sim.signal_clicks) + "," +
           format_u64(sim.dark_clicks) + "," + format_u64(sim.sifted_bits) + "," +
           num(sim.sifted_rate_bps) + "," + opt_num(sim.qber) + "," +
           num(key.secure_fraction) + "," + format_u64(key.secure_length) + "," +
           num(secure_rate) + "," + to_string(key.status) + "\n";
    return out;
  }
  std::string out = metadata_block(config, run_meta(sim));
  out += "kernel: " + sim.kernel + "\n";
  out += "channel loss: " + num(sim.loss_db) + " dB\n";
  out += "duration: " + num(sim.duration_s) + " s (" + format_u64(sim.n_slots) +
         " slots)\n";
  out += "clicks: " + format_u64(sim.clicks) + " (signal " + format_u64(sim.signal_clicks) +
         ", dark " + format_u64(sim.dark_clicks) + ")\n";
  out += "sifted bits: " + format_u64(sim.sifted_bits) + "\n";
  out += "sifted rate: " + num(sim.sifted_rate_bps) + " bit/s\n";
  out += "qber: " + opt_pct(sim.qber) + "\n";
  out += "secure fraction: " + num(key.secure_fraction) + "\n";
  out += "secure length: " + format_u64(key.secure_length) + " bits\n";
  out += "secure rate: " + num(secure_rate) + " bit/s\n";
  out += "status: " + std::string(to_string(key.status)) + "\n";
  return out;
}

std::string render_distill(const SimulationSummary& sim, const SecureKeyReport& key,
                           const RunConfig& config, OutputFormat format) {
  const double secure_rate =
      static_cast<double>(key.secure_length) / (sim.duration_s > 0 ? sim.duration_s : 1.0);
  if (format == OutputFormat::kCsv) {
    std::string out = metadata_block(config, run_meta(sim));
    out +=
        "sifted_length,working_length,qber_estimate,secure_fraction,leaked_bits,"
        "secure_length,secure_rate_bps,hash_seed,status\n";
    out += format_u64(key.sifted_length) + "," + format_u64(key.working_length) + "," +
           opt_num(key.qber_estimate) + "," + num(key.secure_fraction) + "," +
           format_u64(key.leaked_bits) + "," + format_u64(key.secure_length) + "," +
           num(secure_rate) + "," + format_u64(key.hash_seed) + "," +
           to_string(key.status) + "\n";
    return out;
  }
  std::string out = metadata_block(config, run_meta(sim));
  out += "sifted length: " + format_u64(key.sifted_length) + " bits\n";
  out += "working length: " + format_u64(key.working_length) + " bits\n";
  out += "qber estimate: " + opt_pct(key.qber_estimate) + "\n";
  out += "secure fraction: " + num(key.secure_fraction) + "\n";
  out += "error-correction leakage: " + format_u64(key.leaked_bits) + " bits\n";
  out += "secure length: " + format_u64(key.secure_length) + " bits\n";
  out += "secure rate: " + num(secure_rate) + " bit/s\n";
  out += "hash seed: " + format_u64(key.hash_seed) + "\n";
  out += "status: " + std::string(to_string(key.status)) + "\n";
  if (!key.final_key.empty()) {
    const std::string hex = bits_to_hex(key.final_key);
    if (hex.size() <= 128) {
      out += "final key (hex): " + hex + "\n";
    } else {
      out += "final key (hex, first 64 of " + std::to_string(hex.size()) +
             " digits): " + hex.substr(0, 64) + "...\n";
    }
  }
  return out;
}

std::string render_reproduce(const ComparisonReport& report, const RunConfig& config,
                             OutputFormat format) {
  MetaRows extra;
  extra.emplace_back("reproduce.seeds", std::to_string(report.seeds));
  extra.emplace_back("reproduce.base_seed", format_u64(report.base_seed));
  if (format == OutputFormat::kCsv) {
    std::string out = metadata_block(config, extra);
    out +=
        "scenario,loss_db,composition,published_sifted_bps,published_qber,"
        "published_secure_bps,analytic_sifted_bps,analytic_qber,analytic_secure_bps,"
        "analytic_sifted_sum_bps,analytic_sifted_mean_bps,secure_from_published_bps,"
        "sim_sifted_mean_bps,sim_sifted_stderr_bps,sim_qber_mean,sim_qber_stderr,"
        "sim_secure_mean_bps,secure_check,sifted_check,sim_check,no_key_check,overall\n";
    for (const ScenarioComparison& row : report.rows) {
      std::optional<double> pub_sifted, pub_qber, pub_secure;
      if (row.published) {
        pub_sifted = row.published->sifted_rate_bps;
        pub_qber = row.published->qber;
        pub_secure = row.published->secure_rate_bps;
      }
      out += row.scenario + "," + num(row.loss_db) + "," + to_string(row.composition) +
             "," + opt_num(pub_sifted) + "," + opt_num(pub_qber) + "," +
             opt_num(pub_secure) + "," + num(row.analytic.sifted_rate_bps) + "," +
             num(row.analytic.qber) + "," + num(row.analytic.secure_rate_bps) + "," +
             num(row.analytic_sifted_sum) + "," + num(row.analytic_sifted_mean) + "," +
             opt_num(row.secure_from_published) + "," + opt_num(row.sim_sifted_mean) +
             "," + opt_num(row.sim_sifted_stderr) + "," + opt_num(row.sim_qber_mean) +
             "," + opt_num(row.sim_qber_stderr) + "," + opt_num(row.sim_secure_mean) +
             "," + check_text(row.secure_reconstruction_ok) + "," +
             check_text(row.sifted_within_factor_ok) + "," +
             check_text(row.sim_matches_model_ok) + "," + check_text(row.no_key_flag_ok) +
             "," + (row.overall_ok ? "pass" : "fail") + "\n";
    }
    return out;
  }
  std::string out = metadata_block(config, extra);
  for (const ScenarioComparison& row : report.rows) {
    out += "scenario " + row.scenario + " (loss " + num(row.loss_db) + " dB, composition " +
           to_string(row.composition) + ")\n";
    if (row.published) {
      const PublishedValues& pub = *row.published;
      out += "  published: sifted=" +
             (pub.sifted_rate_bps ? num(*pub.sifted_rate_bps) + " bit/s" : std::string("n/a")) +
             ", qber=" + opt_pct(pub.qber) + ", secure=" +
             (pub.secure_rate_bps ? num(*pub.secure_rate_bps) + " bit/s"
                                  : std::string(pub.secure_key_possible ? "n/a" : "none")) +
             "\n";
      out += "  source: " + pub.source + "\n";
    }
    out += "  analytic: sifted=" + num(row.analytic.sifted_rate_bps) +
           " bit/s, qber=" + pct(row.analytic.qber) +
           ", secure=" + num(row.analytic.secure_rate_bps) + " bit/s\n";
    out += "  analytic sifted by composition: sum=" + num(row.analytic_sifted_sum) +
           ", mean=" + num(row.analytic_sifted_mean) + " bit/s\n";
    if (row.secure_from_published)
      out += "  secure rate from published sifted+qber: " + num(*row.secure_from_published) +
             " bit/s\n";
    if (row.sim_sifted_mean) {
      out += "  simulated (" + std::to_string(row.seeds) + " seeds, " +
             num(row.sim_duration_s) + " s each): sifted=" + num(*row.sim_sifted_mean);
      if (row.sim_sifted_stderr) out += " +- " + num(*row.sim_sifted_stderr);
      out += " bit/s, qber=" + opt_pct(row.sim_qber_mean);
      if (row.sim_qber_stderr) out += " +- " + pct(*row.sim_qber_stderr);
      if (row.sim_secure_mean) out += ", secure=" + num(*row.sim_secure_mean) + " bit/s";
      out += "\n";
    }
    out += "  checks: secure=" + check_report(row.secure_reconstruction_ok) +
           ", sifted=" + check_report(row.sifted_within_factor_ok) +
           ", sim=" + check_report(row.sim_matches_model_ok) +
           ", no-key=" + check_report(row.no_key_flag_ok) +
           ", overall=" + (row.overall_ok ? "pass" : "fail") + "\n";
  }
  return out;
}

}  // namespace dpsqkd
