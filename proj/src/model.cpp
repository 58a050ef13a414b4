#include "dpsqkd/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpsqkd {

ClickProbabilities click_probability(const SystemParams& params, const ChannelSpec& channel) {
  params.validate();
  channel.validate();
  const double total_loss_db = channel.loss_db + params.system_loss_db;
  const double transmission = std::pow(10.0, -total_loss_db / 10.0);
  ClickProbabilities cp;
  cp.p_signal = params.mu * params.effective_eta() * transmission;
  cp.p_dark =
      (params.detector1.dcr_cps + params.detector2.dcr_cps) * params.time_window_s;
  cp.p_click = cp.p_signal + cp.p_dark;
  if (cp.p_click > 1.0)
    throw std::domain_error("per-slot click probability exceeds 1");
  return cp;
}

double sifted_rate(double p_click, const SystemParams& params) {
  if (!(p_click >= 0.0 && p_click <= 1.0))
    throw std::invalid_argument("p_click must lie in [0, 1]");
  const double nu = params.clock_rate_hz;
  const double raw = nu * p_click;
  return raw * std::exp(-raw * params.dead_time_s);
}

double qber_analytic(double p_signal, double p_dark, const SystemParams& params) {
  if (!(p_signal >= 0.0) || !(p_dark >= 0.0))
    throw std::invalid_argument("click probabilities must be nonnegative");
  const double p_click = p_signal + p_dark;
  if (p_click <= 0.0)
    throw std::domain_error("qber undefined when the click probability is zero");
  return (params.baseline_error * p_signal + 0.5 * p_dark) / p_click;
}

double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

namespace {

double secure_fraction_impl(double qber, const SystemParams& params, bool lenient) {
  if (!(qber >= 0.0) || qber >= 0.5)
    throw std::invalid_argument("qber must lie in [0, 0.5)");
  // collision-probability bracket for individual attacks
  const double t = 1.0 - 6.0 * qber;
  const double arg = 1.0 - qber * qber - 0.5 * t * t;
  if (arg <= 0.0) {
    if (lenient) return -std::numeric_limits<double>::infinity();
    throw std::domain_error("secure fraction undefined: log argument is not positive at qber=" +
                            std::to_string(qber));
  }
  return -(1.0 - 2.0 * params.mu) * std::log2(arg) -
         params.ec_inefficiency * binary_entropy(qber);
}

}  // namespace

double secure_fraction(double qber, const SystemParams& params) {
  return secure_fraction_impl(qber, params, false);
}

double secure_fraction_lenient(double qber, const SystemParams& params) {
  return secure_fraction_impl(qber, params, true);
}

AnalyticPoint analytic_point(const SystemParams& params, const ChannelSpec& channel) {
  const ClickProbabilities cp = click_probability(params, channel);
  AnalyticPoint pt;
  pt.p_signal = cp.p_signal;
  pt.p_dark = cp.p_dark;
  pt.p_click = cp.p_click;
  pt.sifted_rate_bps = sifted_rate(cp.p_click, params);
  pt.qber = qber_analytic(cp.p_signal, cp.p_dark, params);
  pt.secure_fraction = secure_fraction_lenient(pt.qber, params);
  pt.secure_rate_bps = pt.sifted_rate_bps * std::max(0.0, pt.secure_fraction);
  return pt;
}

namespace {

double qber_at_loss(const SystemParams& params, double loss_db) {
  const ClickProbabilities cp = click_probability(params, ChannelSpec::from_loss(loss_db));
  return qber_analytic(cp.p_signal, cp.p_dark, params);
}

}  // namespace

double max_tolerable_loss_db(const SystemParams& params, double qber_threshold) {
  params.validate();
  if (!(qber_threshold > 0.0) || qber_threshold >= 0.5)
    throw std::invalid_argument("qber threshold must lie in (0, 0.5)");
  const ClickProbabilities cp0 = click_probability(params, ChannelSpec::from_loss(0.0));
  if (cp0.p_click <= 0.0)
    throw std::domain_error("no crossing: click probability is zero");
  if (qber_at_loss(params, 0.0) >= qber_threshold)
    throw std::domain_error("no crossing: qber already at or above the threshold at 0 dB");
  if (cp0.p_dark <= 0.0)
    return std::numeric_limits<double>::infinity();  // error floor never rises
  double lo = 0.0, hi = 1.0;
  while (qber_at_loss(params, hi) < qber_threshold) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::domain_error("no crossing found below 1e6 dB");
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (qber_at_loss(params, mid) < qber_threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> secure_cutoff_loss_db(const SystemParams& params) {
  params.validate();
  const auto fraction_at = [&](double loss_db) {
    const AnalyticPoint pt = analytic_point(params, ChannelSpec::from_loss(loss_db));
    return pt.secure_fraction;
  };
  const ClickProbabilities cp0 = click_probability(params, ChannelSpec::from_loss(0.0));
  if (cp0.p_click <= 0.0) return std::nullopt;
  if (fraction_at(0.0) <= 0.0) return std::nullopt;
  if (cp0.p_dark <= 0.0) return std::nullopt;  // fraction independent of loss
  double lo = 0.0, hi = 1.0;
  while (fraction_at(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return std::nullopt;
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (fraction_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double loss_to_distance_km(double loss_db, double attenuation_db_per_km) {
  if (!(attenuation_db_per_km > 0.0))
    throw std::invalid_argument("attenuation must be positive");
  if (!(loss_db >= 0.0)) throw std::invalid_argument("loss must be nonnegative");
  return loss_db / attenuation_db_per_km;
}

double distance_to_loss_db(double length_km, double attenuation_db_per_km) {
  if (!(attenuation_db_per_km > 0.0))
    throw std::invalid_argument("attenuation must be positive");
  if (!(length_km >= 0.0)) throw std::invalid_argument("length must be nonnegative");
  return length_km * attenuation_db_per_km;
}

}  // namespace dpsqkd
