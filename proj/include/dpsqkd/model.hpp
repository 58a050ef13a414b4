#pragma once

#include <optional>

#include "dpsqkd/params.hpp"

// Closed-form link model for a differential-phase-shift QKD system:
// per-slot click probabilities, dead-time-corrected sifted rate, error
// rate, and the secure-key fraction against individual attacks.

namespace dpsqkd {

struct ClickProbabilities {
  double p_signal = 0.0;  // signal-photon detection probability per slot
  double p_dark = 0.0;    // dark-count probability per slot (both detectors)
  double p_click = 0.0;   // total per-slot click probability
};

struct AnalyticPoint {
  double p_signal = 0.0;
  double p_dark = 0.0;
  double p_click = 0.0;
  double sifted_rate_bps = 0.0;
  double qber = 0.0;
  // Unclamped secure fraction; -infinity when the key-rate bracket leaves
  // its log domain (error rate far beyond the security threshold).
  double secure_fraction = 0.0;
  double secure_rate_bps = 0.0;  // sifted_rate_bps * max(0, secure_fraction)
};

/// Per-slot detection probabilities for the given system and channel.
ClickProbabilities click_probability(const SystemParams& params, const ChannelSpec& channel);

/// Sifted-key rate (bit/s) from the per-slot click probability, including
/// the dead-time duty-cycle correction.
double sifted_rate(double p_click, const SystemParams& params);

/// Analytic quantum bit error rate: baseline wrong-port errors on signal
/// clicks plus half of the dark clicks.
double qber_analytic(double p_signal, double p_dark, const SystemParams& params);

/// Binary entropy h(q), clamped to 0 at the endpoints.
double binary_entropy(double q);

/// Secure-key fraction per sifted bit against individual attacks.
/// Throws std::domain_error when the bracket's log argument is <= 0.
double secure_fraction(double qber, const SystemParams& params);

/// Same, but returns -infinity instead of throwing.
double secure_fraction_lenient(double qber, const SystemParams& params);

/// Full analytic chain at one channel point.
AnalyticPoint analytic_point(const SystemParams& params, const ChannelSpec& channel);

/// Channel loss (dB) at which the analytic QBER reaches `qber_threshold`,
/// found by bisection to 0.01 dB. Returns +infinity when dark counts are
/// zero (the error rate never rises above the baseline floor). Throws
/// std::domain_error when there is no crossing (e.g. already above the
/// threshold at 0 dB).
double max_tolerable_loss_db(const SystemParams& params, double qber_threshold);

/// Channel loss (dB) at which the secure fraction crosses zero, or
/// std::nullopt when it never does (no dark counts, or no secure key even
/// at 0 dB).
std::optional<double> secure_cutoff_loss_db(const SystemParams& params);

double loss_to_distance_km(double loss_db, double attenuation_db_per_km);
double distance_to_loss_db(double length_km, double attenuation_db_per_km);

}  // namespace dpsqkd
