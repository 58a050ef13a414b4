#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "dpsqkd/model.hpp"

using namespace dpsqkd;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("click probability at the 72 dB reference point") {
  const SystemParams p = preset_dcr001();  // sum composition by default
  const auto cp = click_probability(p, ChannelSpec::from_loss(72.0));
  CHECK(cp.p_signal == doctest::Approx(2.985803779151227e-10).epsilon(1e-12));
  CHECK(cp.p_dark == doctest::Approx(2e-12).epsilon(1e-12));
  CHECK(cp.p_click == doctest::Approx(3.005803779151227e-10).epsilon(1e-12));
}

TEST_CASE("click probability limits") {
  SystemParams p = preset_dcr004();

  SUBCASE("mu = 0 leaves only dark counts") {
    p.mu = 0.0;
    const auto cp = click_probability(p, ChannelSpec::from_loss(37.0));
    CHECK(cp.p_signal == 0.0);
    CHECK(cp.p_click == cp.p_dark);
    CHECK(cp.p_dark == doctest::Approx(8e-12).epsilon(1e-12));
  }
  SUBCASE("infinite loss leaves only dark counts") {
    const auto cp = click_probability(p, ChannelSpec::from_loss(kInf));
    CHECK(cp.p_signal == 0.0);
    CHECK(cp.p_click == cp.p_dark);
  }
  SUBCASE("efficiency composition: sum doubles mean") {
    SystemParams sum = p, mean = p;
    sum.eta_composition = EtaComposition::kSum;
    mean.eta_composition = EtaComposition::kMean;
    const auto a = click_probability(sum, ChannelSpec::from_loss(50.0));
    const auto b = click_probability(mean, ChannelSpec::from_loss(50.0));
    CHECK(a.p_signal == doctest::Approx(2.0 * b.p_signal).epsilon(1e-12));
    // sum_halved is arithmetically the mean
    SystemParams halved = p;
    halved.eta_composition = EtaComposition::kSumHalved;
    const auto c = click_probability(halved, ChannelSpec::from_loss(50.0));
    CHECK(c.p_signal == b.p_signal);
  }
}

TEST_CASE("sifted rate: frozen value and dead-time behavior") {
  SystemParams p = preset_dcr001();
  CHECK(sifted_rate(1e-3, p) == doctest::Approx(980198.6733067553).epsilon(1e-12));
  SUBCASE("zero dead time is exactly linear in p") {
    p.dead_time_s = 0.0;
    CHECK(sifted_rate(1e-3, p) == doctest::Approx(1e6).epsilon(1e-15));
  }
  SUBCASE("dead time only reduces the rate") {
    SystemParams no_dead = p;
    no_dead.dead_time_s = 0.0;
    CHECK(sifted_rate(0.01, p) < sifted_rate(0.01, no_dead));
  }
  CHECK_THROWS_AS((void)sifted_rate(-0.1, p), std::invalid_argument);
  CHECK_THROWS_AS((void)sifted_rate(1.1, p), std::invalid_argument);
}

TEST_CASE("sifted rate is log-linear in loss when dead time is off") {
  // pure signal regime: no dark counts, no dead time
  SystemParams p = preset_dcr004();
  p.dead_time_s = 0.0;
  p.detector1.dcr_cps = 0.0;
  p.detector2.dcr_cps = 0.0;
  const auto rate_at = [&](double loss) {
    const auto cp = click_probability(p, ChannelSpec::from_loss(loss));
    return sifted_rate(cp.p_click, p);
  };
  const double r40 = rate_at(40.0), r80 = rate_at(80.0);
  const double slope = (std::log10(r80) - std::log10(r40)) / (80.0 - 40.0);
  for (double loss = 40.0; loss <= 80.0; loss += 1.0) {
    const double predicted = std::log10(r40) + slope * (loss - 40.0);
    CHECK(std::abs(std::log10(rate_at(loss)) - predicted) < 1e-9);
  }
  CHECK(slope == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("analytic qber: frozen values and limits") {
  const SystemParams p = preset_dcr001();
  SUBCASE("72 dB reference point") {
    const auto cp = click_probability(p, ChannelSpec::from_loss(72.0));
    CHECK(qber_analytic(cp.p_signal, cp.p_dark, p) ==
          doctest::Approx(0.0132603592).epsilon(1e-8));
  }
  SUBCASE("dark-only clicks are random: qber one half") {
    CHECK(qber_analytic(0.0, 1e-9, p) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("signal-only clicks sit at the baseline error") {
    CHECK(qber_analytic(1e-6, 0.0, p) == doctest::Approx(0.01).epsilon(1e-15));
  }
  SUBCASE("no clicks: undefined") {
    CHECK_THROWS_AS((void)qber_analytic(0.0, 0.0, p), std::domain_error);
  }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.03) == doctest::Approx(0.1943918578).epsilon(1e-9));
  CHECK(binary_entropy(0.0264) == doctest::Approx(0.1760035172).epsilon(1e-9));
}

TEST_CASE("secure fraction: frozen bracket values") {
  const SystemParams p = preset_dcr001();  // mu 0.2, ec inefficiency 1.2
  CHECK(secure_fraction(0.0102, p) == doctest::Approx(0.4045629327).epsilon(1e-8));
  CHECK(secure_fraction(0.0264, p) == doctest::Approx(0.1681614453).epsilon(1e-8));
  CHECK(secure_fraction(0.0293, p) == doctest::Approx(0.1313051219).epsilon(1e-8));
  CHECK(secure_fraction(0.03, p) == doctest::Approx(0.1226118758).epsilon(1e-8));
  CHECK(secure_fraction_lenient(0.109, p) ==
        doctest::Approx(-0.5318321690).epsilon(1e-8));
  SUBCASE("error-free key with mu 0.2 keeps 60 percent") {
    CHECK(secure_fraction(0.0, p) == doctest::Approx(0.6).epsilon(1e-12));
  }
}

TEST_CASE("secure fraction domain") {
  const SystemParams p = preset_dcr001();
  // the log argument 0.5 + 6q - 19q^2 turns negative for qber > 0.3843
  CHECK_THROWS_AS((void)secure_fraction(0.40, p), std::domain_error);
  CHECK(secure_fraction_lenient(0.40, p) == -kInf);
  CHECK_THROWS_AS((void)secure_fraction(0.5, p), std::invalid_argument);
  CHECK_THROWS_AS((void)secure_fraction(-0.01, p), std::invalid_argument);
  CHECK(std::isfinite(secure_fraction_lenient(0.15, p)));
  CHECK(secure_fraction_lenient(0.15, p) < 0.0);
  CHECK(std::isfinite(secure_fraction_lenient(0.25, p)));
  CHECK(secure_fraction_lenient(0.25, p) < 0.0);
}

TEST_CASE("analytic point composes the chain consistently") {
  const SystemParams p = preset_dcr001();
  const AnalyticPoint pt = analytic_point(p, ChannelSpec::from_loss(72.0));
  CHECK(pt.sifted_rate_bps == doctest::Approx(0.3005803761).epsilon(1e-8));
  CHECK(pt.qber == doctest::Approx(0.0132603592).epsilon(1e-8));
  CHECK(pt.secure_fraction == doctest::Approx(secure_fraction(pt.qber, p)).epsilon(1e-12));
  CHECK(pt.secure_rate_bps ==
        doctest::Approx(pt.sifted_rate_bps * std::max(0.0, pt.secure_fraction))
            .epsilon(1e-12));
  CHECK(pt.secure_rate_bps > 0.0);
}

TEST_CASE("high-loss characterization of the DCR 0.01 preset") {
  // The analytic error rate stays below 4.1 % at 77.9 dB for every
  // efficiency composition; the crossing sits a little higher.
  SystemParams p = preset_dcr001();
  const auto qber_at = [&](double loss) {
    const auto cp = click_probability(p, ChannelSpec::from_loss(loss));
    return qber_analytic(cp.p_signal, cp.p_dark, p);
  };
  p.eta_composition = EtaComposition::kSum;
  CHECK(qber_at(72.0) == doctest::Approx(0.0132603592).epsilon(1e-8));
  CHECK(qber_at(77.9) == doctest::Approx(0.0224449226).epsilon(1e-8));
  p.eta_composition = EtaComposition::kMean;
  CHECK(qber_at(72.0) == doctest::Approx(0.0164776177).epsilon(1e-8));
  CHECK(qber_at(77.9) == doctest::Approx(0.0342733553).epsilon(1e-8));
}

TEST_CASE("maximum tolerable loss at the 4.1 percent threshold") {
  SystemParams p = preset_dcr001();
  SUBCASE("mean composition crosses between 72 and 80 dB") {
    p.eta_composition = EtaComposition::kMean;
    const double loss = max_tolerable_loss_db(p, 0.041);
    CHECK(loss == doctest::Approx(79.0255).epsilon(3e-4));
    CHECK(loss > 72.0);
    CHECK(loss <= 80.0);
  }
  SUBCASE("sum composition crosses higher") {
    p.eta_composition = EtaComposition::kSum;
    CHECK(max_tolerable_loss_db(p, 0.041) == doctest::Approx(82.0358).epsilon(3e-4));
  }
  SUBCASE("no dark counts: the error floor never rises") {
    p.detector1.dcr_cps = 0.0;
    p.detector2.dcr_cps = 0.0;
    CHECK(max_tolerable_loss_db(p, 0.041) == kInf);
  }
  SUBCASE("threshold below the baseline error: no crossing") {
    CHECK_THROWS_AS((void)max_tolerable_loss_db(p, 0.005), std::domain_error);
  }
  SUBCASE("threshold domain") {
    CHECK_THROWS_AS((void)max_tolerable_loss_db(p, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)max_tolerable_loss_db(p, 0.0), std::invalid_argument);
  }
}

TEST_CASE("secure-rate cutoff loss") {
  SystemParams p = preset_dcr001();
  SUBCASE("sum composition") {
    const auto cutoff = secure_cutoff_loss_db(p);
    REQUIRE(cutoff.has_value());
    CHECK(*cutoff == doctest::Approx(81.9707).epsilon(3e-4));
  }
  SUBCASE("mean composition") {
    p.eta_composition = EtaComposition::kMean;
    const auto cutoff = secure_cutoff_loss_db(p);
    REQUIRE(cutoff.has_value());
    CHECK(*cutoff == doctest::Approx(78.9604).epsilon(3e-4));
  }
  SUBCASE("no dark counts: no cutoff") {
    p.detector1.dcr_cps = 0.0;
    p.detector2.dcr_cps = 0.0;
    CHECK_FALSE(secure_cutoff_loss_db(p).has_value());
  }
}

TEST_CASE("loss / distance conversions") {
  CHECK(loss_to_distance_km(72.0, 0.164) == doctest::Approx(439.0243902).epsilon(1e-9));
  CHECK(std::llround(loss_to_distance_km(72.0, 0.164)) == 439);
  CHECK(distance_to_loss_db(306.0, 66.0 / 306.0) == doctest::Approx(66.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)loss_to_distance_km(10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)distance_to_loss_db(-1.0, 0.2), std::invalid_argument);
}

TEST_CASE("parameter validation names the offending field") {
  SystemParams p = preset_dcr001();
  p.mu = -0.1;
  CHECK_THROWS_WITH_AS(p.validate(), "system.mu must be nonnegative and finite",
                       std::invalid_argument);
  p = preset_dcr001();
  p.detector2.dcr_cps = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), "detector2.dcr must be nonnegative",
                       std::invalid_argument);
  p = preset_dcr001();
  p.ec_inefficiency = 0.9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  // mu = 0 is allowed (dark-floor studies)
  p = preset_dcr001();
  p.mu = 0.0;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("channel validation") {
  CHECK_NOTHROW(ChannelSpec::from_loss(0.0).validate());
  CHECK_THROWS_AS(ChannelSpec::from_loss(-1.0), std::invalid_argument);
  const ChannelSpec fiber = ChannelSpec::from_fiber(306.0, 66.0 / 306.0);
  CHECK(fiber.loss_db == doctest::Approx(66.0).epsilon(1e-12));
  ChannelSpec bad = fiber;
  bad.loss_db = 60.0;  // inconsistent with provenance
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ChannelSpec half;
  half.loss_db = 10.0;
  half.length_km = 50.0;  // attenuation missing
  CHECK_THROWS_AS(half.validate(), std::invalid_argument);
}

TEST_CASE("dead time in slots rounds up") {
  SystemParams p = preset_dcr001();
  CHECK(p.dead_slots() == 20);  // 20 ns at 1 GHz
  p.dead_time_s = 0.0;
  CHECK(p.dead_slots() == 0);
  p.dead_time_s = 20.5e-9;
  CHECK(p.dead_slots() == 21);
}
