#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "etsmc/errors.hpp"
#include "etsmc/event_trigger.hpp"

using namespace etsmc;

TEST_CASE("event error") {
  ErrorMatrix a = ErrorMatrix::Random();
  CHECK(event_error(a, a) == 0.0);

  ErrorMatrix b = a;
  b(1, 2) += 0.3;
  CHECK(event_error(a, b) == doctest::Approx(0.3).epsilon(1e-12));

  SUBCASE("Frobenius over all eight entries") {
    ErrorMatrix c = a;
    c.array() += 0.1;
    CHECK(event_error(a, c) == doctest::Approx(std::sqrt(8 * 0.01)).epsilon(1e-12));
  }

  SUBCASE("triangle inequality and symmetry on random triples") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1.0);
    auto draw = [&] {
      ErrorMatrix m;
      for (int i = 0; i < 8; ++i) m(i % 2, i / 2) = n(rng);
      return m;
    };
    for (int i = 0; i < 1000; ++i) {
      const ErrorMatrix x = draw(), y = draw(), z = draw();
      REQUIRE(event_error(x, z) <= event_error(x, y) + event_error(y, z) + 1e-12);
      REQUIRE(event_error(x, y) == event_error(y, x));
    }
  }

  SUBCASE("shape and finiteness") {
    const Eigen::MatrixXd z24 = Eigen::MatrixXd::Zero(2, 4), z23 = Eigen::MatrixXd::Zero(2, 3);
    CHECK_THROWS_AS(event_error(z24, z23), InvalidState);
    Eigen::MatrixXd bad = z24;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(event_error(bad, z24), InvalidState);
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 4);
    CHECK(event_error(ones, z24) == doctest::Approx(std::sqrt(8.0)));
  }
}

TEST_CASE("trigger threshold") {
  TriggerParams tp;
  // 0.3 / (0.85 * sqrt(901)) = 0.3 / 25.5145... = 0.0117580
  CHECK(std::abs(threshold(tp) - 0.011758) < 1e-6);

  TriggerParams unit;
  unit.c = 0.0;
  unit.eta = 1.0;
  unit.L_const = 1.0;
  CHECK(threshold(unit) == 1.0);

  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i) {
    tp.c = 0.5 * i;
    const double th = threshold(tp);
    REQUIRE(th < prev);
    REQUIRE(th > 0.0);
    prev = th;
  }
}

TEST_CASE("trigger rule") {
  const TriggerParams tp;
  CHECK_FALSE(should_trigger(0.0, 0.01, tp));
  CHECK(should_trigger(0.012, 0.0, tp));
  CHECK(should_trigger(0.0, 0.25, tp));
  CHECK(should_trigger(threshold(tp), 0.0, tp));
  CHECK_FALSE(should_trigger(0.0, 0.2, tp));
  CHECK_FALSE(should_trigger(std::nextafter(threshold(tp), 0.0), 0.2, tp));
}

TEST_CASE("Zeno diagnostic") {
  TriggerParams tp;
  const ZenoBound z = zeno_bound(tp);
  CHECK(z.seconds == doctest::Approx(std::log(0.2 + 1.0 + 0.5 + 0.3 / (0.85 * std::sqrt(901.0)))).epsilon(1e-14));
  CHECK_FALSE(z.nonpositive);

  TriggerParams e_arg = tp;
  e_arg.error_radius = std::exp(1.0) - 1.0 - 0.5 - threshold(tp);
  CHECK(zeno_bound(e_arg).seconds == doctest::Approx(1.0).epsilon(1e-14));

  TriggerParams fast = tp;
  fast.lambda_est = 4.0;
  CHECK(zeno_bound(fast).seconds == doctest::Approx(z.seconds / 4.0).epsilon(1e-14));

  TriggerParams small = tp;
  small.h_bound = 0.1;
  small.d0_bound = 0.1;
  const ZenoBound neg = zeno_bound(small);
  CHECK(neg.nonpositive);
  CHECK(neg.seconds <= 0.0);
}

TEST_CASE("trigger statistics") {
  SUBCASE("differencing of trigger times") {
    TriggerStats s;
    for (int k = 0; k <= 30; ++k) {
      const double t = 0.01 * k;
      s = record_step(s, t, k == 0 || k == 5 || k == 30);
    }
    CHECK(s.trigger_count == 3);
    CHECK(s.sample_count == 31);
    REQUIRE(s.inter_event_times.size() == 2);
    CHECK(s.inter_event_times[0] == doctest::Approx(0.05));
    CHECK(s.inter_event_times[1] == doctest::Approx(0.25));
    CHECK(s.min_inter_event() == doctest::Approx(0.05));
    CHECK(s.max_inter_event() == doctest::Approx(0.25));
    CHECK(s.mean_inter_event() == doctest::Approx(0.15));
  }
  SUBCASE("no triggers") {
    TriggerStats s;
    for (int k = 0; k < 10; ++k) record_step_inplace(s, 0.01 * k, false);
    CHECK(s.trigger_count == 0);
    CHECK(s.inter_event_times.empty());
    CHECK(s.sample_count == 10);
  }
  SUBCASE("count bookkeeping at band scale") {
    TriggerStats s;
    std::mt19937_64 rng(305);
    std::vector<int> flags(1000, 0);
    for (int i = 0; i < 305; ++i) flags[i] = 1;
    std::shuffle(flags.begin(), flags.end(), rng);
    for (int k = 0; k < 1000; ++k) record_step_inplace(s, 0.01 * k, flags[k] != 0);
    CHECK(s.trigger_count == 305);
    CHECK(s.sample_count == 1000);
    CHECK(s.inter_event_times.size() == 304);
    for (double dt : s.inter_event_times) REQUIRE(dt >= 0.01 - 1e-12);
  }
  SUBCASE("time regression") {
    TriggerStats s;
    record_step_inplace(s, 0.5, false);
    CHECK_THROWS_AS(record_step_inplace(s, 0.4, false), InvalidState);
    CHECK_THROWS_AS(record_step(s, 0.2, true), InvalidState);
  }
}

TEST_CASE("trigger parameter validation") {
  TriggerParams tp;
  CHECK_NOTHROW(tp.validate());
  tp.eta = 0.0;
  CHECK_THROWS_AS(tp.validate(), ConfigError);
  tp = TriggerParams{};
  tp.error_radius = -1.0;
  CHECK_THROWS_AS(tp.validate(), ConfigError);
}
