#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "doctest.h"
#include "takens/bounds.hpp"
#include "takens/delay_embedding.hpp"
#include "takens/errors.hpp"
#include "takens/experiment.hpp"
#include "takens/linsys.hpp"

using takens::ClassASystem;
using takens::cplx;
using takens::ObservationMode;
using takens::SpectralCoords;
using takens::SweepConfig;
using takens::SweepRecord;

namespace {

ClassASystem two_mode_system(int n = 6) {
  return takens::build_system({0.5, 1.3}, takens::make_canonical_eigvecs(2, n), 1.0);
}

double norm_sq(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

// Single-mode ratio for the antipodal demo pair, derived by summing the
// squared cosine phases of the delayed samples in closed form.
double demo_closed_form(double theta, double eps, int m) {
  const double psi = std::atan2(std::sqrt(1.0 - eps), std::sqrt(eps));
  const double md = static_cast<double>(m);
  return 1.0 + std::cos(2.0 * psi - (md - 1.0) * theta) * std::sin(md * theta) /
                   (md * std::sin(theta));
}

}  // namespace

TEST_CASE("perturbed observations are reproducible and correctly scaled") {
  const ClassASystem sys = two_mode_system();
  const auto h1 = takens::gen_observation_perturbed(sys, 0.1, 7, 25);
  const auto h2 = takens::gen_observation_perturbed(sys, 0.1, 7, 25);
  REQUIRE(h1.size() == 6);
  for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h1[i] == h2[i]);
  CHECK(norm_sq(h1) == doctest::Approx(4.0 / 25.0).epsilon(1e-13));

  const auto h3 = takens::gen_observation_perturbed(sys, 0.1, 8, 25);
  bool any_diff = false;
  for (std::size_t i = 0; i < h1.size(); ++i) any_diff = any_diff || h1[i] != h3[i];
  CHECK(any_diff);

  CHECK_THROWS_AS((void)takens::gen_observation_perturbed(sys, -0.1, 7, 25),
                  std::invalid_argument);
}

TEST_CASE("the perturbed direction does not depend on M") {
  const ClassASystem sys = two_mode_system();
  const auto h25 = takens::gen_observation_perturbed(sys, 0.2, 5, 25);
  const auto h100 = takens::gen_observation_perturbed(sys, 0.2, 5, 100);
  // Only the 2d/M scale changes: sqrt(100/25) = 2 exactly.
  for (std::size_t i = 0; i < h25.size(); ++i)
    CHECK(h25[i] == doctest::Approx(2.0 * h100[i]).epsilon(1e-13));
}

TEST_CASE("zero perturbation variance reproduces the exact observation") {
  const ClassASystem sys = two_mode_system();
  const auto hp = takens::gen_observation_perturbed(sys, 0.0, 99, 10);
  const auto he = takens::gen_observation_exact(sys, 10);
  REQUIRE(hp.size() == he.size());
  for (std::size_t i = 0; i < hp.size(); ++i) CHECK(hp[i] == he[i]);
}

TEST_CASE("exact observations equalize canonical projections") {
  const ClassASystem sys = two_mode_system();
  const auto h = takens::gen_observation_exact(sys, 12);
  CHECK(norm_sq(h) == doctest::Approx(4.0 / 12.0).epsilon(1e-13));
  const auto [k1, k2] = takens::kappa_extrema(sys, h);
  CHECK(k1 == doctest::Approx(k2).epsilon(1e-12));
}

TEST_CASE("sample_pair is deterministic per trial seed and separates the draw") {
  const ClassASystem sys = two_mode_system();
  const SpectralCoords a0 = takens::default_alpha0(2);

  const auto [x1, y1] = takens::sample_pair(sys, a0, 100.0, 42);
  const auto [x2, y2] = takens::sample_pair(sys, a0, 100.0, 42);
  for (std::size_t i = 0; i < x1.alpha.size(); ++i) {
    CHECK(x1.alpha[i] == x2.alpha[i]);
    CHECK(y1.alpha[i] == y2.alpha[i]);
  }

  double sep = 0.0;
  for (std::size_t i = 0; i < x1.alpha.size(); ++i) sep += std::norm(x1.alpha[i] - y1.alpha[i]);
  CHECK(sep > 0.0);

  const auto [x3, y3] = takens::sample_pair(sys, a0, 100.0, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < x1.alpha.size(); ++i)
    any_diff = any_diff || x1.alpha[i] != x3.alpha[i];
  CHECK(any_diff);

  CHECK_THROWS_AS((void)takens::sample_pair(sys, a0, 0.0, 1), std::invalid_argument);
  SpectralCoords bad{{cplx(1.0, 0.0), cplx(0.5, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0)}};
  CHECK_THROWS_AS((void)takens::sample_pair(sys, bad, 100.0, 1), takens::symmetry_error);
}

TEST_CASE("sweep covers the requested grid with consistent bookkeeping") {
  const ClassASystem sys = two_mode_system();
  SweepConfig cfg;
  cfg.obs_mode = ObservationMode::exact;
  cfg.M_start = 4;
  cfg.M_stop = 20;
  cfg.M_step = 8;
  cfg.trials = 40;
  cfg.t_max = 500.0;
  cfg.seed = 3;

  const auto records = takens::conditioning_sweep(sys, cfg);
  REQUIRE(records.size() == 3);
  const int expected_M[] = {4, 12, 20};
  for (std::size_t r = 0; r < records.size(); ++r) {
    const SweepRecord& rec = records[r];
    CHECK(rec.M == expected_M[r]);
    CHECK(rec.minQ <= rec.maxQ);

    const auto h = takens::gen_observation_exact(sys, rec.M);
    const auto cb = takens::conditioning_bounds(sys, h);
    CHECK(rec.C == doctest::Approx(cb.C).epsilon(1e-13));
    CHECK(rec.delta0 == doctest::Approx(cb.delta0).epsilon(1e-13));
    CHECK(rec.deltaM == doctest::Approx(takens::delta_of_M(cb, 2, rec.M).second).epsilon(1e-13));
    CHECK(rec.lower == doctest::Approx(cb.C * (1.0 - rec.deltaM)).epsilon(1e-13));
    CHECK(rec.upper == doctest::Approx(cb.C * (1.0 + rec.deltaM)).epsilon(1e-13));
    CHECK(rec.empirical_delta ==
          doctest::Approx(std::max(rec.maxQ / rec.C - 1.0, 1.0 - rec.minQ / rec.C)));
    CHECK(rec.conditions_ok == (rec.M >= cb.M_threshold));
  }
  // The grid straddles the threshold, so both truth values appear.
  CHECK_FALSE(records.front().conditions_ok);
  CHECK(records.back().conditions_ok);
}

TEST_CASE("sampled ratios respect the closed-form sandwich once conditions hold") {
  const ClassASystem sys = two_mode_system();
  SweepConfig cfg;
  cfg.obs_mode = ObservationMode::exact;
  cfg.M_start = 8;
  cfg.M_stop = 24;
  cfg.M_step = 8;
  cfg.trials = 60;
  cfg.t_max = 800.0;
  cfg.seed = 11;

  for (const SweepRecord& rec : takens::conditioning_sweep(sys, cfg)) {
    REQUIRE(rec.conditions_ok);
    CHECK(rec.minQ >= rec.lower - 1e-9);
    CHECK(rec.maxQ <= rec.upper + 1e-9);
    CHECK(rec.empirical_delta <= rec.deltaM + 1e-9);
  }
}

TEST_CASE("sweep output is independent of thread count") {
  const ClassASystem sys = two_mode_system();
  SweepConfig cfg;
  cfg.obs_mode = ObservationMode::perturbed;
  cfg.perturb_variance = 0.15;
  cfg.M_start = 4;
  cfg.M_stop = 12;
  cfg.M_step = 4;
  cfg.trials = 30;
  cfg.t_max = 300.0;
  cfg.seed = 21;

  cfg.threads = 1;
  const auto serial = takens::conditioning_sweep(sys, cfg);
  cfg.threads = 3;
  const auto threaded = takens::conditioning_sweep(sys, cfg);

  REQUIRE(serial.size() == threaded.size());
  for (std::size_t r = 0; r < serial.size(); ++r) {
    CHECK(serial[r].M == threaded[r].M);
    CHECK(serial[r].minQ == threaded[r].minQ);
    CHECK(serial[r].maxQ == threaded[r].maxQ);
    CHECK(serial[r].C == threaded[r].C);
    CHECK(serial[r].delta0 == threaded[r].delta0);
    CHECK(serial[r].deltaM == threaded[r].deltaM);
    CHECK(serial[r].lower == threaded[r].lower);
    CHECK(serial[r].upper == threaded[r].upper);
    CHECK(serial[r].empirical_delta == threaded[r].empirical_delta);
    CHECK(serial[r].conditions_ok == threaded[r].conditions_ok);
  }
}

TEST_CASE("sweep validates its configuration") {
  const ClassASystem sys = two_mode_system();
  SweepConfig cfg;
  cfg.obs_mode = ObservationMode::exact;
  cfg.M_start = 4;
  cfg.M_stop = 8;
  cfg.trials = 10;

  SweepConfig bad = cfg;
  bad.M_stop = 3;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
  bad = cfg;
  bad.M_step = 0;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
  bad = cfg;
  bad.trials = 1;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
  bad = cfg;
  bad.t_max = 0.0;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
  bad = cfg;
  bad.threads = 0;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
  bad = cfg;
  bad.obs_mode = ObservationMode::explicit_direction;
  CHECK_THROWS_AS((void)takens::conditioning_sweep(sys, bad), std::invalid_argument);
}

TEST_CASE("explicit directions are renormalized for every M") {
  const ClassASystem sys = two_mode_system();
  SweepConfig cfg;
  cfg.obs_mode = ObservationMode::explicit_direction;
  cfg.explicit_direction = {1.0, 0.2, 0.8, -0.3, 0.0, 0.0};
  cfg.M_start = 16;
  cfg.M_stop = 32;
  cfg.M_step = 16;
  cfg.trials = 10;
  cfg.t_max = 100.0;

  // conditions_ok requires ||h||^2 = 2d/M exactly, which a single fixed
  // vector cannot satisfy at two different M; both records passing proves
  // the direction was rescaled per M.
  const auto records = takens::conditioning_sweep(sys, cfg);
  REQUIRE(records.size() == 2);
  CHECK(records[0].conditions_ok);
  CHECK(records[1].conditions_ok);
}

TEST_CASE("the settling scan takes the longest qualifying suffix") {
  auto rec = [](int m, double lo, double hi) {
    SweepRecord r;
    r.M = m;
    r.minQ = lo;
    r.maxQ = hi;
    return r;
  };
  const std::vector<SweepRecord> records = {
      rec(10, 0.5, 1.5),    // deviation 0.5
      rec(20, 0.8, 1.2),    // deviation 0.2
      rec(30, 0.95, 1.05),  // deviation 0.05
      rec(40, 0.92, 1.08),  // deviation 0.08
  };

  CHECK(takens::actual_required_measurements(records, 1.0, 0.0, 0.1) == 30);
  CHECK(takens::actual_required_measurements(records, 1.0, 0.0, 0.3) == 20);
  CHECK(takens::actual_required_measurements(records, 1.0, 0.0, 0.6) == 10);
  // The last record already misses the budget: nothing qualifies.
  CHECK_FALSE(takens::actual_required_measurements(records, 1.0, 0.0, 0.06).has_value());
  // An early miss disqualifies everything at or below it even if earlier
  // records were fine.
  CHECK(takens::actual_required_measurements(records, 1.0, 0.0, 0.09) == 30);

  const std::vector<SweepRecord> single = {rec(7, 0.9, 1.1)};
  CHECK(takens::actual_required_measurements(single, 1.0, 0.0, 0.2) == 7);
  CHECK_FALSE(takens::actual_required_measurements(single, 1.0, 0.0, 0.05).has_value());

  CHECK_THROWS_AS(
      (void)takens::actual_required_measurements(std::vector<SweepRecord>{}, 1.0, 0.0, 0.1),
      std::invalid_argument);
  const std::vector<SweepRecord> unsorted = {rec(20, 0.9, 1.1), rec(20, 0.9, 1.1)};
  CHECK_THROWS_AS((void)takens::actual_required_measurements(unsorted, 1.0, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)takens::actual_required_measurements(single, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)takens::actual_required_measurements(single, 0.0, 0.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("demo rows follow the closed-form single-mode ratio") {
  const std::vector<double> eps_grid = {0.001, 0.1, 0.5};
  const std::vector<int> m_grid = {3, 40, 400};
  for (double theta : {0.03, 0.8}) {
    const auto rows = takens::motivating_demo(theta, eps_grid, m_grid);
    REQUIRE(rows.size() == 9);
    std::size_t idx = 0;
    for (double eps : eps_grid) {
      for (int m : m_grid) {
        CHECK(rows[idx].eps == eps);
        CHECK(rows[idx].M == m);
        CHECK(rows[idx].Q == doctest::Approx(demo_closed_form(theta, eps, m)).epsilon(1e-10));
        ++idx;
      }
    }
  }
}

TEST_CASE("demo reference points: collapse at small eps, recovery at large M") {
  const auto rows = takens::motivating_demo(0.03, std::vector<double>{0.001, 0.1},
                                            std::vector<int>{3, 400});
  REQUIRE(rows.size() == 4);
  const double q_small_eps = rows[0].Q;   // eps 0.001, M 3
  const double q_short = rows[2].Q;       // eps 0.1,   M 3
  const double q_long = rows[3].Q;        // eps 0.1,   M 400
  CHECK(q_small_eps == doctest::Approx(0.0087770).epsilon(1e-4));
  CHECK(q_short == doctest::Approx(0.2383328).epsilon(1e-5));
  CHECK(q_long == doctest::Approx(1.0446715).epsilon(1e-5));
  CHECK(q_short / q_small_eps > 10.0);
  CHECK(std::fabs(q_long - 1.0) < 0.05);

  CHECK(takens::motivating_demo(0.03, std::vector<double>{0.1}, std::vector<int>{400}).size() == 1);
  CHECK_THROWS_AS((void)takens::motivating_demo(0.0, std::vector<double>{0.1}, std::vector<int>{3}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)takens::motivating_demo(0.03, std::vector<double>{}, std::vector<int>{3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)takens::motivating_demo(0.03, std::vector<double>{1.0}, std::vector<int>{3}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)takens::motivating_demo(0.03, std::vector<double>{0.1}, std::vector<int>{0}),
      std::invalid_argument);
}
