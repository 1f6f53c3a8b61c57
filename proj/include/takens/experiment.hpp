#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "takens/linsys.hpp"

namespace takens {

enum class ObservationMode { perturbed, exact, explicit_direction };

/// Knobs for a conditioning sweep over M. The system itself is passed
/// alongside; this struct carries only the protocol.
struct SweepConfig {
  ObservationMode obs_mode = ObservationMode::perturbed;
  double perturb_variance = 0.1;
  std::vector<double> explicit_direction;  // explicit_direction mode only
  int M_start = 1;
  int M_stop = 200;
  int M_step = 1;
  int trials = 1000;
  double t_max = 10000.0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<cplx> alpha0;  // empty = all-ones
};

/// One sweep row: observed distance-ratio extremes against the closed-form
/// sandwich at this M.
struct SweepRecord {
  int M = 0;
  double minQ = 0.0;
  double maxQ = 0.0;
  double C = 0.0;
  double delta0 = 0.0;
  double deltaM = 0.0;   // delta0 + delta1(M)
  double lower = 0.0;    // C * (1 - deltaM)
  double upper = 0.0;    // C * (1 + deltaM)
  double empirical_delta = 0.0;  // max(maxQ/C - 1, 1 - minQ/C)
  bool conditions_ok = false;    // stable-embedding hypotheses hold at this M
};

/// Observation from a randomly weighted mix of the mode vectors' real and
/// imaginary parts, normalized to ||h||^2 = 2d/M. The direction depends on
/// (seed, variance) only, so one sweep reuses a single direction across M.
[[nodiscard]] std::vector<double> gen_observation_perturbed(const ClassASystem& sys,
                                                            double variance, std::uint64_t seed,
                                                            int M);

/// Observation proportional to V * (1,...,1), normalized to ||h||^2 = 2d/M.
/// With canonical mode vectors this equalizes every projection.
[[nodiscard]] std::vector<double> gen_observation_exact(const ClassASystem& sys, int M);

/// Two attractor points at independent uniform times in (0, t_max).
/// Near-coincident draws (relative tol::kResample) are retried up to a
/// bounded number of times.
[[nodiscard]] std::pair<SpectralCoords, SpectralCoords> sample_pair(const ClassASystem& sys,
                                                                    const SpectralCoords& alpha0,
                                                                    double t_max,
                                                                    std::uint64_t trial_seed);

/// Full sweep: for each M in the range, rebuild the normalized observation
/// and frame, run the trials, and record min/max Q against the closed-form
/// bounds. Per-(M, trial) RNG keys make the result independent of thread
/// count and schedule.
[[nodiscard]] std::vector<SweepRecord> conditioning_sweep(const ClassASystem& sys,
                                                          const SweepConfig& cfg);

/// Smallest M in the sweep from which every record (that one included)
/// keeps max(maxQ/C - 1, 1 - minQ/C) strictly below delta0 + eps; nullopt
/// if the tail never settles. Records must be sorted by M.
[[nodiscard]] std::optional<int> actual_required_measurements(std::span<const SweepRecord> records,
                                                              double C, double delta0, double eps);

struct DemoRow {
  double eps = 0.0;
  int M = 0;
  double Q = 0.0;
};

/// Worked single-mode example of conditioning collapse: a circle attractor
/// observed through h = sqrt(2/M) * [sqrt(eps), sqrt(1-eps)], with the pair
/// fixed at alpha and its antipode -alpha. Returns Q for every (eps, M)
/// grid combination.
[[nodiscard]] std::vector<DemoRow> motivating_demo(double theta, std::span<const double> eps_grid,
                                                   std::span<const int> M_grid);

}  // namespace takens
