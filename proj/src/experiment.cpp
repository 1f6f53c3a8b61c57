#include "takens/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "takens/bounds.hpp"
#include "takens/delay_embedding.hpp"
#include "takens/errors.hpp"
#include "takens/rng.hpp"
#include "takens/tolerances.hpp"

namespace takens {

namespace {

constexpr int kMaxResampleAttempts = 100;

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

std::vector<double> mode_mix_direction(const ClassASystem& sys, std::span<const double> weights) {
  // c = sum_i (1 + w_{2i}) Re v_i + (1 + w_{2i+1}) Im v_i
  std::vector<double> c(static_cast<std::size_t>(sys.N()), 0.0);
  for (int i = 0; i < sys.d(); ++i) {
    const auto& v = sys.eigvec(i);
    const double wr = 1.0 + weights[static_cast<std::size_t>(2 * i)];
    const double wi = 1.0 + weights[static_cast<std::size_t>(2 * i + 1)];
    for (int r = 0; r < sys.N(); ++r) {
      c[static_cast<std::size_t>(r)] += wr * v[static_cast<std::size_t>(r)].real() +
                                        wi * v[static_cast<std::size_t>(r)].imag();
    }
  }
  return c;
}

struct Extremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<double> gen_observation_perturbed(const ClassASystem& sys, double variance,
                                              std::uint64_t seed, int M) {
  if (variance < 0.0)
    throw std::invalid_argument("gen_observation_perturbed: variance must be >= 0");
  rng::Stream stream(rng::derive_key(seed, "observation/perturbed"));
  std::vector<double> w(static_cast<std::size_t>(2 * sys.d()));
  const double stddev = std::sqrt(variance);
  for (double& x : w) x = stream.gaussian(0.0, stddev);

  const std::vector<double> c = mode_mix_direction(sys, w);
  double cn = 0.0;
  for (double x : c) cn += x * x;
  if (std::sqrt(cn) < 1e-14)
    throw std::runtime_error("gen_observation_perturbed: degenerate direction draw");
  return normalize_observation(c, sys.d(), M);
}

std::vector<double> gen_observation_exact(const ClassASystem& sys, int M) {
  const std::vector<double> w(static_cast<std::size_t>(2 * sys.d()), 0.0);
  return normalize_observation(mode_mix_direction(sys, w), sys.d(), M);
}

std::pair<SpectralCoords, SpectralCoords> sample_pair(const ClassASystem& sys,
                                                      const SpectralCoords& alpha0, double t_max,
                                                      std::uint64_t trial_seed) {
  if (!(t_max > 0.0)) throw std::invalid_argument("sample_pair: t_max must be positive");
  check_conjugate_symmetry(alpha0);
  const double base = norm2(alpha0.alpha);

  rng::Stream stream(trial_seed);
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    const double t_x = stream.uniform(0.0, t_max);
    const double t_y = stream.uniform(0.0, t_max);
    SpectralCoords ax = evolve(sys, alpha0, t_x);
    SpectralCoords ay = evolve(sys, alpha0, t_y);
    double sep = 0.0;
    for (std::size_t i = 0; i < ax.alpha.size(); ++i) sep += std::norm(ax.alpha[i] - ay.alpha[i]);
    if (std::sqrt(sep) > tol::kResample * base) return {std::move(ax), std::move(ay)};
  }
  throw std::runtime_error("sample_pair: exhausted resampling attempts on coincident draws");
}

std::vector<SweepRecord> conditioning_sweep(const ClassASystem& sys, const SweepConfig& cfg) {
  if (cfg.M_start < 1 || cfg.M_stop < cfg.M_start || cfg.M_step < 1)
    throw std::invalid_argument("conditioning_sweep: bad M range");
  if (cfg.trials < 2) throw std::invalid_argument("conditioning_sweep: trials must be >= 2");
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("conditioning_sweep: t_max must be positive");
  if (cfg.threads < 1) throw std::invalid_argument("conditioning_sweep: threads must be >= 1");
  if (cfg.obs_mode == ObservationMode::explicit_direction && cfg.explicit_direction.empty())
    throw std::invalid_argument("conditioning_sweep: explicit observation mode needs a direction");

  const SpectralCoords alpha0 =
      cfg.alpha0.empty() ? default_alpha0(sys.d()) : SpectralCoords{cfg.alpha0};
  check_conjugate_symmetry(alpha0);

  std::vector<SweepRecord> records;
  for (int M = cfg.M_start; M <= cfg.M_stop; M += cfg.M_step) {
    std::vector<double> h;
    switch (cfg.obs_mode) {
      case ObservationMode::perturbed:
        h = gen_observation_perturbed(sys, cfg.perturb_variance, cfg.seed, M);
        break;
      case ObservationMode::exact:
        h = gen_observation_exact(sys, M);
        break;
      case ObservationMode::explicit_direction:
        h = normalize_observation(cfg.explicit_direction, sys.d(), M);
        break;
    }

    const ConditioningBounds cb = conditioning_bounds(sys, h);
    const FrameMatrix fm = build_frame(sys, h, M);

    const int workers = std::min(cfg.threads, cfg.trials);
    std::vector<Extremes> partial(static_cast<std::size_t>(workers));
    auto run_range = [&](int begin, int end, Extremes& out) {
      for (int trial = begin; trial < end; ++trial) {
        const std::uint64_t key = rng::derive_key(cfg.seed, "sweep/pair",
                                                  static_cast<std::uint64_t>(M),
                                                  static_cast<std::uint64_t>(trial));
        const auto [ax, ay] = sample_pair(sys, alpha0, cfg.t_max, key);
        const double q = distance_ratio_Q(fm, ax, ay);
        out.lo = std::min(out.lo, q);
        out.hi = std::max(out.hi, q);
      }
    };

    if (workers == 1) {
      run_range(0, cfg.trials, partial[0]);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(cfg.trials) * w / workers);
        const int end = static_cast<int>(static_cast<long long>(cfg.trials) * (w + 1) / workers);
        pool.emplace_back(run_range, begin, end, std::ref(partial[static_cast<std::size_t>(w)]));
      }
      for (auto& t : pool) t.join();
    }

    Extremes total;
    for (const Extremes& e : partial) {
      total.lo = std::min(total.lo, e.lo);
      total.hi = std::max(total.hi, e.hi);
    }

    SweepRecord rec;
    rec.M = M;
    rec.minQ = total.lo;
    rec.maxQ = total.hi;
    rec.C = cb.C;
    rec.delta0 = cb.delta0;
    rec.deltaM = delta_of_M(cb, sys.d(), M).second;
    rec.lower = cb.C * (1.0 - rec.deltaM);
    rec.upper = cb.C * (1.0 + rec.deltaM);
    rec.empirical_delta = std::max(rec.maxQ / cb.C - 1.0, 1.0 - rec.minQ / cb.C);
    rec.conditions_ok = check_conditions(sys, h, M).embedding_ok;
    records.push_back(rec);
  }
  return records;
}

std::optional<int> actual_required_measurements(std::span<const SweepRecord> records, double C,
                                                double delta0, double eps) {
  if (records.empty())
    throw std::invalid_argument("actual_required_measurements: no records");
  if (!(eps > 0.0)) throw std::invalid_argument("actual_required_measurements: eps must be positive");
  if (!(C > 0.0)) throw std::invalid_argument("actual_required_measurements: C must be positive");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].M <= records[i - 1].M)
      throw std::invalid_argument("actual_required_measurements: records must be sorted by M");

  const double budget = delta0 + eps;
  std::optional<int> candidate;
  for (std::size_t idx = records.size(); idx-- > 0;) {
    const SweepRecord& r = records[idx];
    const double dev = std::max(r.maxQ / C - 1.0, 1.0 - r.minQ / C);
    if (dev < budget)
      candidate = r.M;
    else
      break;  // everything below this M is disqualified by this record
  }
  return candidate;
}

std::vector<DemoRow> motivating_demo(double theta, std::span<const double> eps_grid,
                                     std::span<const int> M_grid) {
  if (!(theta > 0.0)) throw std::invalid_argument("motivating_demo: theta must be positive");
  if (eps_grid.empty() || M_grid.empty())
    throw std::invalid_argument("motivating_demo: grids must be nonempty");
  for (double eps : eps_grid)
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("motivating_demo: eps must lie in (0, 1)");
  for (int M : M_grid)
    if (M < 1) throw std::invalid_argument("motivating_demo: M must be >= 1");

  const ClassASystem sys = build_system({theta}, make_canonical_eigvecs(1, 2), 1.0);
  const SpectralCoords ax = default_alpha0(1);
  // Antipodal partner: t_y = t_x + pi/theta, i.e. alpha_y = -alpha_x exactly.
  SpectralCoords ay = ax;
  for (cplx& z : ay.alpha) z = -z;

  std::vector<DemoRow> rows;
  rows.reserve(eps_grid.size() * M_grid.size());
  for (double eps : eps_grid) {
    for (int M : M_grid) {
      const double scale = std::sqrt(2.0 / static_cast<double>(M));
      const std::vector<double> h = {scale * std::sqrt(eps), scale * std::sqrt(1.0 - eps)};
      const FrameMatrix fm = build_frame(sys, h, M);
      rows.push_back(DemoRow{eps, M, distance_ratio_Q(fm, ax, ay)});
    }
  }
  return rows;
}

}  // namespace takens
