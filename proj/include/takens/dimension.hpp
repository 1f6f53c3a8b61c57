#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "takens/linsys.hpp"

namespace takens {

/// A flat stretch of the local gradient, read off as the dimension estimate.
struct Plateau {
  double estimate = 0.0;
  double eps_low = 0.0;
  double eps_high = 0.0;
  double width_decades = 0.0;
};

/// Correlation-sum curve for one delay count M: C(eps) on a log grid, its
/// log-log gradient (NaN where C = 0 makes it undefined), and the plateau
/// found under the configured flatness rule, if any.
struct CorrelationProfile {
  int M = 0;
  int K = 0;
  std::vector<double> eps_grid;
  std::vector<double> corr_sum;
  std::vector<double> local_grad;
  std::optional<Plateau> plateau;
};

/// Knobs for dimension_experiment beyond the protocol arguments.
struct DimensionOptions {
  double plateau_tol = 0.15;
  double plateau_min_width_decades = 0.5;
  int theiler_window = 0;  // exclude pairs with |p - q| <= window; 0 = all pairs
  int threads = 1;
};

/// Delay vectors [s_k, s_{k-1}, ..., s_{k-M+1}] for every k with a full
/// window; K = length - M + 1 vectors. Throws if the series is shorter
/// than M.
[[nodiscard]] std::vector<std::vector<double>> reconstruct_delay_vectors(const TimeSeries& series,
                                                                         int M);

/// Fraction of unordered point pairs at strict distance < eps.
/// A pair exactly at eps does not count; coincident pairs do.
[[nodiscard]] double correlation_sum(const std::vector<std::vector<double>>& points, double eps);

/// correlation_sum evaluated over an ascending grid in one pass over the
/// pair distances. With a Theiler window, excluded pairs also leave the
/// normalizer (the included-pair count).
[[nodiscard]] std::vector<double> correlation_curve(const std::vector<std::vector<double>>& points,
                                                    std::span<const double> eps_grid,
                                                    int theiler_window = 0);

/// d log C / d log eps: central differences on interior grid points,
/// one-sided at the ends, restricted to points with C > 0 (a suffix of the
/// grid by monotonicity). Entries before that suffix are NaN. Throws if
/// fewer than 3 grid points have C > 0.
[[nodiscard]] std::vector<double> local_gradient(const CorrelationProfile& profile);

/// Widest contiguous log-eps window over which finite gradient values stay
/// within tol of each other and which spans at least min_width decades;
/// ties go to the smaller eps end. The estimate is the window mean.
[[nodiscard]] std::optional<Plateau> plateau_estimate(std::span<const double> grad,
                                                      std::span<const double> eps_grid, double tol,
                                                      double min_width_decades);

/// End-to-end protocol: one shared noisy series of length K + max(M) - 1,
/// then one profile per M (first K delay vectors each). An empty eps_grid
/// selects the default of 60 log-spaced points per profile spanning
/// [1e-3, 10] times that profile's median pairwise distance.
[[nodiscard]] std::vector<CorrelationProfile> dimension_experiment(
    const ClassASystem& sys, std::span<const double> h, const SpectralCoords& alpha0, int K,
    std::span<const int> M_list, double noise_sigma, std::span<const double> eps_grid,
    std::uint64_t seed, const DimensionOptions& opts = {});

}  // namespace takens
