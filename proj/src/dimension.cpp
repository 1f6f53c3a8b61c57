#include "takens/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "takens/errors.hpp"

namespace takens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pair_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

/// All included pair distances, flattened in (p, q > p + window) order.
/// Every value has a fixed slot, so parallel filling is race-free and the
/// content is independent of the partition.
std::vector<double> pair_distances(const std::vector<std::vector<double>>& points, int window,
                                   int threads) {
  const std::size_t k = points.size();
  std::vector<std::size_t> offset(k + 1, 0);
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t partner_count =
        (p + static_cast<std::size_t>(window) + 1 < k) ? k - p - static_cast<std::size_t>(window) - 1 : 0;
    offset[p + 1] = offset[p] + partner_count;
  }
  std::vector<double> dists(offset[k]);

  auto fill_rows = [&](std::size_t p_begin, std::size_t p_end) {
    for (std::size_t p = p_begin; p < p_end; ++p) {
      std::size_t slot = offset[p];
      for (std::size_t q = p + static_cast<std::size_t>(window) + 1; q < k; ++q)
        dists[slot++] = pair_distance(points[p], points[q]);
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(k)));
  if (workers == 1) {
    fill_rows(0, k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = k * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
      const std::size_t end = k * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
      pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return dists;
}

/// Fraction of distances strictly below each grid value, via one histogram
/// pass. Grid must be ascending.
std::vector<double> curve_from_distances(std::span<const double> dists,
                                         std::span<const double> grid) {
  std::vector<std::size_t> hist(grid.size() + 1, 0);
  for (double dist : dists) {
    // First grid entry strictly greater than dist: the pair counts for that
    // tolerance and every larger one.
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(grid.begin(), grid.end(), dist) - grid.begin());
    ++hist[idx];
  }
  std::vector<double> curve(grid.size());
  std::size_t running = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    running += hist[g];
    curve[g] = static_cast<double>(running) / static_cast<double>(dists.size());
  }
  return curve;
}

std::vector<double> default_grid(double median_distance) {
  constexpr int kPoints = 60;
  std::vector<double> grid(kPoints);
  for (int g = 0; g < kPoints; ++g) {
    const double exponent = -3.0 + 4.0 * static_cast<double>(g) / static_cast<double>(kPoints - 1);
    grid[static_cast<std::size_t>(g)] = median_distance * std::pow(10.0, exponent);
  }
  return grid;
}

}  // namespace

std::vector<std::vector<double>> reconstruct_delay_vectors(const TimeSeries& series, int M) {
  if (M < 1) throw std::invalid_argument("reconstruct_delay_vectors: M must be >= 1");
  const std::size_t len = series.samples.size();
  if (len < static_cast<std::size_t>(M))
    throw std::invalid_argument("reconstruct_delay_vectors: series shorter than M");
  const std::size_t k = len - static_cast<std::size_t>(M) + 1;
  std::vector<std::vector<double>> points(k, std::vector<double>(static_cast<std::size_t>(M)));
  for (std::size_t p = 0; p < k; ++p)
    for (int j = 0; j < M; ++j)
      points[p][static_cast<std::size_t>(j)] =
          series.samples[p + static_cast<std::size_t>(M) - 1 - static_cast<std::size_t>(j)];
  return points;
}

double correlation_sum(const std::vector<std::vector<double>>& points, double eps) {
  if (points.size() < 2) throw std::invalid_argument("correlation_sum: need at least 2 points");
  if (!(eps > 0.0)) throw std::invalid_argument("correlation_sum: eps must be positive");
  std::size_t inside = 0;
  std::size_t total = 0;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t q = p + 1; q < points.size(); ++q) {
      ++total;
      if (pair_distance(points[p], points[q]) < eps) ++inside;
    }
  return static_cast<double>(inside) / static_cast<double>(total);
}

std::vector<double> correlation_curve(const std::vector<std::vector<double>>& points,
                                      std::span<const double> eps_grid, int theiler_window) {
  if (points.size() < 2) throw std::invalid_argument("correlation_curve: need at least 2 points");
  if (theiler_window < 0) throw std::invalid_argument("correlation_curve: window must be >= 0");
  for (std::size_t g = 1; g < eps_grid.size(); ++g)
    if (!(eps_grid[g] > eps_grid[g - 1]))
      throw std::invalid_argument("correlation_curve: grid must be strictly ascending");
  const std::vector<double> dists = pair_distances(points, theiler_window, 1);
  if (dists.empty())
    throw std::invalid_argument("correlation_curve: window excludes every pair");
  return curve_from_distances(dists, eps_grid);
}

std::vector<double> local_gradient(const CorrelationProfile& profile) {
  const auto& grid = profile.eps_grid;
  const auto& c = profile.corr_sum;
  if (grid.size() != c.size())
    throw std::invalid_argument("local_gradient: grid and curve lengths differ");

  // C is nondecreasing, so the C > 0 region is a suffix.
  std::size_t first = 0;
  while (first < c.size() && !(c[first] > 0.0)) ++first;
  const std::size_t n = c.size() - first;
  if (n < 3) throw std::invalid_argument("local_gradient: need at least 3 grid points with C > 0");

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(grid[first + i]);
    y[i] = std::log(c[first + i]);
  }

  std::vector<double> grad(c.size(), kNaN);
  grad[first] = (y[1] - y[0]) / (x[1] - x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    grad[first + i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
  grad[first + n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  return grad;
}

std::optional<Plateau> plateau_estimate(std::span<const double> grad,
                                        std::span<const double> eps_grid, double tol,
                                        double min_width_decades) {
  if (grad.size() != eps_grid.size())
    throw std::invalid_argument("plateau_estimate: grid and gradient lengths differ");

  std::optional<Plateau> best;
  for (std::size_t a = 0; a < grad.size(); ++a) {
    if (std::isnan(grad[a])) continue;
    double lo = grad[a], hi = grad[a], sum = grad[a];
    for (std::size_t b = a + 1; b < grad.size(); ++b) {
      if (std::isnan(grad[b])) break;
      lo = std::min(lo, grad[b]);
      hi = std::max(hi, grad[b]);
      sum += grad[b];
      if (hi - lo > tol) break;
      const double width = std::log10(eps_grid[b] / eps_grid[a]);
      if (width < min_width_decades) continue;
      if (!best || width > best->width_decades) {
        best = Plateau{sum / static_cast<double>(b - a + 1), eps_grid[a], eps_grid[b], width};
      }
    }
  }
  return best;
}

std::vector<CorrelationProfile> dimension_experiment(const ClassASystem& sys,
                                                     std::span<const double> h,
                                                     const SpectralCoords& alpha0, int K,
                                                     std::span<const int> M_list,
                                                     double noise_sigma,
                                                     std::span<const double> eps_grid,
                                                     std::uint64_t seed,
                                                     const DimensionOptions& opts) {
  if (K < 2) throw std::invalid_argument("dimension_experiment: K must be >= 2");
  if (M_list.empty()) throw std::invalid_argument("dimension_experiment: M list is empty");
  int max_m = 0;
  for (int m : M_list) {
    if (m < 1) throw std::invalid_argument("dimension_experiment: M must be >= 1");
    max_m = std::max(max_m, m);
  }
  if (opts.threads < 1) throw std::invalid_argument("dimension_experiment: threads must be >= 1");
  for (std::size_t g = 1; g < eps_grid.size(); ++g)
    if (!(eps_grid[g] > eps_grid[g - 1]))
      throw std::invalid_argument("dimension_experiment: eps grid must be strictly ascending");

  const TimeSeries series = observe_series(sys, h, alpha0, K + max_m - 1, noise_sigma, seed);

  std::vector<CorrelationProfile> profiles;
  profiles.reserve(M_list.size());
  for (int m : M_list) {
    std::vector<std::vector<double>> points = reconstruct_delay_vectors(series, m);
    points.resize(static_cast<std::size_t>(K));  // same K for every M

    const std::vector<double> dists = pair_distances(points, opts.theiler_window, opts.threads);
    if (dists.empty())
      throw std::invalid_argument("dimension_experiment: Theiler window excludes every pair");

    CorrelationProfile profile;
    profile.M = m;
    profile.K = K;
    if (!eps_grid.empty()) {
      profile.eps_grid.assign(eps_grid.begin(), eps_grid.end());
    } else {
      // Lower median of the included distances anchors the default grid.
      std::vector<double> scratch(dists);
      const std::size_t mid = (scratch.size() - 1) / 2;
      std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid),
                       scratch.end());
      profile.eps_grid = default_grid(scratch[mid]);
    }
    profile.corr_sum = curve_from_distances(dists, profile.eps_grid);

    std::size_t nonzero = 0;
    for (double c : profile.corr_sum)
      if (c > 0.0) ++nonzero;
    if (nonzero >= 3) {
      profile.local_grad = local_gradient(profile);
      profile.plateau = plateau_estimate(profile.local_grad, profile.eps_grid, opts.plateau_tol,
                                         opts.plateau_min_width_decades);
    } else {
      profile.local_grad.assign(profile.eps_grid.size(), kNaN);
      profile.plateau = std::nullopt;
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace takens
