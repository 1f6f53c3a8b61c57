#include "takens/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "takens/errors.hpp"
#include "takens/hermitian_eig.hpp"
#include "takens/tolerances.hpp"

namespace takens {

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// 1/|sin(x)| with the degeneracy guard shared by nu and the disk radii.
double reciprocal_sine(double x, const std::string& what) {
  const double s = std::abs(std::sin(x));
  if (s < tol::kDegenerateSine)
    throw degenerate_angle_error("degenerate angle: |sin| ~ 0 for " + what);
  return 1.0 / s;
}

/// |sin(M x) / sin(x)|, the magnitude of a length-M geometric phase sum.
double phase_sum_ratio(double x, int M, const std::string& what) {
  return std::abs(std::sin(static_cast<double>(M) * x)) * reciprocal_sine(x, what);
}

long long threshold_from(double d, double A1, double A2, double k1, double k2, double nu_value) {
  const double thr = (2.0 * d - 1.0) * (A2 * k2 * k2) / (A1 * k1 * k1) * nu_value;
  if (!std::isfinite(thr)) throw residue_error("measurement threshold overflowed");
  return static_cast<long long>(std::floor(thr)) + 1;
}

}  // namespace

std::pair<double, double> kappa_extrema(const ClassASystem& sys, std::span<const double> h) {
  const double hn = norm2(h);
  if (!(hn > 0.0)) throw std::invalid_argument("kappa_extrema: observation vector is zero");
  const std::vector<cplx> p = mode_projections(sys, h);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const cplx& z : p) {
    const double k = std::abs(z) / hn;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  return {lo, hi};
}

std::pair<double, double> gram_extrema(const ClassASystem& sys) {
  const auto& eigs = sys.gram_eigenvalues();
  return {eigs.front(), eigs.back()};
}

double nu(const ClassASystem& sys) {
  const auto& th = sys.thetas();
  const double ts = sys.Ts();
  double worst = 0.0;
  for (std::size_t p = 0; p < th.size(); ++p) {
    worst = std::max(worst, reciprocal_sine(th[p] * ts, "theta[" + std::to_string(p) + "]*Ts"));
    for (std::size_t q = p + 1; q < th.size(); ++q) {
      const std::string pair = "theta[" + std::to_string(p) + "],theta[" + std::to_string(q) + "]";
      worst = std::max(worst, reciprocal_sine((th[p] - th[q]) * ts / 2.0, "difference of " + pair));
      worst = std::max(worst, reciprocal_sine((th[p] + th[q]) * ts / 2.0, "sum of " + pair));
    }
  }
  return worst;
}

double conditioning_floor(double A1, double kappa1_sq, double A2, double kappa2_sq) {
  if (!(A1 > 0.0 && A2 > 0.0 && kappa1_sq > 0.0 && kappa2_sq > 0.0))
    throw std::invalid_argument("conditioning_floor: constants must be positive");
  return (A2 * kappa2_sq - A1 * kappa1_sq) / (A2 * kappa2_sq + A1 * kappa1_sq);
}

ConditioningBounds conditioning_bounds(const ClassASystem& sys, std::span<const double> h) {
  ConditioningBounds cb;
  std::tie(cb.kappa1, cb.kappa2) = kappa_extrema(sys, h);
  if (cb.kappa1 <= tol::kProjectionFloor)
    throw std::invalid_argument(
        "conditioning_bounds: observation is orthogonal to a mode (kappa1 ~ 0)");
  std::tie(cb.A1, cb.A2) = gram_extrema(sys);
  cb.nu = nu(sys);

  const double d = static_cast<double>(sys.d());
  const double k1_sq = cb.kappa1 * cb.kappa1;
  const double k2_sq = cb.kappa2 * cb.kappa2;
  cb.C = d * (k1_sq / cb.A2 + k2_sq / cb.A1);
  cb.delta0 = conditioning_floor(cb.A1, k1_sq, cb.A2, k2_sq);
  cb.M_threshold = threshold_from(d, cb.A1, cb.A2, cb.kappa1, cb.kappa2, cb.nu);
  cb.kappa1_sq_scaled = 2.0 * d * k1_sq;
  cb.kappa2_sq_scaled = 2.0 * d * k2_sq;
  return cb;
}

std::pair<double, double> delta_of_M(const ConditioningBounds& cb, int d, int M) {
  if (M < 1) throw std::invalid_argument("delta_of_M: M must be >= 1");
  const double k1_sq = cb.kappa1 * cb.kappa1;
  const double k2_sq = cb.kappa2 * cb.kappa2;
  const double weight = 2.0 * cb.A2 * k2_sq / (cb.A2 * k2_sq + cb.A1 * k1_sq);
  const double delta1 =
      (2.0 * static_cast<double>(d) - 1.0) * cb.nu / static_cast<double>(M) * weight;
  return {delta1, cb.delta0 + delta1};
}

double required_measurements(const ConditioningBounds& cb, int d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("required_measurements: eps must be positive");
  const double k1_sq = cb.kappa1 * cb.kappa1;
  const double k2_sq = cb.kappa2 * cb.kappa2;
  const double weight = 2.0 * cb.A2 * k2_sq / (cb.A2 * k2_sq + cb.A1 * k1_sq);
  return (2.0 * static_cast<double>(d) - 1.0) * cb.nu / eps * weight;
}

long long corollary_min_M(int d, double nu, double eps, double delta0) {
  if (d < 1) throw std::invalid_argument("corollary_min_M: d must be >= 1");
  if (!(nu > 0.0)) throw std::invalid_argument("corollary_min_M: nu must be positive");
  if (!(delta0 >= 0.0 && delta0 < 1.0))
    throw std::invalid_argument("corollary_min_M: delta0 must lie in [0, 1)");
  if (!(eps > 0.0 && eps < 1.0 - delta0))
    throw std::invalid_argument("corollary_min_M: eps must lie in (0, 1 - delta0)");
  return static_cast<long long>(
      std::ceil(2.0 * (2.0 * static_cast<double>(d) - 1.0) * nu / eps));
}

ConditionReport check_conditions(const ClassASystem& sys, std::span<const double> h, int M) {
  ConditionReport report;
  const int d = sys.d();

  {
    ConditionCheck c{"measurement_count", M >= 2 * d, false,
                     "M = " + std::to_string(M) + ", 2d = " + std::to_string(2 * d)};
    report.checks.push_back(std::move(c));
  }

  bool nu_ok = false;
  double nu_value = std::numeric_limits<double>::quiet_NaN();
  {
    ConditionCheck c{"distinct_rotations", false, false, ""};
    try {
      nu_value = nu(sys);
      nu_ok = true;
      c.pass = true;
      c.detail = "nu = " + fmt(nu_value);
    } catch (const degenerate_angle_error& e) {
      c.detail = e.what();
    }
    report.checks.push_back(std::move(c));
  }
  if (nu_ok) report.nu = nu_value;

  bool proj_ok = false;
  double k1 = 0.0, k2 = 0.0;
  {
    ConditionCheck c{"mode_projections", false, false, ""};
    const double hn = norm2(h);
    if (!(hn > 0.0) || static_cast<int>(h.size()) != sys.N()) {
      c.detail = "observation vector is zero or mis-sized";
    } else {
      std::tie(k1, k2) = kappa_extrema(sys, h);
      proj_ok = k1 > tol::kProjectionFloor;
      c.pass = proj_ok;
      c.detail = "min |v_i^H h|/||h|| = " + fmt(k1);
    }
    report.checks.push_back(std::move(c));
  }

  {
    ConditionCheck c{"measurement_threshold", false, false, ""};
    if (nu_ok && proj_ok) {
      const auto [A1, A2] = gram_extrema(sys);
      report.M_threshold =
          threshold_from(static_cast<double>(d), A1, A2, k1, k2, nu_value);
      c.pass = static_cast<long long>(M) >= report.M_threshold;
      c.detail = "M = " + std::to_string(M) + ", threshold = " + std::to_string(report.M_threshold);
    } else {
      c.detail = "not computable: prerequisite check failed";
    }
    report.checks.push_back(std::move(c));
  }

  {
    const double target = 2.0 * static_cast<double>(d) / static_cast<double>(M);
    const double hn = norm2(h);
    const double got = hn * hn;
    ConditionCheck c{"observation_norm", std::abs(got - target) <= tol::kNormCheck, false,
                     "||h||^2 = " + fmt(got) + ", 2d/M = " + fmt(target)};
    report.checks.push_back(std::move(c));
  }

  {
    double theta_max = 0.0;
    for (double th : sys.thetas()) theta_max = std::max(theta_max, th);
    const double limit = std::numbers::pi / theta_max;
    ConditionCheck c{"sampling_interval", sys.Ts() < limit, true,
                     "Ts = " + fmt(sys.Ts()) + ", pi/max(theta) = " + fmt(limit) +
                         " (sufficient, not necessary)"};
    report.checks.push_back(std::move(c));
  }

  const bool count_ok = report.checks[0].pass;
  const bool threshold_ok = report.checks[3].pass;
  const bool norm_ok = report.checks[4].pass;
  report.injectivity_ok = count_ok && nu_ok && proj_ok;
  report.embedding_ok = nu_ok && proj_ok && threshold_ok && norm_ok;
  return report;
}

std::vector<GershgorinDisk> gershgorin_disks(const ClassASystem& sys, std::span<const double> h,
                                             int M) {
  if (M < 1) throw std::invalid_argument("gershgorin_disks: M must be >= 1");
  const std::vector<cplx> p = mode_projections(sys, h);
  const auto& th = sys.thetas();
  const double ts = sys.Ts();
  const int d = sys.d();

  std::vector<double> mag(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) mag[static_cast<std::size_t>(i)] = std::abs(p[static_cast<std::size_t>(i)]);

  std::vector<GershgorinDisk> disks;
  disks.reserve(static_cast<std::size_t>(2 * d));
  for (int i = 0; i < d; ++i) {
    const double mi = mag[static_cast<std::size_t>(i)];
    const std::string self = "theta[" + std::to_string(i) + "]*Ts";
    double radius = mi * mi * phase_sum_ratio(th[static_cast<std::size_t>(i)] * ts, M, self);
    for (int q = 0; q < d; ++q) {
      if (q == i) continue;
      const std::string pair = "theta[" + std::to_string(i) + "],theta[" + std::to_string(q) + "]";
      const double coupling =
          phase_sum_ratio((th[static_cast<std::size_t>(i)] - th[static_cast<std::size_t>(q)]) * ts / 2.0, M,
                          "difference of " + pair) +
          phase_sum_ratio((th[static_cast<std::size_t>(i)] + th[static_cast<std::size_t>(q)]) * ts / 2.0, M,
                          "sum of " + pair);
      radius += mi * mag[static_cast<std::size_t>(q)] * coupling;
    }
    const double center = mi * mi * static_cast<double>(M);
    disks.push_back(GershgorinDisk{center, radius, 2 * i});
    disks.push_back(GershgorinDisk{center, radius, 2 * i + 1});
  }
  return disks;
}

FrameBounds frame_bounds_theoretical(const ConditioningBounds& cb, int d, int M) {
  if (M < 1) throw std::invalid_argument("frame_bounds_theoretical: M must be >= 1");
  const double dd = static_cast<double>(d);
  const double slack = (2.0 * dd - 1.0) * cb.nu * cb.kappa2 * cb.kappa2 / static_cast<double>(M);
  FrameBounds fb;
  fb.B1 = 2.0 * dd * (cb.kappa1 * cb.kappa1 - slack);
  fb.B2 = 2.0 * dd * (cb.kappa2 * cb.kappa2 + slack);
  fb.vacuous = !(fb.B1 > 0.0);
  return fb;
}

std::pair<double, double> frame_bounds_empirical(const FrameMatrix& fm) {
  const std::vector<double> eigs = hermitian_eigenvalues(gram(fm.G()));
  return {eigs.front(), eigs.back()};
}

std::vector<double> normalize_observation(std::span<const double> c, int d, int M) {
  if (d < 1 || M < 1) throw std::invalid_argument("normalize_observation: d and M must be >= 1");
  const double cn = norm2(c);
  if (!(cn > 0.0)) throw std::invalid_argument("normalize_observation: direction vector is zero");
  const double scale = std::sqrt(2.0 * static_cast<double>(d) / static_cast<double>(M)) / cn;
  std::vector<double> h(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) h[i] = scale * c[i];
  return h;
}

}  // namespace takens
