#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "takens/delay_embedding.hpp"
#include "takens/linsys.hpp"

namespace takens {

/// Closed-form conditioning constants of a (system, observation) pair.
/// kappa are normalized projection extrema, A the extreme Gram eigenvalues,
/// nu the rotation-separation constant, C the central scaling the
/// squared-distance ratios concentrate around, delta0 the floor the
/// conditioning cannot beat with any number of delays.
struct ConditioningBounds {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double nu = 0.0;
  double C = 0.0;
  double delta0 = 0.0;
  /// Smallest integer M strictly above (2d-1) * (A2 kappa2^2)/(A1 kappa1^2) * nu,
  /// i.e. the first M with delta0 + delta1(M) < 1, where the two-sided
  /// sandwich C*(1 +- delta(M)) has a positive lower edge.
  long long M_threshold = 0;
  /// Diagnostics: 2d * kappa_i^2, the scaling conventionally used when
  /// projections are reported in tables with mean ~1.
  double kappa1_sq_scaled = 0.0;
  double kappa2_sq_scaled = 0.0;
};

/// One Gershgorin disk of the frame Gram matrix G^H G. Disks come in
/// identical pairs (rows 2i, 2i+1) because paired columns are conjugate.
struct GershgorinDisk {
  double center = 0.0;
  double radius = 0.0;
  int index = 0;
};

/// Closed-form frame bounds at a given M. B1 <= 0 means the bound is
/// vacuous at this M (expected below M_threshold); it is reported as-is.
struct FrameBounds {
  double B1 = 0.0;
  double B2 = 0.0;
  bool vacuous = false;
};

struct ConditionCheck {
  std::string name;
  bool pass = false;
  bool advisory = false;  // informational; excluded from the aggregates
  std::string detail;
};

/// Structured verdict on the embedding hypotheses for a given (sys, h, M).
/// Failures are entries, never exceptions.
struct ConditionReport {
  std::vector<ConditionCheck> checks;
  /// M >= 2d, distinct non-aliasing rotations, all projections nonzero:
  /// enough for an injective delay map.
  bool injectivity_ok = false;
  /// Additionally M above threshold and the observation norm matched to
  /// 2d/M: enough for the two-sided stable-embedding sandwich.
  bool embedding_ok = false;
  double nu = 0.0;             // valid when distinct_rotations passed
  long long M_threshold = -1;  // -1 when not computable
};

/// (kappa1, kappa2) = extreme |v_i^H h| / ||h||. Scale-invariant in h.
[[nodiscard]] std::pair<double, double> kappa_extrema(const ClassASystem& sys,
                                                      std::span<const double> h);

/// (A1, A2) = extreme eigenvalues of V^H V.
[[nodiscard]] std::pair<double, double> gram_extrema(const ClassASystem& sys);

/// Separation constant: max over reciprocal |sin| of theta_p*Ts and of
/// (theta_p +- theta_q)*Ts/2. Finite exactly when the sampled rotations are
/// distinct and strictly complex; throws degenerate_angle_error naming the
/// offending term otherwise.
[[nodiscard]] double nu(const ClassASystem& sys);

/// delta0 from raw constants: the spread the distance-ratio range keeps even
/// as the delay count grows. kappa squares are the unscaled |v^H h|^2/||h||^2
/// extremes. Pure formula, shared with conditioning_bounds so table-level
/// constants can be checked without building a system.
[[nodiscard]] double conditioning_floor(double A1, double kappa1_sq, double A2, double kappa2_sq);

/// All constants above for one (sys, h) pair. Requires kappa1 > 0 and nu
/// finite; failures propagate as exceptions.
[[nodiscard]] ConditioningBounds conditioning_bounds(const ClassASystem& sys,
                                                     std::span<const double> h);

/// (delta1, delta0 + delta1) at a given M; delta1 decays like 1/M.
[[nodiscard]] std::pair<double, double> delta_of_M(const ConditioningBounds& cb, int d, int M);

/// Real-valued M estimate achieving delta1(M) = eps: between (2d-1)nu/eps
/// and twice that.
[[nodiscard]] double required_measurements(const ConditioningBounds& cb, int d, double eps);

/// Worst-case sufficient measurement count ceil(2(2d-1)nu/eps), valid for
/// tolerance eps in (0, 1 - delta0).
[[nodiscard]] long long corollary_min_M(int d, double nu, double eps, double delta0 = 0.0);

/// Evaluates every hypothesis behind the injectivity and stable-embedding
/// guarantees at a given M. Never throws; see ConditionReport.
[[nodiscard]] ConditionReport check_conditions(const ClassASystem& sys, std::span<const double> h,
                                               int M);

/// The 2d Gershgorin disks of G^H G in closed form: centers M|v_i^H h|^2,
/// radii from the three sine-ratio coupling terms.
[[nodiscard]] std::vector<GershgorinDisk> gershgorin_disks(const ClassASystem& sys,
                                                           std::span<const double> h, int M);

/// Closed-form frame bounds B1(M), B2(M); assumes ||h||^2 = 2d/M scaling.
[[nodiscard]] FrameBounds frame_bounds_theoretical(const ConditioningBounds& cb, int d, int M);

/// Extreme eigenvalues of G^H G for an explicit frame.
[[nodiscard]] std::pair<double, double> frame_bounds_empirical(const FrameMatrix& fm);

/// h = sqrt(2d/M) * c / ||c||: the observation scaling under which the
/// central constant C is O(1) and the closed-form frame bounds apply.
[[nodiscard]] std::vector<double> normalize_observation(std::span<const double> c, int d, int M);

}  // namespace takens
