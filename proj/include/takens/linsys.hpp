#pragma once

#include <cstdint>
#include <vector>

#include "takens/cmatrix.hpp"

namespace takens {

/// Coefficients of an attractor point in the oscillatory-mode basis:
/// 2d complex values in conjugate-interleaved order, alpha[2i+1] = conj(alpha[2i]).
/// The pairing is what keeps the ambient state real.
struct SpectralCoords {
  std::vector<cplx> alpha;
};

/// Scalar observation sequence s_k = s(-k*Ts), optionally noisy.
struct TimeSeries {
  std::vector<double> samples;
  double Ts = 1.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// A linear system reduced to its persistent oscillatory part: d rotation
/// rates theta_i paired with unit-norm complex mode vectors v_i in C^N.
/// Only v_1..v_d are stored; conjugate partners are implicit. The mode
/// matrix V = (v_1 | v_1* | ... | v_d | v_d*) must have full column rank 2d.
///
/// Instances are validated on construction and immutable afterwards; sharing
/// one across threads read-only is safe.
class ClassASystem {
public:
  /// Validates everything the type promises: d >= 1, matching lengths,
  /// Ts > 0, rates positive and distinct, unit-norm vectors, 2d <= N,
  /// full-rank V. Throws std::invalid_argument on any violation.
  ClassASystem(std::vector<double> thetas, std::vector<std::vector<cplx>> eigvecs, double Ts);

  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] int N() const { return n_; }
  [[nodiscard]] double Ts() const { return ts_; }
  [[nodiscard]] const std::vector<double>& thetas() const { return thetas_; }
  [[nodiscard]] const std::vector<cplx>& eigvec(int i) const { return vecs_[static_cast<std::size_t>(i)]; }

  /// V as an explicit N x 2d matrix (built on demand).
  [[nodiscard]] CMatrix mode_matrix() const;

  /// V^H V, 2d x 2d Hermitian; cached at construction.
  [[nodiscard]] const CMatrix& gram() const { return gram_; }

  /// Eigenvalues of V^H V, ascending; cached at construction (they also
  /// back the rank check).
  [[nodiscard]] const std::vector<double>& gram_eigenvalues() const { return gram_eigs_; }

private:
  int d_ = 0;
  int n_ = 0;
  double ts_ = 0.0;
  std::vector<double> thetas_;
  std::vector<std::vector<cplx>> vecs_;
  CMatrix gram_;
  std::vector<double> gram_eigs_;
};

/// v_i = (e_{2i} + j e_{2i+1}) / sqrt(2) (0-based basis indices). The
/// resulting V^H V is exactly the identity.
[[nodiscard]] std::vector<std::vector<cplx>> make_canonical_eigvecs(int d, int N);

/// Real and imaginary parts drawn i.i.d. standard normal, then each vector
/// normalized to unit length. Deterministic per (seed, i).
[[nodiscard]] std::vector<std::vector<cplx>> make_gaussian_eigvecs(int d, int N, std::uint64_t seed);

/// Factory mirroring the validating constructor.
[[nodiscard]] ClassASystem build_system(std::vector<double> thetas,
                                        std::vector<std::vector<cplx>> eigvecs, double Ts);

/// alpha0 = (1, ..., 1), the conventional starting coefficients.
[[nodiscard]] SpectralCoords default_alpha0(int d);

/// Throws symmetry_error unless alpha[2i+1] = conj(alpha[2i]) within
/// tol::kConjSymmetry (relative to max(1, max|alpha|)) and the length is even.
void check_conjugate_symmetry(const SpectralCoords& alpha);

/// Projections p_i = v_i^T h of a real observation vector onto the stored
/// modes (unconjugated; conj(p_i) is the partner column's value).
[[nodiscard]] std::vector<cplx> mode_projections(const ClassASystem& sys, std::span<const double> h);

/// Continuous-time rotation of spectral coordinates: alpha[2i] gains phase
/// +theta_i*t, alpha[2i+1] the opposite. Norm-preserving.
[[nodiscard]] SpectralCoords evolve(const ClassASystem& sys, const SpectralCoords& alpha, double t);

struct AttractorPoint {
  std::vector<double> x;   // ambient state, length N
  SpectralCoords alpha_t;  // rotated coefficients
};

/// State x(t) = V * evolve(alpha0, t). The complex sum is checked to be
/// real within tol::kImagResidue (relative to ||x||) before the imaginary
/// parts are dropped; a violation throws residue_error.
[[nodiscard]] AttractorPoint attractor_point(const ClassASystem& sys, const SpectralCoords& alpha0,
                                             double t);

/// Discrete delay step: returns D^k alpha where D rotates alpha[2i] by
/// -theta_i*Ts per step. Positive k walks backward in time (the delay
/// direction); negative k forward. flow_step(flow_step(a, k), -k) = a.
[[nodiscard]] SpectralCoords flow_step(const ClassASystem& sys, const SpectralCoords& alpha,
                                       long long k);

/// K samples s_k = h^T V D^k alpha0, k = 0..K-1, plus optional additive
/// Gaussian noise of the given sigma. Noise draws are keyed per sample
/// index, so the series is reproducible independent of evaluation order.
[[nodiscard]] TimeSeries observe_series(const ClassASystem& sys, std::span<const double> h,
                                        const SpectralCoords& alpha0, int K, double noise_sigma,
                                        std::uint64_t seed);

}  // namespace takens
