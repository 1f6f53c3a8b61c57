#include "takens/linsys.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "takens/errors.hpp"
#include "takens/hermitian_eig.hpp"
#include "takens/rng.hpp"
#include "takens/tolerances.hpp"

namespace takens {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

ClassASystem::ClassASystem(std::vector<double> thetas, std::vector<std::vector<cplx>> eigvecs,
                           double Ts)
    : ts_(Ts), thetas_(std::move(thetas)), vecs_(std::move(eigvecs)) {
  if (thetas_.empty()) throw std::invalid_argument("system: need at least one rotation rate");
  if (thetas_.size() != vecs_.size())
    throw std::invalid_argument("system: rate and mode-vector counts differ");
  if (!(ts_ > 0.0) || !std::isfinite(ts_)) throw std::invalid_argument("system: Ts must be positive");

  d_ = static_cast<int>(thetas_.size());
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    if (!(thetas_[i] > 0.0) || !std::isfinite(thetas_[i]))
      throw std::invalid_argument("system: theta[" + std::to_string(i) + "] must be positive");
    for (std::size_t j = i + 1; j < thetas_.size(); ++j)
      if (thetas_[i] == thetas_[j])
        throw std::invalid_argument("system: duplicate rotation rate theta = " +
                                    std::to_string(thetas_[i]));
  }

  n_ = static_cast<int>(vecs_.front().size());
  if (n_ < 2 * d_) throw std::invalid_argument("system: ambient dimension N must be >= 2d");
  for (std::size_t i = 0; i < vecs_.size(); ++i) {
    if (static_cast<int>(vecs_[i].size()) != n_)
      throw std::invalid_argument("system: mode vectors must share one length");
    double norm_sq = 0.0;
    for (const cplx& z : vecs_[i]) norm_sq += std::norm(z);
    if (std::abs(std::sqrt(norm_sq) - 1.0) > tol::kUnitNorm)
      throw std::invalid_argument("system: mode vector " + std::to_string(i) +
                                  " is not unit norm");
  }

  gram_ = takens::gram(mode_matrix());
  gram_eigs_ = hermitian_eigenvalues(gram_);
  if (gram_eigs_.front() <= tol::kRankFloor)
    throw std::invalid_argument("system: mode matrix is rank deficient (min Gram eigenvalue " +
                                std::to_string(gram_eigs_.front()) + ")");
}

CMatrix ClassASystem::mode_matrix() const {
  CMatrix v(static_cast<std::size_t>(n_), static_cast<std::size_t>(2 * d_));
  for (int i = 0; i < d_; ++i)
    for (int r = 0; r < n_; ++r) {
      const cplx z = vecs_[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      v(static_cast<std::size_t>(r), static_cast<std::size_t>(2 * i)) = z;
      v(static_cast<std::size_t>(r), static_cast<std::size_t>(2 * i + 1)) = std::conj(z);
    }
  return v;
}

std::vector<std::vector<cplx>> make_canonical_eigvecs(int d, int N) {
  if (d < 1) throw std::invalid_argument("make_canonical_eigvecs: d must be >= 1");
  if (N < 2 * d) throw std::invalid_argument("make_canonical_eigvecs: need N >= 2d");
  std::vector<std::vector<cplx>> vecs(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    auto& v = vecs[static_cast<std::size_t>(i)];
    v.assign(static_cast<std::size_t>(N), cplx(0.0, 0.0));
    v[static_cast<std::size_t>(2 * i)] = cplx(kInvSqrt2, 0.0);
    v[static_cast<std::size_t>(2 * i + 1)] = cplx(0.0, kInvSqrt2);
  }
  return vecs;
}

std::vector<std::vector<cplx>> make_gaussian_eigvecs(int d, int N, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("make_gaussian_eigvecs: d must be >= 1");
  if (N < 2 * d) throw std::invalid_argument("make_gaussian_eigvecs: need N >= 2d");
  std::vector<std::vector<cplx>> vecs(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    rng::Stream stream(rng::derive_key(seed, "eigvecs/gaussian", static_cast<std::uint64_t>(i)));
    std::vector<double> re(static_cast<std::size_t>(N)), im(static_cast<std::size_t>(N));
    for (double& x : re) x = stream.gaussian();
    for (double& x : im) x = stream.gaussian();
    double norm_sq = 0.0;
    for (int r = 0; r < N; ++r)
      norm_sq += re[static_cast<std::size_t>(r)] * re[static_cast<std::size_t>(r)] +
                 im[static_cast<std::size_t>(r)] * im[static_cast<std::size_t>(r)];
    if (norm_sq <= 0.0)
      throw std::runtime_error("make_gaussian_eigvecs: degenerate draw");
    const double inv = 1.0 / std::sqrt(norm_sq);
    auto& v = vecs[static_cast<std::size_t>(i)];
    v.resize(static_cast<std::size_t>(N));
    for (int r = 0; r < N; ++r)
      v[static_cast<std::size_t>(r)] = inv * cplx(re[static_cast<std::size_t>(r)],
                                                  im[static_cast<std::size_t>(r)]);
  }
  return vecs;
}

ClassASystem build_system(std::vector<double> thetas, std::vector<std::vector<cplx>> eigvecs,
                          double Ts) {
  return ClassASystem(std::move(thetas), std::move(eigvecs), Ts);
}

SpectralCoords default_alpha0(int d) {
  if (d < 1) throw std::invalid_argument("default_alpha0: d must be >= 1");
  return SpectralCoords{std::vector<cplx>(static_cast<std::size_t>(2 * d), cplx(1.0, 0.0))};
}

void check_conjugate_symmetry(const SpectralCoords& alpha) {
  const auto& a = alpha.alpha;
  if (a.empty() || a.size() % 2 != 0)
    throw symmetry_error("spectral coords: length must be a positive even number");
  const double scale = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
    if (std::abs(a[i + 1] - std::conj(a[i])) > tol::kConjSymmetry * scale)
      throw symmetry_error("spectral coords: entries " + std::to_string(i) + "," +
                           std::to_string(i + 1) + " are not a conjugate pair");
  }
}

std::vector<cplx> mode_projections(const ClassASystem& sys, std::span<const double> h) {
  if (static_cast<int>(h.size()) != sys.N())
    throw std::invalid_argument("mode_projections: observation length must equal N");
  std::vector<cplx> p(static_cast<std::size_t>(sys.d()));
  for (int i = 0; i < sys.d(); ++i) {
    cplx acc = 0.0;
    const auto& v = sys.eigvec(i);
    for (int r = 0; r < sys.N(); ++r)
      acc += v[static_cast<std::size_t>(r)] * h[static_cast<std::size_t>(r)];
    p[static_cast<std::size_t>(i)] = acc;
  }
  return p;
}

SpectralCoords evolve(const ClassASystem& sys, const SpectralCoords& alpha, double t) {
  if (static_cast<int>(alpha.alpha.size()) != 2 * sys.d())
    throw std::invalid_argument("evolve: coordinate length must equal 2d");
  SpectralCoords out = alpha;
  for (int i = 0; i < sys.d(); ++i) {
    const double phase = sys.thetas()[static_cast<std::size_t>(i)] * t;
    const cplx rot = std::polar(1.0, phase);
    out.alpha[static_cast<std::size_t>(2 * i)] *= rot;
    out.alpha[static_cast<std::size_t>(2 * i + 1)] *= std::conj(rot);
  }
  return out;
}

AttractorPoint attractor_point(const ClassASystem& sys, const SpectralCoords& alpha0, double t) {
  check_conjugate_symmetry(alpha0);
  SpectralCoords alpha_t = evolve(sys, alpha0, t);

  std::vector<cplx> z(static_cast<std::size_t>(sys.N()), cplx(0.0, 0.0));
  for (int i = 0; i < sys.d(); ++i) {
    const cplx a = alpha_t.alpha[static_cast<std::size_t>(2 * i)];
    const cplx b = alpha_t.alpha[static_cast<std::size_t>(2 * i + 1)];
    const auto& v = sys.eigvec(i);
    for (int r = 0; r < sys.N(); ++r) {
      const cplx vr = v[static_cast<std::size_t>(r)];
      z[static_cast<std::size_t>(r)] += vr * a + std::conj(vr) * b;
    }
  }

  double re_sq = 0.0, im_sq = 0.0;
  for (const cplx& w : z) {
    re_sq += w.real() * w.real();
    im_sq += w.imag() * w.imag();
  }
  if (std::sqrt(im_sq) > tol::kImagResidue * std::max(std::sqrt(re_sq), 1e-300))
    throw residue_error("attractor_point: state has non-negligible imaginary part");

  std::vector<double> x(z.size());
  for (std::size_t r = 0; r < z.size(); ++r) x[r] = z[r].real();
  return AttractorPoint{std::move(x), std::move(alpha_t)};
}

SpectralCoords flow_step(const ClassASystem& sys, const SpectralCoords& alpha, long long k) {
  return evolve(sys, alpha, -static_cast<double>(k) * sys.Ts());
}

TimeSeries observe_series(const ClassASystem& sys, std::span<const double> h,
                          const SpectralCoords& alpha0, int K, double noise_sigma,
                          std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("observe_series: K must be >= 1");
  if (noise_sigma < 0.0) throw std::invalid_argument("observe_series: sigma must be >= 0");
  check_conjugate_symmetry(alpha0);
  if (static_cast<int>(alpha0.alpha.size()) != 2 * sys.d())
    throw std::invalid_argument("observe_series: coordinate length must equal 2d");

  double h_norm_sq = 0.0;
  for (double x : h) h_norm_sq += x * x;
  if (h_norm_sq <= 0.0) throw std::invalid_argument("observe_series: observation vector is zero");

  const std::vector<cplx> p = mode_projections(sys, h);

  TimeSeries ts;
  ts.Ts = sys.Ts();
  ts.noise_sigma = noise_sigma;
  ts.seed = seed;
  ts.samples.resize(static_cast<std::size_t>(K));

  double im_max = 0.0, re_max = 0.0;
  for (int k = 0; k < K; ++k) {
    cplx acc = 0.0;
    for (int i = 0; i < sys.d(); ++i) {
      const double phase = -sys.thetas()[static_cast<std::size_t>(i)] * sys.Ts() *
                           static_cast<double>(k);
      const cplx rot = std::polar(1.0, phase);
      const cplx pi = p[static_cast<std::size_t>(i)];
      acc += pi * rot * alpha0.alpha[static_cast<std::size_t>(2 * i)] +
             std::conj(pi * rot) * alpha0.alpha[static_cast<std::size_t>(2 * i + 1)];
    }
    im_max = std::max(im_max, std::abs(acc.imag()));
    re_max = std::max(re_max, std::abs(acc.real()));
    ts.samples[static_cast<std::size_t>(k)] = acc.real();
  }
  if (im_max > tol::kImagResidue * std::max(re_max, 1e-300))
    throw residue_error("observe_series: samples have non-negligible imaginary part");

  if (noise_sigma > 0.0) {
    for (int k = 0; k < K; ++k) {
      rng::Stream stream(rng::derive_key(seed, "observe/noise", static_cast<std::uint64_t>(k)));
      ts.samples[static_cast<std::size_t>(k)] += stream.gaussian(0.0, noise_sigma);
    }
  }
  return ts;
}

}  // namespace takens
