#include "takens/delay_embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "takens/errors.hpp"
#include "takens/tolerances.hpp"

namespace takens {

namespace {

// Rows between exact re-synthesis of the running phase factors. Keeps the
// iterated one-step products from accumulating rounding drift.
constexpr int kResyncStride = 64;

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

}  // namespace

FrameMatrix::FrameMatrix(const ClassASystem& sys, std::span<const double> h, int M)
    : sys_(sys), h_(h.begin(), h.end()), m_(M) {
  if (M < 1) throw std::invalid_argument("frame: M must be >= 1");
  if (static_cast<int>(h.size()) != sys.N())
    throw std::invalid_argument("frame: observation length must equal N");
  double h_norm_sq = 0.0;
  for (double x : h) h_norm_sq += x * x;
  if (h_norm_sq <= 0.0) throw std::invalid_argument("frame: observation vector is zero");

  const int d = sys_.d();
  const std::vector<cplx> p = mode_projections(sys_, h);

  // One-delay-step rotation per mode; row k carries p_i rotated k steps.
  std::vector<cplx> step(static_cast<std::size_t>(d));
  std::vector<cplx> cur(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    step[static_cast<std::size_t>(i)] =
        std::polar(1.0, -sys_.thetas()[static_cast<std::size_t>(i)] * sys_.Ts());
    cur[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
  }

  g_ = CMatrix(static_cast<std::size_t>(M), static_cast<std::size_t>(2 * d));
  for (int k = 0; k < M; ++k) {
    if (k > 0 && k % kResyncStride == 0) {
      for (int i = 0; i < d; ++i)
        cur[static_cast<std::size_t>(i)] =
            p[static_cast<std::size_t>(i)] *
            std::polar(1.0, -sys_.thetas()[static_cast<std::size_t>(i)] * sys_.Ts() *
                                static_cast<double>(k));
    }
    for (int i = 0; i < d; ++i) {
      const cplx z = cur[static_cast<std::size_t>(i)];
      g_(static_cast<std::size_t>(k), static_cast<std::size_t>(2 * i)) = z;
      g_(static_cast<std::size_t>(k), static_cast<std::size_t>(2 * i + 1)) = std::conj(z);
    }
    for (int i = 0; i < d; ++i)
      cur[static_cast<std::size_t>(i)] *= step[static_cast<std::size_t>(i)];
  }
}

FrameMatrix build_frame(const ClassASystem& sys, std::span<const double> h, int M) {
  return FrameMatrix(sys, h, M);
}

std::vector<double> apply_delay_map(const FrameMatrix& fm, const SpectralCoords& alpha) {
  check_conjugate_symmetry(alpha);
  const CMatrix& g = fm.G();
  if (alpha.alpha.size() != g.cols())
    throw std::invalid_argument("apply_delay_map: coordinate length must equal 2d");

  std::vector<double> out(g.rows());
  double im_max = 0.0, re_max = 0.0;
  for (std::size_t k = 0; k < g.rows(); ++k) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c) acc += g(k, c) * alpha.alpha[c];
    im_max = std::max(im_max, std::abs(acc.imag()));
    re_max = std::max(re_max, std::abs(acc.real()));
    out[k] = acc.real();
  }
  if (im_max > tol::kImagResidue * std::max(re_max, 1e-300))
    throw residue_error("apply_delay_map: entries have non-negligible imaginary part");
  return out;
}

double distance_ratio_Q(const FrameMatrix& fm, const SpectralCoords& alpha_x,
                        const SpectralCoords& alpha_y) {
  check_conjugate_symmetry(alpha_x);
  check_conjugate_symmetry(alpha_y);
  const CMatrix& g = fm.G();
  if (alpha_x.alpha.size() != g.cols() || alpha_y.alpha.size() != g.cols())
    throw std::invalid_argument("distance_ratio_Q: coordinate length must equal 2d");

  std::vector<cplx> beta(g.cols());
  for (std::size_t c = 0; c < g.cols(); ++c) beta[c] = alpha_x.alpha[c] - alpha_y.alpha[c];

  if (norm2(beta) <= tol::kCoincident * norm2(alpha_x.alpha))
    throw std::invalid_argument("distance_ratio_Q: points coincide");

  double num = 0.0;
  for (std::size_t k = 0; k < g.rows(); ++k) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c) acc += g(k, c) * beta[c];
    num += std::norm(acc);
  }

  const CMatrix& vhv = fm.system().gram();
  cplx den = 0.0;
  for (std::size_t r = 0; r < vhv.rows(); ++r) {
    cplx row_acc = 0.0;
    for (std::size_t c = 0; c < vhv.cols(); ++c) row_acc += vhv(r, c) * beta[c];
    den += std::conj(beta[r]) * row_acc;
  }
  if (!(den.real() > 0.0))
    throw residue_error("distance_ratio_Q: ambient separation is not positive");
  return num / den.real();
}

}  // namespace takens
