#pragma once

#include <span>
#include <vector>

#include "takens/cmatrix.hpp"
#include "takens/linsys.hpp"

namespace takens {

/// The delay-coordinate map restricted to the attractor, realized as an
/// M x 2d complex matrix G acting on spectral coordinates: row k holds the
/// mode projections of the observation advanced k delay steps, and columns
/// come in conjugate pairs mirroring the coordinate pairing.
///
/// Immutable after construction; the generating system is kept by value so
/// a frame stays valid independent of its inputs' lifetimes.
class FrameMatrix {
public:
  FrameMatrix(const ClassASystem& sys, std::span<const double> h, int M);

  [[nodiscard]] int M() const { return m_; }
  [[nodiscard]] int d() const { return sys_.d(); }
  [[nodiscard]] const std::vector<double>& h() const { return h_; }
  [[nodiscard]] const CMatrix& G() const { return g_; }
  [[nodiscard]] const ClassASystem& system() const { return sys_; }

private:
  ClassASystem sys_;
  std::vector<double> h_;
  int m_;
  CMatrix g_;
};

/// Builds the frame for M delays of the observation h (length N, nonzero).
[[nodiscard]] FrameMatrix build_frame(const ClassASystem& sys, std::span<const double> h, int M);

/// Image of the attractor point with coefficients alpha under the delay
/// map: M stacked observations, newest first. Entries are checked real
/// within tol::kImagResidue before their imaginary parts are dropped.
[[nodiscard]] std::vector<double> apply_delay_map(const FrameMatrix& fm, const SpectralCoords& alpha);

/// Squared-distance ratio between delay-space and ambient-space separation
/// of two attractor points, computed entirely in spectral coordinates:
/// ||G(ax - ay)||^2 / ((ax - ay)^H V^H V (ax - ay)).
/// Pairs closer than tol::kCoincident (relative) are rejected.
[[nodiscard]] double distance_ratio_Q(const FrameMatrix& fm, const SpectralCoords& alpha_x,
                                      const SpectralCoords& alpha_y);

}  // namespace takens
