#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "takens/delay_embedding.hpp"
#include "takens/errors.hpp"
#include "takens/linsys.hpp"
#include "takens/rng.hpp"

using takens::ClassASystem;
using takens::cplx;
using takens::FrameMatrix;
using takens::SpectralCoords;

namespace {

ClassASystem canonical_system(std::vector<double> thetas, int n, double ts = 1.0) {
  const int d = static_cast<int>(thetas.size());
  return takens::build_system(std::move(thetas), takens::make_canonical_eigvecs(d, n), ts);
}

std::vector<double> test_observation(int n, std::uint64_t seed) {
  takens::rng::Stream s(takens::rng::derive_key(seed, "test/obs"));
  std::vector<double> h(static_cast<std::size_t>(n));
  for (double& x : h) x = s.gaussian();
  return h;
}

}  // namespace

TEST_CASE("frame entries match the closed-form rotation powers") {
  const double ts = 0.7;
  const ClassASystem sys = canonical_system({0.37, 1.9}, 6, ts);
  const std::vector<double> h = test_observation(6, 1);
  const FrameMatrix fm = takens::build_frame(sys, h, 5);
  const auto proj = takens::mode_projections(sys, h);

  REQUIRE(fm.G().rows() == 5);
  REQUIRE(fm.G().cols() == 4);
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 2; ++i) {
      const cplx expect = proj[static_cast<std::size_t>(i)] *
                          std::polar(1.0, -sys.thetas()[static_cast<std::size_t>(i)] * ts * k);
      const cplx got = fm.G()(static_cast<std::size_t>(k), static_cast<std::size_t>(2 * i));
      CHECK(std::abs(got - expect) < 1e-13);
    }
  }
}

TEST_CASE("frame columns are conjugate-paired exactly") {
  const ClassASystem sys = canonical_system({0.9, 2.2}, 8);
  const std::vector<double> h = test_observation(8, 2);
  const FrameMatrix fm = takens::build_frame(sys, h, 100);
  for (std::size_t k = 0; k < 100; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(fm.G()(k, 2 * i + 1) == std::conj(fm.G()(k, 2 * i)));
}

TEST_CASE("long frames stay phase-accurate thanks to periodic resync") {
  const ClassASystem sys = canonical_system({1.3}, 2);
  const std::vector<double> h = test_observation(2, 3);
  const FrameMatrix fm = takens::build_frame(sys, h, 1000);
  const auto proj = takens::mode_projections(sys, h);
  const cplx expect = proj[0] * std::polar(1.0, -1.3 * 999.0);
  CHECK(std::abs(fm.G()(999, 0) - expect) < 1e-11);
}

TEST_CASE("delay map agrees with the sampled time series") {
  const ClassASystem sys = canonical_system({0.37, 1.9, 2.51}, 8, 0.9);
  const std::vector<double> h = test_observation(8, 4);
  const SpectralCoords alpha = takens::evolve(sys, takens::default_alpha0(3), 17.3);
  const FrameMatrix fm = takens::build_frame(sys, h, 12);

  const auto image = takens::apply_delay_map(fm, alpha);
  const auto series = takens::observe_series(sys, h, alpha, 12, 0.0, 0);
  REQUIRE(image.size() == 12);
  for (std::size_t k = 0; k < 12; ++k)
    CHECK(image[k] == doctest::Approx(series.samples[k]).epsilon(1e-11));
}

TEST_CASE("delay map rejects asymmetric coefficients") {
  const ClassASystem sys = canonical_system({0.37}, 2);
  const FrameMatrix fm = takens::build_frame(sys, std::vector<double>{1.0, 0.5}, 3);
  SpectralCoords bad;
  bad.alpha = {cplx(1.0, 0.2), cplx(1.0, 0.3)};  // not conjugates
  CHECK_THROWS_AS((void)takens::apply_delay_map(fm, bad), takens::symmetry_error);
}

TEST_CASE("squared distances in delay space equal the frame quadratic form") {
  const ClassASystem sys = canonical_system({0.37, 1.9}, 6, 1.0);
  const std::vector<double> h = test_observation(6, 5);
  const FrameMatrix fm = takens::build_frame(sys, h, 20);
  const SpectralCoords ax = takens::evolve(sys, takens::default_alpha0(2), 3.21);
  const SpectralCoords ay = takens::evolve(sys, takens::default_alpha0(2), 8.44);

  const auto fx = takens::apply_delay_map(fm, ax);
  const auto fy = takens::apply_delay_map(fm, ay);
  double image_sq = 0.0;
  for (std::size_t k = 0; k < fx.size(); ++k)
    image_sq += (fx[k] - fy[k]) * (fx[k] - fy[k]);

  std::vector<cplx> beta(4);
  for (std::size_t i = 0; i < 4; ++i) beta[i] = ax.alpha[i] - ay.alpha[i];
  const takens::CMatrix gg = takens::gram(fm.G());
  cplx quad = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) quad += std::conj(beta[i]) * gg(i, j) * beta[j];

  CHECK(image_sq == doctest::Approx(quad.real()).epsilon(1e-11));
  CHECK(std::fabs(quad.imag()) < 1e-11 * std::fabs(quad.real()));
}

TEST_CASE("distance ratio is invariant under common scaling of the pair gap") {
  const ClassASystem sys = canonical_system({0.37, 1.9}, 6);
  const std::vector<double> h = test_observation(6, 6);
  const FrameMatrix fm = takens::build_frame(sys, h, 9);
  const SpectralCoords base = takens::default_alpha0(2);
  const SpectralCoords ax = takens::evolve(sys, base, 1.0);
  const SpectralCoords ay = takens::evolve(sys, base, 2.0);

  // Shrink the gap by blending y toward x; Q depends only on the direction.
  SpectralCoords ay_close;
  ay_close.alpha.resize(4);
  for (std::size_t i = 0; i < 4; ++i)
    ay_close.alpha[i] = ax.alpha[i] + 1e-3 * (ay.alpha[i] - ax.alpha[i]);

  const double q_far = takens::distance_ratio_Q(fm, ax, ay);
  const double q_near = takens::distance_ratio_Q(fm, ax, ay_close);
  CHECK(q_far == doctest::Approx(q_near).epsilon(1e-9));
}

TEST_CASE("coincident pairs are rejected") {
  const ClassASystem sys = canonical_system({0.37}, 2);
  const FrameMatrix fm = takens::build_frame(sys, std::vector<double>{1.0, 0.5}, 4);
  const SpectralCoords a = takens::default_alpha0(1);
  CHECK_THROWS_AS((void)takens::distance_ratio_Q(fm, a, a), std::invalid_argument);
}

TEST_CASE("frame construction rejects degenerate inputs") {
  const ClassASystem sys = canonical_system({0.37}, 2);
  CHECK_THROWS((void)takens::build_frame(sys, std::vector<double>{1.0, 0.5}, 0));
  CHECK_THROWS((void)takens::build_frame(sys, std::vector<double>{1.0}, 4));
  CHECK_THROWS((void)takens::build_frame(sys, std::vector<double>{0.0, 0.0}, 4));
}

TEST_CASE("with M = 2d and distinct rotations every sampled pair separates") {
  const ClassASystem sys = canonical_system({0.5, 1.3}, 6);
  const std::vector<double> h = test_observation(6, 7);
  const FrameMatrix fm = takens::build_frame(sys, h, 4);
  takens::rng::Stream s(takens::rng::derive_key(8, "test/pairs"));
  const SpectralCoords a0 = takens::default_alpha0(2);
  for (int trial = 0; trial < 200; ++trial) {
    const SpectralCoords ax = takens::evolve(sys, a0, s.uniform(0.0, 1000.0));
    const SpectralCoords ay = takens::evolve(sys, a0, s.uniform(0.0, 1000.0));
    double gap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) gap = std::max(gap, std::abs(ax.alpha[i] - ay.alpha[i]));
    if (gap < 1e-9) continue;
    CHECK(takens::distance_ratio_Q(fm, ax, ay) > 0.0);
  }
}
