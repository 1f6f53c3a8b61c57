#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace takens {

using cplx = std::complex<double>;

/// Row-major dense complex matrix. Deliberately minimal: the library only
/// ever handles tall delay frames (M x 2d) and small spectral blocks
/// (2d x 2d), so there is no need for a general linear-algebra dependency.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return a_[r * cols_ + c];
  }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return a_[r * cols_ + c];
  }

  [[nodiscard]] std::span<const cplx> row(std::size_t r) const {
    assert(r < rows_);
    return {a_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<cplx> row(std::size_t r) {
    assert(r < rows_);
    return {a_.data() + r * cols_, cols_};
  }

  [[nodiscard]] static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> a_;
};

/// A^H A. The result is Hermitian up to rounding; the strict upper triangle
/// is mirrored from the computed lower one so it is Hermitian exactly.
[[nodiscard]] inline CMatrix gram(const CMatrix& a) {
  const std::size_t n = a.cols();
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx acc = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) acc += std::conj(a(r, i)) * a(r, j);
      g(i, j) = acc;
      g(j, i) = std::conj(acc);
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

[[nodiscard]] inline std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x) {
  assert(x.size() == a.cols());
  std::vector<cplx> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

[[nodiscard]] inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  assert(a.cols() == b.rows());
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

}  // namespace takens
