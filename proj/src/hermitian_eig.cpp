#include "takens/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "takens/errors.hpp"
#include "takens/tolerances.hpp"

namespace takens {

namespace {

constexpr int kMaxSweeps = 64;

double off_diagonal_frobenius(const CMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

double full_frobenius(const CMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

/// One two-sided rotation zeroing A(p,q). Classic Jacobi angle from the
/// 2x2 pivot block, with the pivot's complex phase folded into the
/// rotation so the block reduces to the real symmetric case.
void rotate(CMatrix& a, std::size_t p, std::size_t q) {
  const cplx z = a(p, q);
  const double m = std::abs(z);
  if (m == 0.0) return;
  const cplx phase = z / m;  // e^{i arg(A_pq)}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * m);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp - s * std::conj(phase) * akq;
    a(k, q) = s * phase * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * std::conj(phase) * apk + c * aqk;
  }
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix& input) {
  const std::size_t n = input.rows();
  if (n == 0 || input.cols() != n) throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");

  const double scale = full_frobenius(input);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (std::abs(input(i, j) - std::conj(input(j, i))) > 1e-8 * std::max(1.0, scale))
        throw symmetry_error("hermitian_eigenvalues: matrix is not Hermitian");

  // Symmetrize exactly so rounding asymmetry in the input cannot drift.
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const cplx v = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
    a(i, i) = input(i, i).real();
  }

  const double stop = tol::kJacobiOffDiag * std::max(1.0, scale);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_frobenius(a) <= stop) {
      std::vector<double> eigs(n);
      for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i).real();
      std::sort(eigs.begin(), eigs.end());
      return eigs;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, p, q);
  }
  throw residue_error("hermitian_eigenvalues: Jacobi iteration did not converge");
}

}  // namespace takens
