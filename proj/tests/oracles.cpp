#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "takens/rng.hpp"

namespace oracle {
namespace {

// Householder reduction of a symmetric matrix to tridiagonal form
// (diagonal d, off-diagonal e with e[0] unused). Classic in-place scheme
// without eigenvector accumulation.
void tridiagonalize(std::vector<std::vector<double>>& a, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(a.size());
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::fabs(a[i][k]);
      if (scale == 0.0) {
        e[i] = a[i][l];
      } else {
        for (int k = 0; k <= l; ++k) {
          a[i][k] /= scale;
          h += a[i][k] * a[i][k];
        }
        double f = a[i][l];
        const double g0 = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g0;
        h -= f * g0;
        a[i][l] = f - g0;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          double g = 0.0;
          for (int k = 0; k <= j; ++k) g += a[j][k] * a[i][k];
          for (int k = j + 1; k <= l; ++k) g += a[k][j] * a[i][k];
          e[j] = g / h;
          f += e[j] * a[i][j];
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a[i][j];
          const double g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) a[j][k] -= f * e[k] + g * a[i][k];
        }
      }
    } else {
      e[i] = a[i][l];
    }
  }
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) d[i] = a[i][i];
}

// QL iteration with implicit shifts on a tridiagonal matrix; eigenvalues
// land in d.
void ql_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd + 1e-300) break;
      }
      if (m != l) {
        if (iter++ == 64) throw std::runtime_error("oracle ql: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  std::vector<double> d;
  std::vector<double> e;
  tridiagonalize(a, d, e);
  ql_eigenvalues(d, e);
  return d;
}

std::vector<double> hermitian_eigenvalues(const takens::CMatrix& h) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != h.rows()) throw std::invalid_argument("oracle: matrix must be square");
  std::vector<std::vector<double>> s(2 * n, std::vector<double>(2 * n, 0.0));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double re = h(r, c).real();
      const double im = h(r, c).imag();
      s[r][c] = re;
      s[n + r][n + c] = re;
      s[r][n + c] = -im;
      s[n + r][c] = im;
    }
  }
  std::vector<double> doubled = symmetric_eigenvalues(std::move(s));
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return out;
}

double abs_det(takens::CMatrix a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw std::invalid_argument("oracle: matrix must be square");
  double log_abs = 0.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double mag = std::abs(a(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col)
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
    log_abs += std::log(std::abs(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const takens::cplx factor = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return std::exp(log_abs);
}

double correlation_sum_naive(const std::vector<std::vector<double>>& points, double eps,
                             int theiler) {
  const int k = static_cast<int>(points.size());
  long long hits = 0;
  long long total = 0;
  for (int p = 0; p < k; ++p) {
    for (int q = p + 1; q < k; ++q) {
      if (q - p <= theiler) continue;
      ++total;
      double sq = 0.0;
      for (std::size_t j = 0; j < points[p].size(); ++j) {
        const double diff = points[p][j] - points[q][j];
        sq += diff * diff;
      }
      if (std::sqrt(sq) < eps) ++hits;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(total);
}

takens::CMatrix random_hermitian(int n, std::uint64_t seed) {
  takens::rng::Stream stream(takens::rng::derive_key(seed, "oracle/hermitian"));
  takens::CMatrix h(n, n);
  for (int r = 0; r < n; ++r) {
    h(r, r) = takens::cplx(stream.gaussian(), 0.0);
    for (int c = r + 1; c < n; ++c) {
      const takens::cplx z(stream.gaussian(), stream.gaussian());
      h(r, c) = z;
      h(c, r) = std::conj(z);
    }
  }
  return h;
}

}  // namespace oracle
