#pragma once

// Independent reference implementations used to cross-check the library.
// Deliberately different algorithms from the production code: eigenvalues
// via a real-symmetric embedding with Householder tridiagonalization and
// QL iteration (the library uses complex Jacobi), determinants via LU,
// correlation sums via a naive double loop.

#include <cstdint>
#include <vector>

#include "takens/cmatrix.hpp"

namespace oracle {

/// Eigenvalues of a Hermitian matrix, ascending. Embeds H into the real
/// symmetric matrix [[Re H, -Im H], [Im H, Re H]], whose spectrum is that
/// of H doubled, and averages the pairs.
std::vector<double> hermitian_eigenvalues(const takens::CMatrix& h);

/// Eigenvalues of a real symmetric matrix, ascending (Householder + QL).
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a);

/// |det A| via LU with partial pivoting; 0 for singular input.
double abs_det(takens::CMatrix a);

/// Fraction of unordered pairs with |p - q| > theiler at Euclidean
/// distance strictly below eps.
double correlation_sum_naive(const std::vector<std::vector<double>>& points, double eps,
                             int theiler);

/// Dense Hermitian test matrix with entries drawn from a seeded stream.
takens::CMatrix random_hermitian(int n, std::uint64_t seed);

}  // namespace oracle
