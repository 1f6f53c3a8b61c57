#pragma once

#include <vector>

#include "takens/cmatrix.hpp"

namespace takens {

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi sweeps with
/// unitary two-sided rotations; iteration stops once the off-diagonal
/// Frobenius norm drops below tol::kJacobiOffDiag relative to the input
/// scale. Intended for the library's small spectral blocks (order 2d);
/// correctness, not asymptotics, is the point.
///
/// Throws std::invalid_argument if the input is not square or not Hermitian,
/// residue_error if the iteration fails to converge (does not happen for
/// Hermitian input; guards corrupted memory).
[[nodiscard]] std::vector<double> hermitian_eigenvalues(const CMatrix& a);

}  // namespace takens
