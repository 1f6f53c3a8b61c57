#pragma once

/// Numeric thresholds used across the library. Values are defaults chosen
/// for double precision; they are deliberate constants, not tunables
/// scattered through call sites.

namespace takens::tol {

/// Conjugate-pair symmetry: |alpha_{2i+1} - conj(alpha_{2i})| allowed,
/// relative to max(1, max|alpha|).
inline constexpr double kConjSymmetry = 1e-12;

/// Imaginary residue allowed on analytically real results, relative to
/// the magnitude of the real part (vector max-norm scale).
inline constexpr double kImagResidue = 1e-10;

/// Unit-norm eigenvector check on |norm - 1|.
inline constexpr double kUnitNorm = 1e-9;

/// Rank guard: smallest eigenvalue of the mode-matrix Gram required for a
/// system to count as full rank.
inline constexpr double kRankFloor = 1e-10;

/// Sine terms smaller than this make the separation constant degenerate.
inline constexpr double kDegenerateSine = 1e-12;

/// Normalized projections |v_i^H h|/||h|| at or below this fail the
/// observability condition.
inline constexpr double kProjectionFloor = 1e-12;

/// Observation-norm check |(||h||^2) - 2d/M| for the scaled-embedding
/// hypotheses.
inline constexpr double kNormCheck = 1e-10;

/// Pairs closer than this (relative to ||alpha_x||) are coincident for
/// distance-ratio purposes.
inline constexpr double kCoincident = 1e-14;

/// Pairs closer than this (relative to ||alpha0||) are resampled by the
/// Monte Carlo harness before they ever reach a ratio computation.
inline constexpr double kResample = 1e-12;

/// Jacobi eigensolver stop: off-diagonal Frobenius norm relative to the
/// full Frobenius norm of the input (absolute when the input norm is
/// below 1).
inline constexpr double kJacobiOffDiag = 1e-13;

}  // namespace takens::tol
