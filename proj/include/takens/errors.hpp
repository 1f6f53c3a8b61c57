#pragma once

#include <stdexcept>
#include <string>

namespace takens {

/// A sampling-geometry degeneracy: some sine term in the separation
/// constant is numerically zero, so the rotations alias and the
/// embedding guarantees are void.
class degenerate_angle_error : public std::domain_error {
public:
  explicit degenerate_angle_error(const std::string& what) : std::domain_error(what) {}
};

/// A conjugate-pairing violation: spectral coordinates whose pairs do not
/// conjugate-match (the ambient state would not be real), or a matrix
/// required to be Hermitian that is not.
class symmetry_error : public std::domain_error {
public:
  explicit symmetry_error(const std::string& what) : std::domain_error(what) {}
};

/// A quantity that must be real up to rounding carried an imaginary part
/// beyond tolerance. Always indicates corrupted inputs or a logic bug,
/// never silently clamped.
class residue_error : public std::runtime_error {
public:
  explicit residue_error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration rejected: unknown key, missing field, bad value.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Output path could not be opened or written.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace takens
