#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "takens/cmatrix.hpp"

namespace takens {

enum class EigvecChoice { canonical, gaussian, explicit_list };

/// System block: rotation rates, sampling interval, and how to obtain the
/// mode vectors. Explicit vectors pin a system exactly; the generators
/// cover the canonical and randomized families.
struct SystemSpec {
  double Ts = 1.0;
  int N = 50;
  std::vector<double> thetas;
  EigvecChoice eigvec_choice = EigvecChoice::canonical;
  std::uint64_t eigenvector_seed = 0;            // gaussian only
  std::vector<std::vector<cplx>> eigenvectors;   // explicit_list only, d rows of N
  std::vector<cplx> alpha0;                      // optional; empty = all-ones

  bool operator==(const SystemSpec&) const = default;
};

enum class ObsChoice { perturbed, exact, explicit_direction };

struct ObservationSpec {
  ObsChoice mode = ObsChoice::perturbed;
  double variance = 0.1;           // perturbed only
  std::vector<double> direction;   // explicit_direction only; used unscaled

  bool operator==(const ObservationSpec&) const = default;
};

/// check: evaluate the closed-form constants and hypothesis checks at one M,
/// plus the predicted measurement count for each requested tolerance.
struct CheckSpec {
  int M = 0;
  std::vector<double> eps;

  bool operator==(const CheckSpec&) const = default;
};

struct SweepSpec {
  int M_start = 1;
  int M_stop = 200;
  int M_step = 1;
  int trials = 1000;
  double t_max = 10000.0;

  bool operator==(const SweepSpec&) const = default;
};

struct DimensionSpec {
  int K = 2000;
  std::vector<int> M_list;
  double noise_sigma = 0.0;
  std::vector<double> eps_grid;  // empty = per-M automatic grid
  double plateau_tol = 0.15;
  double plateau_min_width = 0.5;
  int theiler = 0;

  bool operator==(const DimensionSpec&) const = default;
};

struct DemoSpec {
  double theta = 0.0;
  std::vector<double> eps;
  std::vector<int> M;

  bool operator==(const DemoSpec&) const = default;
};

/// One run = one JSON document. Only the blocks a subcommand needs must be
/// present; unknown keys anywhere are rejected at parse time.
struct RunConfig {
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::string out;  // output path; empty = stdout
  std::optional<SystemSpec> system;
  std::optional<ObservationSpec> observation;
  std::optional<CheckSpec> check;
  std::optional<SweepSpec> sweep;
  std::optional<DimensionSpec> dimension;
  std::optional<DemoSpec> demo;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON document. Throws config_error naming the
/// offending key on unknown keys, type mismatches, version mismatch, or
/// value constraints (duplicate thetas, empty ranges, out-of-range eps).
[[nodiscard]] RunConfig parse_config(const std::string& json_text);

/// Inverse of parse_config up to field equality:
/// parse_config(serialize_config(c)) == c for every valid c.
[[nodiscard]] std::string serialize_config(const RunConfig& cfg);

/// Reads the file and parses it. Throws io_error if unreadable.
[[nodiscard]] RunConfig load_config_file(const std::string& path);

}  // namespace takens
