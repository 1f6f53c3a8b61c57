#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "takens/config.hpp"
#include "takens/linsys.hpp"

namespace takens {

/// Builds the system a config describes. Throws config_error when the block
/// is inconsistent (bad explicit vectors, N too small) and the library's
/// own errors for rank or norm violations.
[[nodiscard]] ClassASystem system_from_spec(const SystemSpec& spec);

/// Initial spectral coordinates: the configured pairs, or all-ones.
[[nodiscard]] SpectralCoords alpha0_from_spec(const SystemSpec& spec);

/// Observation vector at a fixed delay count. Generator modes emit the
/// ||h||^2 = 2d/M normalized vector; explicit mode returns the configured
/// direction unscaled (the norm condition check then reports whether it
/// matches the frame scaling).
[[nodiscard]] std::vector<double> observation_from_spec(const ClassASystem& sys,
                                                        const ObservationSpec& obs,
                                                        std::uint64_t seed, int M);

/// Condition report: constants table, predicted measurement counts for the
/// requested tolerances, and one pass/fail line per hypothesis. Text goes
/// to `text`; a JSON copy goes to `machine` when non-null. Returns 0 when
/// every non-advisory check passes, 1 otherwise.
int write_check_report(const RunConfig& cfg, std::ostream& text, std::ostream* machine);

/// CSV body of a conditioning sweep, one row per M.
void write_sweep_csv(const RunConfig& cfg, int threads, std::ostream& out);

/// CSV body of a correlation-dimension run: per-(M, eps) rows followed by a
/// plateau summary section.
void write_dimension_csv(const RunConfig& cfg, int threads, std::ostream& out);

/// CSV body of the single-mode conditioning demo.
void write_demo_csv(const RunConfig& cfg, std::ostream& out);

/// Dispatches one subcommand, routing output to cfg.out (or `stdout_stream`
/// when no path is set) and mapping failures onto the exit-code contract:
/// 0 success, 1 condition-check failure, 2 config error, 3 I/O error.
int run_command(const std::string& subcommand, const RunConfig& cfg, int threads,
                std::ostream& stdout_stream, std::ostream& stderr_stream);

}  // namespace takens
