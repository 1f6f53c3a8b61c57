#include "takens/commands.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <utility>

#include "json.hpp"
#include "takens/bounds.hpp"
#include "takens/csv.hpp"
#include "takens/dimension.hpp"
#include "takens/errors.hpp"
#include "takens/experiment.hpp"

namespace takens {
namespace {

using json = nlohmann::ordered_json;

const SystemSpec& need_system(const RunConfig& cfg, const char* sub) {
  if (!cfg.system) throw config_error(std::string(sub) + ": config needs a \"system\" block");
  return *cfg.system;
}

const ObservationSpec& need_observation(const RunConfig& cfg, const char* sub) {
  if (!cfg.observation)
    throw config_error(std::string(sub) + ": config needs an \"observation\" block");
  return *cfg.observation;
}

ObservationMode to_mode(ObsChoice choice) {
  switch (choice) {
    case ObsChoice::perturbed:
      return ObservationMode::perturbed;
    case ObsChoice::exact:
      return ObservationMode::exact;
    case ObsChoice::explicit_direction:
      return ObservationMode::explicit_direction;
  }
  throw config_error("unreachable observation mode");
}

/// Least M worth predicting for a tolerance, or nullopt when eps is too
/// loose for the worst-case formula to apply (eps >= 1 - delta0).
std::optional<long long> worst_case_M(int d, const ConditioningBounds& cb, double eps) {
  if (!(eps < 1.0 - cb.delta0)) return std::nullopt;
  return corollary_min_M(d, cb.nu, eps, cb.delta0);
}

}  // namespace

ClassASystem system_from_spec(const SystemSpec& spec) {
  const int d = static_cast<int>(spec.thetas.size());
  std::vector<std::vector<cplx>> vecs;
  switch (spec.eigvec_choice) {
    case EigvecChoice::canonical:
      vecs = make_canonical_eigvecs(d, spec.N);
      break;
    case EigvecChoice::gaussian:
      vecs = make_gaussian_eigvecs(d, spec.N, spec.eigenvector_seed);
      break;
    case EigvecChoice::explicit_list:
      vecs = spec.eigenvectors;
      break;
  }
  return build_system(spec.thetas, std::move(vecs), spec.Ts);
}

SpectralCoords alpha0_from_spec(const SystemSpec& spec) {
  if (spec.alpha0.empty()) return default_alpha0(static_cast<int>(spec.thetas.size()));
  SpectralCoords alpha{spec.alpha0};
  check_conjugate_symmetry(alpha);
  return alpha;
}

std::vector<double> observation_from_spec(const ClassASystem& sys, const ObservationSpec& obs,
                                          std::uint64_t seed, int M) {
  switch (obs.mode) {
    case ObsChoice::perturbed:
      return gen_observation_perturbed(sys, obs.variance, seed, M);
    case ObsChoice::exact:
      return gen_observation_exact(sys, M);
    case ObsChoice::explicit_direction:
      if (static_cast<int>(obs.direction.size()) != sys.N())
        throw config_error("observation.direction length does not match system dimension");
      return obs.direction;
  }
  throw config_error("unreachable observation mode");
}

int write_check_report(const RunConfig& cfg, std::ostream& text, std::ostream* machine) {
  const SystemSpec& sspec = need_system(cfg, "check");
  const ObservationSpec& ospec = need_observation(cfg, "check");
  if (!cfg.check) throw config_error("check: config needs a \"check\" block");
  const CheckSpec& cspec = *cfg.check;

  const ClassASystem sys = system_from_spec(sspec);
  const std::vector<double> h = observation_from_spec(sys, ospec, cfg.seed, cspec.M);
  const ConditionReport report = check_conditions(sys, h, cspec.M);

  std::optional<ConditioningBounds> cb;
  std::string bounds_failure;
  try {
    cb = conditioning_bounds(sys, h);
  } catch (const std::exception& e) {
    bounds_failure = e.what();
  }

  text << "d = " << sys.d() << '\n';
  text << "N = " << sys.N() << '\n';
  text << "Ts = " << format_double(sys.Ts()) << '\n';
  text << "M = " << cspec.M << '\n';
  if (cb) {
    text << "kappa1 = " << format_double(cb->kappa1) << '\n';
    text << "kappa2 = " << format_double(cb->kappa2) << '\n';
    text << "A1 = " << format_double(cb->A1) << '\n';
    text << "A2 = " << format_double(cb->A2) << '\n';
    text << "nu = " << format_double(cb->nu) << '\n';
    text << "C = " << format_double(cb->C) << '\n';
    text << "delta0 = " << format_double(cb->delta0) << '\n';
    text << "M_threshold = " << cb->M_threshold << '\n';
    const auto dM = delta_of_M(*cb, sys.d(), cspec.M);
    text << "delta1(M) = " << format_double(dM.first) << '\n';
    text << "delta(M) = " << format_double(dM.second) << '\n';
    if (!cspec.eps.empty()) {
      text << "eps,M_hat,M_hat_ceil,worst_case\n";
      for (double eps : cspec.eps) {
        const double mh = required_measurements(*cb, sys.d(), eps);
        const auto wc = worst_case_M(sys.d(), *cb, eps);
        text << format_double(eps) << ',' << format_double(mh) << ','
             << static_cast<long long>(std::ceil(mh)) << ',';
        if (wc)
          text << *wc;
        else
          text << "n/a";
        text << '\n';
      }
    }
  } else {
    text << "constants unavailable: " << bounds_failure << '\n';
  }

  text << "checks:\n";
  bool all_pass = true;
  for (const ConditionCheck& c : report.checks) {
    const char* tag = c.advisory ? (c.pass ? "note" : "NOTE") : (c.pass ? "ok  " : "FAIL");
    text << "  " << tag << ' ' << c.name << ": " << c.detail << '\n';
    if (!c.advisory && !c.pass) all_pass = false;
  }
  text << "injectivity_ok = " << (report.injectivity_ok ? "yes" : "no") << '\n';
  text << "embedding_ok = " << (report.embedding_ok ? "yes" : "no") << '\n';

  if (machine) {
    json out;
    out["d"] = sys.d();
    out["N"] = sys.N();
    out["Ts"] = sys.Ts();
    out["M"] = cspec.M;
    if (cb) {
      out["kappa1"] = cb->kappa1;
      out["kappa2"] = cb->kappa2;
      out["A1"] = cb->A1;
      out["A2"] = cb->A2;
      out["nu"] = cb->nu;
      out["C"] = cb->C;
      out["delta0"] = cb->delta0;
      out["M_threshold"] = cb->M_threshold;
      const auto dM = delta_of_M(*cb, sys.d(), cspec.M);
      out["delta1_M"] = dM.first;
      out["delta_M"] = dM.second;
      json rows = json::array();
      for (double eps : cspec.eps) {
        const double mh = required_measurements(*cb, sys.d(), eps);
        json row;
        row["eps"] = eps;
        row["M_hat"] = mh;
        row["M_hat_ceil"] = static_cast<long long>(std::ceil(mh));
        const auto wc = worst_case_M(sys.d(), *cb, eps);
        if (wc)
          row["worst_case"] = *wc;
        else
          row["worst_case"] = nullptr;
        rows.push_back(std::move(row));
      }
      out["required"] = std::move(rows);
    } else {
      out["constants_error"] = bounds_failure;
    }
    json checks = json::array();
    for (const ConditionCheck& c : report.checks) {
      json jc;
      jc["name"] = c.name;
      jc["pass"] = c.pass;
      jc["advisory"] = c.advisory;
      jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    out["injectivity_ok"] = report.injectivity_ok;
    out["embedding_ok"] = report.embedding_ok;
    *machine << out.dump(2) << '\n';
  }
  return all_pass ? 0 : 1;
}

void write_sweep_csv(const RunConfig& cfg, int threads, std::ostream& out) {
  const SystemSpec& sspec = need_system(cfg, "sweep");
  const ObservationSpec& ospec = need_observation(cfg, "sweep");
  if (!cfg.sweep) throw config_error("sweep: config needs a \"sweep\" block");
  const SweepSpec& wspec = *cfg.sweep;

  const ClassASystem sys = system_from_spec(sspec);
  SweepConfig run;
  run.obs_mode = to_mode(ospec.mode);
  run.perturb_variance = ospec.variance;
  run.explicit_direction = ospec.direction;
  run.M_start = wspec.M_start;
  run.M_stop = wspec.M_stop;
  run.M_step = wspec.M_step;
  run.trials = wspec.trials;
  run.t_max = wspec.t_max;
  run.seed = cfg.seed;
  run.threads = threads;
  run.alpha0 = sspec.alpha0;

  const std::vector<SweepRecord> records = conditioning_sweep(sys, run);
  write_csv_header(out, "M,minQ,maxQ,C,delta0,deltaM,lower,upper,empirical_delta,conditions_ok");
  for (const SweepRecord& r : records) {
    CsvRow row;
    row.add(r.M)
        .add(r.minQ)
        .add(r.maxQ)
        .add(r.C)
        .add(r.delta0)
        .add(r.deltaM)
        .add(r.lower)
        .add(r.upper)
        .add(r.empirical_delta)
        .add_flag(r.conditions_ok);
    row.write(out);
  }
}

void write_dimension_csv(const RunConfig& cfg, int threads, std::ostream& out) {
  const SystemSpec& sspec = need_system(cfg, "dimension");
  const ObservationSpec& ospec = need_observation(cfg, "dimension");
  if (!cfg.dimension) throw config_error("dimension: config needs a \"dimension\" block");
  if (ospec.mode != ObsChoice::explicit_direction)
    throw config_error(
        "dimension: observation.mode must be \"explicit\" (the series uses the raw direction)");
  const DimensionSpec& dspec = *cfg.dimension;

  const ClassASystem sys = system_from_spec(sspec);
  if (static_cast<int>(ospec.direction.size()) != sys.N())
    throw config_error("observation.direction length does not match system dimension");
  const SpectralCoords alpha0 = alpha0_from_spec(sspec);

  DimensionOptions opts;
  opts.plateau_tol = dspec.plateau_tol;
  opts.plateau_min_width_decades = dspec.plateau_min_width;
  opts.theiler_window = dspec.theiler;
  opts.threads = threads;

  const std::vector<CorrelationProfile> profiles =
      dimension_experiment(sys, ospec.direction, alpha0, dspec.K, dspec.M_list, dspec.noise_sigma,
                           dspec.eps_grid, cfg.seed, opts);

  write_csv_header(out, "M,eps,corr_sum,local_grad");
  for (const CorrelationProfile& p : profiles) {
    for (std::size_t g = 0; g < p.eps_grid.size(); ++g) {
      CsvRow row;
      row.add(p.M).add(p.eps_grid[g]).add(p.corr_sum[g]).add(p.local_grad[g]);
      row.write(out);
    }
  }
  out << '\n';
  out << "# plateau estimates\n";
  write_csv_header(out, "M,plateau_estimate,eps_low,eps_high,width_decades");
  const double nan = std::nan("");
  for (const CorrelationProfile& p : profiles) {
    CsvRow row;
    row.add(p.M);
    if (p.plateau) {
      row.add(p.plateau->estimate)
          .add(p.plateau->eps_low)
          .add(p.plateau->eps_high)
          .add(p.plateau->width_decades);
    } else {
      row.add(nan).add(nan).add(nan).add(nan);
    }
    row.write(out);
  }
}

void write_demo_csv(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.demo) throw config_error("demo: config needs a \"demo\" block");
  const DemoSpec& dspec = *cfg.demo;
  const std::vector<DemoRow> rows = motivating_demo(dspec.theta, dspec.eps, dspec.M);
  write_csv_header(out, "eps,M,Q");
  for (const DemoRow& r : rows) {
    CsvRow row;
    row.add(r.eps).add(r.M).add(r.Q);
    row.write(out);
  }
}

int run_command(const std::string& subcommand, const RunConfig& cfg, int threads,
                std::ostream& stdout_stream, std::ostream& stderr_stream) {
  try {
    if (threads < 1) throw config_error("threads must be >= 1");

    if (subcommand == "check") {
      std::optional<std::ofstream> file;
      std::ostream* machine = nullptr;
      if (!cfg.out.empty()) {
        file.emplace(cfg.out, std::ios::binary);
        if (!*file) throw io_error("cannot open output file: " + cfg.out);
        machine = &*file;
      }
      const int rc = write_check_report(cfg, stdout_stream, machine);
      if (file) {
        file->flush();
        if (!*file) throw io_error("cannot write output file: " + cfg.out);
      }
      return rc;
    }

    const auto write_body = [&](std::ostream& out) {
      if (subcommand == "sweep")
        write_sweep_csv(cfg, threads, out);
      else if (subcommand == "dimension")
        write_dimension_csv(cfg, threads, out);
      else if (subcommand == "demo")
        write_demo_csv(cfg, out);
      else
        throw config_error("unknown subcommand: " + subcommand);
    };

    if (!cfg.out.empty()) {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw io_error("cannot open output file: " + cfg.out);
      write_body(file);
      file.flush();
      if (!file) throw io_error("cannot write output file: " + cfg.out);
    } else {
      write_body(stdout_stream);
    }
    return 0;
  } catch (const io_error& e) {
    stderr_stream << "error: " << e.what() << '\n';
    return 3;
  } catch (const config_error& e) {
    stderr_stream << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    stderr_stream << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace takens
