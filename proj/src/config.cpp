#include "takens/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "takens/errors.hpp"

namespace takens {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw config_error(where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown key \"" + it.key() + "\"");
  }
}

const json& get_object(const json& obj, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  return obj;
}

double get_finite(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "must be finite");
  return x;
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  const auto x = v.get<long long>();
  if (x < -(1LL << 31) || x > (1LL << 31)) fail(where, "out of range");
  return static_cast<int>(x);
}

std::uint64_t get_u64(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto x = v.get<long long>();
    if (x < 0) fail(where, "must be non-negative");
    return static_cast<std::uint64_t>(x);
  }
  fail(where, "expected an integer");
}

cplx get_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected a [re, im] pair");
  return {get_finite(v[0], where + "[0]"), get_finite(v[1], where + "[1]")};
}

std::vector<double> get_double_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(get_finite(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> get_int_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(get_int(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

SystemSpec parse_system(const json& obj) {
  const std::string where = "system";
  get_object(obj, where);
  require_keys(obj, where, {"Ts", "N", "thetas", "eigenvectors", "eigenvector_seed", "alpha0"});

  SystemSpec spec;
  if (!obj.contains("thetas")) fail(where, "missing required key \"thetas\"");
  spec.thetas = get_double_list(obj["thetas"], where + ".thetas");
  if (spec.thetas.empty()) fail(where + ".thetas", "must be non-empty");
  for (std::size_t i = 0; i < spec.thetas.size(); ++i) {
    if (!(spec.thetas[i] > 0.0))
      fail(where + ".thetas[" + std::to_string(i) + "]", "must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (spec.thetas[i] == spec.thetas[j])
        fail(where + ".thetas", "duplicate value at indices " + std::to_string(j) + " and " +
                                    std::to_string(i));
  }
  const int d = static_cast<int>(spec.thetas.size());

  if (obj.contains("Ts")) {
    spec.Ts = get_finite(obj["Ts"], where + ".Ts");
    if (!(spec.Ts > 0.0)) fail(where + ".Ts", "must be positive");
  }

  if (obj.contains("eigenvectors")) {
    const json& ev = obj["eigenvectors"];
    if (ev.is_string()) {
      const auto s = ev.get<std::string>();
      if (s == "canonical")
        spec.eigvec_choice = EigvecChoice::canonical;
      else if (s == "gaussian")
        spec.eigvec_choice = EigvecChoice::gaussian;
      else
        fail(where + ".eigenvectors", "expected \"canonical\", \"gaussian\", or an array");
    } else if (ev.is_array()) {
      spec.eigvec_choice = EigvecChoice::explicit_list;
      if (static_cast<int>(ev.size()) != d)
        fail(where + ".eigenvectors", "expected one vector per theta (" + std::to_string(d) +
                                          "), got " + std::to_string(ev.size()));
      for (std::size_t i = 0; i < ev.size(); ++i) {
        const std::string vw = where + ".eigenvectors[" + std::to_string(i) + "]";
        if (!ev[i].is_array() || ev[i].empty()) fail(vw, "expected a non-empty array of pairs");
        std::vector<cplx> vec;
        vec.reserve(ev[i].size());
        for (std::size_t k = 0; k < ev[i].size(); ++k)
          vec.push_back(get_pair(ev[i][k], vw + "[" + std::to_string(k) + "]"));
        if (!spec.eigenvectors.empty() && vec.size() != spec.eigenvectors.front().size())
          fail(vw, "all vectors must have equal length");
        spec.eigenvectors.push_back(std::move(vec));
      }
    } else {
      fail(where + ".eigenvectors", "expected \"canonical\", \"gaussian\", or an array");
    }
  }

  if (obj.contains("eigenvector_seed"))
    spec.eigenvector_seed = get_u64(obj["eigenvector_seed"], where + ".eigenvector_seed");

  if (spec.eigvec_choice == EigvecChoice::explicit_list) {
    const int n_from_vec = static_cast<int>(spec.eigenvectors.front().size());
    if (obj.contains("N")) {
      const int n = get_int(obj["N"], where + ".N");
      if (n != n_from_vec)
        fail(where + ".N", "does not match explicit eigenvector length " +
                               std::to_string(n_from_vec));
    }
    spec.N = n_from_vec;
  } else if (obj.contains("N")) {
    spec.N = get_int(obj["N"], where + ".N");
  }
  if (spec.N < 2 * d)
    fail(where + ".N", "must be at least 2 * number of thetas (" + std::to_string(2 * d) + ")");

  if (obj.contains("alpha0")) {
    const json& a = obj["alpha0"];
    if (!a.is_array()) fail(where + ".alpha0", "expected an array of [re, im] pairs");
    if (static_cast<int>(a.size()) != 2 * d)
      fail(where + ".alpha0", "expected " + std::to_string(2 * d) + " pairs, got " +
                                  std::to_string(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k)
      spec.alpha0.push_back(get_pair(a[k], where + ".alpha0[" + std::to_string(k) + "]"));
  }
  return spec;
}

ObservationSpec parse_observation(const json& obj) {
  const std::string where = "observation";
  get_object(obj, where);
  require_keys(obj, where, {"mode", "variance", "direction"});

  ObservationSpec spec;
  if (!obj.contains("mode") || !obj["mode"].is_string())
    fail(where, "missing or non-string key \"mode\"");
  const auto mode = obj["mode"].get<std::string>();
  if (mode == "perturbed")
    spec.mode = ObsChoice::perturbed;
  else if (mode == "exact")
    spec.mode = ObsChoice::exact;
  else if (mode == "explicit")
    spec.mode = ObsChoice::explicit_direction;
  else
    fail(where + ".mode", "expected \"perturbed\", \"exact\", or \"explicit\"");

  if (obj.contains("variance")) {
    if (spec.mode != ObsChoice::perturbed)
      fail(where + ".variance", "only valid with mode \"perturbed\"");
    spec.variance = get_finite(obj["variance"], where + ".variance");
    if (spec.variance < 0.0) fail(where + ".variance", "must be non-negative");
  }
  if (obj.contains("direction")) {
    if (spec.mode != ObsChoice::explicit_direction)
      fail(where + ".direction", "only valid with mode \"explicit\"");
    spec.direction = get_double_list(obj["direction"], where + ".direction");
    if (spec.direction.empty()) fail(where + ".direction", "must be non-empty");
  } else if (spec.mode == ObsChoice::explicit_direction) {
    fail(where, "mode \"explicit\" requires key \"direction\"");
  }
  return spec;
}

CheckSpec parse_check(const json& obj) {
  const std::string where = "check";
  get_object(obj, where);
  require_keys(obj, where, {"M", "eps"});
  CheckSpec spec;
  if (!obj.contains("M")) fail(where, "missing required key \"M\"");
  spec.M = get_int(obj["M"], where + ".M");
  if (spec.M < 1) fail(where + ".M", "must be at least 1");
  if (obj.contains("eps")) {
    spec.eps = get_double_list(obj["eps"], where + ".eps");
    for (std::size_t i = 0; i < spec.eps.size(); ++i)
      if (!(spec.eps[i] > 0.0 && spec.eps[i] < 1.0))
        fail(where + ".eps[" + std::to_string(i) + "]", "must lie in (0, 1)");
  }
  return spec;
}

SweepSpec parse_sweep(const json& obj) {
  const std::string where = "sweep";
  get_object(obj, where);
  require_keys(obj, where, {"M_start", "M_stop", "M_step", "trials", "t_max"});
  SweepSpec spec;
  if (obj.contains("M_start")) spec.M_start = get_int(obj["M_start"], where + ".M_start");
  if (obj.contains("M_stop")) spec.M_stop = get_int(obj["M_stop"], where + ".M_stop");
  if (obj.contains("M_step")) spec.M_step = get_int(obj["M_step"], where + ".M_step");
  if (obj.contains("trials")) spec.trials = get_int(obj["trials"], where + ".trials");
  if (obj.contains("t_max")) spec.t_max = get_finite(obj["t_max"], where + ".t_max");
  if (spec.M_start < 1) fail(where + ".M_start", "must be at least 1");
  if (spec.M_stop < spec.M_start) fail(where, "empty M range (M_stop < M_start)");
  if (spec.M_step < 1) fail(where + ".M_step", "must be at least 1");
  if (spec.trials < 2) fail(where + ".trials", "must be at least 2");
  if (!(spec.t_max > 0.0)) fail(where + ".t_max", "must be positive");
  return spec;
}

DimensionSpec parse_dimension(const json& obj) {
  const std::string where = "dimension";
  get_object(obj, where);
  require_keys(obj, where,
               {"K", "M", "noise_sigma", "eps_grid", "plateau_tol", "plateau_min_width",
                "theiler"});
  DimensionSpec spec;
  if (obj.contains("K")) spec.K = get_int(obj["K"], where + ".K");
  if (spec.K < 2) fail(where + ".K", "must be at least 2");
  if (!obj.contains("M")) fail(where, "missing required key \"M\"");
  spec.M_list = get_int_list(obj["M"], where + ".M");
  if (spec.M_list.empty()) fail(where + ".M", "must be non-empty");
  for (std::size_t i = 0; i < spec.M_list.size(); ++i)
    if (spec.M_list[i] < 1) fail(where + ".M[" + std::to_string(i) + "]", "must be at least 1");
  if (obj.contains("noise_sigma")) {
    spec.noise_sigma = get_finite(obj["noise_sigma"], where + ".noise_sigma");
    if (spec.noise_sigma < 0.0) fail(where + ".noise_sigma", "must be non-negative");
  }
  if (obj.contains("eps_grid")) {
    const json& g = obj["eps_grid"];
    if (g.is_string()) {
      if (g.get<std::string>() != "auto")
        fail(where + ".eps_grid", "expected \"auto\" or an ascending array");
    } else {
      spec.eps_grid = get_double_list(g, where + ".eps_grid");
      if (spec.eps_grid.empty()) fail(where + ".eps_grid", "must be non-empty");
      for (std::size_t i = 0; i < spec.eps_grid.size(); ++i) {
        if (!(spec.eps_grid[i] > 0.0))
          fail(where + ".eps_grid[" + std::to_string(i) + "]", "must be positive");
        if (i > 0 && !(spec.eps_grid[i] > spec.eps_grid[i - 1]))
          fail(where + ".eps_grid", "must be strictly ascending");
      }
    }
  }
  if (obj.contains("plateau_tol")) {
    spec.plateau_tol = get_finite(obj["plateau_tol"], where + ".plateau_tol");
    if (!(spec.plateau_tol > 0.0)) fail(where + ".plateau_tol", "must be positive");
  }
  if (obj.contains("plateau_min_width")) {
    spec.plateau_min_width = get_finite(obj["plateau_min_width"], where + ".plateau_min_width");
    if (spec.plateau_min_width < 0.0) fail(where + ".plateau_min_width", "must be non-negative");
  }
  if (obj.contains("theiler")) {
    spec.theiler = get_int(obj["theiler"], where + ".theiler");
    if (spec.theiler < 0) fail(where + ".theiler", "must be non-negative");
  }
  return spec;
}

DemoSpec parse_demo(const json& obj) {
  const std::string where = "demo";
  get_object(obj, where);
  require_keys(obj, where, {"theta", "eps", "M"});
  DemoSpec spec;
  if (!obj.contains("theta")) fail(where, "missing required key \"theta\"");
  spec.theta = get_finite(obj["theta"], where + ".theta");
  if (!(spec.theta > 0.0)) fail(where + ".theta", "must be positive");
  if (!obj.contains("eps")) fail(where, "missing required key \"eps\"");
  spec.eps = get_double_list(obj["eps"], where + ".eps");
  if (spec.eps.empty()) fail(where + ".eps", "must be non-empty");
  for (std::size_t i = 0; i < spec.eps.size(); ++i)
    if (!(spec.eps[i] > 0.0 && spec.eps[i] < 1.0))
      fail(where + ".eps[" + std::to_string(i) + "]", "must lie in (0, 1)");
  if (!obj.contains("M")) fail(where, "missing required key \"M\"");
  spec.M = get_int_list(obj["M"], where + ".M");
  if (spec.M.empty()) fail(where + ".M", "must be non-empty");
  for (std::size_t i = 0; i < spec.M.size(); ++i)
    if (spec.M[i] < 1) fail(where + ".M[" + std::to_string(i) + "]", "must be at least 1");
  return spec;
}

json pair_json(const cplx& v) { return json::array({v.real(), v.imag()}); }

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("invalid JSON: ") + e.what());
  }
  get_object(doc, "top level");
  require_keys(doc, "top level",
               {"schema_version", "seed", "out", "system", "observation", "check", "sweep",
                "dimension", "demo"});
  if (!doc.contains("schema_version")) fail("top level", "missing required key \"schema_version\"");

  RunConfig cfg;
  cfg.schema_version = get_int(doc["schema_version"], "schema_version");
  if (cfg.schema_version != 1)
    fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version) +
                               " (expected 1)");
  if (doc.contains("seed")) cfg.seed = get_u64(doc["seed"], "seed");
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) fail("out", "expected a string");
    cfg.out = doc["out"].get<std::string>();
  }
  if (doc.contains("system")) cfg.system = parse_system(doc["system"]);
  if (doc.contains("observation")) cfg.observation = parse_observation(doc["observation"]);
  if (doc.contains("check")) cfg.check = parse_check(doc["check"]);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("dimension")) cfg.dimension = parse_dimension(doc["dimension"]);
  if (doc.contains("demo")) cfg.demo = parse_demo(doc["demo"]);

  if (cfg.observation && cfg.observation->mode == ObsChoice::explicit_direction && cfg.system &&
      static_cast<int>(cfg.observation->direction.size()) != cfg.system->N)
    fail("observation.direction", "length " + std::to_string(cfg.observation->direction.size()) +
                                      " does not match system.N = " +
                                      std::to_string(cfg.system->N));
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  doc["schema_version"] = cfg.schema_version;
  doc["seed"] = cfg.seed;
  if (!cfg.out.empty()) doc["out"] = cfg.out;

  if (cfg.system) {
    const SystemSpec& s = *cfg.system;
    json sys;
    sys["Ts"] = s.Ts;
    sys["N"] = s.N;
    sys["thetas"] = s.thetas;
    switch (s.eigvec_choice) {
      case EigvecChoice::canonical:
        sys["eigenvectors"] = "canonical";
        break;
      case EigvecChoice::gaussian:
        sys["eigenvectors"] = "gaussian";
        sys["eigenvector_seed"] = s.eigenvector_seed;
        break;
      case EigvecChoice::explicit_list: {
        json rows = json::array();
        for (const auto& vec : s.eigenvectors) {
          json row = json::array();
          for (const cplx& v : vec) row.push_back(pair_json(v));
          rows.push_back(std::move(row));
        }
        sys["eigenvectors"] = std::move(rows);
        break;
      }
    }
    if (s.eigvec_choice != EigvecChoice::gaussian && s.eigenvector_seed != 0)
      sys["eigenvector_seed"] = s.eigenvector_seed;
    if (!s.alpha0.empty()) {
      json a = json::array();
      for (const cplx& v : s.alpha0) a.push_back(pair_json(v));
      sys["alpha0"] = std::move(a);
    }
    doc["system"] = std::move(sys);
  }

  if (cfg.observation) {
    const ObservationSpec& o = *cfg.observation;
    json obs;
    switch (o.mode) {
      case ObsChoice::perturbed:
        obs["mode"] = "perturbed";
        obs["variance"] = o.variance;
        break;
      case ObsChoice::exact:
        obs["mode"] = "exact";
        break;
      case ObsChoice::explicit_direction:
        obs["mode"] = "explicit";
        obs["direction"] = o.direction;
        break;
    }
    doc["observation"] = std::move(obs);
  }

  if (cfg.check) {
    json c;
    c["M"] = cfg.check->M;
    if (!cfg.check->eps.empty()) c["eps"] = cfg.check->eps;
    doc["check"] = std::move(c);
  }

  if (cfg.sweep) {
    json sw;
    sw["M_start"] = cfg.sweep->M_start;
    sw["M_stop"] = cfg.sweep->M_stop;
    sw["M_step"] = cfg.sweep->M_step;
    sw["trials"] = cfg.sweep->trials;
    sw["t_max"] = cfg.sweep->t_max;
    doc["sweep"] = std::move(sw);
  }

  if (cfg.dimension) {
    const DimensionSpec& dm = *cfg.dimension;
    json dj;
    dj["K"] = dm.K;
    dj["M"] = dm.M_list;
    dj["noise_sigma"] = dm.noise_sigma;
    if (!dm.eps_grid.empty()) dj["eps_grid"] = dm.eps_grid;
    dj["plateau_tol"] = dm.plateau_tol;
    dj["plateau_min_width"] = dm.plateau_min_width;
    dj["theiler"] = dm.theiler;
    doc["dimension"] = std::move(dj);
  }

  if (cfg.demo) {
    json de;
    de["theta"] = cfg.demo->theta;
    de["eps"] = cfg.demo->eps;
    de["M"] = cfg.demo->M;
    doc["demo"] = std::move(de);
  }
  return doc.dump(2);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("cannot read config file: " + path);
  return parse_config(buf.str());
}

}  // namespace takens
