#include "lghmc/runconfig.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lghmc/errors.hpp"

namespace lghmc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(int line, const std::string& key, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": value for '" + key + "' " + what);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) bad_value(line, key, "has trailing characters");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(line, key, "is not a number");
  }
}

long long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) bad_value(line, key, "has trailing characters");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(line, key, "is not an integer");
  }
}

std::uint64_t parse_u64(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) bad_value(line, key, "has trailing characters");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(line, key, "is not an unsigned integer");
  }
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(line, key, "must be true or false");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string integrator_name(Integrator integrator) {
  return integrator == Integrator::leapfrog ? "leapfrog" : "campostrini";
}

std::string strategy_name(ExpStrategy strategy) {
  switch (strategy) {
    case ExpStrategy::automatic:
      return "automatic";
    case ExpStrategy::taylor_only:
      return "taylor-only";
    case ExpStrategy::rodrigues:
      return "rodrigues";
    default:
      return "schur-parlett";
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty value for '" + key + "'");

    if (key == "space.name") {
      cfg.space_name = value;
    } else if (key == "space.n") {
      cfg.space_n = static_cast<int>(parse_int(value, line, key));
    } else if (key == "potential.name") {
      cfg.potential_name = value;
    } else if (key == "hmc.dt") {
      cfg.hmc.dt = parse_double(value, line, key);
      if (cfg.hmc.dt <= 0.0) bad_value(line, key, "must be positive");
    } else if (key == "hmc.tau") {
      cfg.hmc.tau = parse_double(value, line, key);
      if (cfg.hmc.tau <= 0.0) bad_value(line, key, "must be positive");
    } else if (key == "hmc.n_samples") {
      cfg.hmc.n_samples = parse_int(value, line, key);
      if (cfg.hmc.n_samples < 1) bad_value(line, key, "must be at least 1");
    } else if (key == "hmc.seed") {
      cfg.hmc.seed = parse_u64(value, line, key);
    } else if (key == "hmc.integrator") {
      if (value == "leapfrog")
        cfg.hmc.integrator = Integrator::leapfrog;
      else if (value == "campostrini")
        cfg.hmc.integrator = Integrator::campostrini;
      else
        bad_value(line, key, "must be leapfrog or campostrini");
    } else if (key == "hmc.randomize_length") {
      cfg.hmc.randomize_length = parse_bool(value, line, key);
    } else if (key == "hmc.reproject_every") {
      cfg.hmc.reproject_every = parse_int(value, line, key);
      if (cfg.hmc.reproject_every < 0) bad_value(line, key, "must be >= 0");
    } else if (key == "hmc.split_normal_step") {
      cfg.hmc.split_normal_step = parse_bool(value, line, key);
    } else if (key == "hmc.n_chains") {
      cfg.n_chains = static_cast<int>(parse_int(value, line, key));
      if (cfg.n_chains < 1) bad_value(line, key, "must be at least 1");
    } else if (key == "exp.taylor_degree") {
      cfg.hmc.exp.taylor_degree = static_cast<int>(parse_int(value, line, key));
      if (cfg.hmc.exp.taylor_degree < 2) bad_value(line, key, "must be at least 2");
    } else if (key == "exp.epsilon") {
      cfg.hmc.exp.epsilon = parse_double(value, line, key);
      if (cfg.hmc.exp.epsilon <= 0.0) bad_value(line, key, "must be positive");
    } else if (key == "exp.alpha") {
      cfg.hmc.exp.alpha = parse_double(value, line, key);
      if (cfg.hmc.exp.alpha <= 0.0 || cfg.hmc.exp.alpha >= 1.0)
        bad_value(line, key, "must be in (0, 1)");
    } else if (key == "exp.strategy") {
      if (value == "automatic")
        cfg.hmc.exp.strategy = ExpStrategy::automatic;
      else if (value == "taylor-only")
        cfg.hmc.exp.strategy = ExpStrategy::taylor_only;
      else if (value == "rodrigues")
        cfg.hmc.exp.strategy = ExpStrategy::rodrigues;
      else if (value == "schur-parlett")
        cfg.hmc.exp.strategy = ExpStrategy::schur_parlett;
      else
        bad_value(line, key, "must be automatic, taylor-only, rodrigues, or schur-parlett");
    } else if (key == "output.dir") {
      cfg.output_dir = value;
    } else if (key == "output.formats") {
      cfg.write_csv = false;
      cfg.write_json = false;
      for (const std::string& f : split_list(value)) {
        if (f == "csv")
          cfg.write_csv = true;
        else if (f == "json")
          cfg.write_json = true;
        else
          bad_value(line, key, "recognizes only csv and json");
      }
      if (!cfg.write_csv && !cfg.write_json) bad_value(line, key, "must name a format");
    } else if (key == "scan.step_sizes") {
      cfg.scan_step_sizes.clear();
      for (const std::string& f : split_list(value)) {
        const double dt = parse_double(f, line, key);
        if (dt <= 0.0) bad_value(line, key, "must list positive step sizes");
        cfg.scan_step_sizes.push_back(dt);
      }
      if (cfg.scan_step_sizes.empty()) bad_value(line, key, "must list step sizes");
    } else if (key == "geodesic.momentum") {
      cfg.geodesic_momentum.clear();
      for (const std::string& f : split_list(value))
        cfg.geodesic_momentum.push_back(parse_double(f, line, key));
      if (cfg.geodesic_momentum.empty()) bad_value(line, key, "must list coefficients");
    } else if (key == "bench.dims") {
      cfg.bench_dims.clear();
      for (const std::string& f : split_list(value)) {
        const int d = static_cast<int>(parse_int(f, line, key));
        if (d < 2 || d > 5) bad_value(line, key, "supports dimensions 2..5");
        cfg.bench_dims.push_back(d);
      }
      if (cfg.bench_dims.empty()) bad_value(line, key, "must list dimensions");
    } else if (key == "bench.n_random") {
      cfg.bench_n_random = static_cast<int>(parse_int(value, line, key));
      if (cfg.bench_n_random < 1) bad_value(line, key, "must be at least 1");
    } else if (key == "bench.max_norm") {
      cfg.bench_max_norm = parse_double(value, line, key);
      if (cfg.bench_max_norm <= 0.0) bad_value(line, key, "must be positive");
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "space.name = " << cfg.space_name << "\n";
  out << "space.n = " << cfg.space_n << "\n";
  out << "potential.name = " << cfg.potential_name << "\n";
  out << "hmc.dt = " << fmt_real(cfg.hmc.dt) << "\n";
  out << "hmc.tau = " << fmt_real(cfg.hmc.tau) << "\n";
  out << "hmc.n_samples = " << cfg.hmc.n_samples << "\n";
  out << "hmc.seed = " << cfg.hmc.seed << "\n";
  out << "hmc.integrator = " << integrator_name(cfg.hmc.integrator) << "\n";
  out << "hmc.randomize_length = " << (cfg.hmc.randomize_length ? "true" : "false") << "\n";
  out << "hmc.reproject_every = " << cfg.hmc.reproject_every << "\n";
  out << "hmc.split_normal_step = " << (cfg.hmc.split_normal_step ? "true" : "false") << "\n";
  out << "hmc.n_chains = " << cfg.n_chains << "\n";
  out << "exp.taylor_degree = " << cfg.hmc.exp.taylor_degree << "\n";
  out << "exp.epsilon = " << fmt_real(cfg.hmc.exp.epsilon) << "\n";
  out << "exp.alpha = " << fmt_real(cfg.hmc.exp.alpha) << "\n";
  out << "exp.strategy = " << strategy_name(cfg.hmc.exp.strategy) << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  std::string formats;
  if (cfg.write_csv) formats = "csv";
  if (cfg.write_json) formats += formats.empty() ? "json" : ",json";
  out << "output.formats = " << formats << "\n";
  out << "scan.step_sizes = ";
  for (std::size_t i = 0; i < cfg.scan_step_sizes.size(); ++i)
    out << (i ? "," : "") << fmt_real(cfg.scan_step_sizes[i]);
  out << "\n";
  if (!cfg.geodesic_momentum.empty()) {
    out << "geodesic.momentum = ";
    for (std::size_t i = 0; i < cfg.geodesic_momentum.size(); ++i)
      out << (i ? "," : "") << fmt_real(cfg.geodesic_momentum[i]);
    out << "\n";
  }
  out << "bench.dims = ";
  for (std::size_t i = 0; i < cfg.bench_dims.size(); ++i)
    out << (i ? "," : "") << cfg.bench_dims[i];
  out << "\n";
  out << "bench.n_random = " << cfg.bench_n_random << "\n";
  out << "bench.max_norm = " << fmt_real(cfg.bench_max_norm) << "\n";
  return out.str();
}

}  // namespace lghmc
