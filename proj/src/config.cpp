#include "nopo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nopo/errors.hpp"

namespace nopo {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_with_units(const std::string& text, const std::string& field,
                        const std::map<std::string, double>& units,
                        const char* kind) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument(field + ": empty value");
  char* end = nullptr;
  const double value = std::strtod(t.c_str(), &end);
  if (end == t.c_str()) {
    throw InvalidArgument(field + ": cannot parse number from '" + text + "'");
  }
  const std::string unit = trim(std::string(end));
  if (unit.empty()) return value;
  const auto it = units.find(unit);
  if (it == units.end()) {
    throw InvalidArgument(field + ": unknown " + kind + " unit '" + unit + "'");
  }
  return value * it->second;
}

double parse_plain(const std::string& text, const std::string& field) {
  return parse_with_units(text, field, {}, "dimensionless");
}

bool parse_bool(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidArgument(field + ": expected a boolean, got '" + text + "'");
}

}  // namespace

double parse_rate(const std::string& text, const std::string& field) {
  return parse_with_units(text, field,
                          {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}},
                          "rate");
}

double parse_time(const std::string& text, const std::string& field) {
  return parse_with_units(
      text, field, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}},
      "time");
}

void apply_override(ExperimentSpec& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("override '" + assignment + "' is not key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));

  if (key == "model") {
    spec.model = value;
  } else if (key == "ring.n") {
    const double n = parse_plain(value, key);
    if (n < 1 || n != std::floor(n)) {
      throw InvalidArgument("ring.n: expected a positive integer");
    }
    spec.ring_n = static_cast<std::size_t>(n);
  } else if (key == "ring.j") {
    spec.ring_j = parse_plain(value, key);
  } else if (key == "rates.gamma_inj") {
    spec.gamma_inj = parse_rate(value, key);
  } else if (key == "rates.transmittance") {
    spec.transmittance = parse_plain(value, key);
  } else if (key == "rates.round_trip") {
    spec.round_trip = parse_time(value, key);
  } else if (key == "rates.d_theta") {
    spec.d_theta = parse_rate(value, key);
  } else if (key == "noise.d") {
    spec.noise_d = parse_rate(value, key);
  } else if (key == "opo.gamma_s") {
    spec.opo_gamma_s = parse_rate(value, key);
  } else if (key == "opo.pump_ratio") {
    spec.opo_pump_ratio = parse_plain(value, key);
  } else if (key == "opo.n_ss") {
    spec.opo_n_ss = parse_plain(value, key);
  } else if (key == "opo.rate_separation") {
    spec.opo_rate_separation = parse_plain(value, key);
  } else if (key == "sweep.beta_set") {
    spec.beta_set.clear();
    for (const auto& item : split_list(value)) {
      spec.beta_set.push_back(parse_plain(item, key));
    }
  } else if (key == "sweep.vary") {
    spec.sweep_vary = value;
  } else if (key == "times.t_a") {
    spec.t_a.clear();
    for (const auto& item : split_list(value)) {
      spec.t_a.push_back(parse_time(item, key));
    }
  } else if (key == "run.n_trajectories") {
    spec.n_trajectories = static_cast<int>(parse_plain(value, key));
  } else if (key == "run.dt") {
    spec.dt = value == "auto" ? 0.0 : parse_time(value, key);
  } else if (key == "run.seed") {
    spec.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "run.threads") {
    spec.threads = static_cast<int>(parse_plain(value, key));
  } else if (key == "run.init") {
    spec.init = value;
  } else if (key == "run.paper_scale") {
    spec.paper_scale = parse_bool(value, key);
  } else if (key == "output.dir") {
    spec.out_dir = value;
  } else if (key == "output.samples") {
    spec.samples_filename = value;
  } else if (key == "output.summary") {
    spec.summary_filename = value;
  } else if (key == "mcmc.sweeps") {
    spec.mcmc_sweeps = static_cast<int>(parse_plain(value, key));
  } else if (key == "mcmc.burn_in") {
    spec.mcmc_burn_in = static_cast<int>(parse_plain(value, key));
  } else if (key == "mcmc.thin") {
    spec.mcmc_thin = static_cast<int>(parse_plain(value, key));
  } else if (key == "mcmc.width") {
    spec.mcmc_width = parse_plain(value, key);
  } else if (key == "mcmc.auto_tune") {
    spec.mcmc_auto_tune = parse_bool(value, key);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(spec, line);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

double ExperimentSpec::resolved_gamma_inj() const {
  if (gamma_inj) return *gamma_inj;
  if (transmittance) {
    if (!(*transmittance >= 0.0 && *transmittance <= 1.0)) {
      throw InvalidArgument("rates.transmittance: must lie in [0, 1]");
    }
    return 2.0 * std::sqrt(*transmittance) / round_trip;
  }
  throw InvalidArgument("rates.gamma_inj: required (or rates.transmittance)");
}

void ExperimentSpec::validate() const {
  if (model != "kuramoto" && model != "split" && model != "full" &&
      model != "mcmc") {
    throw InvalidArgument("model: expected kuramoto|split|full|mcmc, got '" +
                          model + "'");
  }
  if (ring_n < 3) throw InvalidArgument("ring.n: need at least 3 spins");
  if (!std::isfinite(ring_j)) throw InvalidArgument("ring.j: non-finite");

  const bool sweep_gamma = !beta_set.empty() && sweep_vary == "gamma_inj";
  if (sweep_vary != "d_theta" && sweep_vary != "gamma_inj") {
    throw InvalidArgument("sweep.vary: expected d_theta|gamma_inj");
  }
  for (double b : beta_set) {
    if (!(b > 0.0)) throw InvalidArgument("sweep.beta_set: entries must be > 0");
  }

  if (model != "mcmc") {
    if (gamma_inj && transmittance) {
      throw InvalidArgument(
          "rates.gamma_inj and rates.transmittance are mutually exclusive");
    }
    if (sweep_gamma) {
      if (gamma_inj || transmittance) {
        throw InvalidArgument(
            "rates.gamma_inj: must be omitted when sweep.vary = gamma_inj");
      }
    } else {
      resolved_gamma_inj();  // throws when absent
    }
    if (!(round_trip > 0.0)) throw InvalidArgument("rates.round_trip: must be > 0");

    if (model == "kuramoto") {
      if (noise_d) {
        throw InvalidArgument("noise.d: only meaningful for split/full models");
      }
      if (beta_set.empty() && !d_theta) {
        throw InvalidArgument("rates.d_theta: required without a beta sweep");
      }
      if (!beta_set.empty() && sweep_vary == "d_theta" && d_theta) {
        throw InvalidArgument(
            "rates.d_theta: must be omitted when sweep.vary = d_theta");
      }
      if (sweep_gamma && !d_theta) {
        throw InvalidArgument(
            "rates.d_theta: required when sweep.vary = gamma_inj");
      }
    } else {
      if (d_theta) {
        throw InvalidArgument(
            "rates.d_theta: use noise.d for the split/full models");
      }
      if (beta_set.empty() && !noise_d) {
        throw InvalidArgument("noise.d: required without a beta sweep");
      }
      if (!beta_set.empty() && sweep_vary == "d_theta" && noise_d) {
        throw InvalidArgument("noise.d: must be omitted when sweep.vary = d_theta");
      }
      if (sweep_gamma && !noise_d) {
        throw InvalidArgument("noise.d: required when sweep.vary = gamma_inj");
      }
      if (!(opo_gamma_s > 0.0)) throw InvalidArgument("opo.gamma_s: must be > 0");
      if (!(opo_pump_ratio > 1.0)) {
        throw InvalidArgument("opo.pump_ratio: must exceed 1 (above threshold)");
      }
      if (!(opo_n_ss > 0.0)) throw InvalidArgument("opo.n_ss: must be > 0");
    }

    if (t_a.empty()) throw InvalidArgument("times.t_a: at least one time");
    for (std::size_t i = 0; i < t_a.size(); ++i) {
      if (!(t_a[i] > 0.0)) throw InvalidArgument("times.t_a: entries must be > 0");
      if (i > 0 && !(t_a[i] > t_a[i - 1])) {
        throw InvalidArgument("times.t_a: must be sorted increasing");
      }
    }
    if (n_trajectories < 1) {
      throw InvalidArgument("run.n_trajectories: must be >= 1");
    }
    if (init != "uniform" && init != "aligned") {
      throw InvalidArgument("run.init: expected uniform|aligned");
    }
  } else {
    if (beta_set.empty() && !(gamma_inj && d_theta)) {
      throw InvalidArgument(
          "sweep.beta_set: required for model = mcmc (or give both rates)");
    }
    if (mcmc_sweeps < 1) throw InvalidArgument("mcmc.sweeps: must be >= 1");
    if (mcmc_thin < 1) throw InvalidArgument("mcmc.thin: must be >= 1");
    if (!(mcmc_width > 0.0 && mcmc_width <= 3.15)) {
      throw InvalidArgument("mcmc.width: must lie in (0, pi]");
    }
  }
  if (threads < 0) throw InvalidArgument("run.threads: must be >= 0");
}

std::string config_key_reference() {
  return R"(model = kuramoto|split|full|mcmc
ring.n = 256                   # spins on the ring
ring.j = 1.0                   # uniform coupling
rates.gamma_inj = 13.6 kHz     # or rates.transmittance (+ rates.round_trip)
rates.transmittance = 1.156e-3 # gamma_inj = 2 sqrt(T)/round_trip
rates.round_trip = 5 us
rates.d_theta = 0.44 kHz       # kuramoto; omit when swept
noise.d = 4.4 kHz              # split/full field diffusion (photons*Hz)
opo.gamma_s = 100 kHz          # split/full signal decay rate
opo.pump_ratio = 2.0
opo.n_ss = 10                  # target steady-state photon number
opo.rate_separation = 1000     # gamma_p = gamma_i = separation * gamma_s
sweep.beta_set = 2.8, 5.7, 15, 31
sweep.vary = d_theta|gamma_inj # which rate realises each beta_set
times.t_a = 1 ms, 10 ms, 100 ms, 1 s
run.n_trajectories = 200
run.dt = auto                  # or an explicit time, e.g. 3e-7 s
run.seed = 0
run.threads = 0                # 0 = NOPOSIM_THREADS env or hardware
run.init = uniform|aligned
run.paper_scale = false        # N = 5000, 1000 trajectories
output.dir = out
output.samples = samples.csv   # per sweep point: samples_b<i>.csv
output.summary = summary.json
mcmc.sweeps = 20000
mcmc.burn_in = -1              # -1 = default rule
mcmc.thin = 10
mcmc.width = 1.0
mcmc.auto_tune = true
)";
}

}  // namespace nopo
