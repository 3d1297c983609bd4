#include "l1net/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "l1net/textio.hpp"

namespace l1net {

namespace {

std::string describe(const std::string& key, int line) {
  if (line > 0) return "key '" + key + "' (line " + std::to_string(line) + ")";
  return "key '" + key + "'";
}

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error("config: " + describe(key, line) + ": " + message),
      key_(std::move(key)),
      line_(line) {}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(t, line_no, "expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(t, line_no, "empty key");
    if (cfg.entries_.count(key))
      throw ConfigError(key, line_no, "duplicate key");
    cfg.entries_[key] = Entry{value, line_no, false};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void Config::apply_override(const std::string& key_equals_value) {
  std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw ConfigError(key_equals_value, 0, "override must be key=value");
  std::string key = trim(key_equals_value.substr(0, eq));
  std::string value = trim(key_equals_value.substr(eq + 1));
  if (key.empty()) throw ConfigError(key_equals_value, 0, "empty override key");
  entries_[key] = Entry{value, 0, false};
}

const Config::Entry* Config::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

int Config::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

std::string Config::require_string(const std::string& key) {
  const Entry* e = find(key);
  if (!e) throw ConfigError(key, 0, "missing required key");
  return e->value;
}

double Config::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  double v;
  if (!try_parse_double(e->value, v))
    throw ConfigError(key, e->line, "expected a number, got '" + e->value + "'");
  return v;
}

double Config::require_double(const std::string& key) {
  const Entry* e = find(key);
  if (!e) throw ConfigError(key, 0, "missing required key");
  double v;
  if (!try_parse_double(e->value, v))
    throw ConfigError(key, e->line, "expected a number, got '" + e->value + "'");
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  long long v;
  if (!try_parse_long(e->value, v))
    throw ConfigError(key, e->line,
                      "expected an integer, got '" + e->value + "'");
  return v;
}

long long Config::require_int(const std::string& key) {
  const Entry* e = find(key);
  if (!e) throw ConfigError(key, 0, "missing required key");
  long long v;
  if (!try_parse_long(e->value, v))
    throw ConfigError(key, e->line,
                      "expected an integer, got '" + e->value + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  throw ConfigError(key, e->line, "expected true/false, got '" + e->value + "'");
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        std::vector<double> fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const std::string& part : split(e->value, ',')) {
    double v;
    if (!try_parse_double(trim(part), v))
      throw ConfigError(key, e->line, "bad list entry '" + part + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& key,
                                  std::vector<int> fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<int> out;
  for (const std::string& part : split(e->value, ',')) {
    long long v;
    if (!try_parse_long(trim(part), v))
      throw ConfigError(key, e->line, "bad list entry '" + part + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  const std::string& s = e->value;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError(key, e->line, "expected a seed, got '" + s + "'");
  return v;
}

void Config::reject_unused() const {
  for (const auto& [key, entry] : entries_)
    if (!entry.used) throw ConfigError(key, entry.line, "unknown key");
}

namespace {

// Wraps validation failures of a built object as ConfigError on a key.
template <typename Fn>
void validated(Config& cfg, const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, cfg.line_of(key), e.what());
  }
}

}  // namespace

TargetSpec build_target(Config& cfg) {
  TargetSpec target;
  target.name = cfg.get_string("target.name", "target");
  target.d = static_cast<int>(cfg.get_int("target.d", 1));
  // Atoms: space-separated `amplitude|w1,w2,...|phase` triples.
  std::string atoms = cfg.get_string("target.atoms", "1|1|0");
  int line = cfg.line_of("target.atoms");
  std::istringstream in(atoms);
  std::string tok;
  while (in >> tok) {
    std::vector<std::string> parts = split(tok, '|');
    if (parts.size() != 3)
      throw ConfigError("target.atoms", line,
                        "atom '" + tok + "' is not amplitude|freqs|phase");
    CosineAtom atom;
    if (!try_parse_double(parts[0], atom.amplitude))
      throw ConfigError("target.atoms", line, "bad amplitude in '" + tok + "'");
    for (const std::string& f : split(parts[1], ',')) {
      double v;
      if (!try_parse_double(trim(f), v))
        throw ConfigError("target.atoms", line, "bad frequency in '" + tok + "'");
      atom.frequency.push_back(v);
    }
    if (!try_parse_double(parts[2], atom.phase))
      throw ConfigError("target.atoms", line, "bad phase in '" + tok + "'");
    if (static_cast<int>(atom.frequency.size()) > target.d)
      throw ConfigError("target.atoms", line,
                        "atom frequency longer than target.d");
    atom.frequency.resize(static_cast<std::size_t>(target.d), 0.0);
    target.atoms.push_back(std::move(atom));
  }
  validated(cfg, "target.atoms", [&] { target.validate(); });
  return target;
}

NoiseSpec build_noise(Config& cfg) {
  std::string kind = cfg.get_string("noise.kind", "none");
  NoiseSpec noise;
  if (kind == "none") {
    noise = NoiseSpec::none();
  } else if (kind == "gaussian") {
    double tau = cfg.get_double("noise.tau", 1.0);
    double sd = cfg.get_double("noise.sd", tau);
    validated(cfg, "noise.sd", [&] { noise = NoiseSpec::gaussian(sd); });
    noise.tau = tau;
  } else if (kind == "laplace") {
    double scale = cfg.get_double("noise.scale", 1.0);
    validated(cfg, "noise.scale", [&] { noise = NoiseSpec::laplace(scale); });
    noise.tau = cfg.get_double("noise.tau", noise.tau);
  } else {
    throw ConfigError("noise.kind", cfg.line_of("noise.kind"),
                      "expected none, gaussian or laplace");
  }
  validated(cfg, "noise.tau", [&] { noise.validate(); });
  return noise;
}

DataDistribution build_distribution(Config& cfg, int d) {
  DataDistribution dist;
  dist.d = d;
  std::string kind = cfg.get_string("dist.kind", "uniform-box");
  if (kind == "uniform-box") {
    dist.kind = DistKind::UniformBox;
  } else if (kind == "standard-gaussian") {
    dist.kind = DistKind::StandardGaussian;
  } else {
    throw ConfigError("dist.kind", cfg.line_of("dist.kind"),
                      "expected uniform-box or standard-gaussian");
  }
  dist.M = cfg.get_double("dist.M", 1.0);
  validated(cfg, "dist.M", [&] { dist.validate(); });
  return dist;
}

TrainConfig build_train_config(Config& cfg, const std::string& prefix) {
  TrainConfig train;
  std::string loss = cfg.get_string(prefix + ".loss", "l1");
  validated(cfg, prefix + ".loss", [&] { train.loss = loss_from_string(loss); });
  train.max_iters = static_cast<int>(cfg.get_int(prefix + ".max_iters", 500));
  std::string step = cfg.get_string(prefix + ".step", "inv-sqrt:0.5");
  {
    std::vector<std::string> parts = split(step, ':');
    int line = cfg.line_of(prefix + ".step");
    if (parts.size() != 2)
      throw ConfigError(prefix + ".step", line,
                        "expected schedule:value, e.g. inv-sqrt:0.5");
    if (parts[0] == "constant")
      train.schedule = StepSchedule::Constant;
    else if (parts[0] == "inv-sqrt")
      train.schedule = StepSchedule::InvSqrt;
    else if (parts[0] == "polyak")
      train.schedule = StepSchedule::Polyak;
    else
      throw ConfigError(prefix + ".step", line,
                        "expected constant, inv-sqrt or polyak");
    if (!try_parse_double(parts[1], train.step))
      throw ConfigError(prefix + ".step", line, "bad step value");
  }
  train.polyak_target = cfg.get_double(prefix + ".polyak_target", 0.0);
  train.init_scale = cfg.get_double(prefix + ".init_scale", 1.0);
  train.restarts = static_cast<int>(cfg.get_int(prefix + ".restarts", 5));
  train.tolerance = cfg.get_double(prefix + ".tolerance", 0.0);
  train.plateau_window =
      static_cast<int>(cfg.get_int(prefix + ".plateau_window", 50));
  validated(cfg, prefix + ".max_iters", [&] { train.validate(); });
  return train;
}

ExperimentPlan build_plan(Config& cfg) {
  ExperimentPlan plan;
  plan.target = build_target(cfg);
  plan.noise = build_noise(cfg);
  plan.n_grid = cfg.get_ints("plan.n", {250, 500, 1000, 2000, 4000});
  plan.d_grid = cfg.get_ints("plan.d", {2, 4});
  std::string regime = cfg.get_string("plan.regime", "output-l1");
  validated(cfg, "plan.regime",
            [&] { plan.regime = regime_from_string(regime); });

  auto parse_policy = [&cfg](const std::string& key, const std::string& def,
                             auto& policy, auto fixed_kind, auto other_kind,
                             const char* other_name, bool other_has_value) {
    std::string text = cfg.get_string(key, def);
    int line = cfg.line_of(key);
    std::vector<std::string> parts = split(text, ':');
    if (parts[0] == "fixed") {
      if (parts.size() != 2)
        throw ConfigError(key, line, "expected fixed:<value>");
      policy.kind = fixed_kind;
      if (!try_parse_double(parts[1], policy.value))
        throw ConfigError(key, line, "bad policy value");
    } else if (parts[0] == other_name) {
      policy.kind = other_kind;
      if (other_has_value) {
        if (parts.size() != 2)
          throw ConfigError(key, line, std::string("expected ") + other_name +
                                           ":<value>");
        if (!try_parse_double(parts[1], policy.value))
          throw ConfigError(key, line, "bad policy value");
      } else if (parts.size() != 1) {
        throw ConfigError(key, line, std::string("expected plain ") + other_name);
      }
    } else {
      throw ConfigError(key, line, "unknown policy '" + parts[0] + "'");
    }
  };

  parse_policy("plan.v_policy", "min-admissible:1", plan.v_policy,
               VPolicy::Kind::Fixed, VPolicy::Kind::MinAdmissibleTimes,
               "min-admissible", true);
  parse_policy("plan.eta_policy", "rate-choice", plan.eta_policy,
               EtaPolicy::Kind::Fixed, EtaPolicy::Kind::RateChoice,
               "rate-choice", false);
  // r policy has three shapes, handle the third directly.
  {
    std::string text = cfg.get_string("plan.r_policy", "balanced");
    int line = cfg.line_of("plan.r_policy");
    std::vector<std::string> parts = split(text, ':');
    if (parts[0] == "fixed" && parts.size() == 2) {
      plan.r_policy.kind = RPolicy::Kind::Fixed;
      if (!try_parse_double(parts[1], plan.r_policy.value))
        throw ConfigError("plan.r_policy", line, "bad policy value");
    } else if (parts[0] == "balanced" && parts.size() == 1) {
      plan.r_policy.kind = RPolicy::Kind::BalancedChoice;
    } else if (parts[0] == "n-multiple" && parts.size() == 2) {
      plan.r_policy.kind = RPolicy::Kind::MultipleOfN;
      if (!try_parse_double(parts[1], plan.r_policy.value))
        throw ConfigError("plan.r_policy", line, "bad policy value");
    } else {
      throw ConfigError("plan.r_policy", line,
                        "expected fixed:<r>, balanced or n-multiple:<factor>");
    }
  }

  {
    std::string kind = cfg.get_string("dist.kind", "uniform-box");
    if (kind == "uniform-box")
      plan.dist_kind = DistKind::UniformBox;
    else if (kind == "standard-gaussian")
      plan.dist_kind = DistKind::StandardGaussian;
    else
      throw ConfigError("dist.kind", cfg.line_of("dist.kind"),
                        "expected uniform-box or standard-gaussian");
    plan.dist_M = cfg.get_double("dist.M", 1.0);
  }

  plan.replicates = static_cast<int>(cfg.get_int("plan.replicates", 5));
  plan.eval_samples =
      static_cast<int>(cfg.get_int("plan.eval_samples", 100000));
  plan.master_seed = cfg.get_seed("plan.seed", 1);
  plan.train = build_train_config(cfg, "train");
  if (cfg.has("loose.max_iters") || cfg.has("loose.step") ||
      cfg.has("loose.restarts") || cfg.has("loose.loss") ||
      cfg.has("loose.init_scale") || cfg.has("loose.polyak_target") ||
      cfg.has("loose.tolerance") || cfg.has("loose.plateau_window"))
    plan.loose_train = build_train_config(cfg, "loose");
  plan.loose_v_factor = cfg.get_double("plan.loose_v_factor", 1000.0);
  plan.overfit_r_factors =
      cfg.get_doubles("plan.overfit_r_factors", {0.25, 1.0, 4.0});
  plan.include_balanced_r_cell = cfg.get_bool("plan.include_balanced_r", true);
  plan.record_timings = cfg.get_bool("plan.timings", false);
  validated(cfg, "plan.n", [&] { plan.validate_common(); });
  return plan;
}

FunctionClassSpec build_class_spec(Config& cfg, int d) {
  FunctionClassSpec spec;
  std::string regime = cfg.get_string("class.regime", "output-l1");
  validated(cfg, "class.regime",
            [&] { spec.regime = regime_from_string(regime); });
  spec.V = cfg.get_double("class.V", 1.0);
  spec.r = static_cast<int>(cfg.get_int("class.r", 16));
  spec.d = d;
  if (spec.regime == Regime::JointL1)
    spec.eta = cfg.get_double("class.eta", 0.0);
  if (spec.regime == Regime::InputL0) {
    std::vector<int> support = cfg.get_ints("class.support", {});
    for (int& i : support) --i;  // config uses 1-based coordinates
    std::sort(support.begin(), support.end());
    spec.support = support;
    spec.k = static_cast<int>(support.size());
  }
  validated(cfg, "class.V", [&] { spec.validate(); });
  return spec;
}

BoundInputs build_bound_inputs(Config& cfg) {
  BoundInputs in;
  in.C = cfg.get_double("bounds.C", 0.0);
  in.V = cfg.get_double("bounds.V", 1.0);
  in.eta = cfg.get_double("bounds.eta", 0.0);
  in.tau = cfg.get_double("bounds.tau", 0.0);
  in.r = cfg.get_double("bounds.r", 1.0);
  in.d = cfg.get_double("bounds.d", 1.0);
  in.k = cfg.get_double("bounds.k", 1.0);
  in.n = cfg.get_double("bounds.n", 2.0);
  validated(cfg, "bounds.n", [&] { in.validate(); });
  return in;
}

}  // namespace l1net
