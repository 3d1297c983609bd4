#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "l1net/experiments.hpp"

namespace l1net {

// Configuration problem: carries the offending key and the 1-based line
// number (0 for command-line overrides). Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

// Flat `key = value` text with # comments; dotted key prefixes act as
// sections. Overrides replace file values and every key must be consumed by
// the command that reads the config.
class Config {
 public:
  static Config parse_text(const std::string& text);
  static Config parse_file(const std::string& path);

  void apply_override(const std::string& key_equals_value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  double require_double(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  long long require_int(const std::string& key);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback);
  std::vector<int> get_ints(const std::string& key, std::vector<int> fallback);
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback);

  int line_of(const std::string& key) const;  // 0 when unknown/override

  // Throws ConfigError on the first key never read by the command.
  void reject_unused() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::map<std::string, Entry> entries_;

  const Entry* find(const std::string& key) const;
};

// Builders shared by the CLI commands. Each validates the produced object
// and rephrases violations as ConfigError with the key path.
TargetSpec build_target(Config& cfg);
NoiseSpec build_noise(Config& cfg);
DataDistribution build_distribution(Config& cfg, int d);
TrainConfig build_train_config(Config& cfg, const std::string& prefix);
ExperimentPlan build_plan(Config& cfg);
FunctionClassSpec build_class_spec(Config& cfg, int d);
BoundInputs build_bound_inputs(Config& cfg);

}  // namespace l1net
