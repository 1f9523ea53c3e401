#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fgeo/structures.hpp"
#include "fgeo/tower.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` document with dotted sections and `#` comments.
/// Accessors record which keys were consumed so validation can flag unknown
/// keys with their line numbers.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_numbers(const std::string& key) const;

  int line_of(const std::string& key) const;
  /// Keys present in the document but never read through an accessor.
  std::vector<std::string> unconsumed() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  mutable std::set<std::string> consumed_;
  const std::string& raw(const std::string& key) const;
};

/// Tower from the documented schema: tower.levels, tower.level.<i>.dim,
/// tower.level.<i>.weights, tower.map.<j>to<i> (adjacent, row-major).
Tower tower_from_config(const ConfigMap& cfg, const std::string& prefix = "tower");

/// Polynomial Christoffel field from `<prefix>.dim` plus term lines
/// `<prefix>.term.<idx> = l i j coeff [m1 [m2]]`: each term contributes
/// coeff * u_{m1} * u_{m2} (degree given by token count) to Gamma(u)(e_i,e_j)_l.
ChristoffelField polynomial_christoffel_from_config(
    const ConfigMap& cfg, const std::string& prefix = "gamma");

struct RunConfig {
  std::string subcommand;
  std::string model = "flat";  // flat | matrix-group | ch | custom-polynomial
  double t_end = 1.0;
  long long steps = 1000;
  double tol = 1e-8;
  bool tol_set = false;  // distinguishes per-subcommand default tolerances
  unsigned long long seed = 42;
  std::string out_dir = ".";
  ConfigMap raw;
};

/// Parses and validates the document for one subcommand; fills defaults
/// (steps=1000, tol=1e-8, seed=42) and rejects violated invariants and, after
/// the run consumes its model keys, unknown keys.
RunConfig parse_run_config(const std::string& text, const std::string& subcommand);

}  // namespace fgeo
