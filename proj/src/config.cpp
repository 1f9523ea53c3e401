#include "fgeo/config.hpp"

#include <charconv>
#include <sstream>

namespace fgeo {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key, int line) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key `" + key +
                      "`: expected a number, got `" + text + "`");
  }
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected `key = value`, got `" + stripped + "`");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key `" +
                        key + "`");
    cfg.values_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& ConfigMap::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key `" + key + "`");
  consumed_.insert(key);
  return it->second;
}

std::string ConfigMap::get_string(const std::string& key) const { return raw(key); }

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double ConfigMap::get_double(const std::string& key) const {
  return parse_double(raw(key), key, line_of(key));
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long ConfigMap::get_int(const std::string& key) const {
  const std::string& text = raw(key);
  try {
    size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_of(key)) + ": key `" + key +
                      "`: expected an integer, got `" + text + "`");
  }
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> ConfigMap::get_numbers(const std::string& key) const {
  std::istringstream in(raw(key));
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_double(token, key, line_of(key)));
  return out;
}

int ConfigMap::line_of(const std::string& key) const {
  auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

std::vector<std::string> ConfigMap::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : values_)
    if (!consumed_.count(key)) out.push_back(key);
  return out;
}

Tower tower_from_config(const ConfigMap& cfg, const std::string& prefix) {
  long long count = cfg.get_int(prefix + ".levels");
  if (count < 1) throw ConfigError("`" + prefix + ".levels` must be >= 1");
  std::vector<Level> levels;
  for (long long i = 0; i < count; ++i) {
    std::string base = prefix + ".level." + std::to_string(i);
    Level lv;
    lv.index = static_cast<int>(i);
    lv.dim = static_cast<int>(cfg.get_int(base + ".dim"));
    if (lv.dim < 1) throw ConfigError("`" + base + ".dim` must be >= 1");
    if (cfg.has(base + ".weights")) {
      std::vector<double> w = cfg.get_numbers(base + ".weights");
      if (static_cast<int>(w.size()) != lv.dim)
        throw ConfigError("`" + base + ".weights` needs " + std::to_string(lv.dim) +
                          " entries");
      lv.seminorm_weights = Eigen::Map<const Vec>(w.data(), lv.dim);
    } else {
      lv.seminorm_weights = Vec::Ones(lv.dim);
    }
    levels.push_back(std::move(lv));
  }
  std::vector<Mat> adjacent;
  for (long long i = 0; i + 1 < count; ++i) {
    std::string key = prefix + ".map." + std::to_string(i + 1) + "to" +
                      std::to_string(i);
    std::vector<double> entries = cfg.get_numbers(key);
    int rows = levels[i].dim, cols = levels[i + 1].dim;
    if (static_cast<int>(entries.size()) != rows * cols)
      throw ConfigError("`" + key + "` needs " + std::to_string(rows * cols) +
                        " row-major entries");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = entries[r * cols + c];
    adjacent.push_back(std::move(m));
  }
  return Tower(std::move(levels), std::move(adjacent));
}

ChristoffelField polynomial_christoffel_from_config(const ConfigMap& cfg,
                                                    const std::string& prefix) {
  int dim = static_cast<int>(cfg.get_int(prefix + ".dim"));
  if (dim < 1) throw ConfigError("`" + prefix + ".dim` must be >= 1");
  struct Term {
    int l, i, j;
    double coeff;
    int m1 = -1, m2 = -1;  // -1 means absent factor
  };
  std::vector<Term> terms;
  for (int idx = 0;; ++idx) {
    std::string key = prefix + ".term." + std::to_string(idx);
    if (!cfg.has(key)) break;
    std::vector<double> nums = cfg.get_numbers(key);
    if (nums.size() < 4 || nums.size() > 6)
      throw ConfigError("`" + key + "`: expected `l i j coeff [m1 [m2]]`");
    Term t;
    t.l = static_cast<int>(nums[0]);
    t.i = static_cast<int>(nums[1]);
    t.j = static_cast<int>(nums[2]);
    t.coeff = nums[3];
    if (nums.size() > 4) t.m1 = static_cast<int>(nums[4]);
    if (nums.size() > 5) t.m2 = static_cast<int>(nums[5]);
    for (int c : {t.l, t.i, t.j, std::max(t.m1, 0), std::max(t.m2, 0)})
      if (c < 0 || c >= dim)
        throw ConfigError("`" + key + "`: component index out of range for dim " +
                          std::to_string(dim));
    terms.push_back(t);
  }
  bool symmetric = cfg.get_int(prefix + ".symmetric", 1) != 0;
  ChristoffelField gamma;
  gamma.chart_id = "config-polynomial";
  gamma.dim = dim;
  gamma.symmetric = symmetric;
  gamma.gamma = [dim, terms, symmetric](const Vec& u, const Vec& a,
                                        const Vec& b) -> Vec {
    Vec out = Vec::Zero(dim);
    for (const Term& t : terms) {
      double factor = t.coeff;
      if (t.m1 >= 0) factor *= u[t.m1];
      if (t.m2 >= 0) factor *= u[t.m2];
      out[t.l] += factor * a[t.i] * b[t.j];
      if (symmetric && t.i != t.j) out[t.l] += factor * a[t.j] * b[t.i];
    }
    return out;
  };
  return gamma;
}

RunConfig parse_run_config(const std::string& text, const std::string& subcommand) {
  RunConfig rc;
  rc.raw = ConfigMap::parse(text);
  rc.subcommand = subcommand;
  rc.model = rc.raw.get_string("model", "flat");
  rc.t_end = rc.raw.get_double("t_end", 1.0);
  rc.steps = rc.raw.get_int("steps", 1000);
  rc.tol_set = rc.raw.has("tol");
  rc.tol = rc.raw.get_double("tol", 1e-8);
  rc.seed = static_cast<unsigned long long>(rc.raw.get_int("seed", 42));
  rc.out_dir = rc.raw.get_string("out", ".");
  if (rc.steps < 1)
    throw ConfigError("line " + std::to_string(rc.raw.line_of("steps")) +
                      ": `steps` must be >= 1");
  if (rc.t_end <= 0.0)
    throw ConfigError("line " + std::to_string(rc.raw.line_of("t_end")) +
                      ": `t_end` must be > 0");
  if (rc.tol <= 0.0)
    throw ConfigError("line " + std::to_string(rc.raw.line_of("tol")) +
                      ": `tol` must be > 0");
  return rc;
}

}  // namespace fgeo
