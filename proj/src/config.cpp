// Copyright 2026 The ppdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppdiff/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ppdiff::cli {

namespace {

namespace pt = boost::property_tree;

// Drops "; ..." and "# ..." that follow whitespace inside a line.
std::string strip_inline_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    for (std::size_t i = 1; i < line.size(); ++i)
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    out += line;
    out += '\n';
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"generator", {"kind", "dim", "a", "p", "eta", "rho", "seed"}},
      {"windows", {"half_widths", "n_small", "n_large"}},
      {"test_function", {"width"}},
      {"scan", {"lambda_min", "lambda_max", "spacing"}},
      {"thresholds",
       {"bragg", "diffuse", "margin", "pure_point", "pure_point_after", "freq_tol", "coefficient_bound"}},
      {"autocorr", {"r_max", "t_max", "t_spacing"}},
      {"almost_periods",
       {"observable", "scan", "overlap", "per_unit", "epsilon_factor", "clamp_lo", "clamp_hi", "psi_shift"}},
      {"spectral", {"lambdas"}},
      {"rule", {"kind", "radius", "predicate", "count", "gap", "weight", "weight_lo", "weight_hi", "shifts"}},
      {"output", {"dir"}},
  };
  return keys;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) return fallback;
  std::istringstream in(*v);
  T x;
  if (!(in >> x) || !(in >> std::ws).eof()) throw ConfigError("cli", "cannot parse '" + key + "' = '" + *v + "'");
  return x;
}

template <>
std::string get(const pt::ptree& tree, const std::string& key, std::string fallback) {
  return tree.get<std::string>(key, fallback);
}

std::vector<double> get_list(const pt::ptree& tree, const std::string& key, std::vector<double> fallback) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) return fallback;
  std::istringstream in(*v);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!(in >> std::ws).eof() || out.empty()) throw ConfigError("cli", "cannot parse list '" + key + "' = '" + *v + "'");
  return out;
}

/// "count:x[,y] count:x[,y] ..."
std::map<long, Point<double>> parse_shifts(const std::string& text, int dim) {
  std::map<long, Point<double>> shifts;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("cli", "shift entry '" + item + "' lacks ':'");
    std::vector<double> v;
    std::istringstream parts(item.substr(colon + 1));
    std::string c;
    while (std::getline(parts, c, ',')) v.push_back(std::stod(c));
    if (static_cast<int>(v.size()) != dim) throw ConfigError("cli", "shift entry '" + item + "' has wrong dimension");
    Point<double> p(dim);
    for (int i = 0; i < dim; ++i) p[i] = v[static_cast<std::size_t>(i)];
    shifts[std::stol(item.substr(0, colon))] = p;
  }
  return shifts;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

ScanGrid<double> ExperimentConfig::grid() const {
  const int d = generator.dim;
  return ScanGrid<double>{constant_point(d, scan.lambda_min), constant_point(d, scan.lambda_max), scan.spacing};
}

void ExperimentConfig::validate() const {
  generator.validate();
  if (half_widths.empty()) throw ConfigError("cli", "half_widths must not be empty");
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    if (!(half_widths[i] > 0.0)) throw ConfigError("cli", "half_widths must be positive");
    if (i > 0 && !(half_widths[i] > half_widths[i - 1])) throw ConfigError("cli", "half_widths must increase strictly");
  }
  if (n_small < 1 || n_large > half_widths.size() || !(n_small < n_large))
    throw ConfigError("cli", "need 1 <= n_small < n_large <= number of windows");
  if (!(tent_width > 0.0)) throw ConfigError("cli", "tent width must be positive");
  if (!(scan.lambda_min < scan.lambda_max) || !(scan.spacing > 0.0))
    throw ConfigError("cli", "scan needs lambda_min < lambda_max and a positive spacing");
  thresholds.validate();
  if (!(theta_pp > 0.0 && theta_pp <= 1.0) || !(theta_pp_after > 0.0 && theta_pp_after <= 1.0))
    throw ConfigError("cli", "pure point thresholds must lie in (0, 1]");
  if (!(freq_tol > 0.0)) throw ConfigError("cli", "freq_tol must be positive");
  if (coefficient_bound < 1) throw ConfigError("cli", "coefficient_bound must be positive");
  if (!(autocorr.r_max > 0.0) || !(autocorr.t_max >= 0.0) || !(autocorr.t_spacing > 0.0))
    throw ConfigError("cli", "autocorr ranges must be positive");
  const auto& ap = almost_periods;
  if (ap.observable != "sampling" && ap.observable != "composed" && ap.observable != "product")
    throw ConfigError("cli", "almost_periods.observable must be sampling, composed or product");
  if (!(ap.scan > 0.0) || !(ap.overlap >= 0.0) || ap.per_unit < 1 || !(ap.epsilon_factor > 0.0))
    throw ConfigError("cli", "almost_periods settings out of range");
  if (!(ap.clamp_lo <= ap.clamp_hi)) throw ConfigError("cli", "clamp_lo must not exceed clamp_hi");
  if (rule) rule->validate(generator.dim);
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(strip_inline_comments(text));
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cli", e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("cli", "unknown section [" + section + "]");
    if (body.empty()) throw ConfigError("cli", "key '" + section + "' outside a section");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("cli", "unknown key '" + key + "' in [" + section + "]");
  }
  const pt::ptree empty;
  auto section = [&](const char* name) -> const pt::ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  ExperimentConfig c;
  c.hash = fnv1a(text);
  const auto& g = section("generator");
  c.generator.kind = generator_kind_from_string(get<std::string>(g, "kind", "lattice"));
  c.generator.dim = get(g, "dim", c.generator.dim);
  c.generator.a = get(g, "a", c.generator.a);
  c.generator.p = get(g, "p", c.generator.p);
  c.generator.eta = get(g, "eta", c.generator.eta);
  c.generator.rho = get(g, "rho", c.generator.rho);
  c.generator.seed = get<std::uint64_t>(g, "seed", c.generator.seed);

  const auto& w = section("windows");
  c.half_widths = get_list(w, "half_widths", c.half_widths);
  c.n_small = get<std::size_t>(w, "n_small", c.n_small);
  c.n_large = get<std::size_t>(w, "n_large", c.half_widths.size());

  c.tent_width = get(section("test_function"), "width", c.tent_width);

  const auto& s = section("scan");
  c.scan.lambda_min = get(s, "lambda_min", c.scan.lambda_min);
  c.scan.lambda_max = get(s, "lambda_max", c.scan.lambda_max);
  c.scan.spacing = get(s, "spacing", c.scan.spacing);

  const auto& t = section("thresholds");
  c.thresholds.bragg = get(t, "bragg", c.thresholds.bragg);
  c.thresholds.diffuse = get(t, "diffuse", c.thresholds.diffuse);
  c.thresholds.margin = get(t, "margin", c.thresholds.margin);
  c.theta_pp = get(t, "pure_point", c.theta_pp);
  c.theta_pp_after = get(t, "pure_point_after", c.theta_pp_after);
  c.freq_tol = get(t, "freq_tol", c.freq_tol);
  c.coefficient_bound = get(t, "coefficient_bound", c.coefficient_bound);

  const auto& a = section("autocorr");
  c.autocorr.r_max = get(a, "r_max", c.autocorr.r_max);
  c.autocorr.t_max = get(a, "t_max", c.autocorr.t_max);
  c.autocorr.t_spacing = get(a, "t_spacing", c.autocorr.t_spacing);

  const auto& p = section("almost_periods");
  auto& ap = c.almost_periods;
  ap.observable = get<std::string>(p, "observable", ap.observable);
  ap.scan = get(p, "scan", ap.scan);
  ap.overlap = get(p, "overlap", ap.overlap);
  ap.per_unit = get(p, "per_unit", ap.per_unit);
  ap.epsilon_factor = get(p, "epsilon_factor", ap.epsilon_factor);
  ap.clamp_lo = get(p, "clamp_lo", ap.clamp_lo);
  ap.clamp_hi = get(p, "clamp_hi", ap.clamp_hi);
  ap.psi_shift = get(p, "psi_shift", ap.psi_shift);

  c.spectral_lambdas = get_list(section("spectral"), "lambdas", c.spectral_lambdas);

  if (const auto r = tree.get_child_optional("rule")) {
    LocalRule<double> rule;
    rule.kind = rule_kind_from_string(get<std::string>(*r, "kind", "thinning"));
    rule.radius = get(*r, "radius", rule.radius);
    rule.predicate = count_predicate_from_string(get<std::string>(*r, "predicate", "count_le"));
    rule.count = get(*r, "count", rule.count);
    rule.gap = get(*r, "gap", rule.gap);
    if (r->get_optional<std::string>("weight")) {
      rule.weight = ScalarMap<double>::clamped_polynomial(get_list(*r, "weight", {}), get(*r, "weight_lo", -1e300),
                                                          get(*r, "weight_hi", 1e300));
    }
    rule.shifts = parse_shifts(get<std::string>(*r, "shifts", ""), c.generator.dim);
    c.rule = rule;
  }

  c.output_dir = get<std::string>(section("output"), "dir", "");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cli", "cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace ppdiff::cli
