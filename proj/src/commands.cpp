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

#include "ppdiff/cli/commands.hpp"

#include "ppdiff/cli/io.hpp"

#include <cmath>

namespace ppdiff::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> axis_names(const char* stem, int dim) {
  if (dim == 1) return {stem};
  return {std::string(stem) + "_x", std::string(stem) + "_y"};
}

void append(std::vector<std::string>& cells, const Point<double>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) cells.push_back(format_number(x[i]));
}

Json to_json(const Point<double>& x) {
  if (x.size() == 1) return x[0];
  Json a = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

Json to_json(const PeakList<double>& list) {
  Json peaks = Json::array();
  for (const auto& p : list.peaks)
    peaks.push_back({{"lambda", to_json(p.frequency)},
                     {"intensity", p.intensity},
                     {"classification", to_string(p.classification)},
                     {"refined", p.refined},
                     {"uncertainty", p.uncertainty}});
  return peaks;
}

Json to_json(const AlmostPeriodResult<double>& r) {
  return {{"count", r.periods.size()},
          {"max_gap", std::isfinite(r.max_gap) ? Json(r.max_gap) : Json(nullptr)},
          {"epsilon", r.epsilon},
          {"scan_range", r.scan_range},
          {"overlap_range", r.overlap_range}};
}

fs::path prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ResourceLimitError("cli", "cannot create output directory '" + out.string() + "'");
  return out;
}

double half_width(const ExperimentConfig& cfg, std::size_t n) { return cfg.half_widths[n - 1]; }

Patch<double> data_patch(const ExperimentConfig& cfg, double extra) {
  return generate_patch(cfg.generator, Box<double>::centered(cfg.generator.dim, half_width(cfg, cfg.n_large) + extra));
}

void write_peaks(const fs::path& path, const ExperimentConfig& cfg, const PeakList<double>& list) {
  TableWriter t(path, cfg.hash, ',');
  auto columns = axis_names("lambda", cfg.generator.dim);
  columns.insert(columns.end(), {"intensity", "classification", "refined", "uncertainty"});
  t.header(columns);
  for (const auto& p : list.peaks) {
    std::vector<std::string> cells;
    append(cells, p.frequency);
    cells.insert(cells.end(), {format_number(p.intensity), to_string(p.classification), p.refined ? "1" : "0",
                               format_number(p.uncertainty)});
    t.row(cells);
  }
}

Observable<double> almost_period_observable(const ExperimentConfig& cfg) {
  const auto& ap = cfg.almost_periods;
  const auto phi = cfg.phi();
  if (ap.observable == "sampling") return Observable<double>::sampling(phi);
  const auto g = ScalarMap<double>::clamp(ap.clamp_lo, ap.clamp_hi);
  const auto composed = Observable<double>::composed(g, phi);
  if (ap.observable == "composed") return composed;
  const auto psi = TestFunction<double>::tent(cfg.generator.dim, cfg.tent_width,
                                              constant_point(cfg.generator.dim, ap.psi_shift));
  return composed * Observable<double>::composed(g, psi);
}

}  // namespace

std::vector<fs::path> cmd_generate(const ExperimentConfig& cfg, const fs::path& out) {
  const auto path = prepare(out) / "measure.tsv";
  const auto omega = generate(cfg.generator, cfg.sequence()[cfg.n_large]);
  TableWriter t(path, cfg.hash, '\t');
  auto columns = axis_names("x", cfg.generator.dim);
  columns.insert(columns.end(), {"weight_re", "weight_im"});
  t.header(columns);
  for (Eigen::Index i = 0; i < omega.size(); ++i) {
    std::vector<std::string> cells;
    append(cells, omega.position(i));
    cells.push_back(format_number(omega.weight(i).real()));
    cells.push_back(format_number(omega.weight(i).imag()));
    t.row(cells);
  }
  return {path};
}

std::vector<fs::path> cmd_autocorr(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const auto seq = cfg.sequence();
  const auto omega = data_patch(cfg, 0.0);
  const auto kernel = correlation_kernel(cfg.phi(), cfg.phi());
  const int d = cfg.generator.dim;

  const auto gamma = empirical_autocorr(omega.measure, seq[cfg.n_large], cfg.autocorr.r_max,
                                        static_cast<int>(cfg.n_large));
  const fs::path atoms = out / "autocorr.tsv";
  {
    TableWriter t(atoms, cfg.hash, '\t');
    auto columns = axis_names("z", d);
    columns.insert(columns.end(), {"weight_re", "weight_im"});
    t.header(columns);
    const auto& g = gamma.differences;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      std::vector<std::string> cells;
      append(cells, g.position(i));
      cells.push_back(format_number(g.weight(i).real()));
      cells.push_back(format_number(g.weight(i).imag()));
      t.row(cells);
    }
  }

  const fs::path convergence = out / "autocorr_convergence.csv";
  TableWriter t(convergence, cfg.hash, ',');
  t.header({"half_width", "t", "value_re", "value_im"});
  const auto count = static_cast<long>(std::floor(cfg.autocorr.t_max / cfg.autocorr.t_spacing + 1e-9));
  for (std::size_t n = 1; n <= cfg.n_large; ++n) {
    const auto g = n == cfg.n_large ? gamma
                                    : empirical_autocorr(omega.measure, seq[n], cfg.autocorr.r_max, static_cast<int>(n));
    std::vector<Complex<double>> values(static_cast<std::size_t>(2 * count + 1));
    parallel_for(values.size(), [&](std::size_t k) {
      Point<double> at = Point<double>::Zero(d);
      at[0] = double(static_cast<long>(k) - count) * cfg.autocorr.t_spacing;
      values[k] = smoothed_autocorr(g, kernel, at);
    });
    for (std::size_t k = 0; k < values.size(); ++k)
      t.row({format_number(half_width(cfg, n)), format_number(double(static_cast<long>(k) - count) * cfg.autocorr.t_spacing),
             format_number(values[k].real()), format_number(values[k].imag())});
  }
  return {atoms, convergence};
}

std::vector<fs::path> cmd_diffract(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const auto seq = cfg.sequence();
  const auto omega = data_patch(cfg, 0.0);
  const auto grid = cfg.grid();

  const fs::path profile_path = out / "profile.csv";
  {
    const auto profile = diffraction_profile(omega.measure, seq[cfg.n_large], grid);
    TableWriter t(profile_path, cfg.hash, ',');
    auto columns = axis_names("lambda", cfg.generator.dim);
    columns.push_back("intensity");
    t.header(columns);
    for (std::size_t k = 0; k < profile.grid.size(); ++k) {
      std::vector<std::string> cells;
      append(cells, profile.grid[k]);
      cells.push_back(format_number(profile.values[k]));
      t.row(cells);
    }
  }
  const auto peaks = detect_peaks(omega, seq, cfg.n_small, cfg.n_large, grid, cfg.thresholds, cfg.freq_tol);
  const fs::path peaks_path = out / "peaks.csv";
  write_peaks(peaks_path, cfg, peaks);
  return {profile_path, peaks_path};
}

std::vector<fs::path> cmd_spectral(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const auto seq = cfg.sequence();
  const auto phi = cfg.phi();
  const auto omega = data_patch(cfg, phi.reach().maxCoeff());
  const Box<double>& b = seq[cfg.n_large];
  const int d = cfg.generator.dim;

  const fs::path csv = out / "eigen_average.csv";
  TableWriter t(csv, cfg.hash, ',');
  auto columns = axis_names("lambda", d);
  columns.insert(columns.end(), {"average_re", "average_im", "average_abs2", "spectral_mass", "relative_difference"});
  t.header(columns);
  Json checks = Json::array();
  bool all_ok = true;
  for (double l : cfg.spectral_lambdas) {
    Character<double> lambda = Character<double>::Zero(d);
    lambda[0] = l;
    const auto a = eigen_average(omega, phi, lambda, b);
    const double lhs = std::norm(a);
    const double rhs = observable_spectral_mass(phi, lambda, std::norm(bragg_amplitude(omega.measure, b, lambda)));
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    const bool ok = rel <= 0.05 || std::abs(lhs - rhs) <= 1e-12;
    all_ok = all_ok && ok;
    std::vector<std::string> cells;
    append(cells, lambda);
    cells.insert(cells.end(), {format_number(a.real()), format_number(a.imag()), format_number(lhs),
                               format_number(rhs), format_number(rel)});
    t.row(cells);
    checks.push_back({{"lambda", to_json(lambda)},
                      {"average_abs2", lhs},
                      {"spectral_mass", rhs},
                      {"relative_difference", rel},
                      {"pass", ok}});
  }
  const fs::path json = out / "identity_check.json";
  write_json(json, cfg.hash,
             {{"half_width", half_width(cfg, cfg.n_large)}, {"tolerance", 0.05}, {"pass", all_ok}, {"checks", checks}});
  return {csv, json};
}

std::vector<fs::path> cmd_almostper(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  if (cfg.generator.dim != 1) throw PreconditionError("cli", "almostper supports dim = 1 only");
  const auto& ap = cfg.almost_periods;
  const auto h = almost_period_observable(cfg);
  const double n = half_width(cfg, cfg.n_large);
  const double range = ap.scan + ap.overlap;
  const auto omega = data_patch(cfg, range + h.reach().maxCoeff() + 1.0);
  const SampledFunction<double> g{orbit_autocovariance_grid(omega, h, n, range, ap.per_unit), ap.per_unit};
  const double eps = ap.epsilon_factor * std::abs(g.at(0));
  if (!(eps > 0.0)) throw PreconditionError("cli", "correlation vanishes at t = 0");
  const auto result = almost_periods(g, ap.scan, eps, ap.overlap);

  const fs::path csv = out / "almost_periods.csv";
  {
    TableWriter t(csv, cfg.hash, ',');
    t.header({"t", "correlation_re", "correlation_im"});
    for (double p : result.periods) {
      const auto& v = g.at(std::lround(p * ap.per_unit));
      t.row({format_number(p), format_number(v.real()), format_number(v.imag())});
    }
  }
  const fs::path json = out / "almost_periods.json";
  Json body = to_json(result);
  body["observable"] = ap.observable;
  body["correlation_at_0"] = std::abs(g.at(0));
  write_json(json, cfg.hash, body);
  return {csv, json};
}

std::vector<fs::path> cmd_perturb(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  if (!cfg.rule) throw ConfigError("cli", "perturb needs a [rule] section");
  PerturbationOptions<double> opt;
  opt.thresholds = cfg.thresholds;
  opt.theta_pp = cfg.theta_pp;
  opt.theta_pp_after = cfg.theta_pp_after;
  opt.freq_tol = cfg.freq_tol;
  opt.coefficient_bound = cfg.coefficient_bound;
  opt.ap_scan = cfg.almost_periods.scan;
  opt.ap_overlap = cfg.almost_periods.overlap;
  opt.ap_per_unit = cfg.almost_periods.per_unit;
  opt.ap_epsilon_factor = cfg.almost_periods.epsilon_factor;
  const auto r = perturbation_experiment(*cfg.rule, cfg.generator, cfg.sequence(), cfg.n_small, cfg.n_large,
                                         cfg.phi(), cfg.grid(), opt);
  Json basis = Json::array(), nonmembers = Json::array(), unresolved = Json::array();
  for (const auto& b : r.group_basis) basis.push_back(to_json(b));
  for (const auto& x : r.nonmembers) nonmembers.push_back(to_json(x));
  for (const auto& x : r.unresolved) unresolved.push_back(to_json(x));
  Json body{{"rule", {{"kind", to_string(cfg.rule->kind)}, {"radius", cfg.rule->radius}}},
            {"flags", {{"support", r.flag_support}, {"pure_point", r.flag_pp}}},
            {"ratios", {{"before", r.ratio_before}, {"after", r.ratio_after}}},
            {"group_basis", basis},
            {"nonmembers", nonmembers},
            {"unresolved", unresolved},
            {"almost_periods", {{"before", to_json(r.ap_before)}, {"after", to_json(r.ap_after)}}},
            {"peaks_before", to_json(r.peaks_before)},
            {"peaks_after", to_json(r.peaks_after)}};
  const fs::path json = out / "perturbation_report.json";
  write_json(json, cfg.hash, body);
  return {json};
}

std::vector<fs::path> cmd_vanhove(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const auto seq = cfg.sequence();
  const int d = cfg.generator.dim;
  const auto k = Box<double>::centered(d, 1.0);
  const auto h = Observable<double>::sampling(cfg.phi());
  const auto omega = generate_patch(
      cfg.generator, Box<double>::centered(d, cfg.half_widths.back() + 1.0 + h.reach().maxCoeff()));
  const fs::path csv = out / "vanhove.csv";
  TableWriter t(csv, cfg.hash, ',');
  t.header({"n", "half_width", "volume", "folner_ratio", "van_hove_ratio", "tempered_ratio", "boundary_term",
            "birkhoff_average"});
  for (std::size_t n = 1; n <= seq.size(); ++n) {
    const auto& b = seq[n];
    t.row({std::to_string(n), format_number(half_width(cfg, n)), format_number(b.volume()),
           format_number(folner_ratio(b, k)), format_number(van_hove_ratio(b, k)),
           n >= 2 ? format_number(tempered_ratio(seq, n)) : std::string("nan"),
           format_number(boundary_term(h, omega, b, k)), format_number(birkhoff_average(h, omega, b).real())});
  }
  return {csv};
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> list{
      {"generate", "write the generated measure on the largest window", cmd_generate},
      {"autocorr", "empirical autocorrelation and its smoothed convergence", cmd_autocorr},
      {"diffract", "diffraction profile and classified peaks", cmd_diffract},
      {"spectral", "eigen averages against the spectral mass identity", cmd_spectral},
      {"almostper", "almost periods of an orbit correlation", cmd_almostper},
      {"perturb", "peak group and pure point checks under a local rule", cmd_perturb},
      {"vanhove", "averaging sequence diagnostics", cmd_vanhove},
  };
  return list;
}

}  // namespace ppdiff::cli
