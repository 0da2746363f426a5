#pragma once

// Command-line front end. `run` parses arguments and dispatches to one
// command; it writes tables to `out`, diagnostics to `err`, and returns the
// process exit code: 0 success, 1 analysis-domain failure, 2 config error,
// 3 verification or target check failed.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "homog/config.hpp"
#include "homog/homogeneity.hpp"
#include "homog/limit_state.hpp"
#include "homog/models.hpp"
#include "homog/oracle.hpp"
#include "homog/reliability.hpp"

namespace homog::cli {

enum ExitCode : int { kOk = 0, kDomain = 1, kConfig = 2, kFail = 3 };

// ---------------------------------------------------------------------------
// Formatting

/// 6 significant digits for tables.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Shortest round-trip representation for CSV; independent of the locale.
inline std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os) const {
    std::vector<std::size_t> w(header_.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
      w[c] = header_[c].size();
      for (const auto& r : rows_) w[c] = std::max(w[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c) os << "  ";
        os << (c == 0 ? std::left : std::right) << std::setw(static_cast<int>(w[c])) << r[c];
      }
      os << std::right << '\n';
    };
    line(header_);
    std::size_t total = 0;
    for (auto x : w) total += x + 2;
    os << std::string(total - 2, '-') << '\n';
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<double> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& os) const {
    for (std::size_t c = 0; c < header_.size(); ++c) os << (c ? "," : "") << header_[c];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_num(r[c]);
      os << '\n';
    }
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline void write_csv_file(const Csv& csv, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write CSV file '" + path + "'");
  csv.write(f);
}

// ---------------------------------------------------------------------------
// Shared option state

struct Flags {
  std::string config;
  std::optional<double> step;
  std::optional<double> target_beta;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::string csv;
  std::optional<bool> clamp;
};

inline AnalysisConfig load(const Flags& f) {
  if (f.config.empty()) throw ConfigError("this command needs --config PATH");
  auto c = load_config(f.config);
  if (f.step) {
    if (!(*f.step > 0.0 && *f.step < 0.5)) throw ConfigError("--step must lie in (0, 0.5)");
    c.options.step = *f.step;
  }
  if (f.target_beta) c.target_beta = *f.target_beta;
  if (f.samples) c.options.samples = *f.samples;
  if (f.seed) c.options.seed = *f.seed;
  if (f.clamp) c.options.clamp = *f.clamp;
  return c;
}

inline DiffOptions diff_options(const AnalysisConfig& c) { return {c.options.step, c.options.richardson}; }

inline std::optional<EffectModel> build(const std::optional<ModelSpec>& m) {
  if (!m) return std::nullopt;
  return m->build();
}

/// Design values for the model's variables: the explicit design point when
/// given, otherwise the declared variables' design values.
inline std::vector<double> model_design_values(const AnalysisConfig& c, const EffectModel& m) {
  std::vector<double> x;
  if (!c.design_point.empty()) {
    for (const auto& [k, v] : c.design_point)
      if (!m.index_of(k)) throw ConfigError("unknown variable '" + k + "' in design_point (not a model variable)");
    for (const auto& name : m.variables()) {
      auto it = c.design_point.find(name);
      if (it == c.design_point.end()) throw ConfigError("missing design value for variable '" + name + "'");
      x.push_back(it->second);
    }
    return x;
  }
  for (const auto& v : c.variables)
    if (v.role == Role::Action && !m.index_of(v.name))
      throw ConfigError("unknown variable '" + v.name + "' (not a variable of the model)");
  for (const auto& name : m.variables()) {
    const auto* v = c.find(name);
    if (!v) throw ConfigError("missing variable '" + name + "': declare it or give a design_point");
    x.push_back(design_value(*v));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_analyze(const AnalysisConfig& c, const Flags& f, std::ostream& out) {
  if (!c.model) throw ConfigError("analyze needs a 'model'");
  const auto model = c.model->build();
  const auto point = make_design_point(model, model_design_values(c, model));
  std::vector<double> psfs;
  for (const auto& name : model.variables()) {
    const auto* v = c.find(name);
    psfs.push_back(v ? v->psf : 1.0);
  }
  AnalyzeOptions opt{diff_options(c), RemainderOptions{c.options.midpoint_c, 1e-3}};
  const auto r = analyze(model, point, psfs, opt);

  out << "model: " << model.description() << "\n";
  out << "effect at design point: " << fmt(r.effect_at_point) << "\n\n";
  Table t({"variable", "design value", "PSF", "PDH n_i", "RPDH v_i"});
  Csv csv({"variable_index", "design_value", "psf", "pdh", "rpdh"});
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    const double v = r.rpdh.empty() ? std::nan("") : r.rpdh[i];
    t.add({r.names[i], fmt(r.design_values[i]), fmt(psfs[i]), fmt(r.pdh[i]), fmt(v)});
    csv.add({static_cast<double>(i), r.design_values[i], psfs[i], r.pdh[i], v});
  }
  t.print(out);
  out << "\nDH n_E              " << fmt(r.dh) << "\n";
  out << "effect PSF gamma_E  " << fmt(r.gamma_effect) << "\n";
  out << "equivalent gamma_eq " << (r.gamma_equivalent ? fmt(*r.gamma_equivalent) : "undefined (n_E = 0)")
      << "\n";
  out << "remainder |H|       " << fmt(r.remainder_norm) << "\n";
  if (!f.csv.empty()) write_csv_file(csv, f.csv);
  return kOk;
}

inline LimitState make_limit_state(const AnalysisConfig& c) {
  if (c.variables.empty()) throw ConfigError("this command needs 'variables'");
  return LimitState(c.variables, build(c.model), build(c.resistance), c.pdh_given, diff_options(c));
}

inline int cmd_reliability(const AnalysisConfig& c, const Flags& f, std::ostream& out) {
  const auto ls = make_limit_state(c);
  const auto a = ls.assessment();
  Table t({"variable", "role", "status", "design value", "n_i", "tau_i", "q_i", "alpha_i", "beta_i"});
  Csv csv({"variable_index", "design_value", "pdh", "tau", "q", "alpha", "pri"});
  for (std::size_t i = 0; i < a.names.size(); ++i) {
    const auto& v = ls.variables()[i];
    t.add({a.names[i], std::string(to_string(v.role)), std::string(to_string(v.status)), fmt(a.design_values[i]),
           fmt(a.pdh[i]), fmt(a.tau[i]), fmt(a.q[i]), fmt(a.alpha[i]), fmt(a.pri[i])});
    csv.add({static_cast<double>(i), a.design_values[i], a.pdh[i], a.tau[i], a.q[i], a.alpha[i], a.pri[i]});
  }
  t.print(out);
  out << "\nreliability index beta  " << fmt(a.beta) << "\n";
  out << "upper bound beta_max    " << fmt(a.beta_max) << "\n";
  out << "lower bound beta_min    " << fmt(a.beta_min) << "\n";
  if (!f.csv.empty()) write_csv_file(csv, f.csv);
  if (!c.target_beta) return kOk;
  const double bt = *c.target_beta;
  if (a.beta >= bt) {
    out << "target beta_t = " << fmt(bt) << ": PASS";
    if (a.beta_min >= bt) out << " (guaranteed for any sensitivities: beta_min >= beta_t)";
    out << "\n";
    return kOk;
  }
  out << "target beta_t = " << fmt(bt) << ": FAIL (beta = " << fmt(a.beta) << ")";
  if (bt > a.beta_max)
    out << "; beta_t exceeds the upper bound beta_max = " << fmt(a.beta_max)
        << ", so no sensitivity pattern can reach it with these PSFs";
  out << "\n";
  return kFail;
}

inline int cmd_critical_psf(const AnalysisConfig& c, std::ostream& out) {
  if (!c.target_beta) throw ConfigError("critical-psf needs target_beta in the config or --target-beta");
  if (c.variables.empty()) throw ConfigError("critical-psf needs 'variables'");
  const double bt = *c.target_beta;
  Table t({"variable", "role", "status", "law", "cov", "k", "gamma_c", "given PSF", "beta_i at gamma_c"});
  for (const auto& v : c.variables) {
    const double g = critical_psf(v, bt, c.options.clamp);
    auto at_c = v;
    at_c.psf = g;
    std::string beta_i = "-";
    try {
      beta_i = fmt(pri(at_c));
    } catch (const Error&) {
    }
    t.add({v.name, std::string(to_string(v.role)), std::string(to_string(v.status)),
           std::string(to_string(v.dist.kind)), fmt(v.dist.cov), fmt(characteristic_value(v.dist).k), fmt(g),
           fmt(v.psf), beta_i});
  }
  out << "critical partial safety factors at beta_t = " << fmt(bt)
      << (c.options.clamp ? " (clamped to >= 1)" : " (unclamped)") << "\n\n";
  t.print(out);
  return kOk;
}

inline constexpr const char* kKappaNote =
    "note: kappa_R is the square root of the closed-form ratio; the unsquared ratio "
    "gives kappa_R^2 and fails kappa_R^2 + kappa_F^2 >= 1.";

inline int cmd_kappa(const std::vector<double>& xi, bool table, const std::vector<double>& dh_range,
                     const std::vector<double>& covs, const Flags& f, std::ostream& out) {
  if (table) {
    const auto& grid = kappa_grid();
    Csv csv({"xi_R", "xi_F", "kappa_R", "kappa_F"});
    out << "kappa_R / kappa_F for xi_R (rows) and xi_F (columns)\n\n";
    std::vector<std::string> header{"xi_R"};
    for (double g : grid) header.push_back(fmt(g));
    Table t(header);
    for (double r : grid) {
      if (std::isinf(r)) continue;
      std::vector<std::string> row{fmt(r)};
      for (double fcol : grid) {
        if (fcol < r) {
          row.push_back("");
          continue;
        }
        const auto k = kappa_factors(r, fcol);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f/%.2f", k.kappa_R, k.kappa_F);
        row.push_back(buf);
        csv.add({r, fcol, k.kappa_R, k.kappa_F});
      }
      t.add(row);
    }
    t.print(out);
    out << "\n" << kKappaNote << "\n";
    if (!f.csv.empty()) write_csv_file(csv, f.csv);
    return kOk;
  }
  double xr = 0.0, xf = 0.0;
  if (!dh_range.empty()) {
    if (dh_range.size() != 2 || covs.size() != 2)
      throw ConfigError("--dh-range needs N_LOW N_HIGH together with --covs V_F V_R");
    const auto r = dh_range_to_xi(dh_range[0], dh_range[1], log_std(covs[0]), log_std(covs[1]));
    xr = r.xi_R;
    xf = r.xi_F;
  } else {
    if (xi.size() != 2) throw ConfigError("kappa needs XI_R XI_F, --dh-range, or --table");
    xr = xi[0];
    xf = xi[1];
  }
  const auto k = kappa_factors(xr, xf);
  out << "xi_R     " << fmt(xr) << "\n";
  out << "xi_F     " << fmt(xf) << "\n";
  out << "kappa_R  " << fmt(k.kappa_R) << "\n";
  out << "kappa_F  " << fmt(k.kappa_F) << "\n\n" << kKappaNote << "\n";
  if (!f.csv.empty()) {
    Csv csv({"xi_R", "xi_F", "kappa_R", "kappa_F"});
    csv.add({xr, xf, k.kappa_R, k.kappa_F});
    write_csv_file(csv, f.csv);
  }
  return kOk;
}

struct SweepRequest {
  std::string model;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  bool log_spaced = false;
  std::vector<std::string> fixes;  // name=value
};

inline std::map<std::string, double> parse_fixes(const std::vector<std::string>& fixes) {
  std::map<std::string, double> out;
  for (const auto& s : fixes) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--fix expects name=value, got '" + s + "'");
    const std::string val = s.substr(eq + 1);
    double v = 0.0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
      throw ConfigError("--fix: '" + val + "' is not a number");
    out[s.substr(0, eq)] = v;
  }
  return out;
}

inline int cmd_sweep(const SweepRequest& req, const Flags& f, std::ostream& out) {
  if (req.steps < 2) throw ConfigError("sweep needs at least 2 steps");
  if (req.log_spaced && !(req.from > 0.0 && req.to > 0.0))
    throw ConfigError("log-spaced sweep needs positive bounds");
  auto fixes = parse_fixes(req.fixes);

  // Model factory taking the swept value, base point, and swept variable index.
  std::function<EffectModel(double)> make;
  std::vector<double> base;
  std::optional<std::size_t> var;
  std::optional<models::BuiltinModel> builtin;
  std::string column = req.param;
  AnalysisConfig cfg;

  if (req.model == "config") {
    cfg = load(f);
    if (!cfg.model) throw ConfigError("sweep config: the config has no 'model'");
    const auto m = cfg.model->build();
    base = model_design_values(cfg, m);
    var = m.index_of(req.param);
    if (!var) throw ConfigError("unknown variable '" + req.param + "' for the config model");
    for (const auto& [k, v] : fixes) {
      auto i = m.index_of(k);
      if (!i) throw ConfigError("unknown variable '" + k + "' in --fix");
      base[*i] = v;
    }
    make = [m](double) { return m; };
  } else {
    auto id = models::builtin_from_string(req.model);
    if (!id) throw ConfigError("unknown model '" + req.model + "' (use a built-in id or 'config')");
    std::map<std::string, double> defaults;
    if (*id == models::BuiltinId::MasonryShearWall) defaults = {{"F1", 10.0}, {"F2", 2.0}, {"a", 0.5}};
    else if (*id == models::BuiltinId::BeamTwoActionsCompression || *id == models::BuiltinId::BeamTwoActionsTension)
      defaults = {{"G", 1.0}};
    for (const auto& [k, v] : fixes) {
      if (k == "load_ratio" || k == "P" || !defaults.contains(k))
        throw ConfigError("unknown variable '" + k + "' in --fix for model " + req.model);
      defaults[k] = v;
    }
    const auto probe = models::BuiltinModel{*id, {}};
    const auto vars = probe.variables();
    const auto pnames = probe.parameter_names();
    std::string p = req.param == "load_ratio" ? "P" : req.param;
    if (p == "P") column = "load_ratio";
    const bool is_param = std::find(pnames.begin(), pnames.end(), p) != pnames.end();
    const bool is_var = std::find(vars.begin(), vars.end(), p) != vars.end();
    if (!is_param && !is_var) throw ConfigError("unknown sweep parameter '" + req.param + "' for model " + req.model);
    std::map<std::string, double> params;
    for (const auto& n : pnames) params[n] = defaults.at(n);
    for (const auto& n : vars) base.push_back(n == p ? 0.0 : (defaults.contains(n) ? defaults.at(n) : 0.0));
    if (is_var) var = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), p) - vars.begin());
    builtin = models::BuiltinModel{*id, params};
    make = [id = *id, params, p, is_param](double x) {
      auto ps = params;
      if (is_param) ps[p] = x;
      return models::BuiltinModel::make(id, ps).effect_model();
    };
  }

  const auto probe_model = make(req.from);
  const auto& names = probe_model.variables();
  std::vector<std::string> header{column, "effect", "dh"};
  for (const auto& n : names) header.push_back("n_" + n);
  for (const auto& n : names) header.push_back("v_" + n);
  const bool closed = builtin.has_value();
  if (closed) header.push_back("dh_closed_form");
  Csv csv(header);
  const DiffOptions diff{f.step.value_or(cfg.options.step), cfg.options.richardson};

  for (int s = 0; s < req.steps; ++s) {
    const double t = static_cast<double>(s) / (req.steps - 1);
    const double x = req.log_spaced ? std::exp(std::log(req.from) + t * (std::log(req.to) - std::log(req.from)))
                                    : req.from + t * (req.to - req.from);
    const auto m = make(x);
    auto pt_values = base;
    if (var) pt_values[*var] = x;
    const auto point = make_design_point(m, pt_values);
    const auto n = pdh_all(m, point, diff);
    const double dh = dh_at(m, point, diff);
    std::vector<double> row{x, point.effect, dh};
    row.insert(row.end(), n.begin(), n.end());
    if (std::abs(dh) >= kPdhZero) {
      const auto v = rpdh(n);
      row.insert(row.end(), v.begin(), v.end());
    } else {
      row.insert(row.end(), n.size(), std::nan(""));
    }
    if (closed) {
      auto bm = *builtin;
      if (!var) bm.parameters[req.param] = x;
      const auto cf = bm.closed_form_pdh(pt_values);
      double sum = 0.0;
      for (double v : cf) sum += v;
      row.push_back(sum);
    }
    csv.add(row);
  }
  if (f.csv.empty()) {
    csv.write(out);
  } else {
    write_csv_file(csv, f.csv);
    out << "wrote " << req.steps << " rows to " << f.csv << "\n";
  }
  return kOk;
}

inline int cmd_compare_options(const AnalysisConfig& c, std::ostream& out) {
  if (!c.model) throw ConfigError("compare-options needs a 'model'");
  const BasicVariable* action = nullptr;
  const BasicVariable* resistance = nullptr;
  for (const auto& v : c.variables) {
    if (v.role == Role::Action) {
      if (action) throw ConfigError("compare-options needs exactly one action variable");
      action = &v;
    } else if (v.role == Role::ResistanceParameter) {
      if (resistance) throw ConfigError("compare-options needs exactly one resistance variable");
      resistance = &v;
    } else {
      throw ConfigError("compare-options takes one action and one resistance only");
    }
  }
  if (!action || !resistance) throw ConfigError("compare-options needs one action and one resistance variable");
  const auto model = c.model->build();
  if (model.arity() != 1 || model.variables()[0] != action->name)
    throw ConfigError("unknown variable: the model must have the action '" + action->name + "' as its only variable");
  const auto r = compare_op_up_options(model, *action, *resistance, action->psf, resistance->psf, diff_options(c));
  const char* kind = std::abs(r.n_E - 1.0) < 1e-9 ? "linear (n_E = 1)"
                     : r.n_E > 1.0              ? "over-proportional (n_E > 1)"
                                                : "under-proportional (n_E < 1)";
  out << "DH n_E at the design point: " << fmt(r.n_E) << "  " << kind << "\n\n";
  Table t({"option", "placement", "beta"});
  t.add({"1", "gamma_F on action, gamma_R on resistance", fmt(r.beta_1)});
  t.add({"2", "gamma_F on effect (gamma_R*gamma_F on resistance)", fmt(r.beta_2)});
  t.add({"3", "gamma_R*gamma_F on action", fmt(r.beta_3)});
  t.print(out);
  return kOk;
}

inline int cmd_verify(const AnalysisConfig& c, std::ostream& out) {
  const auto ls = make_limit_state(c);
  const auto a = ls.assessment();
  McConfig mc{c.options.samples, c.options.seed, std::min(c.options.chunk_size, c.options.samples), 0};
  const auto r = mc_beta(ls.function(), ls.variables(), mc);
  double h = 0.0;
  if (ls.effect_model())
    h = remainder_metric(*ls.effect_model(), *ls.effect_point(), std::nullopt,
                         RemainderOptions{c.options.midpoint_c, 1e-3});
  out << "analytic beta        " << fmt(a.beta) << "\n";
  out << "Monte Carlo samples  " << r.samples << " (seed " << c.options.seed << ")\n";
  out << "failures             " << r.failures << "\n";
  out << "P_f                  " << fmt(r.pf) << "\n";
  out << "remainder |H|        " << fmt(h) << "\n";
  if (r.unbounded) {
    out << "Monte Carlo beta     unbounded (" << (r.failures == 0 ? "no failures" : "all samples failed")
        << "); one-sided 95% bound " << (r.failures == 0 ? ">= " : "<= ") << fmt(r.beta_bound) << "\n";
    out << "verdict              FAIL (increase --samples)\n";
    return kFail;
  }
  const double d = a.beta - r.beta;
  out << "Monte Carlo beta     " << fmt(r.beta) << " +- " << fmt(r.ci_halfwidth_beta) << " (95%)\n";
  out << "difference           " << fmt(d) << " (tolerance " << fmt(c.options.tolerance) << ")\n";
  const bool pass = std::abs(d) < c.options.tolerance;
  out << "verdict              " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// Entry point

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Config:
    case ErrorCode::Syntax: return kConfig;
    default: return kDomain;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degree-of-homogeneity analysis and reliability tools for nonlinear structural models", "homog"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON analysis config");
  app.add_option("--step", f.step, "relative finite-difference step in log-space");
  app.add_option("--target-beta", f.target_beta, "target reliability index");
  app.add_option("--samples", f.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "Monte Carlo seed");
  app.add_option("--csv", f.csv, "also write results as CSV to this path");
  app.add_flag("--clamp,!--no-clamp", f.clamp, "clamp critical PSFs to >= 1 (default on)");

  auto* analyze_cmd = app.add_subcommand("analyze", "PDHs, DH, RPDHs, gamma_E, gamma_eq and remainder at the design point");
  auto* rel_cmd = app.add_subcommand("reliability", "reliability index, sensitivities, PRIs and bounds");
  auto* crit_cmd = app.add_subcommand("critical-psf", "critical partial safety factors at the target index");
  auto* kappa_cmd = app.add_subcommand("kappa", "kappa reduction factors for an RSP range");
  std::vector<double> kappa_xi, dh_range, covs;
  bool kappa_table = false;
  kappa_cmd->add_option("xi", kappa_xi, "XI_R XI_F")->expected(0, 2);
  kappa_cmd->add_flag("--table", kappa_table, "print the full grid");
  kappa_cmd->add_option("--dh-range", dh_range, "N_LOW N_HIGH: derive the RSP range from a DH range")->expected(2);
  kappa_cmd->add_option("--covs", covs, "V_F V_R for --dh-range")->expected(2);

  auto* sweep_cmd = app.add_subcommand("sweep", "CSV of effect, DH, PDHs and RPDHs along one parameter");
  SweepRequest sweep;
  sweep_cmd->add_option("model", sweep.model, "built-in model id, or 'config'")->required();
  sweep_cmd->add_option("param", sweep.param, "swept variable or parameter (load_ratio for single-load models)")
      ->required();
  sweep_cmd->add_option("from", sweep.from)->required();
  sweep_cmd->add_option("to", sweep.to)->required();
  sweep_cmd->add_option("steps", sweep.steps)->required();
  sweep_cmd->add_flag("--log", sweep.log_spaced, "log-spaced points");
  sweep_cmd->add_option("--fix", sweep.fixes, "hold a variable or parameter: name=value");

  auto* cmp_cmd = app.add_subcommand("compare-options", "reliability under three safety-factor placements");
  auto* verify_cmd = app.add_subcommand("verify", "closed-form reliability index against Monte Carlo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error[E_USAGE]: " << e.what() << "\n";
    return kConfig;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(load(f), f, out);
    if (rel_cmd->parsed()) return cmd_reliability(load(f), f, out);
    if (crit_cmd->parsed()) return cmd_critical_psf(load(f), out);
    if (kappa_cmd->parsed()) return cmd_kappa(kappa_xi, kappa_table, dh_range, covs, f, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, f, out);
    if (cmp_cmd->parsed()) return cmd_compare_options(load(f), out);
    if (verify_cmd->parsed()) return cmd_verify(load(f), out);
  } catch (const Error& e) {
    err << "error[" << code_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error[E_INTERNAL]: " << e.what() << "\n";
    return kDomain;
  }
  return kConfig;
}

}  // namespace homog::cli
