#include "qdbar/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qdbar/limits.hpp"
#include "qdbar/numeric.hpp"
#include "qdbar/version.hpp"

namespace qdbar {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerances of the check-weights experiment.
constexpr double kRefTol = 1e-12;          // closed-form moduli
constexpr double kCommutationTol = 1e-14;  // S_t(k) vs t(1-w(k-1)^2)(1-w(k)^2)
constexpr double kTraceSlack = 1e-14;      // rounding allowance on the trace bound
constexpr double kMarginTol = -1e-13;      // s-ratio margin floor
constexpr int kMarginMaxN = 8;
// Power iteration may not exceed the Schur bound beyond rounding.
constexpr double kDominanceSlack = 1e-12;

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<Index>(&c)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (auto i = std::get_if<Index>(&c)) return *i;
  if (auto b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

struct Outcome {
  bool numerical = false;
  bool property = false;
  bool condition = false;
  int code() const {
    if (numerical) return kExitNumericalFailure;
    if (property) return kExitPropertyFailure;
    if (condition) return kExitConditionViolation;
    return kExitSuccess;
  }
};

struct Context {
  const RunConfig& cfg;
  WeightFamily family;
  std::vector<double> grid;
  Table table;
  json windows = json::array();
  json statuses = json::array();
  json summary = json::object();
  Outcome outcome;

  void add_row(std::vector<Cell> row, const std::string& status) {
    row.emplace_back(status);
    statuses.push_back({{"row", table.rows.size()}, {"status", status}});
    table.rows.push_back(std::move(row));
  }
  void note_window(double t, const IndexWindow& w) {
    windows.push_back({{"t", t},
                       {"k_lo", w.k_lo},
                       {"k_hi", w.k_hi},
                       {"size", w.size()},
                       {"tail_bound_hi", w.tail_bound_hi},
                       {"tail_bound_lo", w.tail_bound_lo}});
  }
  void note_window_failure(double t, const std::string& what) {
    windows.push_back({{"t", t}, {"error", what}});
  }
  // Window for t, recorded in the manifest; nullopt on resource failure.
  std::optional<IndexWindow> window(double t, std::string& error) {
    try {
      auto w = truncation_window(family, t, cfg.tail_tol, cfg.k_cap);
      note_window(t, w);
      return w;
    } catch (const Error& e) {
      error = e.what();
      note_window_failure(t, error);
      outcome.numerical = true;
      return std::nullopt;
    }
  }
};

std::string failure(const std::exception& e) { return std::string("numerical-failure: ") + e.what(); }

void fit_summary(Context& ctx, const ConvergenceSeries& s) {
  bool decreasing = s.records.size() >= 2;
  for (std::size_t j = 1; j < s.records.size(); ++j)
    if (!(s.records[j].abs_error < s.records[j - 1].abs_error)) decreasing = false;
  ctx.summary["strictly_decreasing"] = decreasing;
  try {
    const auto fit = rate_fit(s, 0);
    ctx.summary["rate_slope"] = fit.slope;
    ctx.summary["rate_intercept"] = fit.intercept;
    ctx.summary["rate_residual"] = fit.residual;
    ctx.summary["rate_points"] = fit.points_used;
  } catch (const InsufficientDataError& e) {
    ctx.summary["rate_fit"] = e.what();
  }
}

void run_check_weights(Context& ctx) {
  auto& T = ctx.table;
  T.columns = {"t",         "h1",          "h1_delta",        "h2",
               "h2_delta",  "limit_deviation", "trace_sum",   "trace_deviation",
               "trace_tail_bound", "s_ratio_margin_min", "status"};
  const bool disk = ctx.family.domain() == DomainKind::Disk;
  IndexRange w;
  w.lo = ctx.cfg.check_window_lo.value_or(disk ? 0 : -10000);
  w.hi = ctx.cfg.check_window_hi.value_or(10000);
  const Index tail_index = ctx.cfg.check_tail_index.value_or(w.hi);
  const auto rep = condition_report(ctx.family, ctx.grid, w, tail_index);

  double h3_delta = 0.0;
  for (std::size_t j = 0; j < rep.h3_ref.size(); ++j)
    h3_delta = std::max(h3_delta, std::abs(rep.h3[j] - rep.h3_ref[j]));
  bool violated = !rep.monotonicity_ok || !rep.positivity_ok;
  if (h3_delta > kRefTol) violated = true;
  if (rep.commutation_deviation && *rep.commutation_deviation > kCommutationTol) violated = true;
  const double const_gap = std::abs(rep.const_wratio - rep.const_from_h3);
  if (const_gap > kRefTol) violated = true;

  for (std::size_t j = 0; j < rep.t_grid.size(); ++j) {
    const double t = rep.t_grid[j];
    const double d1 = j < rep.h1_ref.size() ? std::abs(rep.h1[j] - rep.h1_ref[j]) : kNaN;
    const double d2 = j < rep.h2_ref.size() ? std::abs(rep.h2[j] - rep.h2_ref[j]) : kNaN;
    double margin = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= kMarginMaxN; ++n)
      margin = std::min(margin, s_ratio_margin(ctx.family, t, n, rep.window));
    std::string status = "ok";
    if (d1 > kRefTol || d2 > kRefTol) status = "violated: closed-form modulus";
    if (rep.trace_deviation[j] > rep.trace_tail_bound[j] + kTraceSlack)
      status = "violated: trace bound";
    if (margin < kMarginTol) status = "violated: s-ratio margin";
    if (j > 0 && !(rep.h1[j] < rep.h1[j - 1] && rep.h2[j] < rep.h2[j - 1]))
      status = "violated: h1/h2 not decreasing as t decreases";
    if (status != "ok") violated = true;
    ctx.add_row({t, rep.h1[j], d1, rep.h2[j], d2, rep.limit_deviation[j], rep.trace_sum[j],
                 rep.trace_deviation[j], rep.trace_tail_bound[j], margin},
                status);
  }
  ctx.summary["window_lo"] = rep.window.lo;
  ctx.summary["window_hi"] = rep.window.hi;
  ctx.summary["tail_index"] = tail_index;
  ctx.summary["monotonicity_ok"] = rep.monotonicity_ok;
  ctx.summary["positivity_ok"] = rep.positivity_ok;
  if (!rep.h3_ref.empty()) ctx.summary["h3_max_delta"] = h3_delta;
  ctx.summary["h3_at_first"] = rep.h3.empty() ? kNaN : rep.h3.front();
  ctx.summary["const_wratio"] = rep.const_wratio;
  ctx.summary["const_from_h3"] = rep.const_from_h3;
  ctx.summary["const_gap"] = const_gap;
  if (rep.commutation_deviation) ctx.summary["commutation_deviation"] = *rep.commutation_deviation;
  ctx.outcome.condition = violated;
}

void run_norms(Context& ctx, const LambdaElement& x) {
  ctx.table.columns = {"t", "k_hi", "quantum_norm", "classical_norm", "abs_error",
                       "tail_bound", "k_lo", "status"};
  const double reference = classical_norm(x, ctx.family);
  ConvergenceSeries s;
  for (double t : ctx.grid) {
    std::string err;
    auto w = ctx.window(t, err);
    if (!w) {
      ctx.add_row({t, Index{-1}, kNaN, reference, kNaN, kNaN, Index{-1}}, "numerical-failure: " + err);
      continue;
    }
    const double q = element_quantum_norm(x, ctx.family, t, *w);
    ConvergenceRecord r{t, w->k_lo, w->k_hi, q, reference, std::abs(q - reference),
                        std::max(w->tail_bound_hi, w->tail_bound_lo)};
    s.records.push_back(r);
    ctx.add_row({t, w->k_hi, q, reference, r.abs_error, r.tail_bound, w->k_lo}, "ok");
  }
  fit_summary(ctx, s);
}

void run_parametrix(Context& ctx, const LambdaElement& x) {
  ctx.table.columns = {"t", "k_lo", "k_hi", "qt_kernel", "error", "tail_bound", "status"};
  const auto tilde = tilde_element(x, ctx.family, ctx.cfg.qt_kernel);
  const std::string mode = to_string(ctx.cfg.qt_kernel);
  ConvergenceSeries s;
  for (double t : ctx.grid) {
    std::string err;
    auto w = ctx.window(t, err);
    if (!w) {
      ctx.add_row({t, Index{-1}, Index{-1}, mode, kNaN, kNaN}, "numerical-failure: " + err);
      continue;
    }
    try {
      const auto q = apply_Qt<double>(x, ctx.family, t, *w, ctx.cfg.qt_kernel);
      const auto y = realize_quantum<double>(tilde, ctx.family, t, *w);
      const double e = quantum_distance(q, y, ctx.family, t);
      const double tb = std::max(w->tail_bound_hi, w->tail_bound_lo);
      s.records.push_back({t, w->k_lo, w->k_hi, e, 0.0, e, tb});
      ctx.add_row({t, w->k_lo, w->k_hi, mode, e, tb}, "ok");
    } catch (const Error& ex) {
      ctx.outcome.numerical = true;
      ctx.add_row({t, w->k_lo, w->k_hi, mode, kNaN, kNaN}, failure(ex));
    }
  }
  fit_summary(ctx, s);
}

void run_inverse(Context& ctx, const LambdaElement& x) {
  ctx.table.columns = {"t",        "k_lo",        "k_hi",        "qt_kernel", "residual",
                       "bound",    "interior_lo", "interior_hi", "status"};
  const std::string mode = to_string(ctx.cfg.qt_kernel);
  for (double t : ctx.grid) {
    std::string err;
    auto w = ctx.window(t, err);
    if (!w) {
      ctx.add_row({t, Index{-1}, Index{-1}, mode, kNaN, kNaN, Index{-1}, Index{-1}},
                  "numerical-failure: " + err);
      continue;
    }
    try {
      const auto r = inverse_residual(x, ctx.family, t, ctx.cfg.tail_tol, ctx.cfg.qt_kernel,
                                      ctx.cfg.k_cap);
      std::string status = "ok";
      if (!(r.residual <= r.bound)) {
        if (ctx.cfg.expected_failure) {
          status = "expected-failure";
        } else {
          status = "fail";
          ctx.outcome.property = true;
        }
      }
      ctx.add_row({t, w->k_lo, w->k_hi, mode, r.residual, r.bound, r.interior_lo, r.interior_hi},
                  status);
    } catch (const Error& ex) {
      ctx.outcome.numerical = true;
      ctx.add_row({t, w->k_lo, w->k_hi, mode, kNaN, kNaN, Index{-1}, Index{-1}}, failure(ex));
    }
  }
}

void run_schur(Context& ctx) {
  ctx.table.columns = {"t",       "kernel",  "n",           "k_lo",           "k_hi",
                       "schur_bound", "row_sup", "col_sup", "analytic_cap", "power_estimate",
                       "converged", "iterations", "status"};
  const auto mode = ctx.cfg.qt_kernel;
  for (double t : ctx.grid) {
    std::string err;
    auto w = ctx.window(t, err);
    if (!w) {
      ctx.add_row({t, std::string("-"), Index{0}, Index{-1}, Index{-1}, kNaN, kNaN, kNaN, kNaN,
                   kNaN, false, Index{0}},
                  "numerical-failure: " + err);
      continue;
    }
    for (int kind = 0; kind < 2; ++kind) {
      const bool t1 = kind == 0;
      for (int n = t1 ? 0 : 1; n <= ctx.cfg.schur_n_max; ++n) {
        KernelOperatorSpec spec{t1 ? KernelKind::T1 : KernelKind::T2, n, t, ctx.family, *w};
        const auto sb = schur_young_bound(spec, mode);
        const auto est = operator_norm_estimate(spec, mode, ctx.cfg.schur_iterations);
        std::string status = "ok";
        if (est.value > sb.bound * (1.0 + kDominanceSlack)) {
          status = "fail: estimate exceeds Schur bound";
          ctx.outcome.property = true;
        } else if (sb.bound > sb.analytic_cap) {
          // The cap is not claimed for the printed diagonal f-side kernel.
          if (t1 && n == 0 && mode == QtKernelMode::Printed) {
            status = "cap-not-applicable";
          } else {
            status = "fail: Schur bound exceeds analytic cap";
            ctx.outcome.property = true;
          }
        }
        ctx.add_row({t, std::string(t1 ? "T1" : "T2"), Index{n}, w->k_lo, w->k_hi, sb.bound,
                     sb.row_sup, sb.col_sup, sb.analytic_cap, est.value, est.converged,
                     Index{est.iterations}},
                    status);
      }
    }
  }
}

void run_continuity(Context& ctx, const LambdaElement& x) {
  ctx.table.columns = {"t", "k_hi", "norm", "forward_difference", "status"};
  const auto& c = ctx.cfg;
  const auto scan =
      continuity_scan(x, ctx.family, c.continuity_t_lo, c.continuity_t_hi, c.continuity_steps,
                      c.tail_tol, c.k_cap);
  for (std::size_t j = 0; j < scan.rows.size(); ++j) {
    const auto& r = scan.rows[j];
    ctx.note_window(r.t, truncation_window(ctx.family, r.t, c.tail_tol, c.k_cap));
    const double fd = j + 1 < scan.rows.size() ? r.forward_difference : kNaN;
    ctx.add_row({r.t, r.window_hi, r.norm, fd}, "ok");
  }
  ctx.summary["max_forward_difference"] = scan.max_forward_difference;
}

void run_uniform_bound(Context& ctx, const LambdaElement& x) {
  ctx.table.columns = {"t", "k_hi", "max_ratio", "schur_cap", "exceeds", "status"};
  std::vector<LambdaElement> elems{x};
  for (const auto& e : ctx.cfg.extra_elements) elems.push_back(build_element(e));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double t : ctx.grid) {
    std::string err;
    auto w = ctx.window(t, err);
    if (!w) {
      ctx.add_row({t, Index{-1}, kNaN, analytic_schur_cap(ctx.family), false},
                  "numerical-failure: " + err);
      continue;
    }
    const double single[] = {t};
    const auto rows =
        uniform_bound_scan(elems, ctx.family, single, ctx.cfg.tail_tol, ctx.cfg.qt_kernel,
                           ctx.cfg.k_cap);
    const auto& r = rows.front();
    lo = std::min(lo, r.max_ratio);
    hi = std::max(hi, r.max_ratio);
    if (r.exceeds) ctx.outcome.property = true;
    ctx.add_row({t, r.window_hi, r.max_ratio, r.schur_cap, r.exceeds},
                r.exceeds ? "fail: ratio exceeds Schur cap" : "ok");
  }
  if (hi > 0.0) ctx.summary["ratio_spread"] = (hi - lo) / hi;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j)
    out += (j ? "," : "") + table.columns[j];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::object();
    for (std::size_t j = 0; j < row.size() && j < table.columns.size(); ++j)
      r[table.columns[j]] = cell_json(row[j]);
    rows.push_back(r);
  }
  json doc = {{"columns", table.columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

RunArtifacts run_experiment(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Context ctx{cfg, make_family(cfg.family), resolve_grid(cfg.t_grid), {}, {}, {}, {}, {}};
  const LambdaElement x = build_element(cfg.element);
  std::string fatal;
  try {
    switch (cfg.experiment) {
      case Experiment::CheckWeights:
        run_check_weights(ctx);
        break;
      case Experiment::Norms:
        run_norms(ctx, x);
        break;
      case Experiment::Parametrix:
        run_parametrix(ctx, x);
        break;
      case Experiment::Inverse:
        run_inverse(ctx, x);
        break;
      case Experiment::Schur:
        run_schur(ctx);
        break;
      case Experiment::Continuity:
        run_continuity(ctx, x);
        break;
      case Experiment::UniformBound:
        run_uniform_bound(ctx, x);
        break;
    }
  } catch (const Error& e) {
    fatal = e.what();
    ctx.outcome.numerical = true;
  }

  RunArtifacts art;
  art.exit_code = ctx.outcome.code();
  art.table = ctx.table;
  if (!fatal.empty()) ctx.summary["fatal_error"] = fatal;
  art.summary_json = ctx.summary.dump();

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const fs::path report = dir / (std::string(to_string(cfg.experiment)) + "." + cfg.format);
  write_file(report, cfg.format == "json" ? to_json(ctx.table) : to_csv(ctx.table));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"version", kVersion},
                   {"experiment", to_string(cfg.experiment)},
                   {"config", json::parse(emit_config(cfg))},
                   {"wall_clock_seconds", seconds},
                   {"windows", ctx.windows},
                   {"rows", ctx.statuses},
                   {"summary", ctx.summary},
                   {"exit_code", art.exit_code},
                   {"report", report.filename().string()}};
  const fs::path mpath = dir / "manifest.json";
  write_file(mpath, manifest.dump(2) + "\n");
  art.report_path = report.string();
  art.manifest_path = mpath.string();
  return art;
}

std::string report_columns_help() {
  return R"(Report columns (CSV header; the JSON report mirrors them per row):
  check-weights  t,h1,h1_delta,h2,h2_delta,limit_deviation,trace_sum,trace_deviation,
                 trace_tail_bound,s_ratio_margin_min,status
  norms          t,k_hi,quantum_norm,classical_norm,abs_error,tail_bound,k_lo,status
  parametrix     t,k_lo,k_hi,qt_kernel,error,tail_bound,status
  inverse        t,k_lo,k_hi,qt_kernel,residual,bound,interior_lo,interior_hi,status
  schur          t,kernel,n,k_lo,k_hi,schur_bound,row_sup,col_sup,analytic_cap,
                 power_estimate,converged,iterations,status
  continuity     t,k_hi,norm,forward_difference,status
  uniform-bound  t,k_hi,max_ratio,schur_cap,exceeds,status
Floats use the shortest decimal form that round-trips; missing values are "nan".
Exit codes: 0 success, 1 usage, 2 condition violation, 3 numerical failure,
4 property failure, 5 config syntax error, 6 invalid config.)";
}

}  // namespace qdbar
