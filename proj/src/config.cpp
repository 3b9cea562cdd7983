#include "qdbar/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace qdbar {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::CheckWeights, "check-weights"}, {Experiment::Norms, "norms"},
    {Experiment::Parametrix, "parametrix"},      {Experiment::Inverse, "inverse"},
    {Experiment::Schur, "schur"},                {Experiment::Continuity, "continuity"},
    {Experiment::UniformBound, "uniform-bound"},
};

[[noreturn]] void invalid(const std::string& what) {
  throw ConfigError(ConfigError::Kind::Invalid, what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) invalid(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      invalid(where + ": unknown key \"" + key + "\"");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + "." + key + ": wrong type");
  }
}

double get_number(const json& obj, const char* key, const std::string& where,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) invalid(where + "." + key + ": expected a number");
  return obj.at(key).get<double>();
}

Index get_integer(const json& obj, const char* key, const std::string& where,
                  Index fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_number_integer()) return v.get<Index>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e18) return static_cast<Index>(d);
  }
  invalid(where + "." + key + ": expected an integer");
}

const char* side_name(BandSide s) {
  return s == BandSide::F ? "f" : s == BandSide::G ? "g" : "diag";
}

const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::UnilateralExample:
      return "unilateral_example";
    case FamilyKind::BilateralRational:
      return "bilateral_rational";
    case FamilyKind::BilateralArctan:
      return "bilateral_arctan";
  }
  return "?";
}

FamilySpec parse_family(const json& j) {
  check_keys(j, "family", {"kind", "alpha", "beta", "domain"});
  FamilySpec f;
  const auto kind = get<std::string>(j, "kind", "family", "");
  if (kind == "unilateral_example")
    f.kind = FamilyKind::UnilateralExample;
  else if (kind == "bilateral_rational")
    f.kind = FamilyKind::BilateralRational;
  else if (kind == "bilateral_arctan")
    f.kind = FamilyKind::BilateralArctan;
  else
    invalid("family.kind: unknown family \"" + kind + "\"");
  f.alpha = get_number(j, "alpha", "family", 0.0);
  f.beta = get_number(j, "beta", "family", 0.0);
  if (j.contains("domain")) {
    const auto d = get<std::string>(j, "domain", "family", "");
    if (d == "disk")
      f.domain = DomainKind::Disk;
    else if (d == "annulus")
      f.domain = DomainKind::Annulus;
    else
      invalid("family.domain: expected \"disk\" or \"annulus\"");
  }
  return f;
}

std::vector<ElementBand> coordinate_bands(const std::string& name) {
  if (name == "one") return {{BandSide::Diag, 0, "poly", {1.0}}};
  if (name == "z") return {{BandSide::F, 1, "sqrt_poly", {1.0}}};
  if (name == "zbar") return {{BandSide::G, 1, "sqrt_poly", {1.0}}};
  invalid("element: unknown coordinate \"" + name + "\"");
}

std::vector<ElementBand> parse_element(const json& j, const std::string& where) {
  if (j.is_string()) return coordinate_bands(j.get<std::string>());
  if (!j.is_array()) invalid(where + ": expected a band list or coordinate name");
  std::vector<ElementBand> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const auto& b = j[i];
    check_keys(b, w, {"side", "n", "kind", "coeffs"});
    ElementBand band;
    const auto side = get<std::string>(b, "side", w, "");
    if (side == "f")
      band.side = BandSide::F;
    else if (side == "g")
      band.side = BandSide::G;
    else if (side == "diag")
      band.side = BandSide::Diag;
    else
      invalid(w + ".side: expected f, g or diag");
    band.n = static_cast<int>(get_integer(b, "n", w, 0));
    band.kind = get<std::string>(b, "kind", w, "poly");
    if (band.kind != "poly" && band.kind != "sqrt_poly")
      invalid(w + ".kind: expected poly or sqrt_poly");
    if (!b.contains("coeffs") || !b.at("coeffs").is_array())
      invalid(w + ".coeffs: expected a list of numbers");
    for (const auto& c : b.at("coeffs")) {
      if (!c.is_number()) invalid(w + ".coeffs: expected numbers");
      band.coeffs.push_back(c.get<double>());
    }
    out.push_back(std::move(band));
  }
  return out;
}

GridSpec parse_grid(const json& j) {
  GridSpec g;
  if (j.is_array()) {
    g.kind = GridSpec::Kind::Explicit;
    for (const auto& v : j) {
      if (!v.is_number()) invalid("t_grid: expected numbers");
      g.values.push_back(v.get<double>());
    }
  } else {
    check_keys(j, "t_grid", {"kind", "head", "ratio", "points", "values"});
    const auto kind = get<std::string>(j, "kind", "t_grid", "geometric");
    if (kind == "geometric") {
      g.kind = GridSpec::Kind::Geometric;
      g.head = get_number(j, "head", "t_grid", g.head);
      g.ratio = get_number(j, "ratio", "t_grid", g.ratio);
      g.points = static_cast<int>(get_integer(j, "points", "t_grid", g.points));
    } else if (kind == "explicit") {
      g.kind = GridSpec::Kind::Explicit;
      if (!j.contains("values") || !j.at("values").is_array())
        invalid("t_grid.values: expected a list");
      for (const auto& v : j.at("values")) {
        if (!v.is_number()) invalid("t_grid.values: expected numbers");
        g.values.push_back(v.get<double>());
      }
    } else {
      invalid("t_grid.kind: expected geometric or explicit");
    }
  }
  if (g.kind == GridSpec::Kind::Explicit) {
    std::sort(g.values.begin(), g.values.end(), std::greater<>());
    if (g.values.empty()) invalid("t_grid: empty grid");
  }
  return g;
}

json element_json(const std::vector<ElementBand>& bands) {
  json arr = json::array();
  for (const auto& b : bands)
    arr.push_back({{"side", side_name(b.side)}, {"n", b.n}, {"kind", b.kind}, {"coeffs", b.coeffs}});
  return arr;
}

void validate(const RunConfig& c) {
  try {
    make_family(c.family);
  } catch (const Error& e) {
    invalid(std::string("family: ") + e.what());
  }
  try {
    build_element(c.element);
    for (const auto& e : c.extra_elements) build_element(e);
  } catch (const Error& e) {
    invalid(std::string("element: ") + e.what());
  }
  try {
    const auto grid = resolve_grid(c.t_grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      check_t(grid[j]);
      if (j > 0 && !(grid[j] < grid[j - 1]))
        throw ParameterError("t grid values must be distinct");
    }
  } catch (const Error& e) {
    invalid(std::string("t_grid: ") + e.what());
  }
  if (!(c.tail_tol > 0.0) || !std::isfinite(c.tail_tol))
    invalid("truncation.tail_tol: must be positive (tail_tol > 0)");
  if (c.k_cap < 1) invalid("truncation.k_cap: must be >= 1");
  if (c.format != "csv" && c.format != "json") invalid("output.format: expected csv or json");
  if (c.continuity_steps < 2) invalid("continuity.steps: steps >= 2 required");
  if (!(c.continuity_t_lo > 0.0 && c.continuity_t_lo < c.continuity_t_hi &&
        c.continuity_t_hi <= 1.0))
    invalid("continuity: need 0 < t_lo < t_hi <= 1");
  if (c.schur_n_max < 1 || c.schur_n_max + 1 > kMaxQtBand)
    invalid("schur.n_max: must lie in [1, " + std::to_string(kMaxQtBand - 1) + "]");
  if (c.schur_iterations < 1) invalid("schur.iterations: must be >= 1");
  if (c.check_window_lo && c.check_window_hi && *c.check_window_lo > *c.check_window_hi)
    invalid("check_weights: empty window");
}

}  // namespace

const char* to_string(Experiment e) noexcept {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperiments)
    if (name == n) return k;
  return std::nullopt;
}

LambdaElement build_element(const std::vector<ElementBand>& bands) {
  std::vector<BandSpec> spec;
  for (const auto& b : bands) {
    auto fn = b.kind == "sqrt_poly" ? CoefficientFunction::sqrt_poly(b.coeffs)
                                    : CoefficientFunction::poly(b.coeffs);
    spec.push_back({b.side, b.n, std::move(fn)});
  }
  return make_element(spec);
}

std::vector<double> resolve_grid(const GridSpec& grid) {
  if (grid.kind == GridSpec::Kind::Explicit) return grid.values;
  if (grid.points < 1) throw ParameterError("grid needs at least one point");
  if (!(grid.ratio > 0.0 && grid.ratio < 1.0)) throw ParameterError("grid ratio must lie in (0, 1)");
  std::vector<double> g;
  double t = grid.head;
  for (int j = 0; j < grid.points; ++j, t *= grid.ratio) g.push_back(t);
  return g;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::Syntax, e.what());
  }
  check_keys(j, "config",
             {"family", "element", "elements", "t_grid", "truncation", "qt_kernel",
              "experiment", "output", "expected_failure", "continuity", "check_weights",
              "schur"});
  RunConfig c;
  if (!j.contains("family")) invalid("family: missing");
  c.family = parse_family(j.at("family"));
  if (!j.contains("element")) invalid("element: missing");
  c.element = parse_element(j.at("element"), "element");
  if (j.contains("elements")) {
    if (!j.at("elements").is_array()) invalid("elements: expected a list of elements");
    for (std::size_t i = 0; i < j.at("elements").size(); ++i)
      c.extra_elements.push_back(
          parse_element(j.at("elements")[i], "elements[" + std::to_string(i) + "]"));
  }
  if (j.contains("t_grid")) c.t_grid = parse_grid(j.at("t_grid"));
  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    check_keys(t, "truncation", {"tail_tol", "k_cap"});
    c.tail_tol = get_number(t, "tail_tol", "truncation", c.tail_tol);
    c.k_cap = get_integer(t, "k_cap", "truncation", c.k_cap);
  }
  if (j.contains("qt_kernel")) {
    const auto k = get<std::string>(j, "qt_kernel", "config", "");
    if (k == "corrected" || k == "Corrected")
      c.qt_kernel = QtKernelMode::Corrected;
    else if (k == "printed" || k == "Printed")
      c.qt_kernel = QtKernelMode::Printed;
    else
      invalid("qt_kernel: expected corrected or printed");
  }
  if (!j.contains("experiment")) invalid("experiment: missing");
  {
    const auto e = get<std::string>(j, "experiment", "config", "");
    const auto exp = parse_experiment(e);
    if (!exp) invalid("experiment: unknown experiment \"" + e + "\"");
    c.experiment = *exp;
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"directory", "format"});
    c.out_dir = get<std::string>(o, "directory", "output", c.out_dir);
    c.format = get<std::string>(o, "format", "output", c.format);
  }
  c.expected_failure = get<bool>(j, "expected_failure", "config", false);
  if (j.contains("continuity")) {
    const auto& o = j.at("continuity");
    check_keys(o, "continuity", {"t_lo", "t_hi", "steps"});
    c.continuity_t_lo = get_number(o, "t_lo", "continuity", c.continuity_t_lo);
    c.continuity_t_hi = get_number(o, "t_hi", "continuity", c.continuity_t_hi);
    c.continuity_steps = static_cast<int>(get_integer(o, "steps", "continuity", c.continuity_steps));
  }
  if (j.contains("check_weights")) {
    const auto& o = j.at("check_weights");
    check_keys(o, "check_weights", {"window_lo", "window_hi", "tail_index"});
    if (o.contains("window_lo")) c.check_window_lo = get_integer(o, "window_lo", "check_weights", 0);
    if (o.contains("window_hi")) c.check_window_hi = get_integer(o, "window_hi", "check_weights", 0);
    if (o.contains("tail_index")) c.check_tail_index = get_integer(o, "tail_index", "check_weights", 0);
  }
  if (j.contains("schur")) {
    const auto& o = j.at("schur");
    check_keys(o, "schur", {"n_max", "iterations"});
    c.schur_n_max = static_cast<int>(get_integer(o, "n_max", "schur", c.schur_n_max));
    c.schur_iterations = static_cast<int>(get_integer(o, "iterations", "schur", c.schur_iterations));
  }
  validate(c);
  return c;
}

std::string emit_config(const RunConfig& c) {
  json j;
  json fam = {{"kind", family_name(c.family.kind)}, {"alpha", c.family.alpha}, {"beta", c.family.beta}};
  if (c.family.domain) fam["domain"] = *c.family.domain == DomainKind::Disk ? "disk" : "annulus";
  j["family"] = fam;
  j["element"] = element_json(c.element);
  if (!c.extra_elements.empty()) {
    json arr = json::array();
    for (const auto& e : c.extra_elements) arr.push_back(element_json(e));
    j["elements"] = arr;
  }
  if (c.t_grid.kind == GridSpec::Kind::Geometric)
    j["t_grid"] = {{"kind", "geometric"}, {"head", c.t_grid.head}, {"ratio", c.t_grid.ratio},
                   {"points", c.t_grid.points}};
  else
    j["t_grid"] = {{"kind", "explicit"}, {"values", c.t_grid.values}};
  j["truncation"] = {{"tail_tol", c.tail_tol}, {"k_cap", c.k_cap}};
  j["qt_kernel"] = to_string(c.qt_kernel);
  j["experiment"] = to_string(c.experiment);
  j["output"] = {{"directory", c.out_dir}, {"format", c.format}};
  j["expected_failure"] = c.expected_failure;
  j["continuity"] = {{"t_lo", c.continuity_t_lo}, {"t_hi", c.continuity_t_hi}, {"steps", c.continuity_steps}};
  json cw = json::object();
  if (c.check_window_lo) cw["window_lo"] = *c.check_window_lo;
  if (c.check_window_hi) cw["window_hi"] = *c.check_window_hi;
  if (c.check_tail_index) cw["tail_index"] = *c.check_tail_index;
  j["check_weights"] = cw;
  j["schur"] = {{"n_max", c.schur_n_max}, {"iterations", c.schur_iterations}};
  return j.dump(2);
}

}  // namespace qdbar
