#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdbar/element.hpp"
#include "qdbar/errors.hpp"
#include "qdbar/operators.hpp"
#include "qdbar/weights.hpp"

namespace qdbar {

enum class Experiment { CheckWeights, Norms, Parametrix, Inverse, Schur, Continuity, UniformBound };

const char* to_string(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name);

/// Thrown by parse_config. Syntax: not a well-formed document. Invalid: a
/// field violates a module invariant (the message names it).
class ConfigError : public Error {
 public:
  enum class Kind { Syntax, Invalid };
  ConfigError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Serializable band description ("poly" or "sqrt_poly" coefficients).
struct ElementBand {
  BandSide side = BandSide::Diag;
  int n = 0;
  std::string kind = "poly";
  std::vector<double> coeffs;

  friend bool operator==(const ElementBand&, const ElementBand&) = default;
};

struct GridSpec {
  enum class Kind { Geometric, Explicit };
  Kind kind = Kind::Geometric;
  double head = 0.2;
  double ratio = 0.5;
  int points = 8;
  std::vector<double> values;  ///< explicit grids, stored descending

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
  FamilySpec family;
  std::vector<ElementBand> element;
  /// Further elements for uniform-bound.
  std::vector<std::vector<ElementBand>> extra_elements;
  GridSpec t_grid;
  double tail_tol = 1e-5;
  Index k_cap = 20'000'000;
  QtKernelMode qt_kernel = QtKernelMode::Corrected;
  Experiment experiment = Experiment::Norms;
  std::string out_dir = ".";
  std::string format = "csv";
  /// inverse: rows above the bound are reported as expected failures.
  bool expected_failure = false;

  // continuity
  double continuity_t_lo = 0.05;
  double continuity_t_hi = 0.9;
  int continuity_steps = 100;
  // check-weights (defaults depend on the domain when absent)
  std::optional<Index> check_window_lo;
  std::optional<Index> check_window_hi;
  std::optional<Index> check_tail_index;
  // schur
  int schur_n_max = 8;
  int schur_iterations = 500;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON run description, applies defaults and validates every
/// referenced spec before returning.
RunConfig parse_config(std::string_view text);

/// JSON document with every field explicit; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

LambdaElement build_element(const std::vector<ElementBand>& bands);
std::vector<double> resolve_grid(const GridSpec& grid);

}  // namespace qdbar
