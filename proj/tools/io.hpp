#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lolb/density.hpp"
#include "lolb/gibbs.hpp"
#include "lolb/prob.hpp"
#include "lolb/report.hpp"

namespace lolb::cli {

/// Input that fails its schema; the message carries a JSON-path-style hint.
class schema_error : public std::runtime_error {
 public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed input payload. Kinds: "prob1", "prob2", "density", "qc", and
/// "spectrum_pair" (a pair of prob1/density documents for the divergence
/// functionals).
struct InputDocument {
  enum class Kind { prob1, prob2, density, qc_ensemble, pair };

  Kind kind;
  std::optional<ProbArray> prob;
  std::optional<DensityOperator> density;
  std::optional<QCEnsemble> ensemble;
  std::shared_ptr<InputDocument> first;   // pair only
  std::shared_ptr<InputDocument> second;  // pair only
  nlohmann::json meta;
};

InputDocument parse_input_document(const nlohmann::json& j);
InputDocument load_input_document(const std::string& text);

/// {"levels":[...]} or {"family":"oscillator","cap":n}; accepts a bare array
/// of levels as shorthand.
EnergySpectrum parse_spectrum(const nlohmann::json& j);
EnergySpectrum load_spectrum(const std::string& text);

nlohmann::json report_to_json(const BoundReport& report);
BoundReport report_from_json(const nlohmann::json& j);

/// Frozen CSV layout (documented in the README):
///   epsilon,bound_id,target,value,raw_value,clamped,terms
/// terms is a semicolon-joined name=value list sorted by name; every number
/// is printed with 17 significant digits.
std::string reports_csv_header();
std::string report_to_csv_row(const BoundReport& report);

/// %.17g formatting used across all CSV output.
std::string format_double(double v);

}  // namespace lolb::cli
