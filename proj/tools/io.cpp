#include "io.hpp"

#include <cstdio>
#include <utility>

namespace lolb::cli {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw schema_error(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw schema_error(path + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::vector<double>> number_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw schema_error(path + ": expected a nonempty matrix");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_array(j[i], path + "[" + std::to_string(i) + "]"));
    if (out.back().size() != out.front().size()) {
      throw schema_error(path + ": ragged rows");
    }
  }
  return out;
}

DensityOperator parse_density_payload(const json& j, const std::string& path) {
  try {
    if (j.contains("spectrum")) {
      return DensityOperator::diagonal(number_array(j.at("spectrum"), path + ".spectrum"));
    }
    if (!j.contains("re")) throw schema_error(path + ": expected \"re\"/\"im\" or \"spectrum\"");
    const auto re = number_matrix(j.at("re"), path + ".re");
    const std::size_t n = re.size();
    std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
    if (j.contains("im")) {
      im = number_matrix(j.at("im"), path + ".im");
      if (im.size() != n || im.front().size() != n) {
        throw schema_error(path + ": re/im shape mismatch");
      }
    }
    if (re.front().size() != n) throw schema_error(path + ".re: matrix must be square");
    Eigen::MatrixXcd m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = std::complex<double>(re[r][c], im[r][c]);
    return DensityOperator(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw schema_error(path + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw schema_error(path + ": " + e.what());
  }
}

InputDocument parse_kind(const json& j, const std::string& kind) {
  InputDocument doc;
  doc.meta = j.contains("meta") ? j.at("meta") : json::object();
  if (kind == "prob1") {
    doc.kind = InputDocument::Kind::prob1;
    try {
      doc.prob = ProbArray(number_array(j.at("probs"), "$.probs"));
    } catch (const std::invalid_argument& e) {
      throw schema_error(std::string("$.probs: ") + e.what());
    }
    return doc;
  }
  if (kind == "prob2") {
    doc.kind = InputDocument::Kind::prob2;
    const auto m = number_matrix(j.at("matrix"), "$.matrix");
    std::vector<double> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    try {
      doc.prob = ProbArray(m.size(), m.front().size(), std::move(flat));
    } catch (const std::invalid_argument& e) {
      throw schema_error(std::string("$.matrix: ") + e.what());
    }
    return doc;
  }
  if (kind == "density") {
    doc.kind = InputDocument::Kind::density;
    doc.density = parse_density_payload(j, "$");
    return doc;
  }
  if (kind == "qc") {
    doc.kind = InputDocument::Kind::qc_ensemble;
    const auto weights = number_array(j.at("weights"), "$.weights");
    if (!j.contains("states") || !j.at("states").is_array()) {
      throw schema_error("$.states: expected an array of density payloads");
    }
    std::vector<DensityOperator> states;
    for (std::size_t k = 0; k < j.at("states").size(); ++k) {
      states.push_back(
          parse_density_payload(j.at("states")[k], "$.states[" + std::to_string(k) + "]"));
    }
    try {
      doc.ensemble = QCEnsemble(weights, std::move(states));
    } catch (const std::invalid_argument& e) {
      throw schema_error(std::string("$.weights/states: ") + e.what());
    }
    return doc;
  }
  if (kind == "spectrum_pair" || kind == "pair") {
    doc.kind = InputDocument::Kind::pair;
    if (j.contains("p") && j.contains("q")) {
      json first{{"kind", "prob1"}, {"probs", j.at("p")}};
      json second{{"kind", "prob1"}, {"probs", j.at("q")}};
      doc.first = std::make_shared<InputDocument>(parse_input_document(first));
      doc.second = std::make_shared<InputDocument>(parse_input_document(second));
      return doc;
    }
    if (!j.contains("first") || !j.contains("second")) {
      throw schema_error("$: pair input needs \"first\"/\"second\" (or \"p\"/\"q\")");
    }
    doc.first = std::make_shared<InputDocument>(parse_input_document(j.at("first")));
    doc.second = std::make_shared<InputDocument>(parse_input_document(j.at("second")));
    if (doc.first->kind != doc.second->kind ||
        (doc.first->kind != InputDocument::Kind::prob1 &&
         doc.first->kind != InputDocument::Kind::density)) {
      throw schema_error("$: pair members must both be prob1 or both density");
    }
    return doc;
  }
  throw schema_error("$.kind: unknown kind '" + kind + "'");
}

}  // namespace

InputDocument parse_input_document(const json& j) {
  if (!j.is_object()) throw schema_error("$: expected a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw schema_error("$.kind: expected a string");
  }
  return parse_kind(j, j.at("kind").get<std::string>());
}

InputDocument load_input_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw schema_error(std::string("input is not valid JSON: ") + e.what());
  }
  return parse_input_document(j);
}

EnergySpectrum parse_spectrum(const json& j) {
  try {
    if (j.is_array()) return EnergySpectrum::from_levels(number_array(j, "$"));
    if (!j.is_object()) throw schema_error("spectrum: expected an object or array");
    if (j.contains("levels")) {
      return EnergySpectrum::from_levels(number_array(j.at("levels"), "$.levels"));
    }
    if (j.contains("family")) {
      const auto family = j.at("family").get<std::string>();
      if (family != "oscillator") {
        throw schema_error("$.family: unknown family '" + family + "'");
      }
      if (!j.contains("cap") || !j.at("cap").is_number_unsigned()) {
        throw schema_error("$.cap: expected a positive integer");
      }
      return EnergySpectrum::oscillator(j.at("cap").get<std::size_t>());
    }
    throw schema_error("spectrum: expected \"levels\" or \"family\"");
  } catch (const std::invalid_argument& e) {
    throw schema_error(std::string("spectrum: ") + e.what());
  }
}

EnergySpectrum load_spectrum(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw schema_error(std::string("spectrum is not valid JSON: ") + e.what());
  }
  return parse_spectrum(j);
}

nlohmann::json report_to_json(const BoundReport& report) {
  json terms = json::object();
  for (const auto& [k, v] : report.terms) terms[k] = v;
  json j{{"bound_id", report.bound_id}, {"epsilon", report.epsilon},
         {"value", report.value},       {"raw_value", report.raw_value},
         {"clamped", report.clamped},   {"target", to_string(report.target)},
         {"terms", terms}};
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

BoundReport report_from_json(const nlohmann::json& j) {
  BoundReport report;
  try {
    report.bound_id = j.at("bound_id").get<std::string>();
    report.epsilon = j.at("epsilon").get<double>();
    report.value = j.at("value").get<double>();
    report.raw_value = j.at("raw_value").get<double>();
    report.clamped = j.at("clamped").get<bool>();
    report.target = target_from_string(j.at("target").get<std::string>());
    for (const auto& [k, v] : j.at("terms").items()) {
      report.terms[k] = v.get<double>();
    }
    if (j.contains("note")) report.note = j.at("note").get<std::string>();
  } catch (const json::exception& e) {
    throw schema_error(std::string("report: ") + e.what());
  }
  return report;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string reports_csv_header() { return "epsilon,bound_id,target,value,raw_value,clamped,terms"; }

std::string report_to_csv_row(const BoundReport& report) {
  std::string terms;
  for (const auto& [k, v] : report.terms) {  // std::map keeps keys sorted
    if (!terms.empty()) terms += ';';
    terms += k;
    terms += '=';
    terms += format_double(v);
  }
  return format_double(report.epsilon) + "," + report.bound_id + "," +
         to_string(report.target) + "," + format_double(report.value) + "," +
         format_double(report.raw_value) + "," + (report.clamped ? "true" : "false") + "," +
         terms;
}

}  // namespace lolb::cli
