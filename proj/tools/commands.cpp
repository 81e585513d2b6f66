#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "lolb/classical_bounds.hpp"
#include "lolb/oracle.hpp"
#include "lolb/quantum_bounds.hpp"

namespace lolb::cli {

namespace {

using nlohmann::json;

std::string read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream file(path);
  if (!file) throw schema_error("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

struct BoundOptions {
  std::string input = "-";
  std::string functional;
  std::string bound_filter = "all";
  std::string format;
  std::string spectrum_source;  // inline JSON or @file
  double energy_cap = std::numeric_limits<double>::quiet_NaN();
  int energy_axis = 1;
  int d = 0;
  std::uint64_t support_size = 0;
  bool clamp = true;
  std::uint64_t seed = 1;
  int budget = 64;
};

std::optional<EnergySpectrum> spectrum_of(const BoundOptions& opt) {
  if (opt.spectrum_source.empty()) return std::nullopt;
  std::string text = opt.spectrum_source;
  if (!text.empty() && text.front() == '@') text = read_source(text.substr(1));
  return load_spectrum(text);
}

std::optional<EnergyConstraint> energy_constraint_of(const BoundOptions& opt) {
  auto spectrum = spectrum_of(opt);
  if (!spectrum || std::isnan(opt.energy_cap)) return std::nullopt;
  return EnergyConstraint{std::move(*spectrum), opt.energy_cap};
}

std::vector<BoundReport> compute_reports(const InputDocument& doc, double eps,
                                         const BoundOptions& opt) {
  const std::string& f = opt.functional;
  if (doc.kind == InputDocument::Kind::prob1) {
    if (f == "entropy") return {entropy_lower_bound(*doc.prob, eps)};
    if (f == "energy") {
      auto spectrum = spectrum_of(opt);
      if (!spectrum) throw schema_error("energy functional needs --energy-spectrum");
      return {affine_functional_lower_bound(*doc.prob, *spectrum, eps)};
    }
  } else if (doc.kind == InputDocument::Kind::prob2) {
    if (f == "equivocation") {
      EquivocationOptions options;
      if (opt.support_size > 0) options.support_size = opt.support_size;
      options.energy = energy_constraint_of(opt);
      return equivocation_lower_bounds(*doc.prob, eps, options);
    }
    if (f == "mi") {
      MiOptions options;
      options.energy = energy_constraint_of(opt);
      if (options.energy) options.energy_axis = opt.energy_axis;
      return mi_lower_bounds(*doc.prob, eps, options);
    }
  } else if (doc.kind == InputDocument::Kind::density) {
    if (f == "entropy") {
      EntropyBoundOptions options;
      options.energy = energy_constraint_of(opt);
      return entropy_lower_bounds(*doc.density, eps, options);
    }
    if (f == "energy") {
      auto spectrum = spectrum_of(opt);
      if (!spectrum) throw schema_error("energy functional needs --energy-spectrum");
      return {energy_lower_bound(*doc.density, *spectrum, eps)};
    }
  } else if (doc.kind == InputDocument::Kind::qc_ensemble) {
    if (f == "qce") {
      QceBoundOptions options;
      options.energy = energy_constraint_of(opt);
      return qce_lower_bounds(*doc.ensemble, eps, options);
    }
  } else if (doc.kind == InputDocument::Kind::pair) {
    if (f == "kl" && doc.first->kind == InputDocument::Kind::prob1) {
      std::optional<int> d;
      if (opt.d > 0) d = opt.d;
      return kl_lower_bounds(*doc.first->prob, *doc.second->prob, eps, d);
    }
    if (f == "re" && doc.first->kind == InputDocument::Kind::density) {
      RelativeEntropyBoundOptions options;
      if (opt.d > 0) options.d = opt.d;
      options.energy = energy_constraint_of(opt);
      return relative_entropy_lower_bounds(*doc.first->density, *doc.second->density, eps,
                                           options);
    }
  }
  throw schema_error("functional '" + f + "' is not compatible with this input kind");
}

std::vector<BoundReport> filter_reports(std::vector<BoundReport> reports,
                                        const BoundOptions& opt, std::ostream& err) {
  if (opt.bound_filter != "all") {
    std::vector<BoundReport> kept;
    for (auto& r : reports) {
      if (r.bound_id == opt.bound_filter) kept.push_back(std::move(r));
    }
    if (kept.empty()) {
      err << "note: bound '" << opt.bound_filter
          << "' is not applicable to this input at this eps\n";
    }
    reports = std::move(kept);
  }
  if (!opt.clamp) {
    for (auto& r : reports) {
      r.value = r.raw_value;
      r.clamped = false;
    }
  }
  return reports;
}

void write_reports(const std::vector<BoundReport>& reports, const std::string& format,
                   std::ostream& out) {
  if (format == "csv") {
    out << reports_csv_header() << "\n";
    for (const auto& r : reports) out << report_to_csv_row(r) << "\n";
    return;
  }
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  out << arr.dump(2) << "\n";
}

int cmd_bound(const BoundOptions& opt, double eps, std::ostream& out, std::ostream& err) {
  const InputDocument doc = load_input_document(read_source(opt.input));
  auto reports = filter_reports(compute_reports(doc, eps, opt), opt, err);
  write_reports(reports, opt.format.empty() ? "json" : opt.format, out);
  return 0;
}

int cmd_curve(const BoundOptions& opt, std::vector<double> grid, std::ostream& out,
              std::ostream& err) {
  if (grid.empty()) throw schema_error("curve: empty eps grid");
  for (double e : grid) {
    if (!(e > 0.0 && e <= 1.0)) throw schema_error("curve: grid values must lie in (0, 1]");
  }
  std::sort(grid.begin(), grid.end());
  const InputDocument doc = load_input_document(read_source(opt.input));
  std::vector<BoundReport> rows;
  for (double eps : grid) {
    auto reports = filter_reports(compute_reports(doc, eps, opt), opt, err);
    rows.insert(rows.end(), reports.begin(), reports.end());
  }
  write_reports(rows, opt.format.empty() ? "csv" : opt.format, out);
  return 0;
}

FunctionalSpec functional_spec_for(const InputDocument& doc, const BoundOptions& opt) {
  FunctionalSpec spec;
  const std::string& f = opt.functional;
  if (f == "entropy") {
    spec.kind = Functional::entropy;
  } else if (f == "energy") {
    spec.kind = Functional::energy;
    spec.spectrum = spectrum_of(opt);
  } else if (f == "equivocation") {
    spec.kind = Functional::equivocation;
  } else if (f == "mi") {
    spec.kind = Functional::mutual_information;
  } else if (f == "kl") {
    spec.kind = Functional::kl;
    spec.q = *doc.second->prob;
  } else if (f == "re") {
    spec.kind = Functional::relative_entropy;
    spec.omega = *doc.second->density;
  } else if (f == "qce") {
    spec.kind = Functional::qce;
  } else {
    throw schema_error("unknown functional '" + f + "'");
  }
  return spec;
}

BallSpec ball_spec_for(const InputDocument& doc, const BoundReport& report, double eps,
                       const BoundOptions& opt) {
  BallSpec spec;
  spec.eps = eps;
  if (doc.kind == InputDocument::Kind::pair) {
    if (doc.first->prob) {
      spec.center = *doc.first->prob;
    } else {
      spec.center = *doc.first->density;
    }
  } else if (doc.prob) {
    spec.center = *doc.prob;
  } else if (doc.density) {
    spec.center = *doc.density;
  } else {
    spec.center = *doc.ensemble;
  }
  switch (report.target) {
    case InfimumTarget::full:
      break;
    case InfimumTarget::commuting:
      spec.constraint = CommutingConstraint{};
      break;
    case InfimumTarget::rank_restricted:
      spec.constraint = RankConstraint{opt.d > 0 ? opt.d : 2};
      break;
    case InfimumTarget::energy_constrained: {
      auto energy = energy_constraint_of(opt);
      if (energy) spec.constraint = EnergyBallConstraint{energy->spectrum, energy->cap};
      break;
    }
    case InfimumTarget::qc_block:
      spec.constraint = EnsembleBlockConstraint{};
      break;
  }
  return spec;
}

void enforce_desk_scale(const InputDocument& doc) {
  const InputDocument& target = doc.kind == InputDocument::Kind::pair ? *doc.first : doc;
  if (target.prob && target.prob->size() > 64) {
    throw std::domain_error("verify: classical inputs are limited to 64 cells");
  }
  if (target.density && target.density->dim() > 8) {
    throw std::domain_error("verify: quantum inputs are limited to dimension 8");
  }
  if (target.ensemble && target.ensemble->dim() > 8) {
    throw std::domain_error("verify: quantum inputs are limited to dimension 8");
  }
}

int cmd_verify(const BoundOptions& opt, double eps, std::ostream& out, std::ostream& err) {
  const InputDocument doc = load_input_document(read_source(opt.input));
  enforce_desk_scale(doc);
  auto reports = filter_reports(compute_reports(doc, eps, opt), opt, err);
  const FunctionalSpec functional = functional_spec_for(doc, opt);
  OracleBudget budget;
  budget.restarts = opt.budget;
  out << "bound_id,epsilon,target,value,oracle_min,slack,sound\n";
  bool all_sound = true;
  for (const auto& report : reports) {
    const BallSpec ball = ball_spec_for(doc, report, eps, opt);
    const Certification cert = certify_bound(report, ball, functional, budget, opt.seed);
    all_sound = all_sound && cert.sound;
    out << report.bound_id << "," << format_double(report.epsilon) << ","
        << to_string(report.target) << "," << format_double(report.value) << ","
        << format_double(cert.oracle.min_value) << "," << format_double(cert.slack) << ","
        << (cert.sound ? "true" : "false") << "\n";
  }
  return all_sound ? 0 : 1;
}

int cmd_gibbs(const BoundOptions& opt, const std::vector<double>& E_grid, std::ostream& out) {
  if (E_grid.empty()) throw schema_error("gibbs: empty E grid");
  auto spectrum = spectrum_of(opt);
  if (!spectrum) throw schema_error("gibbs needs --energy-spectrum");
  out << "E,beta,F,tail_error,status\n";
  bool any_error = false;
  for (double E : E_grid) {
    try {
      const GibbsSolution sol = solve_beta(*spectrum, E);
      out << format_double(E) << "," << format_double(sol.beta) << ","
          << format_double(sol.F_value) << "," << format_double(sol.tail_error) << ",ok\n";
    } catch (const std::out_of_range& e) {
      any_error = true;
      out << format_double(E) << ",,,,error: " << e.what() << "\n";
    }
  }
  if (any_error) throw std::domain_error("gibbs: some E values were out of range");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"local lower bounds on entropic quantities over trace-norm neighborhoods"};
  app.require_subcommand(1);

  BoundOptions opt;
  double eps = 0.0;
  std::vector<double> grid;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input) {
      cmd->add_option("--input,-i", opt.input, "input JSON file, or - for stdin");
      cmd->add_option("--functional,-f", opt.functional,
                      "entropy | energy | equivocation | mi | kl | re | qce")
          ->required();
      cmd->add_option("--bound", opt.bound_filter, "bound id to keep, or 'all'");
      cmd->add_option("--d", opt.d, "rank/support restriction parameter d >= 2");
      cmd->add_option("--support-size", opt.support_size, "support-size override");
      cmd->add_option("--energy-axis", opt.energy_axis, "marginal axis (1 or 2)");
      cmd->add_flag("!--no-clamp,--clamp", opt.clamp,
                    "clamp reported values at 0 (default; --no-clamp reports raw)");
      cmd->add_option("--format", opt.format, "json | csv");
    }
    cmd->add_option("--energy-spectrum", opt.spectrum_source,
                    "spectrum JSON (inline, or @file)");
    cmd->add_option("--energy-cap", opt.energy_cap, "mean-energy cap E");
  };

  CLI::App* bound = app.add_subcommand("bound", "evaluate all applicable bounds at one eps");
  add_common(bound, true);
  bound->add_option("--epsilon,-e", eps, "ball radius in (0, 1]")->required();

  CLI::App* curve = app.add_subcommand("curve", "sweep an eps grid (faithfulness curves)");
  add_common(curve, true);
  curve->add_option("--eps-grid", grid, "comma-separated eps values")
      ->required()
      ->delimiter(',');

  CLI::App* verify = app.add_subcommand("verify", "certify bounds against the ball oracle");
  add_common(verify, true);
  verify->add_option("--epsilon,-e", eps, "ball radius in (0, 1]")->required();
  verify->add_option("--seed", opt.seed, "oracle seed");
  verify->add_option("--budget", opt.budget, "oracle restart budget");

  CLI::App* gibbs = app.add_subcommand("gibbs", "tabulate beta(E) and F(E) for a spectrum");
  add_common(gibbs, false);
  gibbs->add_option("--E-grid", grid, "comma-separated mean energies")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (bound->parsed()) return cmd_bound(opt, eps, out, err);
    if (curve->parsed()) return cmd_curve(opt, grid, out, err);
    if (verify->parsed()) return cmd_verify(opt, eps, out, err);
    if (gibbs->parsed()) return cmd_gibbs(opt, grid, out);
  } catch (const schema_error& e) {
    err << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const support_violation& e) {
    err << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    err << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "precondition error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace lolb::cli
