#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "asprt/errors.hpp"
#include "asprt/montecarlo.hpp"

namespace asprt {

enum class OutputFormat : std::uint8_t { Csv, Markdown };

/// One pair of populations evaluated over an alpha (= beta unless `betas` is
/// given) grid.
struct Scenario {
  std::string id;
  std::string caption;
  HypothesisPair pair;
  std::vector<double> alphas;
  std::vector<double> betas;  ///< same length as alphas
  Procedure procedure = Procedure::Adaptive;
  TruthMode truth = TruthMode::H0;
  std::int64_t replications = 1000;
  std::uint64_t seed = 1;
  std::int64_t cap = kDefaultCap;
};

struct TableSpec {
  std::string title;
  std::vector<Scenario> scenarios;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path;  ///< empty: standard output
};

/// Each cell of each scenario as a runnable experiment, in table order.
inline std::vector<ExperimentConfig> experiments(const TableSpec& spec) {
  std::vector<ExperimentConfig> out;
  for (const auto& sc : spec.scenarios) {
    for (std::size_t i = 0; i < sc.alphas.size(); ++i) {
      ExperimentConfig cfg;
      cfg.pair = sc.pair;
      cfg.truth = sc.truth;
      cfg.alpha = sc.alphas[i];
      cfg.beta = sc.betas[i];
      cfg.replications = sc.replications;
      cfg.master_seed = sc.seed;
      cfg.procedure = sc.procedure;
      cfg.cap = sc.cap;
      out.push_back(cfg);
    }
  }
  return out;
}

struct ConfigDocument {
  TableSpec table;
  std::vector<ExperimentConfig> experiments;
};

//---------------------------------------------------------------------------//
// Presets for the standard simulation grids
//---------------------------------------------------------------------------//

namespace detail {

inline Scenario preset_scenario(std::string id, std::string caption,
                                HypothesisPair pair, std::vector<double> alphas,
                                Procedure procedure) {
  Scenario s;
  s.id = std::move(id);
  s.caption = std::move(caption);
  s.pair = std::move(pair);
  s.betas = alphas;
  s.alphas = std::move(alphas);
  s.procedure = procedure;
  return s;
}

inline std::string subtable_id(std::string_view table, std::size_t k) {
  return std::string(table) + static_cast<char>('a' + k);
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"table1", "table2", "table3", "table4"};
  return names;
}

/// Presets table1..table4.  Throws ParseError for an unknown name.
inline TableSpec preset(std::string_view name) {
  const std::vector<double> grid{1e-3, 5e-5, 1e-5, 5e-6, 1e-6};
  TableSpec spec;
  spec.title = std::string(name);
  if (name == "table1") {
    const double means[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    for (std::size_t k = 0; k < 5; ++k) {
      spec.scenarios.push_back(detail::preset_scenario(
          detail::subtable_id(name, k),
          "(theta0, theta1) = (" + shortest(means[k]) + ", 0)",
          {Normal{means[k], 1.0}, Normal{0.0, 1.0}}, grid, Procedure::Adaptive));
    }
  } else if (name == "table2") {
    const double rates[][2] = {{2.5, 2}, {3, 2.5}, {3.5, 2.5}, {2, 1}, {1.5, 0.5}, {2.5, 1}};
    for (std::size_t k = 0; k < 6; ++k) {
      spec.scenarios.push_back(detail::preset_scenario(
          detail::subtable_id(name, k),
          "(lambda0, lambda1) = (" + shortest(rates[k][0]) + ", " +
              shortest(rates[k][1]) + ")",
          {Poisson{rates[k][0]}, Poisson{rates[k][1]}}, grid, Procedure::Adaptive));
    }
  } else if (name == "table3") {
    const std::vector<double> al_grid{1e-3, 1e-5, 5e-6, 1e-6, 1e-7};
    const AsymmetricLaplace pairs[][2] = {
        {{0.2, 2, 0.7}, {0, 1, 0.3}},
        {{0.2, 1, 0.8}, {0, 2, 0.2}},
        {{0.4, 1, 0.6}, {0, 1, 0.2}},
        {{0, 2, 0.7}, {0.2, 2, 0.3}},
    };
    auto triple = [](const AsymmetricLaplace& d) {
      return "(" + shortest(d.location) + ", " + shortest(d.scale) + ", " +
             shortest(d.asymmetry) + ")";
    };
    for (std::size_t k = 0; k < 4; ++k) {
      spec.scenarios.push_back(detail::preset_scenario(
          detail::subtable_id(name, k),
          "(m0, lambda0, kappa0) = " + triple(pairs[k][0]) +
              ", (m1, lambda1, kappa1) = " + triple(pairs[k][1]),
          {pairs[k][0], pairs[k][1]}, al_grid, Procedure::Adaptive));
    }
  } else if (name == "table4") {
    const std::vector<double> classical_grid{1e-2, 1e-3, 1e-4, 1e-5};
    const double means[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    for (std::size_t k = 0; k < 5; ++k) {
      spec.scenarios.push_back(detail::preset_scenario(
          detail::subtable_id(name, k),
          "(mu0, mu1) = (" + shortest(means[k]) + ", 0)",
          {Normal{means[k], 1.0}, Normal{0.0, 1.0}}, classical_grid,
          Procedure::Classical));
    }
  } else {
    throw ParseError("/preset", "unknown preset '" + std::string(name) +
                                    "' (expected table1..table4)");
  }
  return spec;
}

//---------------------------------------------------------------------------//
// Config documents (JSON)
//---------------------------------------------------------------------------//

inline constexpr int kSchemaVersion = 1;

namespace detail {

using Json = nlohmann::json;

inline std::string join_ptr(const std::string& base, std::string_view key) {
  return base + "/" + std::string(key);
}

inline void reject_unknown(const Json& obj, const std::string& at,
                           const std::set<std::string, std::less<>>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ParseError(join_ptr(at, key), "unknown key");
  }
}

inline double number_at(const Json& v, const std::string& at) {
  if (!v.is_number()) throw ParseError(at, "expected a number");
  return v.get<double>();
}

template <class T>
T integer_at(const Json& v, const std::string& at) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError(at, "expected an integer");
  }
  return v.get<T>();
}

inline std::string string_at(const Json& v, const std::string& at) {
  if (!v.is_string()) throw ParseError(at, "expected a string");
  return v.get<std::string>();
}

// Positional array or named object; names listed in positional order.
inline std::vector<double> params_at(const Json& v, const std::string& at,
                                     const std::vector<std::string>& names,
                                     std::size_t required) {
  std::vector<double> out;
  if (v.is_array()) {
    if (v.size() < required || v.size() > names.size()) {
      throw ParseError(at, "expected " + std::to_string(required) + ".." +
                               std::to_string(names.size()) + " parameters");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number_at(v[i], at + "/" + std::to_string(i)));
    }
    return out;
  }
  if (v.is_object()) {
    reject_unknown(v, at, {names.begin(), names.end()});
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (v.contains(names[i])) {
        out.push_back(number_at(v[names[i]], join_ptr(at, names[i])));
      } else if (i < required) {
        throw ParseError(join_ptr(at, names[i]), "missing parameter");
      } else {
        break;
      }
    }
    return out;
  }
  throw ParseError(at, "expected an array or object of parameters");
}

inline DistributionSpec distribution_at(std::string_view family, const Json& v,
                                        const std::string& at,
                                        const std::string& family_at) {
  DistributionSpec spec;
  if (family == "normal") {
    const auto p = params_at(v, at, {"mean", "variance"}, 1);
    spec = Normal{p[0], p.size() > 1 ? p[1] : 1.0};
  } else if (family == "poisson") {
    spec = Poisson{params_at(v, at, {"rate"}, 1)[0]};
  } else if (family == "asymmetric_laplace" || family == "al") {
    const auto p = params_at(v, at, {"location", "scale", "asymmetry"}, 3);
    spec = AsymmetricLaplace{p[0], p[1], p[2]};
  } else {
    throw ParseError(family_at, "unknown distribution '" + std::string(family) +
                                    "' (normal, poisson, asymmetric_laplace)");
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw ParseError(at, e.what());
  }
  return spec;
}

inline std::vector<double> probabilities_at(const Json& v, const std::string& at) {
  if (!v.is_array() || v.empty()) throw ParseError(at, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string here = at + "/" + std::to_string(i);
    const double p = number_at(v[i], here);
    if (!(p > 0.0 && p < 1.0)) throw ParseError(here, "must lie in (0, 1)");
    out.push_back(p);
  }
  return out;
}

inline Procedure procedure_at(const Json& v, const std::string& at) {
  const auto s = string_at(v, at);
  if (s == "adaptive") return Procedure::Adaptive;
  if (s == "classical") return Procedure::Classical;
  throw ParseError(at, "procedure must be 'adaptive' or 'classical'");
}

inline TruthMode truth_at(const Json& v, const std::string& at) {
  const auto s = string_at(v, at);
  if (s == "H0") return TruthMode::H0;
  if (s == "H1") return TruthMode::H1;
  if (s == "random") return TruthMode::Random;
  throw ParseError(at, "truth must be 'H0', 'H1' or 'random'");
}

// Settings that may appear at the top level (as defaults) or per scenario.
inline void apply_run_settings(const Json& obj, const std::string& at, Scenario& s) {
  if (obj.contains("replications")) {
    s.replications = integer_at<std::int64_t>(obj["replications"], join_ptr(at, "replications"));
    if (s.replications < 1) throw ParseError(join_ptr(at, "replications"), "must be >= 1");
  }
  if (obj.contains("seed")) s.seed = integer_at<std::uint64_t>(obj["seed"], join_ptr(at, "seed"));
  if (obj.contains("procedure")) s.procedure = procedure_at(obj["procedure"], join_ptr(at, "procedure"));
  if (obj.contains("truth")) s.truth = truth_at(obj["truth"], join_ptr(at, "truth"));
  if (obj.contains("cap")) {
    s.cap = integer_at<std::int64_t>(obj["cap"], join_ptr(at, "cap"));
    if (s.cap < 2) throw ParseError(join_ptr(at, "cap"), "must be >= 2");
  }
}

inline Scenario scenario_at(const Json& obj, const std::string& at,
                            const Scenario& defaults, std::size_t index) {
  if (!obj.is_object()) throw ParseError(at, "expected an object");
  for (const char* key : {"distribution", "params_f0", "params_f1", "alphas"}) {
    if (!obj.contains(key)) throw ParseError(join_ptr(at, key), "missing required key");
  }
  Scenario s = defaults;
  s.id = obj.contains("id") ? string_at(obj["id"], join_ptr(at, "id"))
                            : "s" + std::to_string(index + 1);
  if (obj.contains("caption")) s.caption = string_at(obj["caption"], join_ptr(at, "caption"));
  const auto family_at = join_ptr(at, "distribution");
  const auto family = string_at(obj["distribution"], family_at);
  s.pair.f0 = distribution_at(family, obj["params_f0"], join_ptr(at, "params_f0"), family_at);
  s.pair.f1 = distribution_at(family, obj["params_f1"], join_ptr(at, "params_f1"), family_at);
  if (s.pair.f0 == s.pair.f1) {
    throw ParseError(join_ptr(at, "params_f1"), "f0 and f1 must differ");
  }
  s.alphas = probabilities_at(obj["alphas"], join_ptr(at, "alphas"));
  if (obj.contains("betas")) {
    s.betas = probabilities_at(obj["betas"], join_ptr(at, "betas"));
    if (s.betas.size() != s.alphas.size()) {
      throw ParseError(join_ptr(at, "betas"), "must have the same length as alphas");
    }
  } else {
    s.betas = s.alphas;
  }
  apply_run_settings(obj, at, s);
  return s;
}

}  // namespace detail

/// Parse a JSON configuration document.
///
/// A document is either a single scenario at the top level or an object with
/// a "scenarios" array; see configs/README.md for the schema.  Errors name
/// the offending key as a JSON pointer.
inline ConfigDocument parse_config(std::string_view text) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "invalid JSON");
  }
  if (!doc.is_object()) throw ParseError("", "document must be an object");

  const std::string root;
  const std::set<std::string, std::less<>> scenario_keys{
      "id", "caption", "distribution", "params_f0", "params_f1", "alphas",
      "betas", "replications", "seed", "procedure", "truth", "cap"};
  const std::set<std::string, std::less<>> document_keys{
      "schema_version", "title", "format", "output", "scenarios", "preset",
      "replications", "seed", "procedure", "truth", "cap"};

  const bool single = !doc.contains("scenarios") && !doc.contains("preset");
  auto allowed = document_keys;
  if (single) allowed.insert(scenario_keys.begin(), scenario_keys.end());
  detail::reject_unknown(doc, root, allowed);

  if (doc.contains("schema_version")) {
    const auto v = detail::integer_at<int>(doc["schema_version"], "/schema_version");
    if (v != kSchemaVersion) {
      throw ParseError("/schema_version", "unsupported version " + std::to_string(v));
    }
  }

  ConfigDocument out;
  TableSpec& table = out.table;
  if (doc.contains("title")) table.title = detail::string_at(doc["title"], "/title");
  if (doc.contains("format")) {
    const auto f = detail::string_at(doc["format"], "/format");
    if (f == "csv") {
      table.format = OutputFormat::Csv;
    } else if (f == "markdown") {
      table.format = OutputFormat::Markdown;
    } else {
      throw ParseError("/format", "format must be 'csv' or 'markdown'");
    }
  }
  if (doc.contains("output")) table.output_path = detail::string_at(doc["output"], "/output");

  Scenario defaults;
  detail::apply_run_settings(doc, root, defaults);

  if (doc.contains("preset")) {
    if (doc.contains("scenarios")) {
      throw ParseError("/preset", "'preset' and 'scenarios' are exclusive");
    }
    TableSpec p = preset(detail::string_at(doc["preset"], "/preset"));
    if (table.title.empty()) table.title = p.title;
    for (auto& s : p.scenarios) {
      detail::apply_run_settings(doc, root, s);
      table.scenarios.push_back(std::move(s));
    }
  } else if (single) {
    table.scenarios.push_back(detail::scenario_at(doc, root, defaults, 0));
  } else {
    const auto& list = doc["scenarios"];
    if (!list.is_array() || list.empty()) {
      throw ParseError("/scenarios", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "/scenarios/" + std::to_string(i);
      if (list[i].is_object()) detail::reject_unknown(list[i], at, scenario_keys);
      table.scenarios.push_back(detail::scenario_at(list[i], at, defaults, i));
    }
  }
  out.experiments = experiments(table);
  return out;
}

}  // namespace asprt
