#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asprt/config.hpp"

namespace asprt {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One simulated cell of a table.
struct TableRow {
  Scenario scenario;
  double alpha = 0.0;
  double beta = 0.0;
  ExperimentSummary summary;
};

/// Run every cell of `spec` in table order.
inline std::vector<TableRow> run_table(const TableSpec& spec,
                                       unsigned threads = default_thread_count()) {
  std::vector<TableRow> rows;
  const auto cells = experiments(spec);
  std::size_t k = 0;
  for (const auto& sc : spec.scenarios) {
    for (std::size_t i = 0; i < sc.alphas.size(); ++i, ++k) {
      rows.push_back({sc, sc.alphas[i], sc.betas[i], run_experiment(cells[k], threads)});
    }
  }
  return rows;
}

//---------------------------------------------------------------------------//
// Pair labels
//---------------------------------------------------------------------------//

/// "<id>|<f0>|<f1>" with each density in describe() form.  The pair can be
/// recovered with parse_pair_label, so every analytic column of a CSV row is
/// recomputable from the row alone.
inline std::string scenario_label(const Scenario& sc) {
  return sc.id + "|" + describe(sc.pair.f0) + "|" + describe(sc.pair.f1);
}

inline DistributionSpec parse_distribution_label(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ParseError(std::string(text), "malformed distribution label");
  }
  const std::string_view family = text.substr(0, open);
  std::vector<double> p;
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  while (!body.empty()) {
    const auto semi = body.find(';');
    const std::string tok(body.substr(0, semi));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty()) {
      throw ParseError(std::string(text), "bad number '" + tok + "'");
    }
    p.push_back(v);
    body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
  }
  DistributionSpec spec;
  if (family == "normal" && p.size() == 2) {
    spec = Normal{p[0], p[1]};
  } else if (family == "poisson" && p.size() == 1) {
    spec = Poisson{p[0]};
  } else if (family == "asymmetric_laplace" && p.size() == 3) {
    spec = AsymmetricLaplace{p[0], p[1], p[2]};
  } else {
    throw ParseError(std::string(text), "unknown family or parameter count");
  }
  validate(spec);
  return spec;
}

inline HypothesisPair parse_pair_label(std::string_view label) {
  const auto a = label.find('|');
  const auto b = label.find('|', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    throw ParseError(std::string(label), "expected '<id>|<f0>|<f1>'");
  }
  return {parse_distribution_label(label.substr(a + 1, b - a - 1)),
          parse_distribution_label(label.substr(b + 1))};
}

//---------------------------------------------------------------------------//
// CSV and Markdown
//---------------------------------------------------------------------------//

namespace detail {

inline std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Three decimals with trailing zeros dropped: 400, 44.444, 5.771.
inline std::string caption_number(double v) {
  std::string s = fixed3(v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

inline std::string alpha_label(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", a);
  return buf;
}

inline bool all_classical(const std::vector<TableRow>& rows) {
  for (const auto& r : rows) {
    if (r.scenario.procedure != Procedure::Classical) return false;
  }
  return !rows.empty();
}

}  // namespace detail

inline std::vector<std::string> csv_columns(bool classical) {
  if (classical) {
    return {"scenario_id", "alpha", "beta", "pcs", "se_pcs", "e_n1", "se_n1",
            "rounds", "se_rounds", "total_draws", "n1_star_closed",
            "n1_star_series", "asn_wald_k0", "replications", "master_seed"};
  }
  return {"scenario_id", "alpha",          "beta",           "pcs",
          "se_pcs",      "e_n1",           "se_n1",          "asn",
          "se_asn",      "n1_star_closed", "n1_star_series", "asn_wald_k0",
          "replications", "master_seed"};
}

/// CSV with 17 significant digits.  Tables made only of classical scenarios
/// label the ASN column "rounds" and add "total_draws".
inline void emit_csv(const std::vector<TableRow>& rows, std::ostream& os) {
  using detail::full_precision;
  const bool classical = detail::all_classical(rows);
  const auto cols = csv_columns(classical);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    os << scenario_label(r.scenario) << "," << full_precision(r.alpha) << ","
       << full_precision(r.beta) << "," << full_precision(s.pcs) << ","
       << full_precision(s.se_pcs) << "," << full_precision(s.mean_n_inferior)
       << "," << full_precision(s.se_n_inferior) << "," << full_precision(s.asn)
       << "," << full_precision(s.se_asn) << ",";
    if (classical) os << full_precision(s.mean_total_draws) << ",";
    os << full_precision(s.n1_star_closed) << ","
       << full_precision(s.n1_star_series) << "," << full_precision(s.asn_wald_k0)
       << "," << s.replications << "," << r.scenario.seed << "\n";
  }
}

/// One subtable per scenario, values rounded to three decimals, N_1^* in the
/// caption line.
inline void emit_markdown(const std::vector<TableRow>& rows, const std::string& title,
                          std::ostream& os) {
  using detail::fixed3;
  if (!title.empty()) os << "## " << title << "\n\n";
  const Scenario* current = nullptr;
  for (const auto& r : rows) {
    const auto& s = r.summary;
    const bool classical = r.scenario.procedure == Procedure::Classical;
    if (!current || r.scenario.id != current->id) {
      if (current) os << "\n";
      current = &r.scenario;
      const auto& caption =
          current->caption.empty()
              ? describe(current->pair.f0) + " vs " + describe(current->pair.f1)
              : current->caption;
      os << "**(" << current->id << ") " << caption << ", N_1^* = "
         << detail::caption_number(s.n1_star_closed) << "**\n\n";
      if (classical) {
        os << "| alpha(=beta) | PCS | rounds | total_draws |\n|---|---|---|---|\n";
      } else {
        os << "| alpha(=beta) | PCS | E(N_1,n) | ASN |\n|---|---|---|---|\n";
      }
    }
    std::string a = detail::alpha_label(r.alpha);
    if (r.beta != r.alpha) a += " / " + detail::alpha_label(r.beta);
    os << "| " << a << " | " << fixed3(s.pcs) << " | ";
    if (classical) {
      os << fixed3(s.asn) << " | " << fixed3(s.mean_total_draws) << " |\n";
    } else {
      os << fixed3(s.mean_n_inferior) << " | " << fixed3(s.asn) << " |\n";
    }
  }
}

inline void emit_table(const std::vector<TableRow>& rows, const TableSpec& spec,
                       std::ostream& os) {
  if (rows.empty()) throw DomainError("no summaries to emit");
  if (spec.format == OutputFormat::Csv) {
    emit_csv(rows, os);
  } else {
    emit_markdown(rows, spec.title, os);
  }
}

/// Write to spec.output_path, or standard output when it is empty.
inline void emit_table(const std::vector<TableRow>& rows, const TableSpec& spec) {
  if (spec.output_path.empty()) {
    emit_table(rows, spec, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(spec.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + spec.output_path + "' for writing");
  emit_table(rows, spec, out);
  out.flush();
  if (!out) throw IoError("write to '" + spec.output_path + "' failed");
}

/// Minimal reader for the CSV written by emit_csv (no quoting is ever
/// produced).  Row 0 is the header.
inline std::vector<std::vector<std::string>> read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      fields.push_back(line.substr(start, pos - start));
    }
    fields.push_back(line.substr(start));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace asprt
