#pragma once

// Canonical report serialization and DOT graph export.
//
// Reports are JSON objects with lexicographically sorted keys; every
// non-integer number is rounded to 12 significant digits before rendering,
// so equal reports always serialize to equal bytes.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlens/congruence.hpp"
#include "teamlens/core.hpp"
#include "teamlens/diagnostics.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/metrics.hpp"

namespace teamlens {

inline constexpr int kReportSchemaVersion = 1;

struct NetworkSummary {
  std::string source;
  bool directed = false;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  double total_weight = 0.0;
};

inline NetworkSummary summarize(const std::string& source, const SocialNetwork& net) {
  return {source, net.directed(), net.size(), net.edge_count(), density(net), net.total_weight()};
}

struct SprintReport {
  std::string team_id;
  std::string sprint_label;
  Timestamp window_start{};
  Timestamp window_end{};
  std::map<std::string, std::size_t> event_counts;
  std::vector<NetworkSummary> networks;
  std::string centrality_source;
  CentralityScores degree;
  std::optional<CentralityScores> betweenness;
  std::optional<TriadCensus> census_undirected;
  std::optional<TriadCensus> census_directed;
  std::optional<double> transitivity;
  CongruenceResult congruence;
  std::string dependency_rule;
  std::string coordination_source;
  std::size_t file_count = 0;
  std::vector<Diagnostic> diagnostics;
  std::vector<Recommendation> recommendations;
  std::string tool_version{kToolVersion};
  std::string config_fingerprint;
};

namespace detail {

inline nlohmann::json num(double v) { return round_significant(v); }

inline nlohmann::json optional_num(const std::optional<double>& v) {
  return v ? num(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json fraction_json(const std::optional<Fraction>& f) {
  if (!f) return nullptr;
  return {{"value", num(f->value())}, {"fraction", f->str()}};
}

inline nlohmann::json census_json(const std::optional<TriadCensus>& census) {
  if (!census) return nullptr;
  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json proportions = nlohmann::json::object();
  const auto labels = census->labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string key(labels[i]);
    counts[key] = census->counts[i];
    proportions[key] = num(census->proportion(labels[i]));
  }
  return {{"counts", counts}, {"proportions", proportions}, {"total", census->total()}};
}

inline nlohmann::json pairs_json(const std::vector<NamedPair>& pairs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const Diagnostic& d) {
  nlohmann::json evidence = nlohmann::json::object();
  for (const auto& [k, v] : d.evidence) evidence[k] = detail::num(v);
  return {{"id", d.id()},
          {"kind", to_string(d.kind)},
          {"members", d.members},
          {"pairs", detail::pairs_json(d.pairs)},
          {"mediated_pairs", detail::pairs_json(d.mediated_pairs)},
          {"severity", detail::num(d.severity)},
          {"evidence", evidence}};
}

inline nlohmann::json to_json(const Recommendation& r) {
  return {{"action", to_string(r.action)},
          {"subjects", r.subjects},
          {"severity", detail::num(r.severity)},
          {"sources", r.sources},
          {"rationale", r.rationale}};
}

inline nlohmann::json to_json(const SprintReport& r) {
  nlohmann::json networks = nlohmann::json::object();
  for (const auto& n : r.networks) {
    networks[n.source] = {{"directed", n.directed},
                          {"nodes", n.nodes},
                          {"edges", n.edges},
                          {"density", detail::num(n.density)},
                          {"total_weight", detail::num(n.total_weight)}};
  }

  nlohmann::json members = nlohmann::json::array();
  for (std::size_t i = 0; i < r.degree.members.size(); ++i) {
    members.push_back({{"member", r.degree.members[i]},
                       {"degree", detail::num(r.degree.scores[i])},
                       {"betweenness", r.betweenness ? detail::num(r.betweenness->scores[i]) : nullptr}});
  }

  nlohmann::json congruence_members = nlohmann::json::array();
  for (std::size_t i = 0; i < r.congruence.members.size(); ++i) {
    congruence_members.push_back(
        {{"member", r.congruence.members[i]}, {"score", detail::fraction_json(r.congruence.member_scores[i])}});
  }
  nlohmann::json unmet = nlohmann::json::array();
  for (const auto& u : r.congruence.unmet_pairs) {
    unmet.push_back({{"pair", {r.congruence.members[u.pair.first], r.congruence.members[u.pair.second]}},
                     {"requirement", u.requirement}});
  }

  nlohmann::json diagnostics = nlohmann::json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back(to_json(d));
  nlohmann::json recommendations = nlohmann::json::array();
  for (const auto& rec : r.recommendations) recommendations.push_back(to_json(rec));

  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [k, v] : r.event_counts) counts[k] = v;

  return {
      {"schema_version", kReportSchemaVersion},
      {"tool_version", r.tool_version},
      {"config_fingerprint", r.config_fingerprint},
      {"team_id", r.team_id},
      {"sprint_label", r.sprint_label},
      {"window", {{"start", format_timestamp(r.window_start)}, {"end", format_timestamp(r.window_end)}}},
      {"event_counts", counts},
      {"networks", networks},
      {"centrality", {{"source", r.centrality_source}, {"normalized", true}, {"members", members}}},
      {"triad_census",
       {{"undirected", detail::census_json(r.census_undirected)},
        {"directed", detail::census_json(r.census_directed)}}},
      {"transitivity", detail::optional_num(r.transitivity)},
      {"congruence",
       {{"team_score", detail::fraction_json(r.congruence.team_score)},
        {"members", congruence_members},
        {"unmet_pairs", unmet},
        {"need_pairs", r.congruence.need_pairs},
        {"files", r.file_count},
        {"dependency_rule", r.dependency_rule},
        {"communication_source", r.coordination_source}}},
      {"diagnostics", diagnostics},
      {"recommendations", recommendations},
  };
}

inline std::string render(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

inline void emit_report(const SprintReport& report, std::ostream& sink) {
  sink << render(to_json(report));
  sink.flush();
  if (!sink) throw Error("failed to write report for sprint '" + report.sprint_label + "'");
}

namespace detail {

inline std::string dot_id(std::string_view raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Nodes in roster order, then one statement per edge with a weight attribute.
inline void export_graph(const SocialNetwork& net, std::ostream& sink, std::string_view name = "team") {
  const char* edge_op = net.directed() ? " -> " : " -- ";
  sink << (net.directed() ? "digraph " : "graph ") << detail::dot_id(name) << " {\n";
  for (const auto& m : net.roster().members()) sink << "  " << detail::dot_id(m) << ";\n";
  net.for_each_edge([&](std::size_t i, std::size_t j, double w) {
    sink << "  " << detail::dot_id(net.roster()[i]) << edge_op << detail::dot_id(net.roster()[j])
         << " [weight=" << format_number(w) << "];\n";
  });
  sink << "}\n";
  sink.flush();
  if (!sink) throw Error("failed to write graph export");
}

// Writes every file to a sibling temporary first and renames only after all
// writes succeeded; on failure the temporaries are removed and nothing is
// left in place.
inline void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  try {
    for (const auto& [path, content] : files) {
      auto tmp = path;
      tmp += ".tmp";
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error("cannot write '" + tmp.string() + "'");
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
  } catch (const fs::filesystem_error& ex) {
    cleanup();
    throw Error(ex.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace teamlens
