#pragma once

// Command-line front end. `run` is the whole program minus `main`, so the
// test suites can drive every subcommand in-process.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamlens/analysis.hpp"
#include "teamlens/config.hpp"
#include "teamlens/ingest.hpp"
#include "teamlens/report.hpp"
#include "teamlens/stats.hpp"

namespace teamlens::cli {

namespace fs = std::filesystem;

inline constexpr const char* kConfigEnv = "TEAMLENS_CONFIG";

struct Options {
  std::string events;
  std::string config;
  std::string out;
  std::string sprint;
  std::vector<std::string> commits;
  unsigned jobs = 1;
  bool skip_bad_lines = false;
  bool pretty = false;
  bool print_effective_config = false;
  bool directed = false;
  std::string source;

  // Overrides; flags beat the config file which beats defaults.
  std::optional<std::string> channel_policy;
  std::optional<double> min_weight;
  std::optional<std::string> dependency_rule;
  std::optional<double> coordination_min_weight;

  // correlate
  std::string reports;
  std::string outcomes;
  std::string metric;
  std::string outcome;
  std::string method = "spearman";
};

struct Table {
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out, bool pretty) const {
    std::vector<std::size_t> widths;
    if (pretty) {
      for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
      }
    }
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (pretty) {
          out << row[c];
          if (c + 1 < row.size()) out << std::string(widths[c] - row[c].size() + 2, ' ');
        } else {
          out << (c ? "\t" : "") << row[c];
        }
      }
      out << '\n';
    }
  }
};

inline std::string safe_file_part(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

inline Config resolve_config(const Options& opt) {
  std::string path = opt.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') path = env;
  }
  if (path.empty()) throw Error("no config given (use --config or set TEAMLENS_CONFIG)");
  Config config = load_config(path);
  if (opt.channel_policy) config.channel_policy = parse_channel_policy(*opt.channel_policy);
  if (opt.min_weight) config.min_weight = *opt.min_weight;
  if (opt.dependency_rule) config.dependency_rule = parse_dependency_rule(*opt.dependency_rule);
  if (opt.coordination_min_weight) config.coordination_min_weight = *opt.coordination_min_weight;
  config.validate();
  return config;
}

struct LoadedEvents {
  std::vector<InteractionEvent> events;
  std::size_t skipped = 0;
};

inline LoadedEvents load_events(const Options& opt, const Config& config, std::ostream& err) {
  if (opt.events.empty()) throw Error("--events is required");
  LoadedEvents loaded;
  {
    std::ifstream in(opt.events);
    if (!in) throw Error("cannot open events file '" + opt.events + "'");
    try {
      auto parsed = parse_events(in, {opt.skip_bad_lines});
      loaded.events = std::move(parsed.events);
      loaded.skipped += parsed.skipped;
    } catch (const ParseError& ex) {
      throw Error(opt.events + ": " + ex.what());
    }
  }
  std::vector<fs::path> logs;
  for (const auto& p : config.commit_logs) logs.push_back(fs::path(p).is_absolute() ? fs::path(p) : config.base_dir / p);
  for (const auto& p : opt.commits) logs.emplace_back(p);
  for (const auto& path : logs) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open commit log '" + path.string() + "'");
    try {
      auto parsed = parse_commit_log(in, config.aliases, {opt.skip_bad_lines});
      loaded.skipped += parsed.skipped;
      for (auto& e : parsed.events) loaded.events.push_back(std::move(e));
    } catch (const Error& ex) {
      throw Error(path.string() + ": " + ex.what());
    }
  }
  // Merge sources by time; stable so equal timestamps keep input order.
  std::stable_sort(loaded.events.begin(), loaded.events.end(),
                   [](const InteractionEvent& a, const InteractionEvent& b) { return a.timestamp < b.timestamp; });
  if (loaded.skipped > 0) err << "skipped " << loaded.skipped << " bad line(s)\n";
  return loaded;
}

inline const SprintWindow& find_sprint(const Config& config, const std::string& label) {
  if (label.empty()) throw Error("--sprint is required");
  for (const auto& w : config.sprints) {
    if (w.label == label) return w;
  }
  throw Error("unknown sprint '" + label + "'");
}

inline std::vector<InteractionEvent> sprint_events(const Config& config, const LoadedEvents& loaded,
                                                   const std::string& label) {
  find_sprint(config, label);
  auto buckets = window_events(loaded.events, config.sprints);
  return buckets.at(label);
}

inline int cmd_analyze(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.out.empty()) throw Error("--out is required");
  const auto config = resolve_config(opt);
  const auto loaded = load_events(opt, config, err);
  auto analysis = analyze_team(config, loaded.events, opt.jobs);
  analysis.skipped_lines = loaded.skipped;

  const fs::path dir(opt.out);
  const auto team = safe_file_part(config.roster.team_id());
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& report : analysis.sprints) {
    files.emplace_back(dir / (team + "__" + safe_file_part(report.sprint_label) + ".report.json"),
                       render(to_json(report)));
  }
  files.emplace_back(dir / (team + ".summary.json"), render(summary_json(config, analysis)));

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_files_atomically(files);
  for (const auto& [path, content] : files) out << path.string() << '\n';
  return 0;
}

inline int cmd_census(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(opt);
  const auto loaded = load_events(opt, config, err);
  const auto events = sprint_events(config, loaded, opt.sprint);
  const auto nets = build_networks(config, events);
  TriadCensus census;
  if (opt.directed) {
    census = triad_census_directed(threshold_binary(nets.message, config.min_weight));
  } else {
    auto source = parse_network_source(opt.source.empty() ? "merged" : opt.source);
    if (!source) throw Error("unknown --source '" + opt.source + "'");
    census = triad_census_undirected(threshold_binary(symmetrize(nets.get(*source)), config.min_weight));
  }
  Table table;
  table.rows.push_back({"class", "count", "proportion"});
  for (auto label : census.labels()) {
    table.rows.push_back({std::string(label), std::to_string(census.count(label)), format_number(census.proportion(label))});
  }
  table.print(out, opt.pretty);
  return 0;
}

inline int cmd_congruence(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(opt);
  const auto loaded = load_events(opt, config, err);
  const auto events = sprint_events(config, loaded, opt.sprint);
  const auto nets = build_networks(config, events);
  const auto commits = commits_only(events);
  const auto mats = congruence_matrices(commits, nets.get(config.coordination_source), config.roster,
                                        config.dependency_rule, config.coordination_min_weight);
  const auto result = congruence(mats.requirements, mats.actual, config.roster);

  auto score_cells = [](const std::optional<Fraction>& f) -> std::pair<std::string, std::string> {
    if (!f) return {"NA", "NA"};
    return {format_number(f->value()), f->str()};
  };
  Table table;
  table.rows.push_back({"scope", "subject", "value", "detail"});
  auto [team_value, team_detail] = score_cells(result.team_score);
  table.rows.push_back({"team", config.roster.team_id(), team_value, team_detail});
  for (std::size_t i = 0; i < result.members.size(); ++i) {
    auto [value, detail] = score_cells(result.member_scores[i]);
    table.rows.push_back({"member", result.members[i], value, detail});
  }
  for (const auto& u : result.unmet_pairs) {
    table.rows.push_back({"unmet", result.members[u.pair.first] + "-" + result.members[u.pair.second],
                          std::to_string(u.requirement), "requirement"});
  }
  table.print(out, opt.pretty);
  return 0;
}

inline int cmd_export_dot(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(opt);
  const auto loaded = load_events(opt, config, err);
  const auto events = sprint_events(config, loaded, opt.sprint);
  const auto nets = build_networks(config, events);
  auto source = parse_network_source(opt.source.empty() ? "merged" : opt.source);
  if (!source) throw Error("unknown --source '" + opt.source + "'");
  export_graph(nets.get(*source), out, config.roster.team_id() + "/" + opt.sprint + "/" + std::string(to_string(*source)));
  return 0;
}

// Walks a dotted path ("congruence.team_score.value") through objects and
// arrays. nullopt for JSON null; throws when the path does not exist.
inline std::optional<double> metric_at(const nlohmann::json& doc, const std::string& path) {
  const nlohmann::json* node = &doc;
  std::stringstream parts(path);
  for (std::string part; std::getline(parts, part, '.');) {
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() && std::all_of(part.begin(), part.end(), ::isdigit) &&
               std::stoul(part) < node->size()) {
      node = &(*node)[std::stoul(part)];
    } else {
      throw Error("metric path '" + path + "' not found in report");
    }
  }
  if (node->is_null()) return std::nullopt;
  if (!node->is_number()) throw Error("metric '" + path + "' is not numeric");
  return node->get<double>();
}

inline double outcome_value(const OutcomeRecord& rec, const std::string& name) {
  if (name == "stories_passed") return static_cast<double>(rec.stories_passed);
  if (name == "story_points_passed") return static_cast<double>(rec.story_points_passed);
  if (name == "communication_score") return rec.communication_score;
  throw Error("unknown outcome '" + name + "' (expected stories_passed|story_points_passed|communication_score)");
}

inline PairedSeries collect_series(const Options& opt) {
  if (opt.reports.empty() || opt.outcomes.empty() || opt.metric.empty() || opt.outcome.empty()) {
    throw Error("correlate needs --reports, --outcomes, --metric and --outcome");
  }
  std::ifstream outcomes_in(opt.outcomes);
  if (!outcomes_in) throw Error("cannot open outcomes file '" + opt.outcomes + "'");
  std::map<std::pair<std::string, std::string>, OutcomeRecord> outcomes;
  for (auto& rec : parse_outcomes(outcomes_in)) {
    auto key = std::make_pair(rec.team_id, rec.sprint_label);
    outcomes[key] = std::move(rec);
  }

  if (!fs::is_directory(opt.reports)) throw Error("reports directory '" + opt.reports + "' does not exist");
  std::vector<fs::path> report_files;
  for (const auto& entry : fs::directory_iterator(opt.reports)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".report.json")) report_files.push_back(entry.path());
  }
  std::sort(report_files.begin(), report_files.end());

  PairedSeries series;
  for (const auto& path : report_files) {
    std::ifstream in(path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
      throw Error("report '" + path.string() + "' is not valid JSON: " + ex.what());
    }
    const auto team = doc.at("team_id").get<std::string>();
    const auto sprint = doc.at("sprint_label").get<std::string>();
    auto metric = metric_at(doc, opt.metric);
    std::optional<double> outcome;
    if (auto it = outcomes.find({team, sprint}); it != outcomes.end()) outcome = outcome_value(it->second, opt.outcome);
    series.add(team, sprint, metric, outcome);
  }
  return series;
}

inline int cmd_correlate(const Options& opt, std::ostream& out, std::ostream&) {
  const auto series = collect_series(opt);
  double coefficient = 0.0;
  if (opt.method == "spearman") {
    coefficient = spearman(series);
  } else if (opt.method == "pearson") {
    coefficient = pearson(series);
  } else {
    throw Error("unknown --method '" + opt.method + "' (expected spearman|pearson)");
  }
  Table table;
  table.rows.push_back({"metric", "outcome", "method", "coefficient", "n", "n_dropped"});
  table.rows.push_back({opt.metric, opt.outcome, opt.method, format_number(coefficient),
                        std::to_string(series.x.size()), std::to_string(series.dropped)});
  table.print(out, opt.pretty);
  return 0;
}

inline void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--events", opt.events, "Event-line file (one JSON object per line)");
  cmd->add_option("--config", opt.config, "Config file (falls back to $TEAMLENS_CONFIG)");
  cmd->add_option("--commits", opt.commits, "Additional numstat commit log(s)");
  cmd->add_flag("--skip-bad-lines", opt.skip_bad_lines, "Skip and count malformed input lines");
  cmd->add_flag("--pretty", opt.pretty, "Align table columns for reading");
  cmd->add_flag("--print-effective-config", opt.print_effective_config, "Print the merged configuration and exit");
  cmd->add_option("--channel-policy", opt.channel_policy, "Override channel_policy (ignore|clique)");
  cmd->add_option("--min-weight", opt.min_weight, "Override min_weight for binary topology");
  cmd->add_option("--dependency-rule", opt.dependency_rule, "Override dependency_rule (cocommit|same_file_only)");
  cmd->add_option("--coordination-min-weight", opt.coordination_min_weight,
                  "Override coordination.min_weight");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options opt;
  CLI::App app{"teamlens: social network analysis of software-team interaction traces", "teamlens"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Write one report per sprint plus a team summary");
  add_common(analyze, opt);
  analyze->add_option("--out", opt.out, "Output directory");
  analyze->add_option("--jobs", opt.jobs, "Sprints analysed concurrently")->check(CLI::Range(1u, 256u));

  auto* census = app.add_subcommand("census", "Print the triad census of one sprint");
  add_common(census, opt);
  census->add_option("--sprint", opt.sprint, "Sprint label");
  census->add_flag("--directed", opt.directed, "MAN census of the message network");
  census->add_option("--source", opt.source, "Undirected source network (default merged)");
  census->add_option("--jobs", opt.jobs);

  auto* cong = app.add_subcommand("congruence", "Print socio-technical congruence of one sprint");
  add_common(cong, opt);
  cong->add_option("--sprint", opt.sprint, "Sprint label");
  cong->add_option("--jobs", opt.jobs);

  auto* correlate = app.add_subcommand("correlate", "Correlate a report metric with an outcome");
  correlate->add_option("--reports", opt.reports, "Directory of *.report.json files");
  correlate->add_option("--outcomes", opt.outcomes, "Outcomes CSV");
  correlate->add_option("--metric", opt.metric, "Dotted path into the report, e.g. transitivity");
  correlate->add_option("--outcome", opt.outcome, "stories_passed|story_points_passed|communication_score");
  correlate->add_option("--method", opt.method, "spearman (default) or pearson");
  correlate->add_flag("--pretty", opt.pretty, "Align table columns for reading");

  auto* dot = app.add_subcommand("export-dot", "Print one sprint network in DOT");
  add_common(dot, opt);
  dot->add_option("--sprint", opt.sprint, "Sprint label");
  dot->add_option("--source", opt.source, "message|cochange|collaboration|merged (default merged)");
  dot->add_option("--jobs", opt.jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (opt.print_effective_config) {
      out << to_json(resolve_config(opt)).dump(2) << '\n';
      return 0;
    }
    if (analyze->parsed()) return cmd_analyze(opt, out, err);
    if (census->parsed()) return cmd_census(opt, out, err);
    if (cong->parsed()) return cmd_congruence(opt, out, err);
    if (correlate->parsed()) return cmd_correlate(opt, out, err);
    if (dot->parsed()) return cmd_export_dot(opt, out, err);
  } catch (const std::exception& ex) {
    err << "teamlens: error: " << ex.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace teamlens::cli
