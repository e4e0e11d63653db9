#pragma once

// Per-sprint pipeline: events → networks → metrics, congruence, diagnostics
// → SprintReport, plus the per-team summary.

#include <future>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlens/config.hpp"
#include "teamlens/congruence.hpp"
#include "teamlens/diagnostics.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/ingest.hpp"
#include "teamlens/metrics.hpp"
#include "teamlens/report.hpp"

namespace teamlens {

struct SprintNetworks {
  SocialNetwork message;
  SocialNetwork cochange;
  SocialNetwork collaboration;
  SocialNetwork merged;

  const SocialNetwork& get(NetworkSource source) const {
    switch (source) {
      case NetworkSource::Message: return message;
      case NetworkSource::Cochange: return cochange;
      case NetworkSource::Collaboration: return collaboration;
      case NetworkSource::Merged: return merged;
    }
    return merged;
  }
};

inline SprintNetworks build_networks(const Config& config, std::span<const InteractionEvent> events) {
  auto message = build_message_network(events, config.roster, config.channel_policy);
  auto cochange = build_cochange_network(events, config.roster);
  auto collaboration = build_collaboration_network(events, config.roster);
  const std::vector<SocialNetwork> parts{message, cochange, collaboration};
  const std::vector<double> weights{config.merge_weights.message, config.merge_weights.cochange,
                                    config.merge_weights.collaboration};
  auto merged = merge_networks(parts, weights);
  return {std::move(message), std::move(cochange), std::move(collaboration), std::move(merged)};
}

inline std::vector<InteractionEvent> commits_only(std::span<const InteractionEvent> events) {
  std::vector<InteractionEvent> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::Commit) out.push_back(e);
  }
  return out;
}

// Undirected metrics use the merged network; the directed census uses the
// message network. Both are thresholded with config.min_weight first.
inline SprintReport analyze_sprint(const Config& config, const SprintWindow& window,
                                   std::span<const InteractionEvent> events) {
  const auto& roster = config.roster;
  SprintReport report;
  report.team_id = roster.team_id();
  report.sprint_label = window.label;
  report.window_start = window.start;
  report.window_end = window.end;
  report.config_fingerprint = config_fingerprint(config);

  for (auto kind : {EventKind::Message, EventKind::Commit, EventKind::WorkLog, EventKind::TaskAssign}) {
    report.event_counts[std::string(to_string(kind))] = 0;
  }
  for (const auto& e : events) ++report.event_counts[std::string(to_string(e.kind))];
  report.event_counts["total"] = events.size();

  const auto nets = build_networks(config, events);
  for (auto source : {NetworkSource::Message, NetworkSource::Cochange, NetworkSource::Collaboration,
                      NetworkSource::Merged}) {
    report.networks.push_back(summarize(std::string(to_string(source)), nets.get(source)));
  }

  const auto topology = threshold_binary(nets.merged, config.min_weight);
  const auto message_topology = threshold_binary(nets.message, config.min_weight);
  report.centrality_source = "merged";
  report.degree = degree_centrality(topology, true);
  if (roster.size() >= 3) {
    report.betweenness = betweenness_centrality(topology, true);
    report.census_undirected = triad_census_undirected(topology);
    report.census_directed = triad_census_directed(message_topology);
    report.transitivity = transitivity(*report.census_undirected);
  }

  const auto commits = commits_only(events);
  const auto mats = congruence_matrices(commits, nets.get(config.coordination_source), roster,
                                        config.dependency_rule, config.coordination_min_weight);
  report.congruence = congruence(mats.requirements, mats.actual, roster);
  report.file_count = mats.files.size();
  report.dependency_rule = std::string(to_string(config.dependency_rule));
  report.coordination_source = std::string(to_string(config.coordination_source));

  if (report.betweenness) {
    for (auto& d : detect_brokers(*report.betweenness, config.broker, &topology)) {
      report.diagnostics.push_back(std::move(d));
    }
  }
  if (report.census_undirected) {
    for (auto& d : detect_fragmentation(*report.census_undirected, roster, config.fragmentation)) {
      report.diagnostics.push_back(std::move(d));
    }
  }
  for (auto& d : detect_unmet_coordination(report.congruence)) report.diagnostics.push_back(std::move(d));
  for (auto& d : pairing_coverage(events, roster)) report.diagnostics.push_back(std::move(d));
  report.recommendations = recommend(report.diagnostics, roster);
  return report;
}

struct TeamAnalysis {
  std::vector<SprintReport> sprints;
  std::size_t unassigned_events = 0;
  std::size_t skipped_lines = 0;
  std::optional<double> congruence_trend;
};

// Sprints are independent; with jobs > 1 they run on worker threads and are
// collected back in window order.
inline TeamAnalysis analyze_team(const Config& config, std::span<const InteractionEvent> events, unsigned jobs = 1) {
  auto buckets = window_events(events, config.sprints);
  TeamAnalysis result;
  if (auto it = buckets.find(std::string(kUnassigned)); it != buckets.end()) {
    result.unassigned_events = it->second.size();
  }
  result.sprints.resize(config.sprints.size());
  auto run = [&](std::size_t i) {
    const auto& w = config.sprints[i];
    result.sprints[i] = analyze_sprint(config, w, buckets.at(w.label));
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < config.sprints.size(); ++i) run(i);
  } else {
    for (std::size_t begin = 0; begin < config.sprints.size(); begin += jobs) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = begin; i < std::min<std::size_t>(begin + jobs, config.sprints.size()); ++i) {
        batch.push_back(std::async(std::launch::async, run, i));
      }
      for (auto& f : batch) f.get();
    }
  }
  std::vector<TrendPoint> trend;
  for (std::size_t i = 0; i < result.sprints.size(); ++i) {
    const auto& score = result.sprints[i].congruence.team_score;
    trend.push_back({static_cast<std::int64_t>(i + 1), score ? std::optional(score->value()) : std::nullopt});
  }
  result.congruence_trend = congruence_trend(trend);
  return result;
}

inline nlohmann::json summary_json(const Config& config, const TeamAnalysis& analysis) {
  nlohmann::json sprints = nlohmann::json::array();
  for (std::size_t i = 0; i < analysis.sprints.size(); ++i) {
    const auto& r = analysis.sprints[i];
    double merged_density = 0.0;
    for (const auto& n : r.networks) {
      if (n.source == "merged") merged_density = n.density;
    }
    sprints.push_back({{"index", i + 1},
                       {"sprint_label", r.sprint_label},
                       {"events", r.event_counts.at("total")},
                       {"merged_density", round_significant(merged_density)},
                       {"transitivity", r.transitivity ? nlohmann::json(round_significant(*r.transitivity)) : nullptr},
                       {"congruence",
                        r.congruence.team_score ? nlohmann::json(round_significant(r.congruence.team_score->value()))
                                                : nullptr},
                       {"diagnostics", r.diagnostics.size()}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "team_summary"},
          {"tool_version", kToolVersion},
          {"config_fingerprint", config_fingerprint(config)},
          {"team_id", config.roster.team_id()},
          {"sprints", sprints},
          {"congruence_trend",
           analysis.congruence_trend ? nlohmann::json(round_significant(*analysis.congruence_trend)) : nullptr},
          {"unassigned_events", analysis.unassigned_events},
          {"skipped_lines", analysis.skipped_lines}};
}

}  // namespace teamlens
