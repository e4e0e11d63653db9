#pragma once

// Declarative analysis configuration (JSON object). Unknown keys are
// rejected so that a typo never silently falls back to a default.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlens/congruence.hpp"
#include "teamlens/core.hpp"
#include "teamlens/diagnostics.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/ingest.hpp"

namespace teamlens {

struct MergeWeights {
  double message = 1.0;
  double cochange = 1.0;
  double collaboration = 1.0;
};

enum class NetworkSource { Message, Cochange, Collaboration, Merged };

inline std::string_view to_string(NetworkSource s) {
  switch (s) {
    case NetworkSource::Message: return "message";
    case NetworkSource::Cochange: return "cochange";
    case NetworkSource::Collaboration: return "collaboration";
    case NetworkSource::Merged: return "merged";
  }
  return "?";
}

inline std::optional<NetworkSource> parse_network_source(std::string_view s) {
  if (s == "message") return NetworkSource::Message;
  if (s == "cochange") return NetworkSource::Cochange;
  if (s == "collaboration") return NetworkSource::Collaboration;
  if (s == "merged") return NetworkSource::Merged;
  return std::nullopt;
}

inline std::string_view to_string(ChannelPolicy p) { return p == ChannelPolicy::Clique ? "clique" : "ignore"; }
inline std::string_view to_string(DependencyRule r) {
  return r == DependencyRule::CoCommit ? "cocommit" : "same_file_only";
}

inline ChannelPolicy parse_channel_policy(std::string_view s) {
  if (s == "ignore") return ChannelPolicy::Ignore;
  if (s == "clique") return ChannelPolicy::Clique;
  throw Error("unknown channel_policy '" + std::string(s) + "' (expected ignore|clique)");
}

inline DependencyRule parse_dependency_rule(std::string_view s) {
  if (s == "cocommit") return DependencyRule::CoCommit;
  if (s == "same_file_only") return DependencyRule::SameFileOnly;
  throw Error("unknown dependency_rule '" + std::string(s) + "' (expected cocommit|same_file_only)");
}

struct Config {
  TeamRoster roster;
  std::vector<SprintWindow> sprints;
  AuthorMap aliases;
  // As written in the config; resolved against base_dir when loaded.
  std::vector<std::string> commit_logs;
  std::filesystem::path base_dir;

  ChannelPolicy channel_policy = ChannelPolicy::Ignore;
  MergeWeights merge_weights;
  double min_weight = 1.0;
  DependencyRule dependency_rule = DependencyRule::CoCommit;
  double coordination_min_weight = 1.0;
  NetworkSource coordination_source = NetworkSource::Message;
  BrokerParams broker;
  FragmentationParams fragmentation;
  std::string policy{kPolicyVersion};

  // Throws on the first out-of-range value or unknown member reference.
  void validate() const {
    for (const auto& [alias, member] : aliases) {
      if (!roster.contains(member)) {
        throw Error("alias map entry '" + alias + "' references unknown member '" + member + "'");
      }
    }
    validate_windows(sprints);
    for (double w : {merge_weights.message, merge_weights.cochange, merge_weights.collaboration}) {
      if (!(w >= 0.0)) throw Error("merge_weights must be non-negative");
    }
    if (!(min_weight > 0.0)) throw Error("min_weight must be positive");
    if (!(coordination_min_weight > 0.0)) throw Error("coordination.min_weight must be positive");
    if (coordination_source == NetworkSource::Cochange) {
      throw Error("coordination.source cannot be 'cochange' (it is derived from the same commits as the requirements)");
    }
    if (!(broker.ratio_threshold > 1.0)) throw Error("diagnostics.broker_ratio must exceed 1");
    if (!(broker.floor >= 0.0 && broker.floor <= 1.0)) throw Error("diagnostics.broker_floor must lie in [0,1]");
    for (double t : {fragmentation.zero_edge_threshold, fragmentation.pair_threshold}) {
      if (!(t >= 0.0 && t <= 1.0)) throw Error("diagnostics thresholds must lie in [0,1]");
    }
    if (policy != kPolicyVersion) throw Error("unsupported recommendation policy '" + policy + "'");
  }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known,
                           const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error("unknown config key '" + where + key + "'");
    }
  }
}

inline double number_at(const nlohmann::json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw Error(std::string("config key '") + key + "' must be a number");
  return it->get<double>();
}

inline Timestamp config_time(const nlohmann::json& j, const char* key, const std::string& label) {
  if (!j.contains(key) || !j[key].is_string()) throw Error("sprint '" + label + "' needs a '" + key + "' timestamp");
  auto t = parse_timestamp(j[key].get<std::string>());
  if (!t) throw Error("sprint '" + label + "' has an unparseable '" + key + "'");
  return *t;
}

}  // namespace detail

inline Config config_from_json(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
  if (!j.is_object()) throw Error("config must be an object");
  detail::reject_unknown(j,
                         {"team_id", "roster", "sprints", "aliases", "commit_logs", "channel_policy", "merge_weights",
                          "min_weight", "dependency_rule", "coordination", "diagnostics", "policy"},
                         "");
  Config c;
  c.base_dir = std::move(base_dir);
  if (!j.contains("team_id") || !j["team_id"].is_string()) throw Error("config needs a string 'team_id'");
  if (!j.contains("roster") || !j["roster"].is_array()) throw Error("config needs a 'roster' array");
  std::vector<MemberId> members;
  for (const auto& m : j["roster"]) {
    if (!m.is_string()) throw Error("roster entries must be strings");
    members.push_back(m.get<std::string>());
  }
  c.roster = TeamRoster(j["team_id"].get<std::string>(), std::move(members));

  if (auto it = j.find("sprints"); it != j.end()) {
    if (!it->is_array()) throw Error("'sprints' must be an array");
    for (const auto& s : *it) {
      if (!s.is_object() || !s.contains("label") || !s["label"].is_string()) {
        throw Error("each sprint needs a string 'label'");
      }
      detail::reject_unknown(s, {"label", "start", "end"}, "sprints.");
      const auto label = s["label"].get<std::string>();
      c.sprints.push_back({label, detail::config_time(s, "start", label), detail::config_time(s, "end", label)});
    }
  }
  if (auto it = j.find("aliases"); it != j.end()) {
    if (!it->is_object()) throw Error("'aliases' must be an object");
    for (const auto& [alias, member] : it->items()) {
      if (!member.is_string()) throw Error("alias '" + alias + "' must map to a member id");
      c.aliases[alias] = member.get<std::string>();
    }
  }
  if (auto it = j.find("commit_logs"); it != j.end()) {
    if (!it->is_array()) throw Error("'commit_logs' must be an array");
    for (const auto& p : *it) c.commit_logs.push_back(p.get<std::string>());
  }
  if (auto it = j.find("channel_policy"); it != j.end()) c.channel_policy = parse_channel_policy(it->get<std::string>());
  if (auto it = j.find("merge_weights"); it != j.end()) {
    detail::reject_unknown(*it, {"message", "cochange", "collaboration"}, "merge_weights.");
    c.merge_weights.message = detail::number_at(*it, "message", c.merge_weights.message);
    c.merge_weights.cochange = detail::number_at(*it, "cochange", c.merge_weights.cochange);
    c.merge_weights.collaboration = detail::number_at(*it, "collaboration", c.merge_weights.collaboration);
  }
  c.min_weight = detail::number_at(j, "min_weight", c.min_weight);
  if (auto it = j.find("dependency_rule"); it != j.end()) {
    c.dependency_rule = parse_dependency_rule(it->get<std::string>());
  }
  if (auto it = j.find("coordination"); it != j.end()) {
    detail::reject_unknown(*it, {"min_weight", "source"}, "coordination.");
    c.coordination_min_weight = detail::number_at(*it, "min_weight", c.coordination_min_weight);
    if (it->contains("source")) {
      auto src = parse_network_source((*it)["source"].get<std::string>());
      if (!src) throw Error("unknown coordination.source");
      c.coordination_source = *src;
    }
  }
  if (auto it = j.find("diagnostics"); it != j.end()) {
    detail::reject_unknown(*it, {"broker_ratio", "broker_floor", "zero_edge_threshold", "pair_threshold"},
                           "diagnostics.");
    c.broker.ratio_threshold = detail::number_at(*it, "broker_ratio", c.broker.ratio_threshold);
    c.broker.floor = detail::number_at(*it, "broker_floor", c.broker.floor);
    c.fragmentation.zero_edge_threshold =
        detail::number_at(*it, "zero_edge_threshold", c.fragmentation.zero_edge_threshold);
    c.fragmentation.pair_threshold = detail::number_at(*it, "pair_threshold", c.fragmentation.pair_threshold);
  }
  if (auto it = j.find("policy"); it != j.end()) c.policy = it->get<std::string>();
  c.validate();
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error("config '" + path.string() + "' is not valid JSON: " + ex.what());
  }
  try {
    return config_from_json(j, path.parent_path());
  } catch (const nlohmann::json::exception& ex) {
    throw Error("config '" + path.string() + "': " + ex.what());
  }
}

// Effective configuration in canonical form (also the fingerprint input).
inline nlohmann::json to_json(const Config& c) {
  nlohmann::json sprints = nlohmann::json::array();
  for (const auto& s : c.sprints) {
    sprints.push_back({{"label", s.label}, {"start", format_timestamp(s.start)}, {"end", format_timestamp(s.end)}});
  }
  nlohmann::json aliases = nlohmann::json::object();
  for (const auto& [alias, member] : c.aliases) aliases[alias] = member;
  return {
      {"team_id", c.roster.team_id()},
      {"roster", c.roster.members()},
      {"sprints", sprints},
      {"aliases", aliases},
      {"commit_logs", c.commit_logs},
      {"channel_policy", to_string(c.channel_policy)},
      {"merge_weights",
       {{"message", c.merge_weights.message},
        {"cochange", c.merge_weights.cochange},
        {"collaboration", c.merge_weights.collaboration}}},
      {"min_weight", c.min_weight},
      {"dependency_rule", to_string(c.dependency_rule)},
      {"coordination", {{"min_weight", c.coordination_min_weight}, {"source", to_string(c.coordination_source)}}},
      {"diagnostics",
       {{"broker_ratio", c.broker.ratio_threshold},
        {"broker_floor", c.broker.floor},
        {"zero_edge_threshold", c.fragmentation.zero_edge_threshold},
        {"pair_threshold", c.fragmentation.pair_threshold}}},
      {"policy", c.policy},
  };
}

// FNV-1a over the canonical effective config.
inline std::string config_fingerprint(const Config& c) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : to_json(c).dump()) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace teamlens
