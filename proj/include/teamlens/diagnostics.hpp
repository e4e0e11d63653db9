#pragma once

// Anti-pattern detection and the v0 recommendation policy.
//
// Evidence keys per kind:
//   CommunicationBroker  betweenness, team_mean, ratio
//   FragmentedTeam       T0, T1, T2, T3 (census proportions)
//   PairDominated        T0, T1, T2, T3
//   UnmetCoordination    requirement, max_requirement
//   PairingGap           gap_pairs, total_pairs

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "teamlens/congruence.hpp"
#include "teamlens/core.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/metrics.hpp"

namespace teamlens {

enum class DiagnosticKind { CommunicationBroker, FragmentedTeam, PairDominated, UnmetCoordination, PairingGap };

inline std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::CommunicationBroker: return "CommunicationBroker";
    case DiagnosticKind::FragmentedTeam: return "FragmentedTeam";
    case DiagnosticKind::PairDominated: return "PairDominated";
    case DiagnosticKind::UnmetCoordination: return "UnmetCoordination";
    case DiagnosticKind::PairingGap: return "PairingGap";
  }
  return "?";
}

using NamedPair = std::pair<MemberId, MemberId>;

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::FragmentedTeam;
  std::vector<MemberId> members;
  std::vector<NamedPair> pairs;
  double severity = 0.0;
  std::map<std::string, double> evidence;
  // Broker only: neighbour pairs that are not directly connected.
  std::vector<NamedPair> mediated_pairs;

  // Stable reference used by recommendation rationales.
  std::string id() const {
    std::string out(to_string(kind));
    out += "(";
    bool first = true;
    for (const auto& m : members) {
      out += (first ? "" : ",") + m;
      first = false;
    }
    for (const auto& [a, b] : pairs) {
      out += (first ? "" : ",") + a + "-" + b;
      first = false;
    }
    return out + ")";
  }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct BrokerParams {
  double ratio_threshold = 2.0;
  double floor = 0.2;
};

struct FragmentationParams {
  double zero_edge_threshold = 0.5;
  double pair_threshold = 0.6;
  double closed_ceiling = 0.1;
};

namespace detail {

inline NamedPair named(const TeamRoster& roster, MemberPair p) { return {roster[p.first], roster[p.second]}; }

}  // namespace detail

// Flags members whose normalized betweenness clears both the absolute floor
// and ratio_threshold × team mean. When `topology` is given, each flag lists
// the broker's neighbour pairs that lack a direct edge.
inline std::vector<Diagnostic> detect_brokers(const CentralityScores& scores, BrokerParams params = {},
                                              const SocialNetwork* topology = nullptr) {
  if (scores.metric != CentralityMetric::Betweenness || !scores.normalized) {
    throw Error("broker detection needs normalized betweenness scores");
  }
  if (!(params.ratio_threshold > 1.0)) throw Error("broker ratio_threshold must exceed 1");
  if (!(params.floor >= 0.0 && params.floor <= 1.0)) throw Error("broker floor must lie in [0,1]");

  std::vector<Diagnostic> out;
  if (scores.scores.empty()) return out;
  double mean = 0.0;
  for (double s : scores.scores) mean += s;
  mean /= static_cast<double>(scores.scores.size());
  if (mean <= 0.0) return out;

  for (std::size_t i = 0; i < scores.scores.size(); ++i) {
    const double s = scores.scores[i];
    if (s < params.floor || s < params.ratio_threshold * mean) continue;
    Diagnostic d;
    d.kind = DiagnosticKind::CommunicationBroker;
    d.members = {scores.members[i]};
    d.severity = std::min(1.0, s);
    d.evidence = {{"betweenness", s}, {"team_mean", mean}, {"ratio", s / mean}};
    if (topology != nullptr) {
      const auto& roster = topology->roster();
      const auto centre = roster.index_of(scores.members[i]);
      const auto sym = symmetrize(*topology);
      const auto around = sym.neighbours(centre);
      for (std::size_t x = 0; x < around.size(); ++x) {
        for (std::size_t y = x + 1; y < around.size(); ++y) {
          if (!sym.has_edge(around[x], around[y])) {
            d.mediated_pairs.push_back(detail::named(roster, MemberPair::of(around[x], around[y])));
          }
        }
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

// FragmentedTeam when empty triads dominate; PairDominated when one- and
// two-edge triads dominate while closed triads stay rare.
inline std::vector<Diagnostic> detect_fragmentation(const TriadCensus& census, const TeamRoster& roster,
                                                    FragmentationParams params = {}) {
  if (census.directedness != Directedness::Undirected) throw Error("fragmentation needs an undirected census");
  const auto total = census.total();
  if (total != choose3(roster.size())) throw Error("census total does not match roster size");
  std::vector<Diagnostic> out;
  if (total == 0) return out;

  const double p0 = census.proportion("T0");
  const double p1 = census.proportion("T1");
  const double p2 = census.proportion("T2");
  const double p3 = census.proportion("T3");
  const std::map<std::string, double> evidence{{"T0", p0}, {"T1", p1}, {"T2", p2}, {"T3", p3}};

  if (p0 >= params.zero_edge_threshold) {
    out.push_back({DiagnosticKind::FragmentedTeam, roster.members(), {}, p0, evidence, {}});
  }
  const double paired = static_cast<double>(census.counts[1] + census.counts[2]) / static_cast<double>(total);
  if (paired >= params.pair_threshold && p3 < params.closed_ceiling) {
    out.push_back({DiagnosticKind::PairDominated, roster.members(), {}, paired, evidence, {}});
  }
  return out;
}

// One diagnostic per unmet pair, severity relative to the largest unmet need.
inline std::vector<Diagnostic> detect_unmet_coordination(const CongruenceResult& result) {
  std::vector<Diagnostic> out;
  std::int64_t max_requirement = 0;
  for (const auto& u : result.unmet_pairs) max_requirement = std::max(max_requirement, u.requirement);
  if (max_requirement <= 0) return out;
  for (const auto& u : result.unmet_pairs) {
    Diagnostic d;
    d.kind = DiagnosticKind::UnmetCoordination;
    d.pairs = {{result.members[u.pair.first], result.members[u.pair.second]}};
    d.severity = static_cast<double>(u.requirement) / static_cast<double>(max_requirement);
    d.evidence = {{"requirement", static_cast<double>(u.requirement)},
                  {"max_requirement", static_cast<double>(max_requirement)}};
    out.push_back(std::move(d));
  }
  return out;
}

// Pairs that never shared a task or a file in the window.
inline std::vector<Diagnostic> pairing_coverage(std::span<const InteractionEvent> events, const TeamRoster& roster) {
  const std::size_t n = roster.size();
  std::vector<std::uint8_t> covered(n * n, 0);
  auto cover = [&](std::size_t a, std::size_t b) {
    if (a != b) covered[a * n + b] = covered[b * n + a] = 1;
  };
  for (const auto& group : task_groups(events, roster)) {
    for (auto a : group) {
      for (auto b : group) cover(a, b);
    }
  }
  std::map<std::string, std::set<std::size_t>> file_owners;
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit) continue;
    const auto who = roster.index_of(e.actor);
    for (const auto& f : e.files) file_owners[f.path].insert(who);
  }
  for (const auto& [path, owners] : file_owners) {
    for (auto a : owners) {
      for (auto b : owners) cover(a, b);
    }
  }

  Diagnostic d;
  d.kind = DiagnosticKind::PairingGap;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!covered[a * n + b]) d.pairs.push_back(detail::named(roster, {a, b}));
    }
  }
  if (d.pairs.empty()) return {};
  const double total = static_cast<double>(n * (n - 1) / 2);
  d.severity = static_cast<double>(d.pairs.size()) / total;
  d.evidence = {{"gap_pairs", static_cast<double>(d.pairs.size())}, {"total_pairs", total}};
  return {d};
}

enum class Action { CoordinateDirectly, RotatePairProgramming, RebalanceTasks, ShareKnowledgeSession };

inline std::string_view to_string(Action action) {
  switch (action) {
    case Action::CoordinateDirectly: return "CoordinateDirectly";
    case Action::RotatePairProgramming: return "RotatePairProgramming";
    case Action::RebalanceTasks: return "RebalanceTasks";
    case Action::ShareKnowledgeSession: return "ShareKnowledgeSession";
  }
  return "?";
}

struct Recommendation {
  Action action = Action::CoordinateDirectly;
  std::vector<MemberId> subjects;
  double severity = 0.0;
  std::vector<std::string> sources;
  std::string rationale;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

inline constexpr std::string_view kPolicyVersion = "v0";
inline constexpr std::size_t kRecommendationCap = 3;

namespace detail {

inline std::vector<std::size_t> roster_key(const TeamRoster& roster, const std::vector<MemberId>& subjects) {
  std::vector<std::size_t> key;
  for (const auto& s : subjects) key.push_back(roster.index_of(s));
  return key;
}

inline std::vector<MemberId> ordered_pair(const TeamRoster& roster, const NamedPair& p) {
  return roster.index_of(p.first) <= roster.index_of(p.second) ? std::vector<MemberId>{p.first, p.second}
                                                                 : std::vector<MemberId>{p.second, p.first};
}

}  // namespace detail

// v0 rule table:
//   UnmetCoordination(a,b)   → CoordinateDirectly(a,b)
//   PairingGap               → RotatePairProgramming for the 3 gap pairs whose
//                              members are least covered
//   CommunicationBroker(x)   → RebalanceTasks(x) + CoordinateDirectly for up to
//                              3 pairs: unmet pairs first, then pairs x mediates
//   FragmentedTeam,
//   PairDominated            → ShareKnowledgeSession(team)
// Identical actions on identical subjects are merged (highest severity wins,
// sources accumulate). Output is ordered by descending severity, then roster
// order of subjects, then action.
inline std::vector<Recommendation> recommend(std::span<const Diagnostic> diagnostics, const TeamRoster& roster) {
  struct Candidate {
    Action action;
    std::vector<MemberId> subjects;
    double severity;
    std::string source;
  };
  std::vector<Candidate> candidates;

  std::vector<const Diagnostic*> unmet;
  for (const auto& d : diagnostics) {
    if (d.kind == DiagnosticKind::UnmetCoordination) unmet.push_back(&d);
  }
  std::stable_sort(unmet.begin(), unmet.end(), [&](const Diagnostic* a, const Diagnostic* b) {
    if (a->severity != b->severity) return a->severity > b->severity;
    return detail::roster_key(roster, detail::ordered_pair(roster, a->pairs.front())) <
           detail::roster_key(roster, detail::ordered_pair(roster, b->pairs.front()));
  });

  for (const auto& d : diagnostics) {
    const auto source = d.id();
    switch (d.kind) {
      case DiagnosticKind::UnmetCoordination:
        for (const auto& p : d.pairs) {
          candidates.push_back({Action::CoordinateDirectly, detail::ordered_pair(roster, p), d.severity, source});
        }
        break;
      case DiagnosticKind::PairingGap: {
        std::vector<std::size_t> deficit(roster.size(), 0);
        std::vector<std::vector<MemberId>> gaps;
        for (const auto& p : d.pairs) {
          gaps.push_back(detail::ordered_pair(roster, p));
          ++deficit[roster.index_of(p.first)];
          ++deficit[roster.index_of(p.second)];
        }
        auto score = [&](const std::vector<MemberId>& p) {
          return deficit[roster.index_of(p[0])] + deficit[roster.index_of(p[1])];
        };
        std::stable_sort(gaps.begin(), gaps.end(), [&](const auto& a, const auto& b) {
          if (score(a) != score(b)) return score(a) > score(b);
          return detail::roster_key(roster, a) < detail::roster_key(roster, b);
        });
        for (std::size_t k = 0; k < gaps.size() && k < kRecommendationCap; ++k) {
          candidates.push_back({Action::RotatePairProgramming, gaps[k], d.severity, source});
        }
        break;
      }
      case DiagnosticKind::CommunicationBroker: {
        candidates.push_back({Action::RebalanceTasks, d.members, d.severity, source});
        std::vector<std::vector<MemberId>> picks;
        auto take = [&](const NamedPair& p) {
          auto ordered = detail::ordered_pair(roster, p);
          if (picks.size() < kRecommendationCap && std::find(picks.begin(), picks.end(), ordered) == picks.end()) {
            picks.push_back(std::move(ordered));
          }
        };
        for (const auto* u : unmet) take(u->pairs.front());
        for (const auto& p : d.mediated_pairs) take(p);
        for (auto& p : picks) candidates.push_back({Action::CoordinateDirectly, std::move(p), d.severity, source});
        break;
      }
      case DiagnosticKind::FragmentedTeam:
      case DiagnosticKind::PairDominated:
        candidates.push_back({Action::ShareKnowledgeSession, roster.members(), d.severity, source});
        break;
    }
  }

  std::vector<Recommendation> out;
  for (auto& c : candidates) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Recommendation& r) { return r.action == c.action && r.subjects == c.subjects; });
    if (it == out.end()) {
      out.push_back({c.action, std::move(c.subjects), c.severity, {c.source}, {}});
    } else {
      it->severity = std::max(it->severity, c.severity);
      if (std::find(it->sources.begin(), it->sources.end(), c.source) == it->sources.end()) {
        it->sources.push_back(c.source);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const Recommendation& a, const Recommendation& b) {
    if (a.severity != b.severity) return a.severity > b.severity;
    const auto ka = detail::roster_key(roster, a.subjects);
    const auto kb = detail::roster_key(roster, b.subjects);
    if (ka != kb) return ka < kb;
    return a.action < b.action;
  });
  for (auto& r : out) {
    r.rationale = "addresses ";
    for (std::size_t k = 0; k < r.sources.size(); ++k) r.rationale += (k ? "; " : "") + r.sources[k];
  }
  return out;
}

}  // namespace teamlens
