#pragma once

// Weighted social networks over a team roster and the builders that derive
// them from interaction events.

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teamlens/core.hpp"
#include "teamlens/ingest.hpp"

namespace teamlens {

enum class Directedness { Directed, Undirected };

enum class ChannelPolicy { Ignore, Clique };

// Dense weight matrix over the roster. Zero weight means "no edge"; the
// diagonal is always zero. Undirected networks keep the matrix symmetric.
class SocialNetwork {
 public:
  SocialNetwork(TeamRoster roster, Directedness directedness)
      : roster_(std::move(roster)), directedness_(directedness), weights_(roster_.size() * roster_.size(), 0.0) {}

  const TeamRoster& roster() const noexcept { return roster_; }
  std::size_t size() const noexcept { return roster_.size(); }
  Directedness directedness() const noexcept { return directedness_; }
  bool directed() const noexcept { return directedness_ == Directedness::Directed; }

  double weight(std::size_t from, std::size_t to) const { return weights_[from * size() + to]; }
  bool has_edge(std::size_t from, std::size_t to) const { return weight(from, to) > 0.0; }

  void add_weight(std::size_t from, std::size_t to, double w) { set_weight(from, to, weight(from, to) + w); }

  void set_weight(std::size_t from, std::size_t to, double w) {
    if (from == to) throw Error("self-loop on member '" + roster_[from] + "'");
    if (!(w >= 0.0)) throw Error("edge weight must be non-negative");
    weights_[from * size() + to] = w;
    if (!directed()) weights_[to * size() + from] = w;
  }

  // Visits each edge once: every arc when directed, i < j when undirected.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = directed() ? 0 : i + 1; j < n; ++j) {
        const double w = weights_[i * n + j];
        if (w > 0.0) fn(i, j, w);
      }
    }
  }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for_each_edge([&](std::size_t, std::size_t, double) { ++count; });
    return count;
  }

  double total_weight() const {
    double total = 0.0;
    for_each_edge([&](std::size_t, std::size_t, double w) { total += w; });
    return total;
  }

  std::vector<std::size_t> neighbours(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < size(); ++u) {
      if (has_edge(v, u)) out.push_back(u);
    }
    return out;
  }

  friend bool operator==(const SocialNetwork&, const SocialNetwork&) = default;

 private:
  TeamRoster roster_;
  Directedness directedness_;
  std::vector<double> weights_;
};

// Message network: arc a→b counts messages from a addressed to b. Channel
// messages without recipients follow the policy; Clique spreads one unit of
// weight evenly over every other member.
inline SocialNetwork build_message_network(std::span<const InteractionEvent> events, const TeamRoster& roster,
                                           ChannelPolicy policy = ChannelPolicy::Ignore) {
  SocialNetwork net(roster, Directedness::Directed);
  const double share = 1.0 / static_cast<double>(roster.size() - 1);
  for (const auto& e : events) {
    if (e.kind != EventKind::Message) continue;
    const auto from = roster.index_of(e.actor);
    for (const auto& r : e.recipients) net.add_weight(from, roster.index_of(r), 1.0);
    if (e.recipients.empty() && policy == ChannelPolicy::Clique) {
      for (std::size_t to = 0; to < roster.size(); ++to) {
        if (to != from) net.add_weight(from, to, share);
      }
    }
  }
  return net;
}

// Co-change network: weight(a,b) = number of distinct paths both touched.
inline SocialNetwork build_cochange_network(std::span<const InteractionEvent> events, const TeamRoster& roster) {
  std::vector<std::set<std::string>> touched(roster.size());
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit) continue;
    auto& files = touched[roster.index_of(e.actor)];
    for (const auto& f : e.files) files.insert(f.path);
  }
  SocialNetwork net(roster, Directedness::Undirected);
  for (std::size_t a = 0; a < roster.size(); ++a) {
    for (std::size_t b = a + 1; b < roster.size(); ++b) {
      std::size_t shared = 0;
      for (const auto& path : touched[a]) shared += touched[b].count(path);
      if (shared > 0) net.set_weight(a, b, static_cast<double>(shared));
    }
  }
  return net;
}

// Groups work logs and task assignments by task. Events without a task id
// form their own single-event group (actor plus co-workers).
inline std::vector<std::set<std::size_t>> task_groups(std::span<const InteractionEvent> events,
                                                      const TeamRoster& roster) {
  std::map<std::string, std::set<std::size_t>> by_task;
  std::vector<std::set<std::size_t>> groups;
  for (const auto& e : events) {
    if (e.kind != EventKind::WorkLog && e.kind != EventKind::TaskAssign) continue;
    std::set<std::size_t> members{roster.index_of(e.actor)};
    for (const auto& c : e.co_workers) members.insert(roster.index_of(c));
    if (e.task_id) {
      by_task[*e.task_id].merge(members);
    } else {
      groups.push_back(std::move(members));
    }
  }
  for (auto& [task, members] : by_task) groups.push_back(std::move(members));
  return groups;
}

// Collaboration network: every pair sharing a task gains 1 per task.
inline SocialNetwork build_collaboration_network(std::span<const InteractionEvent> events,
                                                 const TeamRoster& roster) {
  SocialNetwork net(roster, Directedness::Undirected);
  for (const auto& group : task_groups(events, roster)) {
    for (auto a = group.begin(); a != group.end(); ++a) {
      for (auto b = std::next(a); b != group.end(); ++b) net.add_weight(*a, *b, 1.0);
    }
  }
  return net;
}

// Undirected view of a network; arc weights in both directions are summed.
inline SocialNetwork symmetrize(const SocialNetwork& net) {
  if (!net.directed()) return net;
  SocialNetwork out(net.roster(), Directedness::Undirected);
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = i + 1; j < net.size(); ++j) {
      const double w = net.weight(i, j) + net.weight(j, i);
      if (w > 0.0) out.set_weight(i, j, w);
    }
  }
  return out;
}

// Weighted sum of symmetrized networks. All inputs must cover the same
// members; the first network's roster order is kept.
inline SocialNetwork merge_networks(std::span<const SocialNetwork> nets, std::span<const double> weights) {
  if (nets.empty()) throw Error("merge_networks needs at least one network");
  if (nets.size() != weights.size()) {
    throw Error("merge_networks got " + std::to_string(nets.size()) + " networks but " +
                std::to_string(weights.size()) + " weights");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error("merge weights must be non-negative");
  }
  const auto& base = nets.front().roster();
  const std::set<MemberId> base_set(base.members().begin(), base.members().end());
  for (const auto& net : nets) {
    const std::set<MemberId> other(net.roster().members().begin(), net.roster().members().end());
    if (other != base_set) {
      std::string diff;
      for (const auto& m : base_set) {
        if (!other.contains(m)) diff += " -" + m;
      }
      for (const auto& m : other) {
        if (!base_set.contains(m)) diff += " +" + m;
      }
      throw Error("node sets differ:" + diff);
    }
  }

  std::vector<double> sums(base.size() * base.size(), 0.0);
  for (std::size_t k = 0; k < nets.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const auto sym = symmetrize(nets[k]);
    std::vector<std::size_t> to_base(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) to_base[i] = base.index_of(sym.roster()[i]);
    sym.for_each_edge([&](std::size_t i, std::size_t j, double w) {
      const auto a = std::min(to_base[i], to_base[j]);
      const auto b = std::max(to_base[i], to_base[j]);
      sums[a * base.size() + b] += weights[k] * w;
    });
  }
  SocialNetwork merged(base, Directedness::Undirected);
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      if (sums[i * base.size() + j] > 0.0) merged.set_weight(i, j, sums[i * base.size() + j]);
    }
  }
  return merged;
}

// Keeps edges with weight >= min_weight, each at weight 1.
inline SocialNetwork threshold_binary(const SocialNetwork& net, double min_weight) {
  if (!(min_weight > 0.0)) throw Error("threshold min_weight must be positive");
  SocialNetwork out(net.roster(), net.directedness());
  net.for_each_edge([&](std::size_t i, std::size_t j, double w) {
    if (w >= min_weight) out.set_weight(i, j, 1.0);
  });
  return out;
}

}  // namespace teamlens
