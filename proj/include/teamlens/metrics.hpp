#pragma once

// Structural metrics on binary topology: degree and betweenness centrality,
// triad census (undirected and MAN-coded directed), transitivity, density.
// Any positive weight counts as an edge; apply threshold_binary first.

#include <array>
#include <cstdint>
#include <queue>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "teamlens/core.hpp"
#include "teamlens/graph.hpp"

namespace teamlens {

enum class CentralityMetric { Degree, Betweenness };

struct CentralityScores {
  CentralityMetric metric = CentralityMetric::Degree;
  bool normalized = false;
  std::vector<MemberId> members;
  std::vector<double> scores;

  double at(const MemberId& id) const {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] == id) return scores[i];
    }
    throw Error("no score for member '" + id + "'");
  }
};

inline CentralityScores degree_centrality(const SocialNetwork& net, bool normalized) {
  const std::size_t n = net.size();
  if (normalized && n < 2) throw Error("normalized degree needs at least 2 nodes");
  CentralityScores out{CentralityMetric::Degree, normalized, net.roster().members(), std::vector<double>(n, 0.0)};
  net.for_each_edge([&](std::size_t i, std::size_t j, double) {
    out.scores[i] += 1.0;
    out.scores[j] += 1.0;
  });
  if (normalized) {
    const double scale = net.directed() ? 2.0 * static_cast<double>(n - 1) : static_cast<double>(n - 1);
    for (auto& s : out.scores) s /= scale;
  }
  return out;
}

namespace detail {

// Dependency of `source` on every other vertex (Brandes accumulation over an
// unweighted BFS DAG).
inline std::vector<double> source_dependency(const SocialNetwork& net, const std::vector<std::vector<std::size_t>>& adj,
                                             std::size_t source) {
  const std::size_t n = net.size();
  std::vector<double> sigma(n, 0.0);
  std::vector<long> dist(n, -1);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> order;
  order.reserve(n);

  sigma[source] = 1.0;
  dist[source] = 0;
  std::queue<std::size_t> frontier;
  frontier.push(source);
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    order.push_back(v);
    for (auto w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
      if (dist[w] == dist[v] + 1) {
        sigma[w] += sigma[v];
        preds[w].push_back(v);
      }
    }
  }

  std::vector<double> delta(n, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto w = *it;
    for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
  }
  delta[source] = 0.0;
  return delta;
}

}  // namespace detail

// Betweenness over unweighted shortest paths. Disconnected pairs contribute
// nothing. With jobs > 1 sources are processed on worker threads, but the
// per-source contributions are always summed in source order so the result
// is bit-identical to the sequential run.
inline CentralityScores betweenness_centrality(const SocialNetwork& net, bool normalized, unsigned jobs = 1) {
  const std::size_t n = net.size();
  if (normalized && n < 3) throw Error("normalized betweenness needs at least 3 nodes");

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) adj[v] = net.neighbours(v);

  std::vector<std::vector<double>> per_source(n);
  if (jobs <= 1 || n < 2) {
    for (std::size_t s = 0; s < n; ++s) per_source[s] = detail::source_dependency(net, adj, s);
  } else {
    std::vector<std::jthread> workers;
    const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    for (unsigned t = 0; t < count; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t s = t; s < n; s += count) per_source[s] = detail::source_dependency(net, adj, s);
      });
    }
  }

  CentralityScores out{CentralityMetric::Betweenness, normalized, net.roster().members(), std::vector<double>(n, 0.0)};
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t v = 0; v < n; ++v) out.scores[v] += per_source[s][v];
  }
  // Undirected: each unordered pair was counted from both endpoints.
  if (!net.directed()) {
    for (auto& score : out.scores) score /= 2.0;
  }
  if (normalized) {
    const double pairs = static_cast<double>((n - 1) * (n - 2));
    const double scale = net.directed() ? pairs : pairs / 2.0;
    for (auto& score : out.scores) score /= scale;
  }
  return out;
}

inline constexpr std::array<std::string_view, 4> kUndirectedTriadLabels{"T0", "T1", "T2", "T3"};

inline constexpr std::array<std::string_view, 16> kDirectedTriadLabels{
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300"};

struct TriadCensus {
  Directedness directedness = Directedness::Undirected;
  std::vector<std::uint64_t> counts;

  std::span<const std::string_view> labels() const {
    if (directedness == Directedness::Directed) return kDirectedTriadLabels;
    return kUndirectedTriadLabels;
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }

  std::uint64_t count(std::string_view label) const {
    const auto names = labels();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == label) return counts[i];
    }
    throw Error("unknown triad class '" + std::string(label) + "'");
  }

  double proportion(std::string_view label) const {
    const auto t = total();
    return t == 0 ? 0.0 : static_cast<double>(count(label)) / static_cast<double>(t);
  }

  friend bool operator==(const TriadCensus&, const TriadCensus&) = default;
};

inline std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

inline TriadCensus triad_census_undirected(const SocialNetwork& net) {
  const std::size_t n = net.size();
  if (n < 3) throw Error("triad census needs at least 3 nodes");
  if (net.directed()) throw Error("undirected triad census on a directed network");
  TriadCensus census{Directedness::Undirected, std::vector<std::uint64_t>(4, 0)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const int ab = net.has_edge(a, b);
      for (std::size_t c = b + 1; c < n; ++c) {
        ++census.counts[ab + net.has_edge(a, c) + net.has_edge(b, c)];
      }
    }
  }
  return census;
}

namespace detail {

// Six-bit arc code for an ordered triple (v, u, w) → 1-based MAN class index.
inline constexpr std::array<std::uint8_t, 64> kTricodeClass{
    1, 2, 2, 3, 2, 4, 6, 8, 2, 6, 5, 7, 3, 8, 7, 11, 2, 6, 4, 8, 5, 9, 9, 13, 6, 10, 9, 14, 7, 14, 12, 15,
    2, 5, 6, 7, 6, 9, 10, 14, 4, 9, 9, 12, 8, 13, 14, 15, 3, 7, 8, 11, 7, 12, 14, 15, 8, 14, 13, 15, 11, 15, 15, 16};

inline unsigned tricode(const SocialNetwork& net, std::size_t v, std::size_t u, std::size_t w) {
  return (net.has_edge(v, u) ? 1u : 0u) | (net.has_edge(u, v) ? 2u : 0u) | (net.has_edge(v, w) ? 4u : 0u) |
         (net.has_edge(w, v) ? 8u : 0u) | (net.has_edge(u, w) ? 16u : 0u) | (net.has_edge(w, u) ? 32u : 0u);
}

}  // namespace detail

inline TriadCensus triad_census_directed(const SocialNetwork& net) {
  const std::size_t n = net.size();
  if (n < 3) throw Error("triad census needs at least 3 nodes");
  if (!net.directed()) throw Error("directed triad census on an undirected network");
  TriadCensus census{Directedness::Directed, std::vector<std::uint64_t>(16, 0)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        ++census.counts[detail::kTricodeClass[detail::tricode(net, a, b, c)] - 1];
      }
    }
  }
  return census;
}

// Fraction of connected triples that are closed: 3·T3 / (3·T3 + T2).
// nullopt when the graph has no connected triple.
inline std::optional<double> transitivity(const TriadCensus& census) {
  if (census.directedness != Directedness::Undirected) throw Error("transitivity needs an undirected census");
  const auto closed = 3 * census.counts[3];
  const auto open = census.counts[2];
  if (closed + open == 0) return std::nullopt;
  return static_cast<double>(closed) / static_cast<double>(closed + open);
}

inline double density(const SocialNetwork& net) {
  const std::size_t n = net.size();
  if (n < 2) throw Error("density needs at least 2 nodes");
  const double possible = net.directed() ? static_cast<double>(n * (n - 1)) : static_cast<double>(n * (n - 1) / 2);
  return static_cast<double>(net.edge_count()) / possible;
}

}  // namespace teamlens
