#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the metric implementations it is compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "teamlens/graph.hpp"

namespace oracle {

using teamlens::Directedness;
using teamlens::SocialNetwork;
using teamlens::TeamRoster;

inline TeamRoster roster_of(std::size_t n, const std::string& team = "t") {
  std::vector<std::string> members;
  for (std::size_t i = 0; i < n; ++i) members.push_back("m" + std::to_string(i));
  return TeamRoster(team, members);
}

inline SocialNetwork random_graph(std::size_t n, double p, Directedness d, std::mt19937_64& rng) {
  SocialNetwork net(roster_of(n), d);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (d == Directedness::Undirected && j < i)) continue;
      if (coin(rng)) net.set_weight(i, j, 1.0);
    }
  }
  return net;
}

// Relabels node i as perm[i].
inline SocialNetwork permuted(const SocialNetwork& net, const std::vector<std::size_t>& perm) {
  SocialNetwork out(net.roster(), net.directedness());
  net.for_each_edge([&](std::size_t i, std::size_t j, double w) { out.set_weight(perm[i], perm[j], w); });
  return out;
}

// Edge set as explicit pairs (ordered for directed graphs, i<j otherwise).
inline std::set<std::pair<std::size_t, std::size_t>> arcs(const SocialNetwork& net) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = 0; j < net.size(); ++j) {
      if (i != j && net.weight(i, j) > 0.0) out.insert({i, j});
    }
  }
  return out;
}

// Betweenness by enumerating every simple path for every pair and keeping
// the shortest ones.
inline std::vector<double> betweenness(const SocialNetwork& net) {
  const std::size_t n = net.size();
  const auto edges = arcs(net);
  auto linked = [&](std::size_t a, std::size_t b) { return edges.count({a, b}) > 0; };
  std::vector<double> score(n, 0.0);

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      if (!net.directed() && t < s) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      std::vector<bool> used(n, false);
      used[s] = true;
      auto dfs = [&](auto&& self, std::size_t v) -> void {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (used[w] || !linked(v, w)) continue;
          used[w] = true;
          path.push_back(w);
          self(self, w);
          path.pop_back();
          used[w] = false;
        }
      };
      dfs(dfs, s);
      if (paths.empty()) continue;
      std::size_t shortest = paths.front().size();
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      double total = 0.0;
      std::vector<double> through(n, 0.0);
      for (const auto& p : paths) {
        if (p.size() != shortest) continue;
        total += 1.0;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) through[p[k]] += 1.0;
      }
      for (std::size_t v = 0; v < n; ++v) score[v] += through[v] / total;
    }
  }
  return score;
}

inline std::array<std::uint64_t, 4> undirected_census(const SocialNetwork& net) {
  const auto edges = arcs(net);
  std::array<std::uint64_t, 4> counts{};
  const std::size_t n = net.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        ++counts[edges.count({a, b}) + edges.count({a, c}) + edges.count({b, c})];
  return counts;
}

// Six-bit code of the arcs among (x0, x1, x2) in a fixed arc order.
inline unsigned triple_code(const std::array<std::array<bool, 3>, 3>& adj, const std::array<int, 3>& p) {
  static constexpr std::array<std::pair<int, int>, 6> order{{{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}};
  unsigned code = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (adj[p[order[k].first]][p[order[k].second]]) code |= 1u << k;
  }
  return code;
}

inline unsigned canonical(const std::array<std::array<bool, 3>, 3>& adj) {
  std::array<int, 3> p{0, 1, 2};
  unsigned best = 64;
  do {
    best = std::min(best, triple_code(adj, p));
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// Canonical code → MAN label, built from one hand-drawn representative per
// class (A=0, B=1, C=2).
inline const std::map<unsigned, std::string>& man_classes() {
  static const std::map<unsigned, std::string> table = [] {
    using Arcs = std::vector<std::pair<int, int>>;
    const std::vector<std::pair<std::string, Arcs>> reps{
        {"003", {}},
        {"012", {{0, 1}}},
        {"102", {{0, 1}, {1, 0}}},
        {"021D", {{1, 0}, {1, 2}}},
        {"021U", {{0, 1}, {2, 1}}},
        {"021C", {{0, 1}, {1, 2}}},
        {"111D", {{0, 1}, {1, 0}, {2, 1}}},
        {"111U", {{0, 1}, {1, 0}, {1, 2}}},
        {"030T", {{0, 1}, {2, 1}, {0, 2}}},
        {"030C", {{1, 0}, {2, 1}, {0, 2}}},
        {"201", {{0, 1}, {1, 0}, {1, 2}, {2, 1}}},
        {"120D", {{1, 0}, {1, 2}, {0, 2}, {2, 0}}},
        {"120U", {{0, 1}, {2, 1}, {0, 2}, {2, 0}}},
        {"120C", {{0, 1}, {1, 2}, {0, 2}, {2, 0}}},
        {"210", {{0, 1}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
        {"300", {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
    };
    std::map<unsigned, std::string> out;
    for (const auto& [label, arcs] : reps) {
      std::array<std::array<bool, 3>, 3> adj{};
      for (auto [a, b] : arcs) adj[a][b] = true;
      out[canonical(adj)] = label;
    }
    return out;
  }();
  return table;
}

inline std::map<std::string, std::uint64_t> directed_census(const SocialNetwork& net) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& [code, label] : man_classes()) counts[label] = 0;
  const std::size_t n = net.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const std::array<std::size_t, 3> v{a, b, c};
        std::array<std::array<bool, 3>, 3> adj{};
        for (int x = 0; x < 3; ++x)
          for (int y = 0; y < 3; ++y) adj[x][y] = x != y && net.weight(v[x], v[y]) > 0.0;
        ++counts.at(man_classes().at(canonical(adj)));
      }
  return counts;
}

// 3 × triangles / connected triples, counted on the graph itself.
inline std::optional<double> transitivity(const SocialNetwork& net) {
  const std::size_t n = net.size();
  std::uint64_t triangles = 0;
  std::uint64_t triples = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if (net.has_edge(a, b) && net.has_edge(b, c) && net.has_edge(a, c)) ++triangles;
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t deg = 0;
    for (std::size_t u = 0; u < n; ++u) deg += net.has_edge(v, u);
    triples += deg * (deg - (deg > 0 ? 1 : 0)) / 2;
  }
  if (triples == 0) return std::nullopt;
  return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / (n * sxx - sx * sx));
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx += (x[i] - mx) * (x[i] - mx);
    dy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(num / std::sqrt(dx * dy));
}

// Rank = 1 + #smaller + (#equal - 1) / 2, straight from the definition.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

}  // namespace oracle
