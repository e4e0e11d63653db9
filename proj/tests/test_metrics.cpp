#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "teamlens/metrics.hpp"

using namespace teamlens;

namespace {

SocialNetwork from_edges(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> edges,
                         Directedness d = Directedness::Undirected) {
  SocialNetwork net(oracle::roster_of(n), d);
  for (auto [a, b] : edges) net.set_weight(a, b, 1.0);
  return net;
}

SocialNetwork complete(std::size_t n, Directedness d = Directedness::Undirected) {
  SocialNetwork net(oracle::roster_of(n), d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) net.set_weight(i, j, 1.0);
  return net;
}

SocialNetwork star(std::size_t leaves) {
  SocialNetwork net(oracle::roster_of(leaves + 1), Directedness::Undirected);
  for (std::size_t i = 1; i <= leaves; ++i) net.set_weight(0, i, 1.0);
  return net;
}

}  // namespace

TEST(DegreeCentrality, Basics) {
  auto empty = degree_centrality(from_edges(4, {}), false);
  for (double s : empty.scores) EXPECT_EQ(s, 0.0);
  auto s = degree_centrality(star(3), false);
  EXPECT_EQ(s.scores[0], 3.0);
  EXPECT_EQ(degree_centrality(star(3), true).scores[0], 1.0);
}

TEST(DegreeCentrality, MatchesIncidentEdgeCount) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 100; ++round) {
    const auto n = 2 + rng() % 7;
    const auto d = round % 2 ? Directedness::Directed : Directedness::Undirected;
    auto net = oracle::random_graph(n, 0.4, d, rng);
    const auto arcs = oracle::arcs(net);
    auto scores = degree_centrality(net, false);
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double incident = 0.0;
      for (auto [a, b] : arcs) {
        incident += d == Directedness::Directed ? (a == v) + (b == v) : (a == v);
      }
      EXPECT_EQ(scores.scores[v], incident);
      sum += scores.scores[v];
    }
    if (d == Directedness::Undirected) {
      EXPECT_EQ(sum, 2.0 * static_cast<double>(net.edge_count()));
    }
    auto norm = degree_centrality(net, true);
    const double scale = d == Directedness::Directed ? 2.0 * static_cast<double>(n - 1) : static_cast<double>(n - 1);
    for (std::size_t v = 0; v < n; ++v) EXPECT_DOUBLE_EQ(norm.scores[v], scores.scores[v] / scale);
  }
}

TEST(Betweenness, ClosedForms) {
  auto path = betweenness_centrality(from_edges(3, {{0, 1}, {1, 2}}), false);
  EXPECT_EQ(path.scores, (std::vector<double>{0.0, 1.0, 0.0}));
  auto s = betweenness_centrality(star(4), false);
  EXPECT_EQ(s.scores[0], 6.0);
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_EQ(s.scores[i], 0.0);
  EXPECT_EQ(betweenness_centrality(star(4), true).scores[0], 1.0);
  for (double v : betweenness_centrality(complete(6), false).scores) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(betweenness_centrality(from_edges(2, {{0, 1}}), true), Error);
}

TEST(Betweenness, DirectedPath) {
  auto net = from_edges(3, {{0, 1}, {1, 2}}, Directedness::Directed);
  EXPECT_EQ(betweenness_centrality(net, false).scores, (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_DOUBLE_EQ(betweenness_centrality(net, true).scores[1], 0.5);
}

TEST(Betweenness, MatchesExhaustivePathOracle) {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 120; ++round) {
    const auto n = 3 + rng() % 6;
    const auto d = round % 3 == 0 ? Directedness::Directed : Directedness::Undirected;
    auto net = oracle::random_graph(n, 0.2 + 0.1 * static_cast<double>(rng() % 6), d, rng);
    const auto expected = oracle::betweenness(net);
    const auto got = betweenness_centrality(net, false);
    for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(got.scores[v], expected[v], 1e-9);
  }
}

TEST(Betweenness, ParallelIsBitIdentical) {
  std::mt19937_64 rng(34);
  for (int round = 0; round < 20; ++round) {
    auto net = oracle::random_graph(12, 0.3, Directedness::Undirected, rng);
    EXPECT_EQ(betweenness_centrality(net, true, 1).scores, betweenness_centrality(net, true, 4).scores);
  }
}

TEST(Betweenness, InvariantUnderRelabeling) {
  std::mt19937_64 rng(35);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 7;
    auto net = oracle::random_graph(n, 0.4, Directedness::Undirected, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto a = betweenness_centrality(net, false).scores;
    const auto b = betweenness_centrality(oracle::permuted(net, perm), false).scores;
    for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(a[v], b[perm[v]], 1e-12);
  }
}

TEST(TriadCensusUndirected, Examples) {
  EXPECT_EQ(triad_census_undirected(from_edges(3, {})).counts, (std::vector<std::uint64_t>{1, 0, 0, 0}));
  EXPECT_EQ(triad_census_undirected(complete(4)).counts, (std::vector<std::uint64_t>{0, 0, 0, 4}));
  EXPECT_EQ(triad_census_undirected(from_edges(4, {{0, 1}, {1, 2}, {2, 3}})).counts,
            (std::vector<std::uint64_t>{0, 2, 2, 0}));
  EXPECT_THROW(triad_census_undirected(from_edges(2, {})), Error);
  EXPECT_THROW(triad_census_undirected(from_edges(3, {}, Directedness::Directed)), Error);
}

TEST(TriadCensusDirected, Examples) {
  auto empty = triad_census_directed(from_edges(3, {}, Directedness::Directed));
  EXPECT_EQ(empty.count("003"), 1u);
  EXPECT_EQ(empty.total(), 1u);
  auto full = triad_census_directed(complete(3, Directedness::Directed));
  EXPECT_EQ(full.count("300"), 1u);
  EXPECT_EQ(full.total(), 1u);
  EXPECT_THROW(triad_census_directed(from_edges(2, {}, Directedness::Directed)), Error);
}

TEST(TriadCensusDirected, OracleTableCoversSixteenClasses) {
  EXPECT_EQ(oracle::man_classes().size(), 16u);
}

TEST(TriadCensusDirected, EveryClassRepresentative) {
  // Each class drawn by hand on nodes (0,1,2) must land in its own bucket.
  const std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>>> reps{
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
  };
  for (const auto& [label, edges] : reps) {
    SocialNetwork net(oracle::roster_of(3), Directedness::Directed);
    for (auto [a, b] : edges) net.set_weight(a, b, 1.0);
    EXPECT_EQ(triad_census_directed(net).count(label), 1u) << label;
  }
}

TEST(TriadCensus, MatchesBruteForceAndSums) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 150; ++round) {
    const auto n = 3 + rng() % 8;
    auto u = oracle::random_graph(n, 0.1 * static_cast<double>(1 + rng() % 9), Directedness::Undirected, rng);
    auto census = triad_census_undirected(u);
    const auto expected = oracle::undirected_census(u);
    EXPECT_EQ(census.counts, std::vector<std::uint64_t>(expected.begin(), expected.end()));
    EXPECT_EQ(census.total(), choose3(n));

    auto d = oracle::random_graph(3 + rng() % 5, 0.1 * static_cast<double>(1 + rng() % 9), Directedness::Directed, rng);
    auto dc = triad_census_directed(d);
    for (const auto& [label, count] : oracle::directed_census(d)) EXPECT_EQ(dc.count(label), count) << label;
    EXPECT_EQ(dc.total(), choose3(d.size()));
  }
}

TEST(TriadCensus, InvariantUnderRelabeling) {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 6;
    auto net = oracle::random_graph(n, 0.35, Directedness::Directed, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(triad_census_directed(net), triad_census_directed(oracle::permuted(net, perm)));
    const auto sym = symmetrize(net);
    EXPECT_EQ(triad_census_undirected(sym), triad_census_undirected(oracle::permuted(sym, perm)));
  }
}

TEST(Transitivity, Examples) {
  EXPECT_EQ(transitivity(triad_census_undirected(complete(3))), 1.0);
  EXPECT_EQ(transitivity(triad_census_undirected(star(3))), 0.0);
  const auto path = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(transitivity(triad_census_undirected(path)), 0.0);
  EXPECT_EQ(transitivity(triad_census_undirected(path)), oracle::transitivity(path));
  EXPECT_FALSE(transitivity(triad_census_undirected(from_edges(4, {{0, 1}}))).has_value());
  EXPECT_THROW(transitivity(triad_census_directed(from_edges(3, {}, Directedness::Directed))), Error);
}

TEST(Transitivity, AgreesWithDirectCounting) {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 100; ++round) {
    auto net = oracle::random_graph(3 + rng() % 8, 0.1 * static_cast<double>(1 + rng() % 9), Directedness::Undirected, rng);
    const auto from_census = transitivity(triad_census_undirected(net));
    const auto direct = oracle::transitivity(net);
    ASSERT_EQ(from_census.has_value(), direct.has_value());
    if (direct) {
      EXPECT_NEAR(*from_census, *direct, 1e-12);
    }
  }
}

TEST(Density, Examples) {
  EXPECT_EQ(density(from_edges(4, {})), 0.0);
  EXPECT_EQ(density(complete(4)), 1.0);
  EXPECT_DOUBLE_EQ(density(from_edges(3, {{0, 1}, {1, 2}})), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(density(from_edges(3, {{0, 1}}, Directedness::Directed)), 1.0 / 6.0);
}
