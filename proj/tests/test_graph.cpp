#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "teamlens/graph.hpp"

using namespace teamlens;

namespace {

const TeamRoster kTeam("t", {"alice", "bob", "carol", "dan"});

InteractionEvent message(const MemberId& from, std::set<MemberId> to, std::optional<std::string> channel = {}) {
  InteractionEvent e;
  e.kind = EventKind::Message;
  e.actor = from;
  e.recipients = std::move(to);
  e.channel = std::move(channel);
  return e;
}

InteractionEvent commit(const MemberId& who, std::vector<std::string> paths) {
  InteractionEvent e;
  e.kind = EventKind::Commit;
  e.actor = who;
  for (auto& p : paths) e.files.push_back({std::move(p), 1, 0});
  return e;
}

InteractionEvent work(const MemberId& who, std::string task, std::set<MemberId> with = {}) {
  InteractionEvent e;
  e.kind = EventKind::WorkLog;
  e.actor = who;
  e.task_id = std::move(task);
  e.co_workers = std::move(with);
  return e;
}

}  // namespace

TEST(MessageNetwork, CountsAddressedMessages) {
  const std::vector<InteractionEvent> events(3, message("alice", {"bob"}));
  auto net = build_message_network(events, kTeam);
  EXPECT_TRUE(net.directed());
  EXPECT_DOUBLE_EQ(net.weight(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(net.weight(1, 0), 0.0);
  EXPECT_EQ(net.edge_count(), 1u);
}

TEST(MessageNetwork, NoEventsKeepsRoster) {
  auto net = build_message_network({}, kTeam);
  EXPECT_EQ(net.size(), 4u);
  EXPECT_EQ(net.edge_count(), 0u);
}

TEST(MessageNetwork, ChannelPolicy) {
  const std::vector<InteractionEvent> events{message("alice", {}, "general")};
  EXPECT_EQ(build_message_network(events, kTeam, ChannelPolicy::Ignore).edge_count(), 0u);
  auto clique = build_message_network(events, kTeam, ChannelPolicy::Clique);
  EXPECT_EQ(clique.edge_count(), 3u);
  for (std::size_t to = 1; to < 4; ++to) EXPECT_DOUBLE_EQ(clique.weight(0, to), 1.0 / 3.0);
}

TEST(MessageNetwork, RejectsOutsiders) {
  const std::vector<InteractionEvent> events{message("zoe", {"bob"})};
  try {
    build_message_network(events, kTeam);
    FAIL();
  } catch (const Error& ex) {
    EXPECT_NE(std::string(ex.what()).find("zoe"), std::string::npos);
  }
}

TEST(MessageNetwork, TotalWeightConservedUnderReordering) {
  std::mt19937_64 rng(3);
  std::vector<InteractionEvent> events;
  double expected = 0.0;
  for (int i = 0; i < 60; ++i) {
    const auto from = kTeam[rng() % 4];
    std::set<MemberId> to;
    for (const auto& m : kTeam.members()) {
      if (m != from && rng() % 2) to.insert(m);
    }
    if (to.empty()) {
      events.push_back(message(from, {}, "general"));
      expected += 1.0;
    } else {
      expected += static_cast<double>(to.size());
      events.push_back(message(from, to));
    }
  }
  const auto a = build_message_network(events, kTeam, ChannelPolicy::Clique);
  std::shuffle(events.begin(), events.end(), rng);
  const auto b = build_message_network(events, kTeam, ChannelPolicy::Clique);
  EXPECT_NEAR(a.total_weight(), expected, 1e-9);
  EXPECT_NEAR(b.total_weight(), expected, 1e-9);
}

TEST(CochangeNetwork, SharedDistinctFiles) {
  const std::vector<InteractionEvent> events{commit("alice", {"f1", "f2"}), commit("bob", {"f2", "f3"}),
                                             commit("bob", {"f2"})};
  auto net = build_cochange_network(events, kTeam);
  EXPECT_FALSE(net.directed());
  EXPECT_DOUBLE_EQ(net.weight(0, 1), 1.0);
  EXPECT_EQ(net.edge_count(), 1u);

  const std::vector<InteractionEvent> disjoint{commit("alice", {"f1"}), commit("bob", {"f2"})};
  EXPECT_EQ(build_cochange_network(disjoint, kTeam).edge_count(), 0u);
}

TEST(CochangeNetwork, MatchesPairwiseIntersections) {
  std::mt19937_64 rng(5);
  const TeamRoster three("t", {"a", "b", "c"});
  for (int round = 0; round < 30; ++round) {
    std::vector<InteractionEvent> events;
    std::vector<std::set<std::string>> owned(3);
    for (int i = 0; i < 8; ++i) {
      const auto who = rng() % 3;
      std::vector<std::string> files;
      for (int k = 0; k < 6; ++k) {
        if (rng() % 3 == 0) files.push_back("f" + std::to_string(k));
      }
      if (files.empty()) continue;
      owned[who].insert(files.begin(), files.end());
      events.push_back(commit(three[who], files));
    }
    auto net = build_cochange_network(events, three);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) {
        std::vector<std::string> shared;
        std::set_intersection(owned[a].begin(), owned[a].end(), owned[b].begin(), owned[b].end(),
                              std::back_inserter(shared));
        EXPECT_DOUBLE_EQ(net.weight(a, b), static_cast<double>(shared.size()));
      }
    }
  }
}

TEST(CollaborationNetwork, CliquePerTask) {
  const std::vector<InteractionEvent> events{work("alice", "T1", {"bob"}), work("carol", "T1")};
  auto net = build_collaboration_network(events, kTeam);
  EXPECT_EQ(net.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(net.weight(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(net.weight(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(net.weight(1, 2), 1.0);

  EXPECT_EQ(build_collaboration_network(std::vector{work("alice", "T9")}, kTeam).edge_count(), 0u);

  const std::vector<InteractionEvent> twice{work("alice", "T1", {"bob"}), work("alice", "T2"), work("bob", "T2")};
  EXPECT_DOUBLE_EQ(build_collaboration_network(twice, kTeam).weight(0, 1), 2.0);
}

TEST(MergeNetworks, IdentitySymmetrizes) {
  SocialNetwork n(kTeam, Directedness::Directed);
  n.set_weight(0, 1, 2.0);
  n.set_weight(1, 0, 1.0);
  n.set_weight(2, 3, 0.5);
  auto m = merge_networks(std::vector{n}, std::vector{1.0});
  EXPECT_FALSE(m.directed());
  EXPECT_DOUBLE_EQ(m.weight(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(m.weight(3, 2), 0.5);
  EXPECT_EQ(m, symmetrize(n));
}

TEST(MergeNetworks, ZeroWeightsAnnihilate) {
  SocialNetwork n(kTeam, Directedness::Undirected);
  n.set_weight(0, 1, 2.0);
  EXPECT_EQ(merge_networks(std::vector{n, n}, std::vector{0.0, 0.0}).edge_count(), 0u);
}

TEST(MergeNetworks, WeightedSumHandComputed) {
  const TeamRoster abc("t", {"a", "b", "c"});
  SocialNetwork first(abc, Directedness::Undirected);
  first.set_weight(0, 1, 2.0);
  first.set_weight(1, 2, 1.0);
  SocialNetwork second(abc, Directedness::Directed);
  second.set_weight(0, 1, 4.0);
  second.set_weight(2, 0, 3.0);
  auto m = merge_networks(std::vector{first, second}, std::vector{1.0, 0.5});
  // ab: 2 + 0.5*4 = 4 ; bc: 1 ; ac: 0.5*3 = 1.5
  EXPECT_DOUBLE_EQ(m.weight(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(m.weight(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(m.weight(0, 2), 1.5);
  EXPECT_EQ(m.edge_count(), 3u);
}

TEST(MergeNetworks, Errors) {
  SocialNetwork n(kTeam, Directedness::Undirected);
  SocialNetwork other(TeamRoster("t", {"alice", "bob", "carol", "erin"}), Directedness::Undirected);
  try {
    merge_networks(std::vector{n, other}, std::vector{1.0, 1.0});
    FAIL();
  } catch (const Error& ex) {
    const std::string msg = ex.what();
    EXPECT_NE(msg.find("-dan"), std::string::npos);
    EXPECT_NE(msg.find("+erin"), std::string::npos);
  }
  EXPECT_THROW(merge_networks(std::vector{n}, std::vector{-1.0}), Error);
  EXPECT_THROW(merge_networks(std::vector{n}, std::vector{1.0, 1.0}), Error);
}

TEST(MergeNetworks, LinearInScale) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 20; ++round) {
    auto n = oracle::random_graph(6, 0.5, Directedness::Directed, rng);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        if (n.has_edge(i, j)) n.set_weight(i, j, 1.0 + static_cast<double>(rng() % 5));
      }
    }
    const double k = 0.25 * static_cast<double>(1 + rng() % 8);
    const auto sym = symmetrize(n);
    const auto scaled = merge_networks(std::vector{n}, std::vector{k});
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(scaled.weight(i, j), k * sym.weight(i, j));
    }
  }
}

TEST(ThresholdBinary, Filters) {
  const TeamRoster abcd("t", {"a", "b", "c", "d"});
  SocialNetwork n(abcd, Directedness::Undirected);
  n.set_weight(0, 1, 0.5);
  n.set_weight(1, 2, 1.0);
  n.set_weight(2, 3, 3.0);
  auto t = threshold_binary(n, 1.0);
  EXPECT_EQ(t.edge_count(), 2u);
  EXPECT_FALSE(t.has_edge(0, 1));
  EXPECT_DOUBLE_EQ(t.weight(2, 3), 1.0);
  EXPECT_EQ(threshold_binary(n, 10.0).edge_count(), 0u);
  EXPECT_EQ(threshold_binary(t, 1.0), t);  // idempotent
  EXPECT_THROW(threshold_binary(n, 0.0), Error);
}

TEST(SocialNetwork, NoSelfLoops) {
  SocialNetwork n(kTeam, Directedness::Directed);
  EXPECT_THROW(n.set_weight(1, 1, 1.0), Error);
  EXPECT_THROW(n.set_weight(0, 1, -1.0), Error);
}
