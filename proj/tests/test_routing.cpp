#include <gtest/gtest.h>

#include <random>

#include "wsnsim/routing.hpp"

using namespace wsnsim;

namespace {

Rreq copy(SeqNo seq, int hops, double energy, std::vector<NodeId> via, NodeId dst = 9, int ttl = 8) {
  Rreq r;
  r.source = via.front();
  r.destination = dst;
  r.seq = seq;
  r.hop_count = hops;
  r.accumulated_energy = energy;
  r.ttl = ttl;
  r.traversed = std::move(via);
  return r;
}

}  // namespace

TEST(Originate, SeedsEnergyWithSourceResidual) {
  RoutingAgent a(7, RoutingMode::newaodv, 8);
  const auto r = a.originate_rreq(5, 0.2);
  EXPECT_EQ(r.source, 7);
  EXPECT_EQ(r.destination, 5);
  EXPECT_EQ(r.hop_count, 0);
  EXPECT_DOUBLE_EQ(r.accumulated_energy, 0.2);
  EXPECT_EQ(r.ttl, 8);
  EXPECT_EQ(r.traversed, std::vector<NodeId>{7});
  EXPECT_TRUE(a.discovering(5));
}

TEST(Originate, SequenceStrictlyIncreases) {
  RoutingAgent a(7, RoutingMode::aodv, 8);
  const auto s1 = a.originate_rreq(5, 1.0).seq;
  const auto s2 = a.originate_rreq(5, 1.0).seq;
  const auto s3 = a.originate_rreq(4, 1.0).seq;
  EXPECT_LT(s1, s2);
  EXPECT_LT(s2, s3);
}

TEST(HandleRreq, FirstCopyIsForwardedWithOwnResidualAdded) {
  RoutingAgent n(4, RoutingMode::newaodv, 8);
  const auto d = n.handle_rreq(copy(1, 0, 0.2, {7}), 7, 0.5);
  ASSERT_EQ(d.verdict, RreqDecision::Verdict::forward);
  EXPECT_EQ(d.forwarded.hop_count, 1);
  EXPECT_DOUBLE_EQ(d.forwarded.accumulated_energy, 0.7);
  EXPECT_EQ(d.forwarded.traversed, (std::vector<NodeId>{7, 4}));
  const auto* rev = n.reverse(7);
  ASSERT_NE(rev, nullptr);
  EXPECT_EQ(rev->previous_hop, 7);
  EXPECT_EQ(rev->hop_count, 1);
}

TEST(HandleRreq, FewerHopsAlwaysWin) {
  for (auto mode : {RoutingMode::aodv, RoutingMode::newaodv}) {
    RoutingAgent n(2, mode, 8);
    ASSERT_EQ(n.handle_rreq(copy(1, 3, 3.0, {7, 3, 6, 8}), 8, 0.1).verdict, RreqDecision::Verdict::forward);
    EXPECT_EQ(n.handle_rreq(copy(1, 2, 0.1, {7, 3, 0}), 0, 0.1).verdict, RreqDecision::Verdict::forward);
    EXPECT_EQ(n.reverse(7)->previous_hop, 0);
  }
}

TEST(HandleRreq, EqualHopsHigherEnergyOnlyInNewMode) {
  RoutingAgent aodv(1, RoutingMode::aodv, 8);
  RoutingAgent fresh(1, RoutingMode::newaodv, 8);
  for (auto* n : {&aodv, &fresh}) n->handle_rreq(copy(1, 2, 1.1, {7, 4, 0}), 0, 0.9);
  const auto better = copy(1, 2, 1.5, {7, 4, 8});
  const auto a = aodv.handle_rreq(better, 8, 0.9);
  EXPECT_EQ(a.verdict, RreqDecision::Verdict::drop);
  EXPECT_EQ(a.reason, DropReason::duplicate);
  const auto b = fresh.handle_rreq(better, 8, 0.9);
  ASSERT_EQ(b.verdict, RreqDecision::Verdict::forward);
  EXPECT_DOUBLE_EQ(b.forwarded.accumulated_energy, 2.4);
  EXPECT_EQ(fresh.reverse(7)->previous_hop, 8);
}

TEST(HandleRreq, TiesKeepTheIncumbent) {
  RoutingAgent n(1, RoutingMode::newaodv, 8);
  n.handle_rreq(copy(1, 2, 1.3, {7, 4, 0}), 0, 0.9);
  const auto d = n.handle_rreq(copy(1, 2, 1.3, {7, 4, 8}), 8, 0.9);
  EXPECT_EQ(d.verdict, RreqDecision::Verdict::drop);
  EXPECT_EQ(n.reverse(7)->previous_hop, 0);
}

TEST(HandleRreq, StaleSequenceDropped) {
  RoutingAgent n(1, RoutingMode::newaodv, 8);
  n.handle_rreq(copy(2, 1, 1.0, {7, 4}), 4, 0.5);
  const auto d = n.handle_rreq(copy(1, 0, 5.0, {7}), 7, 0.5);
  EXPECT_EQ(d.reason, DropReason::stale_seq);
  // a new sequence is accepted even with more hops and less energy
  EXPECT_EQ(n.handle_rreq(copy(3, 4, 0.1, {7, 3, 6, 2, 5}), 5, 0.5).verdict, RreqDecision::Verdict::forward);
}

TEST(HandleRreq, TtlAndOwnRequest) {
  RoutingAgent n(1, RoutingMode::newaodv, 8);
  const auto over = n.handle_rreq(copy(1, 3, 1.0, {7, 3, 0, 2}, 9, 3), 2, 0.5);
  EXPECT_EQ(over.reason, DropReason::ttl_exceeded);
  const auto malformed = n.handle_rreq(copy(1, 5, 1.0, {7, 3, 0, 2, 4, 6}, 9, 3), 6, 0.5);
  EXPECT_EQ(malformed.reason, DropReason::ttl_exceeded);
  RoutingAgent src(7, RoutingMode::newaodv, 8);
  EXPECT_EQ(src.handle_rreq(copy(1, 1, 1.0, {7, 4}), 4, 0.2).reason, DropReason::own_request);
}

TEST(HandleRreq, DestinationAnswersEveryImprovement) {
  RoutingAgent dst(5, RoutingMode::newaodv, 8);
  const auto a = dst.handle_rreq(copy(1, 3, 1.5, {7, 4, 0, 2}, 5), 2, 1.0);
  ASSERT_EQ(a.verdict, RreqDecision::Verdict::answer);
  EXPECT_EQ(a.reply_next_hop, 2);
  EXPECT_DOUBLE_EQ(a.reply.path_energy, 2.5);
  EXPECT_EQ(a.reply.hop_count, 0);
  EXPECT_EQ(a.reply.path, std::vector<NodeId>{5});
  const auto b = dst.handle_rreq(copy(1, 3, 2.4, {7, 4, 8, 1}, 5), 1, 1.0);
  ASSERT_EQ(b.verdict, RreqDecision::Verdict::answer);
  EXPECT_DOUBLE_EQ(b.reply.path_energy, 3.4);
  EXPECT_EQ(dst.handle_rreq(copy(1, 3, 2.0, {7, 4, 0, 1}, 5), 1, 1.0).verdict, RreqDecision::Verdict::drop);
}

TEST(HandleRrep, IntermediateRelaysAlongReverseRoute) {
  RoutingAgent n(1, RoutingMode::newaodv, 8);
  n.handle_rreq(copy(1, 2, 1.5, {7, 4, 8}), 8, 0.9);
  Rrep r;
  r.source = 7;
  r.destination = 5;
  r.seq = 1;
  r.hop_count = 0;
  r.path_energy = 3.4;
  r.path = {5};
  const auto d = n.handle_rrep(r, 5);
  ASSERT_EQ(d.verdict, RrepDecision::Verdict::relay);
  EXPECT_EQ(d.next_hop, 8);
  EXPECT_EQ(d.relayed.hop_count, 1);
  EXPECT_EQ(d.relayed.path, (std::vector<NodeId>{5, 1}));
  const auto* route = n.route(5);
  ASSERT_NE(route, nullptr);
  EXPECT_EQ(route->next_hop, 5);
  EXPECT_EQ(route->hop_count, 1);
  EXPECT_EQ(n.forward_data(5).next_hop, 5);
}

TEST(HandleRrep, MissingReverseRouteDrops) {
  RoutingAgent n(1, RoutingMode::newaodv, 8);
  Rrep r;
  r.source = 7;
  r.destination = 5;
  r.seq = 1;
  r.path = {5};
  const auto d = n.handle_rrep(r, 5);
  EXPECT_EQ(d.verdict, RrepDecision::Verdict::drop);
  EXPECT_EQ(d.reason, DropReason::no_reverse_route);
}

TEST(HandleRrep, SourceAdoptsBestReply) {
  RoutingAgent src(7, RoutingMode::newaodv, 8);
  const auto req = src.originate_rreq(5, 0.2);
  Rrep first;
  first.source = 7;
  first.destination = 5;
  first.seq = req.seq;
  first.hop_count = 3;
  first.path_energy = 3.0;
  first.path = {5, 2, 0, 4};
  const auto a = src.handle_rrep(first, 4);
  ASSERT_EQ(a.verdict, RrepDecision::Verdict::adopted);
  EXPECT_TRUE(a.first_for_seq);
  EXPECT_FALSE(src.discovering(5));

  Rrep better = first;
  better.path_energy = 3.4;
  better.path = {5, 1, 8, 4};
  const auto b = src.handle_rrep(better, 4);
  ASSERT_EQ(b.verdict, RrepDecision::Verdict::adopted);
  EXPECT_FALSE(b.first_for_seq);
  EXPECT_EQ(src.route(5)->path, (std::vector<NodeId>{7, 4, 8, 1, 5}));
  EXPECT_DOUBLE_EQ(src.route(5)->path_energy, 3.4);

  Rrep worse = first;
  worse.path_energy = 3.2;
  EXPECT_EQ(src.handle_rrep(worse, 4).verdict, RrepDecision::Verdict::ignored);

  Rrep stale = better;
  stale.seq = req.seq + 5;
  EXPECT_EQ(src.handle_rrep(stale, 4).reason, DropReason::stale_seq);
}

TEST(HandleRrep, AodvSourceKeepsFirstEqualHopReply) {
  RoutingAgent src(7, RoutingMode::aodv, 8);
  const auto req = src.originate_rreq(5, 0.2);
  Rrep r;
  r.source = 7;
  r.destination = 5;
  r.seq = req.seq;
  r.hop_count = 3;
  r.path_energy = 2.6;
  r.path = {5, 2, 6, 3};
  src.handle_rrep(r, 3);
  r.path_energy = 3.4;
  r.path = {5, 1, 8, 4};
  EXPECT_EQ(src.handle_rrep(r, 4).verdict, RrepDecision::Verdict::ignored);
  EXPECT_EQ(src.route(5)->next_hop, 3);
}

TEST(Forward, NoRouteAfterInvalidation) {
  RoutingAgent src(7, RoutingMode::newaodv, 8);
  EXPECT_EQ(src.forward_data(5).verdict, ForwardDecision::Verdict::no_route);
  const auto req = src.originate_rreq(5, 0.2);
  Rrep r;
  r.source = 7;
  r.destination = 5;
  r.seq = req.seq;
  r.hop_count = 3;
  r.path = {5, 1, 8, 4};
  src.handle_rrep(r, 4);
  EXPECT_EQ(src.forward_data(5).verdict, ForwardDecision::Verdict::sent);
  src.invalidate_route(5);
  EXPECT_EQ(src.forward_data(5).verdict, ForwardDecision::Verdict::no_route);
}

TEST(Failure, ErrorTravelsUpstreamThenSourceRediscovers) {
  RoutingAgent mid(8, RoutingMode::newaodv, 8);
  mid.handle_rreq(copy(1, 1, 0.7, {7, 4}), 4, 0.8);
  const auto up = mid.report_link_failure(5, 7);
  EXPECT_EQ(up.verdict, RerrDecision::Verdict::relay);
  EXPECT_EQ(up.next_hop, 4);

  RoutingAgent src(7, RoutingMode::newaodv, 8);
  EXPECT_EQ(src.handle_rerr(Rerr{5, 1, 7}).verdict, RerrDecision::Verdict::rediscover);

  RoutingAgent stranger(6, RoutingMode::newaodv, 8);
  EXPECT_EQ(stranger.handle_rerr(Rerr{5, 1, 7}).verdict, RerrDecision::Verdict::drop);
}

TEST(Discovery, RetriesThenExhausts) {
  RoutingAgent src(7, RoutingMode::newaodv, 8);
  auto seq = src.originate_rreq(5, 1.0).seq;
  EXPECT_EQ(src.on_discovery_timeout(5, seq + 1, 3), DiscoveryTimeout::stale);
  EXPECT_EQ(src.on_discovery_timeout(5, seq, 3), DiscoveryTimeout::retry);
  seq = src.originate_rreq(5, 1.0).seq;
  EXPECT_EQ(src.on_discovery_timeout(5, seq, 3), DiscoveryTimeout::retry);
  seq = src.originate_rreq(5, 1.0).seq;
  EXPECT_EQ(src.on_discovery_timeout(5, seq, 3), DiscoveryTimeout::exhausted);
  EXPECT_EQ(src.failed_discoveries(5), 3);
  src.reset_discovery(5);
  EXPECT_EQ(src.failed_discoveries(5), 0);
}

TEST(Discovery, AnsweredDiscoveryTimeoutIsStale) {
  RoutingAgent src(7, RoutingMode::newaodv, 8);
  const auto seq = src.originate_rreq(5, 1.0).seq;
  Rrep r;
  r.source = 7;
  r.destination = 5;
  r.seq = seq;
  r.path = {5};
  src.handle_rrep(r, 5);
  EXPECT_EQ(src.on_discovery_timeout(5, seq, 3), DiscoveryTimeout::stale);
}

TEST(Delay, BaseValuesAndJitter) {
  RoutingConfig cfg;
  cfg.jitter_max_s = 0.0;
  Rng rng(1);
  EXPECT_EQ(rebroadcast_delay(RoutingMode::newaodv, cfg, rng), 0.05);
  EXPECT_EQ(rebroadcast_delay(RoutingMode::aodv, cfg, rng), 0.01);
  cfg.jitter_max_s = 0.005;
  Rng a(3);
  Rng b(3);
  for (int i = 0; i < 100; ++i) {
    const double x = rebroadcast_delay(RoutingMode::newaodv, cfg, a);
    EXPECT_EQ(x, rebroadcast_delay(RoutingMode::newaodv, cfg, b));
    EXPECT_GE(x, 0.05);
    EXPECT_LE(x, 0.055);
  }
}

TEST(Subset, AodvForwardsSubsetOfNewaodvCopies) {
  // Same arrival sequence fed to both modes; every copy AODV forwards,
  // NEWAODV forwards too.
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::uniform_int_distribution<int> h(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    RoutingAgent aodv(3, RoutingMode::aodv, 8);
    RoutingAgent fresh(3, RoutingMode::newaodv, 8);
    SeqNo seq = 1;
    for (int k = 0; k < 12; ++k) {
      if (k % 5 == 4) ++seq;
      const int hops = h(gen);
      std::vector<NodeId> via{0};
      for (int i = 0; i < hops; ++i) via.push_back(10 + i);
      const auto c = copy(seq, hops, u(gen), via);
      const bool a = aodv.handle_rreq(c, via.back(), 0.5).verdict != RreqDecision::Verdict::drop;
      const bool b = fresh.handle_rreq(c, via.back(), 0.5).verdict != RreqDecision::Verdict::drop;
      if (a) EXPECT_TRUE(b) << "trial " << trial << " copy " << k;
      // stored hop counts never diverge, only the stored energy does
      EXPECT_EQ(aodv.reverse(0)->hop_count, fresh.reverse(0)->hop_count);
    }
  }
}
