#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include "wsnlife/network.hpp"
#include "wsnlife/scenario_io.hpp"

using namespace wsnlife;
using namespace wsnlife::net;

namespace {

Network snapshot() { return io::load_scenario(std::string(WSNLIFE_DATA_DIR) + "/snapshot.json").network; }

NodeState make_node(int id, double x, double y, double rate) {
  NodeState n;
  n.id = id;
  n.position = {x, y};
  n.rate = rate;
  return n;
}

// Flow vector aligned with net.edges from (src, dst) -> value; the edge kind
// is picked by `kind`.
std::vector<double> flows(const Network& net, const std::map<std::pair<int, int>, double>& q,
                          EdgeKind kind_for_61 = EdgeKind::Direct) {
  std::vector<double> out(net.edges.size(), 0.0);
  for (const auto& [key, v] : q) {
    bool placed = false;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const auto& edge = net.edges[e];
      const EdgeKind want = key == std::pair{6, 1} ? kind_for_61 : EdgeKind::Direct;
      if (edge.src == key.first && edge.dst == key.second && edge.kind == want) {
        out[e] = v;
        placed = true;
      }
    }
    EXPECT_TRUE(placed) << key.first << "->" << key.second;
  }
  return out;
}

}  // namespace

TEST(Generate, IdsRatesAndDeterminism) {
  const auto a = generate_random(100.0, 10, 2, 42);
  const auto b = generate_random(100.0, 10, 2, 42);
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(io::serialize(a), io::serialize(b));
  EXPECT_EQ(a.sinks(), (std::vector<int>{1, 2}));
  EXPECT_EQ(a.origins().size(), 10u);
  double total = 0.0;
  for (const auto& n : a.nodes) {
    total += n.rate;
    EXPECT_GE(n.position.x, 0.0);
    EXPECT_LE(n.position.x, 100.0);
  }
  EXPECT_NEAR(total, 0.0, 1e-12);
  EXPECT_NE(io::serialize(a), io::serialize(generate_random(100.0, 10, 2, 43)));
}

TEST(Generate, UniformMean) {
  double sx = 0.0, sy = 0.0;
  int count = 0;
  for (std::uint64_t s = 0; s < 100; ++s)
    for (const auto& n : generate_random(100.0, 20, 1, s).nodes) {
      sx += n.position.x;
      sy += n.position.y;
      ++count;
    }
  EXPECT_NEAR(sx / count, 50.0, 10.0);
  EXPECT_NEAR(sy / count, 50.0, 10.0);
}

TEST(Generate, RejectsBadArguments) {
  EXPECT_THROW(generate_random(100.0, 0, 1, 1), DomainError);
  EXPECT_THROW(generate_random(100.0, 3, 0, 1), DomainError);
  EXPECT_THROW(generate_random(-1.0, 3, 1, 1), DomainError);
}

TEST(BuildEdges, SingleSensorNextToSink) {
  Network net;
  net.nodes = {make_node(1, 0, 0, -1), make_node(2, 30, 0, 1)};
  net = build_edges(net, CoopMode::CT);
  ASSERT_EQ(net.count_edges(EdgeKind::Direct), 2u);  // both directions kept
  EXPECT_EQ(net.count_edges(EdgeKind::CbCt), 0u);
  int usable = 0;
  for (const auto& e : net.edges) usable += net.node(e.src).is_sink() ? 0 : 1;
  EXPECT_EQ(usable, 1);
}

TEST(BuildEdges, OneCooperativeLinkJustInsideExtendedRange) {
  const auto p = link::ChannelParams::defaults();
  const double a0 = link::max_direct_range(p);
  const double helper_d = a0 / 2.0;
  const double gain = pair_gain(p, CoopMode::CT, helper_d);
  const double reach = a0 * std::pow(gain, 1.0 / p.alpha);
  ASSERT_GT(gain, 1.9);

  Network net;
  net.nodes = {make_node(1, 0.999 * reach, 0, -2), make_node(2, 0, 0, 1), make_node(3, 0, helper_d, 1)};
  net = build_edges(net, CoopMode::CT);
  ASSERT_EQ(net.count_edges(EdgeKind::CbCt), 1u);
  for (const auto& e : net.edges)
    if (e.kind == EdgeKind::CbCt) {
      EXPECT_EQ(e.src, 2);
      EXPECT_EQ(e.dst, 1);
      EXPECT_EQ(e.helpers, std::vector<int>{3});
    }

  net.node(1).position.x = 1.001 * reach;
  EXPECT_EQ(build_edges(net, CoopMode::CT).count_edges(EdgeKind::CbCt), 0u);
}

TEST(BuildEdges, IsolatedNodeHasNoCooperativeLinks) {
  Network net;
  net.nodes = {make_node(1, 0, 0, -2), make_node(2, 40, 0, 1), make_node(3, 200, 0, 1)};
  net = build_edges(net, CoopMode::CT);
  for (const auto& e : net.edges) EXPECT_NE(e.src, 3);
}

TEST(BuildEdges, SnapshotPositionsReproduceShippedEdges) {
  const Network shipped = snapshot();
  const Network rebuilt = build_edges(shipped, CoopMode::CT);
  auto key = [](const Edge& e) { return std::tuple{e.src, e.dst, e.kind, e.helpers}; };
  std::vector<std::tuple<int, int, EdgeKind, std::vector<int>>> a, b;
  for (const auto& e : shipped.edges) a.push_back(key(e));
  for (const auto& e : rebuilt.edges) b.push_back(key(e));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);

  int into_sink_direct = 0;
  bool cbct_61 = false;
  for (const auto& e : rebuilt.edges) {
    if (e.dst == 1 && e.kind == EdgeKind::Direct) {
      EXPECT_EQ(e.src, 2);
      ++into_sink_direct;
    }
    if (e.kind == EdgeKind::CbCt) {
      EXPECT_EQ(e.src, 6);
      EXPECT_EQ(e.dst, 1);
      EXPECT_EQ(e.helpers, std::vector<int>{5});
      cbct_61 = true;
    }
  }
  EXPECT_EQ(into_sink_direct, 1);
  EXPECT_TRUE(cbct_61);
}

TEST(EnergyUse, ZeroFlowMeansInfiniteLifetime) {
  const Network net = snapshot();
  const std::vector<double> zero(net.edges.size(), 0.0);
  for (double t : node_lifetime(net, zero)) EXPECT_TRUE(std::isinf(t));
}

TEST(EnergyUse, ForwardingFlowMatrix) {
  const Network net = snapshot();
  const auto q = flows(net, {{{2, 1}, 1.0}, {{3, 2}, 0.2}, {{4, 5}, 0.1}, {{4, 6}, 0.1}, {{5, 2}, 0.3}, {{6, 2}, 0.3}});
  const auto use = node_energy_use(net, q);
  const std::vector<double> expect{0, 1.0, 0.2, 0.2, 0.3, 0.3};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(use[i], expect[i], 1e-12) << "node " << i + 1;
  const auto life = node_lifetime(net, q);
  EXPECT_EQ(std::min_element(life.begin(), life.end()) - life.begin(), 1);
}

TEST(EnergyUse, CooperativeFlowMatrixChargesHelper) {
  const Network net = snapshot();
  const auto q = flows(net,
                       {{{2, 1}, 1.0},
                        {{3, 2}, 0.321},
                        {{3, 6}, 0.012},
                        {{4, 6}, 0.333},
                        {{5, 2}, 0.23},
                        {{5, 6}, 0.103},
                        {{6, 1}, 0.667},
                        {{6, 2}, 0.115}},
                       EdgeKind::CbCt);
  const auto use = node_energy_use(net, q);
  const std::vector<double> expect{0, 1.000, 0.333, 0.333, 1.000, 0.782};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(use[i], expect[i], 1e-9) << "node " << i + 1;
}

TEST(EnergyUse, RejectsNegativeFlow) {
  const Network net = snapshot();
  std::vector<double> q(net.edges.size(), 0.0);
  q[0] = -1.0;
  EXPECT_THROW(node_energy_use(net, q), DomainError);
  EXPECT_THROW(node_energy_use(net, std::vector<double>(2, 0.0)), DomainError);
}

TEST(Reachability, CooperativeOnlyOrigin) {
  const Network net = snapshot();
  EXPECT_TRUE(unreachable_origins(net).empty());
  Network cut = net;
  std::erase_if(cut.edges, [](const Edge& e) { return e.src == 2 && e.dst == 1; });
  EXPECT_TRUE(unreachable_origins(cut).empty());  // 2 -> 6 -> (CB/CT) 1
  EXPECT_EQ(unreachable_origins(cut.without_cbct()), (std::vector<int>{2, 3, 4, 5, 6}));
}

TEST(Validate, RejectsMalformedNetworks) {
  Network net = snapshot();
  net.nodes[2].id = 9;
  EXPECT_THROW(net.validate(), DomainError);

  net = snapshot();
  net.edges.push_back({3, 3, EdgeKind::Direct, {}});
  EXPECT_THROW(net.validate(), DomainError);

  net = snapshot();
  net.edges.push_back({3, 1, EdgeKind::Direct, {4}});
  EXPECT_THROW(net.validate(), DomainError);

  net = snapshot();
  net.nodes[3].energy_remaining = 2.0;
  EXPECT_THROW(net.validate(), DomainError);
}
