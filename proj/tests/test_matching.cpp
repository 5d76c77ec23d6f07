#include <random>
#include <stdexcept>

#include "doctest.h"
#include "folner/matching.hpp"

using namespace folner;

namespace {

BipartiteGraph graph_of(std::size_t left, std::size_t right,
                        std::vector<std::vector<std::size_t>> adj) {
  BipartiteGraph g;
  g.left = left;
  g.right = right;
  g.adj = std::move(adj);
  return g;
}

void check_valid(const BipartiteGraph& g, const MatchingCertificate& cert) {
  // the matching is a partial injection along edges
  std::vector<char> used(g.right, 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.left; ++i) {
    if (!cert.match_left[i]) continue;
    const std::size_t j = *cert.match_left[i];
    CHECK(!used[j]);
    used[j] = 1;
    ++count;
    bool edge = false;
    for (std::size_t t : g.adj[i]) edge |= t == j;
    CHECK(edge);
  }
  CHECK(count == cert.mu);
  // the deficiency certificate attains left − mu
  CHECK(cert.deficiency_set.size() - cert.deficiency_neighborhood.size() ==
        g.left - cert.mu);
}

}  // namespace

TEST_CASE("maximum matching on pinned graphs") {
  const auto empty = graph_of(0, 0, {});
  const auto ce = maximum_matching(empty);
  CHECK(ce.mu == 0);
  CHECK(ce.deficiency_set.empty());

  // square with all edges: perfect matching, zero deficiency
  const auto square = graph_of(2, 2, {{0, 1}, {0, 1}});
  const auto cs = maximum_matching(square);
  CHECK(cs.mu == 2);
  CHECK(cs.deficiency_set.empty());
  check_valid(square, cs);

  // three left vertices sharing one right vertex
  const auto star = graph_of(3, 1, {{0}, {0}, {0}});
  const auto ct = maximum_matching(star);
  CHECK(ct.mu == 1);
  CHECK(ct.deficiency_set == std::vector<std::size_t>{0, 1, 2});
  CHECK(ct.deficiency_neighborhood == std::vector<std::size_t>{0});
  check_valid(star, ct);

  // augmenting path required: greedy a→x must be rerouted
  const auto path = graph_of(2, 2, {{0}, {0, 1}});
  const auto cp = maximum_matching(path);
  CHECK(cp.mu == 2);
  check_valid(path, cp);

  // isolated left vertex
  const auto iso = graph_of(2, 1, {{}, {0}});
  const auto ci = maximum_matching(iso);
  CHECK(ci.mu == 1);
  CHECK(ci.deficiency_set == std::vector<std::size_t>{0});
  CHECK(ci.deficiency_neighborhood.empty());

  CHECK_THROWS_AS(maximum_matching(graph_of(2, 2, {{0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(maximum_matching(graph_of(1, 1, {{1}})),
                  std::invalid_argument);
}

TEST_CASE("duality: augmenting paths agree with exhaustive deficiency") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t left = 1 + rng() % 9;
    const std::size_t right = 1 + rng() % 10;
    const int density = 1 + static_cast<int>(rng() % 100);
    BipartiteGraph g;
    g.left = left;
    g.right = right;
    g.adj.assign(left, {});
    for (std::size_t i = 0; i < left; ++i) {
      for (std::size_t j = 0; j < right; ++j) {
        if (static_cast<int>(rng() % 100) < density) g.adj[i].push_back(j);
      }
    }
    const auto cert = maximum_matching(g);
    check_valid(g, cert);
    CHECK(cert.mu == g.left - hall_deficiency_exhaustive(g));
  }
}

TEST_CASE("exhaustive deficiency guard rails") {
  BipartiteGraph big;
  big.left = 21;
  big.right = 4;
  big.adj.assign(21, {});
  CHECK_THROWS_AS(hall_deficiency_exhaustive(big), std::invalid_argument);

  const auto star = graph_of(3, 1, {{0}, {0}, {0}});
  CHECK(hall_deficiency_exhaustive(star) == 2);
  const auto square = graph_of(2, 2, {{0, 1}, {0, 1}});
  CHECK(hall_deficiency_exhaustive(square) == 0);
}
