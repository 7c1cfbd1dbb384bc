#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "tgsketch/errors.hpp"
#include "tgsketch/walks.hpp"

using namespace tgsketch;
using tgsketch::testing::graph_from_text;
using tgsketch::testing::random_temporal_graph;

namespace {

// Fixture pinning the total duration to 10: candidates at timestamps 1 and 3
// plus far edges at 0 and 10.
TemporalGraph duration_ten_graph() {
  return graph_from_text("a v 1\na w 3\nx y 0\nx y 10\n", "src dst timestamp", true);
}

}  // namespace

TEST_CASE("transition distribution") {
  auto g = duration_ten_graph();
  const node_id a = g.id_of("a");

  SUBCASE("short-term softmax on timestamps 1 and 3 with duration 10") {
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    CHECK(policy.duration == doctest::Approx(10.0));
    auto probs = transition_distribution(g, a, 0, policy);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] == doctest::Approx(0.5498).epsilon(1e-3));
    CHECK(probs[1] == doctest::Approx(0.4502).epsilon(1e-3));
    CHECK(probs[0] + probs[1] == doctest::Approx(1.0));
    CHECK(probs[0] > probs[1]);  // short-term prefers the earlier timestamp
  }
  SUBCASE("long-term reverses the preference") {
    auto policy = WalkPolicy::for_graph(g, WalkMode::long_term);
    auto probs = transition_distribution(g, a, 0, policy);
    REQUIRE(probs.size() == 2);
    CHECK(probs[1] > probs[0]);
    CHECK(probs[0] + probs[1] == doctest::Approx(1.0));
  }
  SUBCASE("equal timestamps are uniform under both policies") {
    auto ge = graph_from_text("a v 5\na w 5\na z 5\nx y 0\nx y 10\n", "src dst timestamp", true);
    for (auto mode : {WalkMode::short_term, WalkMode::long_term}) {
      auto policy = WalkPolicy::for_graph(ge, mode);
      auto probs = transition_distribution(ge, ge.id_of("a"), 0, policy);
      REQUIRE(probs.size() == 3);
      for (double p : probs) CHECK(p == doctest::Approx(1.0 / 3.0));
    }
  }
  SUBCASE("single candidate gets probability one") {
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    auto probs = transition_distribution(g, a, 2, policy);
    REQUIRE(probs.size() == 1);
    CHECK(probs[0] == doctest::Approx(1.0));
  }
  SUBCASE("empty neighborhood yields an empty vector") {
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    CHECK(transition_distribution(g, a, 99, policy).empty());
  }
  SUBCASE("multi-edges are separate outcomes") {
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    auto probs = transition_distribution(g, g.id_of("x"), 0, policy);
    CHECK(probs.size() == 2);
  }
  SUBCASE("temporal policy on a non-temporal graph is rejected") {
    auto gs = graph_from_text("a b\n", "src dst");
    CHECK_THROWS_AS(WalkPolicy::for_graph(gs, WalkMode::short_term), validation_error);
  }
}

TEST_CASE("sampled step frequencies match the distribution") {
  auto g = duration_ten_graph();
  const node_id a = g.id_of("a");
  for (auto mode : {WalkMode::short_term, WalkMode::long_term}) {
    auto policy = WalkPolicy::for_graph(g, mode);
    auto probs = transition_distribution(g, a, 0, policy);
    TransitionIndex index(g, policy);
    rng_engine rng(99);
    const int draws = 20000;
    std::map<node_id, int> counts;
    for (int i = 0; i < draws; ++i) {
      const AdjEntry* e = index.sample(a, 0, rng);
      REQUIRE(e != nullptr);
      counts[e->neighbor]++;
    }
    auto nb = g.temporal_neighbors(a, 0);
    for (std::size_t i = 0; i < nb.entries.size(); ++i) {
      const double freq = static_cast<double>(counts[nb.entries[i].neighbor]) / draws;
      CHECK(freq == doctest::Approx(probs[i]).epsilon(0.05));
    }
  }
}

TEST_CASE("walk sampling") {
  SUBCASE("forced chain") {
    auto g = graph_from_text("a b 1\nb c 2\n", "src dst timestamp", true);
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    TransitionIndex index(g, policy);
    rng_engine rng(1);
    auto w = sample_temporal_walk(index, g.edge(0), 3, rng);
    REQUIRE(w.nodes.size() == 3);
    CHECK(w.nodes[0] == g.id_of("a"));
    CHECK(w.nodes[1] == g.id_of("b"));
    CHECK(w.nodes[2] == g.id_of("c"));
    CHECK(w.times == std::vector<timestamp_t>{1, 2});
  }
  SUBCASE("decreasing timestamps stop the walk") {
    auto g = graph_from_text("a b 5\nb c 2\n", "src dst timestamp", true);
    auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);
    TransitionIndex index(g, policy);
    rng_engine rng(1);
    auto w = sample_temporal_walk(index, g.edge(0), 5, rng);
    CHECK(w.nodes.size() == 2);
  }
  SUBCASE("static walks on a triangle always reach full length") {
    auto g = graph_from_text("a b\nb c\nc a\n", "src dst");
    WalkPolicy policy = WalkPolicy::for_graph(g, WalkMode::static_mode);
    TransitionIndex index(g, policy);
    rng_engine rng(3);
    for (int i = 0; i < 1000; ++i) {
      auto w = sample_temporal_walk(index, g.edge(i % 3), 4, rng);
      REQUIRE(w.nodes.size() == 4);
      for (std::size_t s = 0; s + 1 < w.nodes.size(); ++s) {
        bool adjacent = false;
        for (const auto& e : g.adjacency(w.nodes[s]))
          if (e.neighbor == w.nodes[s + 1]) adjacent = true;
        CHECK(adjacent);
      }
    }
  }
  SUBCASE("static sampling follows edge weights") {
    auto g = graph_from_text("a b 9\na c 1\n", "src dst weight", true);
    WalkPolicy policy = WalkPolicy::for_graph(g, WalkMode::static_mode);
    TransitionIndex index(g, policy);
    rng_engine rng(4);
    int to_b = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
      if (index.sample(g.id_of("a"), 0, rng)->neighbor == g.id_of("b")) to_b++;
    CHECK(static_cast<double>(to_b) / draws == doctest::Approx(0.9).epsilon(0.03));
  }
}

TEST_CASE("walk corpus generation") {
  auto g = graph_from_text("a b 1\nb c 2\nc d 3\n", "src dst timestamp", true);
  auto policy = WalkPolicy::for_graph(g, WalkMode::short_term);

  SUBCASE("corpus size is R * M") {
    auto corpus = generate_walk_corpus(g, 2, 4, policy, 7);
    CHECK(corpus.walks.size() == 6);
  }
  SUBCASE("walks start at the edge endpoints") {
    auto corpus = generate_walk_corpus(g, 3, 4, policy, 7);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      for (int rep = 0; rep < 3; ++rep) {
        const Walk& w = corpus.walks[e * 3 + rep];
        CHECK(w.nodes[0] == g.edge(e).src);
        CHECK(w.nodes[1] == g.edge(e).dst);
      }
  }
  SUBCASE("same seed reproduces the corpus") {
    auto c1 = generate_walk_corpus(g, 4, 5, policy, 11);
    auto c2 = generate_walk_corpus(g, 4, 5, policy, 11);
    REQUIRE(c1.walks.size() == c2.walks.size());
    for (std::size_t i = 0; i < c1.walks.size(); ++i) {
      CHECK(c1.walks[i].nodes == c2.walks[i].nodes);
      CHECK(c1.walks[i].times == c2.walks[i].times);
    }
  }
  SUBCASE("corpus does not depend on the thread count") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    auto c1 = generate_walk_corpus(g, 5, 5, policy, 13);
    omp_set_num_threads(4);
    auto c2 = generate_walk_corpus(g, 5, 5, policy, 13);
    omp_set_num_threads(saved);
    for (std::size_t i = 0; i < c1.walks.size(); ++i)
      CHECK(c1.walks[i].nodes == c2.walks[i].nodes);
  }
  SUBCASE("dead-end edge yields two-node walks") {
    auto g1 = graph_from_text("a b 1\n", "src dst timestamp", true);
    auto p1 = WalkPolicy::for_graph(g1, WalkMode::short_term);
    auto corpus = generate_walk_corpus(g1, 5, 10, p1, 3);
    for (const Walk& w : corpus.walks) {
      CHECK(w.nodes == std::vector<node_id>{g1.id_of("a"), g1.id_of("b")});
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(generate_walk_corpus(g, 0, 5, policy, 1), validation_error);
    CHECK_THROWS_AS(generate_walk_corpus(g, 1, 1, policy, 1), validation_error);
  }
}

TEST_CASE("temporal walks never violate timestamp order") {
  auto g = random_temporal_graph(50, 400, true, 21);
  for (auto mode : {WalkMode::short_term, WalkMode::long_term}) {
    auto policy = WalkPolicy::for_graph(g, mode);
    auto corpus = generate_walk_corpus(g, 3, 12, policy, 5);
    for (const Walk& w : corpus.walks) {
      REQUIRE(w.times.size() + 1 == w.nodes.size());
      for (std::size_t i = 1; i < w.times.size(); ++i) CHECK(w.times[i - 1] <= w.times[i]);
      for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) {
        bool adjacent = false;
        for (const auto& e : g.adjacency(w.nodes[i]))
          if (e.neighbor == w.nodes[i + 1] && e.ts == w.times[i]) adjacent = true;
        CHECK(adjacent);
      }
    }
  }
}

TEST_CASE("pairwise policy monotonicity") {
  auto g = graph_from_text("a v 2\na w 6\na z 4\nx y 0\nx y 10\n", "src dst timestamp", true);
  auto nb = g.temporal_neighbors(g.id_of("a"), 0);
  auto short_p = transition_distribution(g, g.id_of("a"), 0,
                                         WalkPolicy::for_graph(g, WalkMode::short_term));
  auto long_p = transition_distribution(g, g.id_of("a"), 0,
                                        WalkPolicy::for_graph(g, WalkMode::long_term));
  for (std::size_t i = 0; i < nb.entries.size(); ++i)
    for (std::size_t j = 0; j < nb.entries.size(); ++j) {
      if (nb.entries[i].ts < nb.entries[j].ts) {
        CHECK(short_p[i] > short_p[j]);
        CHECK(long_p[i] < long_p[j]);
      }
    }
}
