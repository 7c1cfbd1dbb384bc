#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "support.hpp"
#include "tgsketch/errors.hpp"
#include "tgsketch/features.hpp"

using namespace tgsketch;
using tgsketch::testing::graph_from_text;
using tgsketch::testing::random_temporal_graph;

TEST_CASE("structural features") {
  SUBCASE("directed two cycle") {
    auto g = graph_from_text("u v\nv u\n", "src dst", true);
    auto m = derive_structural_features(g);
    REQUIRE(m.cols == 3);
    for (node_id u = 0; u < 2; ++u) {
      CHECK(m.at(u, 0) == 2.0);
      CHECK(m.at(u, 1) == 1.0);
      CHECK(m.at(u, 2) == 1.0);
    }
  }
  SUBCASE("isolated node row is zero") {
    auto g = graph_from_text("a b\n", "src dst", true, "z\tdefault\n");
    auto m = derive_structural_features(g);
    const node_id z = g.id_of("z");
    for (std::size_t j = 0; j < m.cols; ++j) CHECK(m.at(z, j) == 0.0);
  }
  SUBCASE("undirected path") {
    auto g = graph_from_text("a b\nb c\n", "src dst");
    auto m = derive_structural_features(g);
    REQUIRE(m.cols == 1);
    CHECK(m.at(g.id_of("a"), 0) == 1.0);
    CHECK(m.at(g.id_of("b"), 0) == 2.0);
    CHECK(m.at(g.id_of("c"), 0) == 1.0);
  }
}

TEST_CASE("feature columns agree with degree_profile") {
  auto g = random_temporal_graph(25, 120, true, 5);
  auto m = derive_structural_features(g);
  for (node_id u = 0; u < g.num_nodes(); ++u) {
    auto d = g.degree_profile(u);
    CHECK(m.at(u, 0) == static_cast<double>(d.total));
    CHECK(m.at(u, 1) == static_cast<double>(d.in));
    CHECK(m.at(u, 2) == static_cast<double>(d.out));
  }
}

TEST_CASE("attribute attachment") {
  auto g = graph_from_text("a b\nb c\n", "src dst");
  auto m = derive_structural_features(g);

  SUBCASE("one dimensional attribute grows the matrix") {
    AttributeTable attrs{{"a", {7.0}}, {"b", {8.0}}, {"c", {9.0}}};
    auto out = attach_attributes(m, g, attrs);
    REQUIRE(out.cols == m.cols + 1);
    CHECK(out.at(g.id_of("a"), 1) == 7.0);
    CHECK(out.kinds.back() == FeatureKind::attribute);
  }
  SUBCASE("table without graph nodes appends the fill value") {
    AttributeTable attrs{{"unrelated", {4.0}}};
    auto out = attach_attributes(m, g, attrs, 0.0);
    REQUIRE(out.cols == m.cols + 1);
    for (node_id u = 0; u < g.num_nodes(); ++u) CHECK(out.at(u, 1) == 0.0);
  }
  SUBCASE("categorical codes stored verbatim") {
    AttributeTable attrs{{"a", {3.0}}, {"b", {0.0}}, {"c", {3.0}}};
    auto out = attach_attributes(m, g, attrs);
    CHECK(out.at(g.id_of("a"), 1) == 3.0);
    CHECK(out.at(g.id_of("b"), 1) == 0.0);
  }
  SUBCASE("inconsistent lengths rejected") {
    AttributeTable attrs{{"a", {1.0}}, {"b", {1.0, 2.0}}};
    CHECK_THROWS_AS(attach_attributes(m, g, attrs), validation_error);
  }
  SUBCASE("attribute file parsing") {
    std::istringstream in("a\t1.5,2\nb\t0,4\n");
    auto table = load_attributes(in);
    REQUIRE(table.size() == 2);
    CHECK(table["a"] == std::vector<double>{1.5, 2.0});
  }
}

namespace {

FeatureMatrix single_column(std::vector<double> values) {
  FeatureMatrix m;
  m.rows = values.size();
  m.cols = 1;
  m.values = std::move(values);
  m.names = {"f"};
  m.kinds = {FeatureKind::derived};
  return m;
}

}  // namespace

TEST_CASE("logarithmic binning") {
  SUBCASE("powers of two spread over all bins") {
    auto m = single_column({0, 1, 2, 4, 8});
    auto bins = fit_log_bins(m, 5);
    CHECK(bins.bin_of(0, 0) == 0);
    CHECK(bins.bin_of(0, 1) == 1);
    CHECK(bins.bin_of(0, 2) == 2);
    CHECK(bins.bin_of(0, 4) == 3);
    CHECK(bins.bin_of(0, 8) == 4);
  }
  SUBCASE("constant zero feature stays in bin zero") {
    auto bins = fit_log_bins(single_column({0, 0, 0}), 5);
    CHECK(bins.bin_of(0, 0) == 0);
  }
  SUBCASE("single bucket") {
    auto bins = fit_log_bins(single_column({0, 3, 9}), 1);
    for (double v : {0.0, 3.0, 9.0, 100.0}) CHECK(bins.bin_of(0, v) == 0);
  }
  SUBCASE("zero bins rejected") {
    CHECK_THROWS_AS(fit_log_bins(single_column({1}), 0), validation_error);
  }
  SUBCASE("values above the observed max clamp to the last bin") {
    auto bins = fit_log_bins(single_column({0, 1, 2}), 4);
    CHECK(bins.bin_of(0, 1e9) == 3);
  }
  SUBCASE("negative values are shifted by the observed minimum") {
    auto bins = fit_log_bins(single_column({-4, 0, 4}), 5);
    CHECK(bins.bin_of(0, -4) == 0);
    CHECK(bins.bin_of(0, 0) > 0);
    CHECK(bins.bin_of(0, 4) > bins.bin_of(0, 0));
  }

  SUBCASE("bin index is monotone and always in range") {
    rng_engine rng(17);
    for (int b : {1, 2, 5, 9}) {
      std::vector<double> values;
      for (int i = 0; i < 200; ++i)
        values.push_back(static_cast<double>(uniform_index(rng, 1000)) / 7.0);
      auto bins = fit_log_bins(single_column(values), b);
      double prev_v = -1e18;
      int prev_bin = 0;
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      for (double v : sorted) {
        int bin = bins.bin_of(0, v);
        CHECK(bin >= 0);
        CHECK(bin < b);
        if (prev_v <= v) CHECK(prev_bin <= bin);
        prev_v = v;
        prev_bin = bin;
      }
    }
  }
}
