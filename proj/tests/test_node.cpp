#include <doctest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqstream/node.hpp"
#include "seqstream/synth.hpp"
#include "seqstream/types.hpp"

using namespace seqstream;

namespace {

Hyperparams small_params() {
  Hyperparams p;
  p.epsilon = 0.3;
  p.lambda = 0.01;
  p.mu = 10.0;
  p.t_gap = 20;
  p.m_u = 16;
  return p;
}

MicroCluster stored(const char* hex, double w = 1.0, Tick t = 0) {
  MicroCluster mc = make_micro_cluster(t, seq_from_hex(hex));
  mc.w = w;
  return mc;
}

// Streams one finished sequence, every symbol plus the delimiter on the
// same tick.
void feed_sequence(ClusterNode& node, const Sequence& seq, Tick t) {
  for (Symbol s : seq) node.ingest_symbol(s, t);
  node.ingest_symbol(kDelimiter, t);
}

}  // namespace

TEST_CASE("first finished sequence opens a fresh model") {
  ClusterNode node(1, small_params());
  Tick t = 1;
  for (Symbol s : Sequence{2, 3, 7, 5, 4, 0}) node.ingest_symbol(s, t++);
  REQUIRE(node.store().size() == 1);
  const MicroCluster& mc = node.store()[0];
  CHECK(mc.se == seq_from_hex("23754"));
  CHECK(mc.sw == std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK(mc.w == 1.0);
  CHECK(node.buffer().empty());
  CHECK(node.stats().creations == 1);
}

TEST_CASE("a close sequence folds into the matching model") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754"), stored("9AB"), stored("D1D")}, 0);
  for (Symbol s : Sequence{2, 3, 7, 5, 4, 0}) node.ingest_symbol(s, 0);
  REQUIRE(node.store().size() == 3);
  const MicroCluster& mc = node.store()[0];
  CHECK(mc.se == seq_from_hex("23754"));
  CHECK(mc.w == 2.0);
  CHECK(mc.sw == std::vector<double>{2.0, 2.0, 2.0, 2.0, 2.0});
  CHECK(node.stats().merges == 1);
  REQUIRE(node.last_assignment().has_value());
  CHECK(node.last_assignment()->merged);
  CHECK(node.last_assignment()->model_index == 1);
  CHECK(node.last_assignment()->distance == doctest::Approx(0.0));
}

TEST_CASE("consecutive duplicate symbols collapse in the buffer") {
  ClusterNode node(1, small_params());
  node.ingest_symbol(2, 1);
  node.ingest_symbol(2, 2);
  node.ingest_symbol(3, 3);
  CHECK(node.buffer() == Sequence{2, 3});
}

TEST_CASE("delimiter with an empty buffer is a no-op") {
  ClusterNode node(1, small_params());
  node.ingest_symbol(kDelimiter, 1);
  node.ingest_symbol(kDelimiter, 2);
  CHECK(node.store().empty());
  CHECK(node.stats().sequences == 0);
}

TEST_CASE("ingest rejects a clock running backwards") {
  ClusterNode node(1, small_params());
  node.ingest_symbol(2, 10);
  CHECK_THROWS_AS(node.ingest_symbol(3, 9), std::invalid_argument);
}

TEST_CASE("match_closest picks the nearest model with index ties going low") {
  ClusterNode node(1, small_params());

  node.set_store({stored("23754")}, 0);
  auto m = node.match_closest(seq_from_hex("2354"));
  REQUIRE(m.has_value());
  CHECK(m->first == 1);
  CHECK(m->second == doctest::Approx(0.0));

  node.set_store({stored("23754"), stored("9AB")}, 0);
  m = node.match_closest(seq_from_hex("9AB"));
  REQUIRE(m.has_value());
  CHECK(m->first == 2);
  CHECK(m->second == doctest::Approx(0.0));

  node.set_store({stored("ABC")}, 0);
  m = node.match_closest(seq_from_hex("123"));
  REQUIRE(m.has_value());
  CHECK(m->first == 1);
  CHECK(m->second == doctest::Approx(1.0));

  ClusterNode empty(1, small_params());
  CHECK_FALSE(empty.match_closest(seq_from_hex("123")).has_value());
}

TEST_CASE("predict returns the model tail past the consumed alignment") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754")}, 0);
  CHECK(node.predict(seq_from_hex("23"), 1) == seq_from_hex("754"));
  CHECK(node.predict(seq_from_hex("23754"), 1).empty());

  node.set_store({stored("4CEA2")}, 0);
  CHECK(node.predict(seq_from_hex("4C"), 1) == seq_from_hex("EA2"));

  CHECK_THROWS_AS(node.predict(seq_from_hex("4C"), 2), std::out_of_range);
  CHECK_THROWS_AS(node.predict(seq_from_hex("4C"), 0), std::out_of_range);
}

TEST_CASE("cleanup removes a model left alone for two maintenance intervals") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754", 1.0, 0)}, 0);
  node.cleanup(40);
  CHECK(node.store().empty());
  CHECK(node.stats().expired_models == 1);
}

TEST_CASE("cleanup keeps a model whose weight stays above the threshold") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754", 1.2, 0)}, 0);
  node.cleanup(20);
  REQUIRE(node.store().size() == 1);
  CHECK(node.store()[0].w == doctest::Approx(1.2 * std::exp2(-0.2)));
  CHECK(node.store()[0].t == 20);
}

TEST_CASE("cleanup prunes characters trailing the peak weight by more than mu") {
  ClusterNode node(1, small_params());
  MicroCluster mc = stored("ABCA", 5.0, 0);
  mc.sw = {12.0, 11.0, 1.0, 12.0};
  node.set_store({mc}, 0);
  node.cleanup(0);
  REQUIRE(node.store().size() == 1);
  CHECK(node.store()[0].se == seq_from_hex("ABA"));
  CHECK(node.store()[0].sw == std::vector<double>{12.0, 11.0, 12.0});
}

TEST_CASE("character pruning collapses duplicates it uncovers") {
  ClusterNode node(1, small_params());
  MicroCluster mc = stored("A8A", 5.0, 0);
  mc.se = seq_from_hex("A8A");
  mc.sw = {12.0, 1.0, 12.0};
  node.set_store({mc}, 0);
  node.cleanup(0);
  REQUIRE(node.store().size() == 1);
  CHECK(node.store()[0].se == seq_from_hex("A"));
  CHECK(node.store()[0].sw == std::vector<double>{24.0});
}

TEST_CASE("cleanup folds models with identical sequences into one") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754", 2.0), stored("9AB", 2.0), stored("23754", 3.0)}, 0);
  node.cleanup(0);
  REQUIRE(node.store().size() == 2);
  CHECK(node.store()[0].se == seq_from_hex("23754"));
  CHECK(node.store()[0].w == doctest::Approx(5.0));
  CHECK(node.store()[1].se == seq_from_hex("9AB"));
  CHECK(node.stats().model_merges == 1);
}

TEST_CASE("maintenance runs when a tick crosses the interval boundary") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754", 1.0, 0)}, 0);
  node.advance_tick(19);
  CHECK(node.stats().cleanups == 0);
  node.advance_tick(45);
  CHECK(node.stats().cleanups == 1);
  CHECK(node.store().empty());
}

TEST_CASE("store never exceeds capacity and eviction drops the lightest model") {
  Hyperparams p = small_params();
  p.m_u = 2;
  ClusterNode node(1, p);
  node.set_store({stored("123", 5.0, 0), stored("456", 0.5, 0)}, 0);

  feed_sequence(node, seq_from_hex("789"), 1);
  REQUIRE(node.store().size() == 2);
  CHECK(node.store()[0].se == seq_from_hex("123"));
  CHECK(node.store()[1].se == seq_from_hex("789"));
  CHECK(node.stats().evictions == 1);
}

TEST_CASE("store stays bounded across a long varied stream") {
  Hyperparams p = small_params();
  p.m_u = 3;
  ClusterNode node(1, p);
  Rng rng(91);
  Tick t = 1;
  for (int iter = 0; iter < 300; ++iter, ++t) {
    Sequence seq;
    while (seq.size() < 5) {
      Symbol s = 1 + rng.below(15);
      if (!seq.empty() && seq.back() == s) continue;
      seq.push_back(s);
    }
    feed_sequence(node, seq, t);
    CHECK(node.store().size() <= 3);
  }
}

TEST_CASE("identical streams produce identical stores and match events") {
  auto run = [] {
    ClusterNode node(1, small_params());
    std::vector<std::optional<MatchEvent>> events;
    Rng rng(92);
    Tick t = 1;
    for (int iter = 0; iter < 120; ++iter, ++t) {
      const Sequence& base = standard_patterns()[iter % standard_patterns().size()];
      Sequence seq = base;
      if (rng.unit() < 0.3) seq[rng.below(static_cast<std::uint32_t>(seq.size()))] =
          1 + rng.below(15);
      collapse_runs(seq);
      for (Symbol s : seq) events.push_back(node.ingest_symbol(s, t));
      events.push_back(node.ingest_symbol(kDelimiter, t));
    }
    return std::make_pair(node.store(), events);
  };
  auto first = run();
  auto second = run();
  CHECK(first.first == second.first);
  REQUIRE(first.second.size() == second.second.size());
  for (std::size_t i = 0; i < first.second.size(); ++i) {
    const auto& a = first.second[i];
    const auto& b = second.second[i];
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->model_index == b->model_index);
      CHECK(a->distance == b->distance);
      CHECK(a->emitted == b->emitted);
      CHECK(a->predicted_suffix == b->predicted_suffix);
    }
  }
}

TEST_CASE("match events report the same result as a fresh full computation") {
  ClusterNode node(1, small_params());
  node.set_store({stored("631B729A"), stored("6A194D27"), stored("729E4F1C")}, 0);
  Rng rng(93);
  Tick t = 1;
  for (int iter = 0; iter < 60; ++iter, ++t) {
    Sequence seq;
    while (seq.size() < 6) {
      Symbol s = 1 + rng.below(15);
      if (!seq.empty() && seq.back() == s) continue;
      seq.push_back(s);
    }
    for (Symbol s : seq) {
      auto ev = node.ingest_symbol(s, t);
      REQUIRE(ev.has_value());
      auto fresh = node.match_closest(node.buffer());
      REQUIRE(fresh.has_value());
      CHECK(ev->model_index == fresh->first);
      CHECK(ev->distance == doctest::Approx(fresh->second).epsilon(1e-12));
    }
    node.ingest_symbol(kDelimiter, t);
  }
}

TEST_CASE("events fire only when the best match moves") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754"), stored("9AB"), stored("D1D")}, 0);

  auto e1 = node.ingest_symbol(2, 1);
  REQUIRE(e1.has_value());
  CHECK(e1->model_index == 1);
  CHECK(e1->emitted);

  auto e2 = node.ingest_symbol(3, 1);
  REQUIRE(e2.has_value());
  CHECK(e2->model_index == 1);
  CHECK_FALSE(e2->emitted);

  auto e3 = node.ingest_symbol(9, 1);
  REQUIRE(e3.has_value());
  CHECK(e3->model_index == 1);
  CHECK_FALSE(e3->emitted);

  auto e4 = node.ingest_symbol(10, 1);
  REQUIRE(e4.has_value());
  CHECK(e4->model_index == 2);
  CHECK(e4->emitted);

  auto e5 = node.ingest_symbol(11, 1);
  REQUIRE(e5.has_value());
  CHECK(e5->model_index == 2);
  CHECK_FALSE(e5->emitted);

  // A finished sequence resets the tracking, so the next match fires again.
  node.ingest_symbol(kDelimiter, 1);
  auto e6 = node.ingest_symbol(2, 1);
  REQUIRE(e6.has_value());
  CHECK(e6->emitted);
}

TEST_CASE("matching stays quiet until the store grows past the threshold") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754"), stored("9AB")}, 0);
  CHECK_FALSE(node.ingest_symbol(2, 1).has_value());
  node.ingest_symbol(kDelimiter, 1);

  node.set_store({stored("23754"), stored("9AB"), stored("D1D")}, 1);
  CHECK(node.ingest_symbol(2, 2).has_value());
}

TEST_CASE("an injected noise symbol disappears from the surviving model") {
  ClusterNode node(1, small_params());
  const Sequence clean = seq_from_hex("4CEA2");
  Sequence noisy = seq_from_hex("48CEA2");
  Tick t = 1;
  for (int pass = 0; pass < 60; ++pass, ++t) {
    feed_sequence(node, pass % 4 == 3 ? noisy : clean, t);
  }
  node.flush(node.clock());
  REQUIRE(node.store().size() == 1);
  CHECK(node.store()[0].se == clean);
}

TEST_CASE("flush settles the store to a fixpoint") {
  ClusterNode node(1, small_params());
  node.set_store({stored("23754", 6.0), stored("23754", 6.0), stored("2354", 6.0)}, 0);
  node.flush(0);
  REQUIRE(node.store().size() == 1);
  CHECK(node.store()[0].w == doctest::Approx(18.0));
}

TEST_CASE("restoring a store keeps ids aligned and fresh") {
  ClusterNode node(1, small_params());
  node.set_store({stored("123"), stored("456")}, 5);
  REQUIRE(node.model_ids().size() == 2);
  CHECK(node.model_ids()[0] != node.model_ids()[1]);
  CHECK(node.clock() == 5);

  CHECK_THROWS_AS(node.set_store({stored("123", 1.0, 9)}, 5), std::invalid_argument);

  MicroCluster bad = stored("123");
  bad.sw.pop_back();
  CHECK_THROWS_AS(node.set_store({bad}, 5), std::invalid_argument);
}
