#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "seqstream/encoder.hpp"
#include "seqstream/synth.hpp"
#include "seqstream/types.hpp"

using namespace seqstream;

namespace {

ObjectObservation obs(Tick t, std::uint64_t id, double x, double y, double w = 4.0,
                      double h = 4.0) {
  ObjectObservation o;
  o.t = t;
  o.object_id = id;
  o.bbox = {x, y, w, h};
  return o;
}

}  // namespace

TEST_CASE("rectangles overlap only with positive shared area") {
  Rect a{0, 0, 10, 10};
  CHECK(a.overlaps({5, 5, 2, 2}));
  CHECK_FALSE(a.overlaps({10, 0, 5, 5}));  // shared edge, zero area
  CHECK_FALSE(a.overlaps({12, 0, 5, 5}));
  CHECK_FALSE(a.overlaps({3, 3, 0, 4}));
}

TEST_CASE("grid validation and cell layout") {
  GridSpec grid{20.0, 10.0, 2, 4};
  grid.validate();
  CHECK(grid.cell_count() == 8);

  Rect first = grid.cell_rect(0);
  CHECK(first.x == 0.0);
  CHECK(first.y == 0.0);
  CHECK(first.w == 5.0);
  CHECK(first.h == 5.0);

  Rect last = grid.cell_rect(7);
  CHECK(last.x == 15.0);
  CHECK(last.y == 5.0);

  CHECK_THROWS_AS(grid.cell_rect(8), std::out_of_range);

  GridSpec bad{20.0, 10.0, 0, 4};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  GridSpec flat{0.0, 10.0, 2, 2};
  CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
}

TEST_CASE("cells_overlapping finds every touched cell in index order") {
  GridSpec grid{20.0, 20.0, 2, 2};
  CHECK(grid.cells_overlapping({8.0, 8.0, 4.0, 4.0}) ==
        std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(grid.cells_overlapping({1.0, 1.0, 2.0, 2.0}) == std::vector<std::uint32_t>{0});
  CHECK(grid.cells_overlapping({15.0, 2.0, 3.0, 3.0}) == std::vector<std::uint32_t>{1});
  CHECK(grid.cells_overlapping({40.0, 40.0, 3.0, 3.0}).empty());
  CHECK(grid.cells_overlapping({5.0, 5.0, 0.0, 3.0}).empty());
}

TEST_CASE("quadrant mask on pinned boxes") {
  Rect cell{0, 0, 10, 10};
  CHECK(encode_cell(cell, {6.0, 1.0, 3.0, 3.0}) == 2);     // top-right only
  CHECK(encode_cell(cell, {-1.0, -1.0, 12.0, 12.0}) == 15);
  CHECK(encode_cell(cell, {20.0, 20.0, 3.0, 3.0}) == 0);
  CHECK(encode_cell(cell, {1.0, 1.0, 2.0, 2.0}) == 1);     // top-left only
  CHECK(encode_cell(cell, {1.0, 1.0, 8.0, 2.0}) == 3);     // top half
  CHECK(encode_cell(cell, {1.0, 1.0, 2.0, 8.0}) == 5);     // left half
  CHECK(encode_cell(cell, {6.0, 6.0, 2.0, 2.0}) == 8);     // bottom-right only
}

TEST_CASE("an axis-aligned box covers a contiguous block of quadrants") {
  // Touching top-right and bottom-left forces the other two, so masks like
  // 6 or 7 can never appear.
  const std::set<Symbol> reachable = {0, 1, 2, 3, 4, 5, 8, 10, 12, 15};
  Rect cell{0, 0, 10, 10};
  Rng rng(61);
  for (int iter = 0; iter < 2000; ++iter) {
    Rect box{rng.unit() * 14.0 - 2.0, rng.unit() * 14.0 - 2.0, 0.2 + rng.unit() * 9.0,
             0.2 + rng.unit() * 9.0};
    CHECK(reachable.count(encode_cell(cell, box)) == 1);
  }
}

TEST_CASE("output encoding on pinned pairs") {
  CHECK(encode_output(3, 5, 64) == 197);
  CHECK(encode_output(1, 1, 64) == 65);
  CHECK_THROWS_AS(encode_output(0, 1, 64), std::invalid_argument);
  CHECK_THROWS_AS(encode_output(1, 0, 64), std::invalid_argument);
  CHECK_THROWS_AS(encode_output(1, 65, 64), std::invalid_argument);
}

TEST_CASE("output decoding inverts encoding over the valid range") {
  CHECK(decode_output(197, 64) == std::pair<std::uint32_t, std::uint32_t>{3, 5});
  CHECK(decode_output(65, 64) == std::pair<std::uint32_t, std::uint32_t>{1, 1});
  CHECK_THROWS_AS(decode_output(64, 64), std::invalid_argument);
  CHECK_THROWS_AS(decode_output(0, 64), std::invalid_argument);

  for (std::size_t m_u : {std::size_t{1}, std::size_t{7}, std::size_t{64}}) {
    for (std::uint32_t node = 1; node <= 5; ++node) {
      for (std::uint32_t model = 1; model <= m_u; ++model) {
        Symbol s = encode_output(node, model, m_u);
        CHECK(s != 0);
        CHECK(decode_output(s, m_u) == std::pair{node, model});
      }
    }
  }
}

TEST_CASE("a diagonal crossing yields the expected mask progression") {
  StepEncoder enc(GridSpec{10.0, 10.0, 1, 1});
  const double track[][2] = {
      {6.5, 0.5}, {3.5, 0.5}, {3.5, 3.5}, {0.5, 3.5}, {0.5, 6.5}};

  Sequence emitted;
  Tick t = 1;
  for (const auto& pos : track) {
    auto res = enc.step({obs(t, 7, pos[0], pos[1])}, t);
    REQUIRE(res.events.size() == 1);
    CHECK(res.events[0].cell == 0);
    CHECK(res.events[0].object_id == 7);
    emitted.push_back(res.events[0].symbol);
    ++t;
  }
  auto res = enc.step({}, t);
  REQUIRE(res.events.size() == 1);
  emitted.push_back(res.events[0].symbol);

  CHECK(emitted == Sequence{2, 3, 15, 5, 4, 0});
}

TEST_CASE("a stationary object repeats its mask each tick") {
  StepEncoder enc(GridSpec{10.0, 10.0, 1, 1});
  for (Tick t = 1; t <= 3; ++t) {
    auto res = enc.step({obs(t, 1, 1.0, 1.0, 2.0, 2.0)}, t);
    REQUIRE(res.events.size() == 1);
    CHECK(res.events[0].symbol == 1);
  }
}

TEST_CASE("the closing zero sorts ahead of a same-tick replacement") {
  StepEncoder enc(GridSpec{20.0, 10.0, 1, 2});
  enc.step({obs(1, 1, 1.0, 1.0)}, 1);

  // Object 1 moves to cell 1 while object 2 takes over cell 0.
  auto res = enc.step({obs(2, 1, 12.0, 1.0), obs(2, 2, 1.0, 1.0)}, 2);
  REQUIRE(res.events.size() == 3);
  CHECK(res.events[0].cell == 0);
  CHECK(res.events[0].object_id == 1);
  CHECK(res.events[0].symbol == kDelimiter);
  CHECK(res.events[1].cell == 0);
  CHECK(res.events[1].object_id == 2);
  CHECK(res.events[1].symbol != kDelimiter);
  CHECK(res.events[2].cell == 1);
  CHECK(res.events[2].object_id == 1);
  CHECK(res.events[2].symbol != kDelimiter);
}

TEST_CASE("a contested cell reports contention and emits nothing") {
  StepEncoder enc(GridSpec{10.0, 10.0, 1, 1});
  enc.step({obs(1, 1, 1.0, 1.0)}, 1);

  auto res = enc.step({obs(2, 1, 1.0, 1.0), obs(2, 2, 5.0, 5.0)}, 2);
  CHECK(res.events.empty());
  REQUIRE(res.contentions.size() == 1);
  CHECK(res.contentions[0].cell == 0);
  CHECK(res.contentions[0].t == 2);

  // The earlier occupant is still tracked once the intruder leaves; its
  // stream continues without an intervening delimiter.
  auto after = enc.step({obs(3, 1, 1.0, 1.0)}, 3);
  REQUIRE(after.events.size() == 1);
  CHECK(after.events[0].object_id == 1);
  CHECK(after.events[0].symbol != kDelimiter);
}

TEST_CASE("every tracked object closes with a delimiter when it leaves") {
  StepEncoder enc(GridSpec{30.0, 10.0, 1, 3});
  Rng rng(62);
  std::map<std::uint64_t, Symbol> last_symbol;
  for (Tick t = 1; t <= 40; ++t) {
    std::vector<ObjectObservation> frame;
    if (t <= 30 && rng.unit() < 0.8)
      frame.push_back(obs(t, 1, rng.unit() * 26.0, rng.unit() * 6.0, 3.0, 3.0));
    auto res = enc.step(frame, t);
    for (const SymbolEvent& ev : res.events) last_symbol[ev.object_id] = ev.symbol;
  }
  for (const auto& [id, sym] : last_symbol) CHECK(sym == kDelimiter);
}

TEST_CASE("duplicate object ids in one tick are rejected") {
  StepEncoder enc(GridSpec{10.0, 10.0, 1, 1});
  CHECK_THROWS_AS(enc.step({obs(1, 1, 1.0, 1.0), obs(1, 1, 6.0, 6.0)}, 1),
                  std::invalid_argument);
}
