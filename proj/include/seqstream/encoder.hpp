#pragma once

// Turns tracked bounding boxes into per-cell symbol streams. Each grid cell
// is split into four quadrants; the symbol is a 4-bit occupancy mask. A cell
// emits 0 on the tick its tracked object no longer touches it.

#include <cstdint>
#include <map>
#include <vector>

#include "seqstream/types.hpp"

namespace seqstream {

// Axis-aligned rectangle, origin at the top-left, y growing downward.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool overlaps(const Rect& other) const;  // positive-area intersection
};

struct GridSpec {
  double frame_width = 64.0;
  double frame_height = 64.0;
  std::uint32_t rows = 1;
  std::uint32_t cols = 1;

  void validate() const;
  std::uint32_t cell_count() const { return rows * cols; }
  Rect cell_rect(std::uint32_t cell) const;  // cell = row * cols + col
  // Cells the box overlaps, ascending by index.
  std::vector<std::uint32_t> cells_overlapping(const Rect& box) const;
};

struct ObjectObservation {
  Tick t = 0;
  std::uint64_t object_id = 0;
  Rect bbox;
  std::int32_t label = -1;  // optional ground-truth tag, carried through
};

// Quadrant mask of bbox within cell: bit 0 top-left, bit 1 top-right,
// bit 2 bottom-left, bit 3 bottom-right. 0 when the box misses the cell.
Symbol encode_cell(const Rect& cell, const Rect& bbox);

// Packs a (node, model) pair into one symbol for the next layer:
// node_id * m_u + model_index. Never 0 or ambiguous since node ids and
// model indexes start at 1.
Symbol encode_output(std::uint32_t node_id, std::uint32_t model_index, std::size_t m_u);

// Inverse of encode_output; throws on symbols no (node, model) pair maps to.
std::pair<std::uint32_t, std::uint32_t> decode_output(Symbol s, std::size_t m_u);

struct SymbolEvent {
  Tick t = 0;
  std::uint32_t cell = 0;
  std::uint64_t object_id = 0;
  Symbol symbol = 0;
};

struct ContentionEvent {
  Tick t = 0;
  std::uint32_t cell = 0;
};

// Per-tick encoder. Remembers which object each cell tracked so it can emit
// the closing 0 when the object moves on. One object per cell per tick;
// a contested cell is reported and skipped for that tick.
class StepEncoder {
 public:
  explicit StepEncoder(GridSpec grid);

  struct StepResult {
    std::vector<SymbolEvent> events;  // ordered by cell, then object id
    std::vector<ContentionEvent> contentions;
  };

  StepResult step(const std::vector<ObjectObservation>& observations, Tick t);

  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  std::map<std::uint32_t, std::uint64_t> occupant_;  // cell -> object from last tick
};

}  // namespace seqstream
