#include "seqstream/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace seqstream {

bool Rect::overlaps(const Rect& other) const {
  const double ix = std::min(x + w, other.x + other.w) - std::max(x, other.x);
  const double iy = std::min(y + h, other.y + other.h) - std::max(y, other.y);
  return ix > 0.0 && iy > 0.0;
}

void GridSpec::validate() const {
  if (rows == 0 || cols == 0) throw std::invalid_argument("grid needs at least one cell");
  if (!(frame_width > 0.0) || !(frame_height > 0.0))
    throw std::invalid_argument("frame dimensions must be positive");
}

Rect GridSpec::cell_rect(std::uint32_t cell) const {
  if (cell >= cell_count()) throw std::out_of_range("cell index outside the grid");
  const double cw = frame_width / cols;
  const double ch = frame_height / rows;
  const std::uint32_t r = cell / cols;
  const std::uint32_t c = cell % cols;
  return Rect{c * cw, r * ch, cw, ch};
}

std::vector<std::uint32_t> GridSpec::cells_overlapping(const Rect& box) const {
  std::vector<std::uint32_t> out;
  const double cw = frame_width / cols;
  const double ch = frame_height / rows;
  if (!(box.w > 0.0) || !(box.h > 0.0)) return out;
  const auto clamp_idx = [](double v, std::uint32_t n) {
    if (v < 0.0) return std::uint32_t{0};
    if (v >= n) return n - 1;
    return static_cast<std::uint32_t>(v);
  };
  const std::uint32_t c0 = clamp_idx(std::floor(box.x / cw), cols);
  const std::uint32_t c1 = clamp_idx(std::ceil((box.x + box.w) / cw) - 1, cols);
  const std::uint32_t r0 = clamp_idx(std::floor(box.y / ch), rows);
  const std::uint32_t r1 = clamp_idx(std::ceil((box.y + box.h) / ch) - 1, rows);
  for (std::uint32_t r = r0; r <= r1; ++r) {
    for (std::uint32_t c = c0; c <= c1; ++c) {
      const std::uint32_t cell = r * cols + c;
      if (box.overlaps(cell_rect(cell))) out.push_back(cell);
    }
  }
  return out;
}

Symbol encode_cell(const Rect& cell, const Rect& bbox) {
  const double hw = cell.w / 2.0;
  const double hh = cell.h / 2.0;
  const Rect quads[4] = {
      {cell.x, cell.y, hw, hh},            // top-left
      {cell.x + hw, cell.y, hw, hh},       // top-right
      {cell.x, cell.y + hh, hw, hh},       // bottom-left
      {cell.x + hw, cell.y + hh, hw, hh},  // bottom-right
  };
  Symbol mask = 0;
  for (int q = 0; q < 4; ++q) {
    if (bbox.overlaps(quads[q])) mask |= Symbol{1} << q;
  }
  return mask;
}

Symbol encode_output(std::uint32_t node_id, std::uint32_t model_index, std::size_t m_u) {
  if (node_id == 0) throw std::invalid_argument("encode_output: node ids start at 1");
  if (model_index == 0 || model_index > m_u)
    throw std::invalid_argument("encode_output: model index outside [1, m_u]");
  return static_cast<Symbol>(node_id * m_u + model_index);
}

std::pair<std::uint32_t, std::uint32_t> decode_output(Symbol s, std::size_t m_u) {
  if (m_u == 0) throw std::invalid_argument("decode_output: m_u must be positive");
  if (s <= m_u) throw std::invalid_argument("decode_output: symbol below the valid range");
  const std::uint32_t node_id = static_cast<std::uint32_t>((s - 1) / m_u);
  const std::uint32_t model_index = static_cast<std::uint32_t>(s - node_id * m_u);
  return {node_id, model_index};
}

StepEncoder::StepEncoder(GridSpec grid) : grid_(grid) { grid_.validate(); }

StepEncoder::StepResult StepEncoder::step(const std::vector<ObjectObservation>& observations,
                                          Tick t) {
  StepResult result;

  // Gather this tick's (cell, object, mask) triples and spot contested cells.
  std::map<std::uint32_t, std::vector<std::pair<std::uint64_t, Symbol>>> by_cell;
  std::set<std::uint64_t> seen_objects;
  for (const ObjectObservation& obs : observations) {
    if (!seen_objects.insert(obs.object_id).second)
      throw std::invalid_argument("step: duplicate object id in one tick");
    for (std::uint32_t cell : grid_.cells_overlapping(obs.bbox)) {
      const Symbol mask = encode_cell(grid_.cell_rect(cell), obs.bbox);
      if (mask != 0) by_cell[cell].emplace_back(obs.object_id, mask);
    }
  }

  std::map<std::uint32_t, std::uint64_t> next_occupant;
  for (auto& [cell, entries] : by_cell) {
    if (entries.size() > 1) {
      result.contentions.push_back({t, cell});
      // Leave the cell's tracking as it was; nothing is emitted this tick.
      auto prev = occupant_.find(cell);
      if (prev != occupant_.end()) next_occupant[cell] = prev->second;
      continue;
    }
    const auto& [object_id, mask] = entries.front();
    result.events.push_back({t, cell, object_id, mask});
    next_occupant[cell] = object_id;
  }

  // Cells tracked last tick close with 0 when their object no longer
  // touches them, including same-tick handoffs to a different object.
  for (const auto& [cell, object_id] : occupant_) {
    auto it = next_occupant.find(cell);
    if (it == next_occupant.end() || it->second != object_id)
      result.events.push_back({t, cell, object_id, kDelimiter});
  }
  occupant_ = std::move(next_occupant);

  // Within a cell the closing 0 sorts ahead of the newcomer's first symbol.
  std::sort(result.events.begin(), result.events.end(),
            [](const SymbolEvent& a, const SymbolEvent& b) {
              if (a.cell != b.cell) return a.cell < b.cell;
              const bool a_close = a.symbol == kDelimiter, b_close = b.symbol == kDelimiter;
              if (a_close != b_close) return a_close;
              return a.object_id < b.object_id;
            });
  return result;
}

}  // namespace seqstream
