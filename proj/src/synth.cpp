#include "seqstream/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqstream {

namespace {
constexpr Symbol kAlphabetMax = 15;
}

Rng::Rng(std::uint64_t seed) : eng_(seed) {}

std::uint64_t Rng::next_u64() { return eng_(); }

std::uint32_t Rng::below(std::uint32_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  return static_cast<std::uint32_t>(next_u64() % bound);
}

double Rng::unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = unit();
  while (u1 <= 0.0) u1 = unit();
  const double u2 = unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

Symbol random_symbol_excluding(Rng& rng, Symbol exclude) {
  while (true) {
    const Symbol s = 1 + rng.below(kAlphabetMax);
    if (s != exclude) return s;
  }
}

Sequence corrupt(const Sequence& pattern, SequenceNoise noise, Rng& rng) {
  Sequence out;
  out.reserve(pattern.size() + 2);
  for (Symbol s : pattern) {
    if (noise.rate > 0.0 && rng.unit() < noise.rate) {
      if (rng.unit() < noise.insert_fraction) {
        const Symbol prev = out.empty() ? kDelimiter : out.back();
        out.push_back(random_symbol_excluding(rng, prev));
        out.push_back(s);
      } else {
        out.push_back(random_symbol_excluding(rng, s));
      }
    } else {
      out.push_back(s);
    }
  }
  collapse_runs(out);
  return out;
}

}  // namespace

std::vector<LabeledSequence> gen_sequence_stream(const std::vector<Sequence>& patterns,
                                                 std::size_t n, SequenceNoise noise,
                                                 std::uint64_t seed) {
  if (patterns.empty()) throw std::invalid_argument("gen_sequence_stream: no patterns");
  for (const Sequence& p : patterns) {
    if (p.empty()) throw std::invalid_argument("gen_sequence_stream: empty pattern");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == kDelimiter || p[i] > kAlphabetMax)
        throw std::invalid_argument("gen_sequence_stream: pattern symbol outside 1..15");
      if (i > 0 && p[i] == p[i - 1])
        throw std::invalid_argument("gen_sequence_stream: pattern repeats a symbol");
    }
  }
  if (!(noise.rate >= 0.0 && noise.rate <= 0.5))
    throw std::invalid_argument("gen_sequence_stream: noise rate outside [0, 0.5]");
  if (!(noise.insert_fraction >= 0.0 && noise.insert_fraction <= 1.0))
    throw std::invalid_argument("gen_sequence_stream: insert fraction outside [0, 1]");

  Rng rng(seed);
  std::vector<std::int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::int32_t>(i % patterns.size());
  for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[rng.below(static_cast<std::uint32_t>(i))]);

  std::vector<LabeledSequence> out;
  out.reserve(n);
  for (std::int32_t label : labels) {
    out.push_back({label, corrupt(patterns[static_cast<std::size_t>(label)], noise, rng)});
  }
  return out;
}

std::vector<LabeledSequence> gen_sequence_stream(const std::vector<Sequence>& patterns,
                                                 std::size_t n, double noise_rate,
                                                 std::uint64_t seed) {
  return gen_sequence_stream(patterns, n, SequenceNoise{noise_rate, 0.5}, seed);
}

PointStream gen_point_stream(const std::vector<PatternSpec>& patterns, const GridSpec& grid,
                             std::size_t n_objects, std::uint64_t seed,
                             const PointOptions& options) {
  if (patterns.empty()) throw std::invalid_argument("gen_point_stream: no patterns");
  for (const PatternSpec& p : patterns) {
    if (p.waypoints.size() < 2)
      throw std::invalid_argument("gen_point_stream: pattern needs two waypoints");
    if (!(p.speed > 0.0)) throw std::invalid_argument("gen_point_stream: speed must be positive");
    if (p.jitter_sigma < 0.0)
      throw std::invalid_argument("gen_point_stream: jitter must be non-negative");
  }
  grid.validate();

  Rng rng(seed);
  PointStream out;
  Tick t = 1;
  for (std::size_t k = 0; k < n_objects; ++k) {
    const PatternSpec& pat = patterns[k % patterns.size()];

    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < pat.waypoints.size(); ++i) {
      const double dx = pat.waypoints[i].first - pat.waypoints[i - 1].first;
      const double dy = pat.waypoints[i].second - pat.waypoints[i - 1].second;
      cum.push_back(cum.back() + std::hypot(dx, dy));
    }
    const double total = cum.back();
    const std::size_t steps = static_cast<std::size_t>(total / pat.speed) + 1;

    for (std::size_t step = 0; step <= steps; ++step, ++t) {
      const double dist = std::min(static_cast<double>(step) * pat.speed, total);
      std::size_t seg = 1;
      while (seg + 1 < cum.size() && cum[seg] < dist) ++seg;
      const double seg_len = cum[seg] - cum[seg - 1];
      const double frac = seg_len > 0.0 ? (dist - cum[seg - 1]) / seg_len : 0.0;
      double x = pat.waypoints[seg - 1].first +
                 frac * (pat.waypoints[seg].first - pat.waypoints[seg - 1].first);
      double y = pat.waypoints[seg - 1].second +
                 frac * (pat.waypoints[seg].second - pat.waypoints[seg - 1].second);
      if (pat.jitter_sigma > 0.0) {
        x += pat.jitter_sigma * rng.gaussian();
        y += pat.jitter_sigma * rng.gaussian();
      }

      Rect box{x - options.bbox_w / 2.0, y - options.bbox_h / 2.0, options.bbox_w,
               options.bbox_h};
      bool clamped = false;
      if (box.x < 0.0) { box.x = 0.0; clamped = true; }
      if (box.y < 0.0) { box.y = 0.0; clamped = true; }
      if (box.x + box.w > grid.frame_width) { box.x = grid.frame_width - box.w; clamped = true; }
      if (box.y + box.h > grid.frame_height) { box.y = grid.frame_height - box.h; clamped = true; }
      if (clamped) ++out.clamped;

      out.observations.push_back({t, k + 1, box, pat.pattern_id});
    }
    t += options.idle_gap;
  }
  return out;
}

const std::vector<Sequence>& standard_patterns() {
  static const std::vector<Sequence> patterns = {
      seq_from_hex("631B729A"), seq_from_hex("6A194D27"), seq_from_hex("729E4F1C"),
      seq_from_hex("4DEA1C7B"), seq_from_hex("413957CA"), seq_from_hex("A59B3246"),
      seq_from_hex("291FA348"), seq_from_hex("BC768AF1"),
  };
  return patterns;
}

std::vector<PatternSpec> crossing_patterns(const GridSpec& grid) {
  const double w = grid.frame_width;
  const double h = grid.frame_height;
  return {
      {0, {{4.0, h * 0.3}, {w - 4.0, h * 0.3}}, 2.0, 0.0},
      {1, {{w * 0.6, 4.0}, {w * 0.6, h - 4.0}}, 2.0, 0.0},
      {2, {{4.0, 4.0}, {w - 4.0, h - 4.0}}, 2.0, 0.0},
  };
}

}  // namespace seqstream
