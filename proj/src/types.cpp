#include "seqstream/types.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace seqstream {

void Hyperparams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in [0, 1]");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (t_gap == 0) throw std::invalid_argument("t_gap must be at least 1");
  if (m_u == 0) throw std::invalid_argument("m_u must be at least 1");
  if (min_models_for_matching == 0)
    throw std::invalid_argument("min_models_for_matching must be at least 1");
}

double decay_weight(double w, Tick t_now, Tick t_last, double lambda) {
  if (t_now < t_last) throw std::invalid_argument("decay_weight: time ran backwards");
  return w * std::exp2(-lambda * static_cast<double>(t_now - t_last));
}

double decayed_weight(const MicroCluster& mc, Tick t_now, double lambda) {
  return decay_weight(mc.w, t_now, mc.t, lambda);
}

MicroCluster make_micro_cluster(Tick t, Sequence se) {
  MicroCluster mc;
  mc.t = t;
  mc.w = 1.0;
  mc.sw.assign(se.size(), 1.0);
  mc.se = std::move(se);
  return mc;
}

bool well_formed(const MicroCluster& mc) {
  if (mc.se.empty() || mc.se.size() != mc.sw.size()) return false;
  if (mc.w <= 0.0) return false;
  for (std::size_t i = 0; i < mc.se.size(); ++i) {
    if (mc.se[i] == kDelimiter) return false;
    if (i > 0 && mc.se[i] == mc.se[i - 1]) return false;
    if (!(mc.sw[i] > 0.0)) return false;
  }
  return true;
}

void collapse_runs(Sequence& se, std::vector<double>& sw) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < se.size(); ++i) {
    if (out > 0 && se[out - 1] == se[i]) {
      sw[out - 1] += sw[i];
    } else {
      se[out] = se[i];
      sw[out] = sw[i];
      ++out;
    }
  }
  se.resize(out);
  sw.resize(out);
}

void collapse_runs(Sequence& se) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < se.size(); ++i) {
    if (out == 0 || se[out - 1] != se[i]) se[out++] = se[i];
  }
  se.resize(out);
}

Sequence seq_from_hex(std::string_view text) {
  Sequence out;
  out.reserve(text.size());
  for (char c : text) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
    else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
    else throw std::invalid_argument(std::string("seq_from_hex: bad character '") + c + "'");
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

std::string seq_to_string(const Sequence& se) {
  bool hex = true;
  for (Symbol s : se)
    if (s > 15) hex = false;
  std::ostringstream os;
  if (hex) {
    for (Symbol s : se) os << "0123456789ABCDEF"[s];
  } else {
    for (std::size_t i = 0; i < se.size(); ++i) {
      if (i) os << ' ';
      os << se[i];
    }
  }
  return os.str();
}

}  // namespace seqstream
