#include "seqstream/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqstream {

std::vector<double> normalized_weights(const MicroCluster& model) {
  std::vector<double> norm(model.sw.size());
  double max_w = 0.0;
  for (double w : model.sw) max_w = std::max(max_w, w);
  if (max_w <= 0.0) throw std::invalid_argument("normalized_weights: weights must be positive");
  for (std::size_t i = 0; i < model.sw.size(); ++i) norm[i] = model.sw[i] / max_w;
  return norm;
}

void extend_lcs_row(const Sequence& model_se, const std::vector<double>& norm,
                    Symbol query_sym, const std::vector<double>& prev_row,
                    std::vector<double>& out_row) {
  const std::size_t n = model_se.size();
  out_row.resize(n + 1);
  out_row[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double best = std::max(prev_row[i], out_row[i - 1]);
    if (model_se[i - 1] == query_sym) best = std::max(best, prev_row[i - 1] + norm[i - 1]);
    out_row[i] = best;
  }
}

DpTable lcs_table(const Sequence& query, const MicroCluster& model) {
  const std::size_t n = model.se.size();
  const std::size_t m = query.size();
  DpTable tab;
  tab.rows = m + 1;
  tab.cols = n + 1;
  tab.cells.assign(tab.rows * tab.cols, 0.0);
  if (n == 0 || m == 0) return tab;

  const std::vector<double> norm = normalized_weights(model);
  std::vector<double> prev(n + 1, 0.0), cur;
  for (std::size_t j = 1; j <= m; ++j) {
    extend_lcs_row(model.se, norm, query[j - 1], prev, cur);
    std::copy(cur.begin(), cur.end(), tab.cells.begin() + static_cast<std::ptrdiff_t>(j * tab.cols));
    prev.swap(cur);
  }
  return tab;
}

double lcs_score(const Sequence& query, const MicroCluster& model) {
  const std::size_t n = model.se.size();
  if (n == 0 || query.empty()) return 0.0;
  const std::vector<double> norm = normalized_weights(model);
  std::vector<double> prev(n + 1, 0.0), cur;
  for (Symbol s : query) {
    extend_lcs_row(model.se, norm, s, prev, cur);
    prev.swap(cur);
  }
  return prev[n];
}

double distance(const Sequence& query, const MicroCluster& model) {
  if (query.empty() || model.se.empty()) return 1.0;
  const double denom = static_cast<double>(std::min(query.size(), model.se.size()));
  double d = 1.0 - lcs_score(query, model) / denom;
  if (d < 0.0) d = 0.0;
  if (d > 1.0) d = 1.0;
  return d;
}

double model_distance(const MicroCluster& a, const MicroCluster& b) {
  const bool a_lighter = a.w < b.w || (a.w == b.w && a.se.size() <= b.se.size());
  const MicroCluster& query = a_lighter ? a : b;
  const MicroCluster& model = a_lighter ? b : a;
  return distance(query.se, model);
}

namespace {

bool is_subsequence(const Sequence& needle, const Sequence& hay) {
  std::size_t i = 0;
  for (Symbol s : hay) {
    if (i < needle.size() && needle[i] == s) ++i;
  }
  return i == needle.size();
}

}  // namespace

std::size_t lcs_brute(const Sequence& a, const Sequence& b) {
  if (a.size() > kLcsBruteMaxLen || b.size() > kLcsBruteMaxLen)
    throw std::invalid_argument("lcs_brute: input longer than the enumeration cap");
  const Sequence& small = a.size() <= b.size() ? a : b;
  const Sequence& large = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::size_t n = small.size();
  Sequence cand;
  cand.reserve(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    cand.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) cand.push_back(small[i]);
    if (cand.size() > best && is_subsequence(cand, large)) best = cand.size();
  }
  return best;
}

}  // namespace seqstream
