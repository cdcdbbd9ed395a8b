#include "seqstream/merge.hpp"

#include <algorithm>

#include "seqstream/similarity.hpp"

namespace seqstream {

MergeParts lcs_merge_parts(const MicroCluster& model, const MicroCluster& incoming) {
  const DpTable tab = lcs_table(incoming.se, model);
  const std::size_t n = model.se.size();
  const std::size_t m = incoming.se.size();

  MergeParts parts;
  parts.se.reserve(n + m);
  parts.sw.reserve(n + m);

  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i == 0) {
      parts.se.push_back(incoming.se[j - 1]);
      parts.sw.push_back(incoming.sw[j - 1]);
      --j;
    } else if (j == 0) {
      parts.se.push_back(model.se[i - 1]);
      parts.sw.push_back(model.sw[i - 1]);
      --i;
    } else if (tab.at(j, i) == tab.at(j - 1, i)) {
      parts.se.push_back(incoming.se[j - 1]);
      parts.sw.push_back(incoming.sw[j - 1]);
      --j;
    } else if (tab.at(j, i) == tab.at(j, i - 1)) {
      parts.se.push_back(model.se[i - 1]);
      parts.sw.push_back(model.sw[i - 1]);
      --i;
    } else {
      parts.se.push_back(model.se[i - 1]);
      parts.sw.push_back(model.sw[i - 1] + incoming.sw[j - 1]);
      ++parts.aligned;
      --i;
      --j;
    }
  }
  std::reverse(parts.se.begin(), parts.se.end());
  std::reverse(parts.sw.begin(), parts.sw.end());
  return parts;
}

namespace {

MicroCluster finish_merge(MergeParts parts, double w, Tick now) {
  MicroCluster out;
  out.t = now;
  out.w = w;
  out.se = std::move(parts.se);
  out.sw = std::move(parts.sw);
  collapse_runs(out.se, out.sw);
  return out;
}

}  // namespace

MicroCluster merge(const MicroCluster& model, const MicroCluster& incoming, Tick now) {
  return finish_merge(lcs_merge_parts(model, incoming), model.w + 1.0, now);
}

MicroCluster merge_models(const MicroCluster& a, const MicroCluster& b, Tick now) {
  const bool a_lighter = a.w < b.w || (a.w == b.w && a.se.size() <= b.se.size());
  const MicroCluster& query = a_lighter ? a : b;
  const MicroCluster& model = a_lighter ? b : a;
  return finish_merge(lcs_merge_parts(model, query), a.w + b.w, now);
}

}  // namespace seqstream
