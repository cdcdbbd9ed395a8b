#pragma once

// Combines two sequence models into one common supersequence, summing the
// weights of aligned characters.

#include "seqstream/types.hpp"

namespace seqstream {

// Raw alignment result before run collapsing. se interleaves both inputs in
// order; aligned characters appear once with both weights added.
struct MergeParts {
  Sequence se;
  std::vector<double> sw;
  std::size_t aligned = 0;  // number of matched character pairs
};

// Backtracks the weighted score table of (incoming as query) vs (model) and
// stitches the two sequences together. Deterministic: ties prefer consuming
// the incoming character, then the model character.
MergeParts lcs_merge_parts(const MicroCluster& model, const MicroCluster& incoming);

// Folds a finished sequence (incoming, typically w == 1) into an established
// model. Result weight is model.w + 1; result timestamp is `now`.
MicroCluster merge(const MicroCluster& model, const MicroCluster& incoming, Tick now);

// Maintenance-time merge of two stored models. The lighter one (same
// ordering as model_distance) plays the query; result weight is a.w + b.w.
MicroCluster merge_models(const MicroCluster& a, const MicroCluster& b, Tick now);

}  // namespace seqstream
