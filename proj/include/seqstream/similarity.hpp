#pragma once

// Weighted longest-common-subsequence scoring between a query sequence and a
// stored model, plus the distance measures built on top of it.

#include <cstddef>
#include <vector>

#include "seqstream/types.hpp"

namespace seqstream {

// Dynamic-programming score table. Row j covers the query prefix of length j,
// column i the model prefix of length i; cell(j, i) is the best weighted
// alignment score of those prefixes.
struct DpTable {
  std::size_t rows = 0;  // |query| + 1
  std::size_t cols = 0;  // |model| + 1
  std::vector<double> cells;

  double at(std::size_t j, std::size_t i) const { return cells[j * cols + i]; }
  double score() const { return cells.empty() ? 0.0 : cells.back(); }
};

// Per-position weights scaled so the heaviest position scores 1.
std::vector<double> normalized_weights(const MicroCluster& model);

// One DP row update: prev_row holds scores for the query prefix without
// query_sym, out_row receives scores with it appended. Aliasing prev_row and
// out_row is not allowed.
void extend_lcs_row(const Sequence& model_se, const std::vector<double>& norm,
                    Symbol query_sym, const std::vector<double>& prev_row,
                    std::vector<double>& out_row);

// Full score table for backtracking. A match at model position i contributes
// normalized_weights(model)[i] instead of 1.
DpTable lcs_table(const Sequence& query, const MicroCluster& model);

// Final alignment score only, computed with two rolling rows.
double lcs_score(const Sequence& query, const MicroCluster& model);

// 1 - score / min(|query|, |model|), in [0, 1]. Either side empty gives 1.
double distance(const Sequence& query, const MicroCluster& model);

// Distance between two stored models: the lighter one (smaller w, then
// shorter se; pass the lower-indexed model first to settle exact ties) plays
// the role of an unweighted query against the heavier one.
double model_distance(const MicroCluster& a, const MicroCluster& b);

// Exhaustive unweighted LCS length used as a test oracle. Enumerates the
// subsequences of the shorter input, so both lengths are capped at 12.
std::size_t lcs_brute(const Sequence& a, const Sequence& b);

constexpr std::size_t kLcsBruteMaxLen = 12;

}  // namespace seqstream
