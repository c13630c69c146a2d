// Copyright 2026 The edtr Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact piecewise-linear encoding of products c(w) * alpha where w takes
// one of K discrete levels w_1 < ... < w_K and alpha lies in a box
// [lo, hi]. Each alpha gets 2K weights z_{i,j} >= 0 with
//
//   alpha = sum_i (z_{i,2} hi + z_{i,1} lo)
//   w     = sum_i (z_{i,1} + z_{i,2}) w_i
//   1     = sum_{i,j} z_{i,j}
//
// and the product is sum_i c_i (z_{i,2} hi + z_{i,1} lo). Once the weight
// mass sits on a single level i the product equals c_i * alpha exactly.
// Several alphas can share one level choice; the shared `w` rows keep them
// consistent.
//
// For branch flow the level is the tap ratio and c_i = 1 / (w_i x), giving
// (theta_m - theta_n - delta) / (tau x) as a linear expression.

#ifndef EDTR_PLT_ENCODER_HPP_
#define EDTR_PLT_ENCODER_HPP_

#include <span>
#include <string>
#include <vector>

#include "edtr/milp_model.hpp"

namespace edtr {

enum class EncodingVariant {
  // s_i binaries with z_{i,1} + z_{i,2} = s_i and sum_i s_i = 1. Confines
  // the weight mass to one level.
  kDisjunctiveExact,
  // K-1 segment binaries y_k with sum_k y_k = 1 and z_{1,j} <= y_1,
  // z_{K,j} <= y_{K-1}, z_{l,j} <= y_{l-1} + y_l. Mass may straddle two
  // adjacent levels.
  kSegmentAdjacency,
};

const char* to_string(EncodingVariant v);

struct AlphaInput {
  std::string label;  // used in variable names
  LinearExpr alpha;   // variable or constant
  double lo = 0.0;
  double hi = 0.0;
};

struct AlphaBlock {
  std::string label;
  LinearExpr alpha;
  double lo = 0.0;
  double hi = 0.0;
  // weights[2 * i + (j - 1)] is z_{i+1, j}.
  std::vector<VarId> weights;
  LinearExpr product;  // sum_i c_i (z_{i,2} hi + z_{i,1} lo)
};

struct DiscreteProductEncoding {
  std::string key;
  EncodingVariant variant = EncodingVariant::kDisjunctiveExact;
  std::vector<double> levels;
  std::vector<double> coefs;
  std::vector<AlphaBlock> blocks;
  std::vector<VarId> segment_binaries;  // kSegmentAdjacency, K-1 entries
  std::vector<VarId> level_binaries;    // kDisjunctiveExact, K entries
  VarId level_variable;
};

// Appends the encoding of coefs[i] * alpha for every alpha in `alphas`,
// naming variables z_<key>_<label>_<i>_<j>, yseg_<key>_<k>, s_<key>_<i>
// and tau_<key>. With K = 1 no binaries are created. Throws ModelError on
// K = 0, mismatched coefficient count, non-increasing levels or an alpha
// box with lo > hi.
DiscreteProductEncoding encode_discrete_product(const std::string& key,
                                                std::span<const double> levels,
                                                std::span<const double> coefs,
                                                std::span<const AlphaInput> alphas,
                                                EncodingVariant variant, MilpModel& model);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct PltEncoding {
  std::string branch_id;
  int hour = 0;
  double x = 0.0;
  DiscreteProductEncoding product;  // blocks: theta_m, theta_n, delta
  LinearExpr flow_expression;       // per-unit

  const std::vector<AlphaBlock>& alpha_blocks() const { return product.blocks; }
  const std::vector<VarId>& segment_binaries() const { return product.segment_binaries; }
  const std::vector<VarId>& tap_binaries() const { return product.level_binaries; }
  VarId tap_variable() const { return product.level_variable; }
};

// Flow of branch `branch_id` in hour `hour` (1-based, used in names) as
// Y(theta_m) - Y(theta_n) - Y(delta). For K = 1 the flow expression is
// written directly as (theta_m - theta_n - delta) / (w_1 x).
PltEncoding encode_branch_flow(const std::string& branch_id, int hour,
                               const LinearExpr& theta_m, Interval theta_m_box,
                               const LinearExpr& theta_n, Interval theta_n_box,
                               const LinearExpr& delta, Interval delta_box,
                               std::span<const double> tap_set, double x,
                               EncodingVariant variant, MilpModel& model);

struct PltValues {
  double tau = 0.0;
  std::vector<double> alpha;     // one per block
  std::vector<double> tap_mass;  // sum_j z_{i,j} of the first block
  double flow = 0.0;             // from the weights
};

// Reads tau, the alphas and the flow implied by the weights. Throws
// ModelError when some block's weights do not sum to 1 within `tol` or the
// assignment is too short.
PltValues recover_values(const PltEncoding& encoding, std::span<const double> assignment,
                         double tol = 1e-6);

// |cur - prev| <= bound as the two rows `name`_up (cur - prev <= bound)
// and `name`_dn (prev - cur <= bound).
std::pair<RowId, RowId> linearize_abs_step(const LinearExpr& prev, const LinearExpr& cur,
                                           const LinearExpr& bound, const std::string& name,
                                           MilpModel& model);

}  // namespace edtr

#endif  // EDTR_PLT_ENCODER_HPP_
