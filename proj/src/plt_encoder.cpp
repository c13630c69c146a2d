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

#include "edtr/plt_encoder.hpp"

#include <cmath>

namespace edtr {

const char* to_string(EncodingVariant v) {
  return v == EncodingVariant::kSegmentAdjacency ? "segment" : "disjunctive";
}

DiscreteProductEncoding encode_discrete_product(const std::string& key,
                                                std::span<const double> levels,
                                                std::span<const double> coefs,
                                                std::span<const AlphaInput> alphas,
                                                EncodingVariant variant, MilpModel& model) {
  const int k = static_cast<int>(levels.size());
  if (k == 0) throw ModelError("encoding '" + key + "' needs at least one level");
  if (coefs.size() != levels.size()) {
    throw ModelError("encoding '" + key + "' needs one coefficient per level");
  }
  for (int i = 1; i < k; ++i) {
    if (!(levels[i] > levels[i - 1])) {
      throw ModelError("encoding '" + key + "' levels must be strictly increasing");
    }
  }
  for (const auto& a : alphas) {
    if (!(a.lo <= a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw ModelError("encoding '" + key + "' alpha '" + a.label + "' has an invalid box");
    }
  }

  DiscreteProductEncoding enc;
  enc.key = key;
  enc.variant = variant;
  enc.levels.assign(levels.begin(), levels.end());
  enc.coefs.assign(coefs.begin(), coefs.end());
  enc.level_variable = model.add_continuous("tau_" + key, levels.front(), levels.back());

  if (k > 1) {
    LinearExpr one;
    if (variant == EncodingVariant::kDisjunctiveExact) {
      for (int i = 1; i <= k; ++i) {
        enc.level_binaries.push_back(model.add_binary("s_" + key + "_" + std::to_string(i)));
        one.add(enc.level_binaries.back(), 1.0);
      }
    } else {
      for (int s = 1; s < k; ++s) {
        enc.segment_binaries.push_back(
            model.add_binary("yseg_" + key + "_" + std::to_string(s)));
        one.add(enc.segment_binaries.back(), 1.0);
      }
    }
    model.add_constraint("pltone_" + key, one, Sense::kEqual, 1.0);
  }

  for (const auto& a : alphas) {
    AlphaBlock block;
    block.label = a.label;
    block.alpha = a.alpha;
    block.lo = a.lo;
    block.hi = a.hi;
    const std::string base = key + "_" + a.label;
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= 2; ++j) {
        block.weights.push_back(model.add_continuous(
            "z_" + base + "_" + std::to_string(i) + "_" + std::to_string(j), 0.0, 1.0));
      }
    }
    auto z = [&](int i, int j) { return block.weights[2 * (i - 1) + (j - 1)]; };

    LinearExpr recovered, level, norm;
    for (int i = 1; i <= k; ++i) {
      recovered.add(z(i, 2), a.hi).add(z(i, 1), a.lo);
      level.add(z(i, 1), levels[i - 1]).add(z(i, 2), levels[i - 1]);
      norm.add(z(i, 1), 1.0).add(z(i, 2), 1.0);
      block.product.add(z(i, 2), coefs[i - 1] * a.hi).add(z(i, 1), coefs[i - 1] * a.lo);
    }
    // A point box fixes alpha, so the recovery row would be redundant.
    if (a.lo < a.hi) {
      model.add_constraint("pltrec_" + base, a.alpha - recovered, Sense::kEqual, 0.0);
    }
    model.add_constraint("plttap_" + base, LinearExpr(enc.level_variable) - level,
                         Sense::kEqual, 0.0);
    model.add_constraint("pltnorm_" + base, norm, Sense::kEqual, 1.0);

    if (k > 1 && variant == EncodingVariant::kDisjunctiveExact) {
      for (int i = 1; i <= k; ++i) {
        model.add_constraint("pltsel_" + base + "_" + std::to_string(i),
                             LinearExpr(z(i, 1)) + LinearExpr(z(i, 2)) -
                                 LinearExpr(enc.level_binaries[i - 1]),
                             Sense::kEqual, 0.0);
      }
    } else if (k > 1) {
      const auto& y = enc.segment_binaries;
      for (int i = 1; i <= k; ++i) {
        LinearExpr allowed;
        if (i > 1) allowed.add(y[i - 2], 1.0);
        if (i < k) allowed.add(y[i - 1], 1.0);
        for (int j = 1; j <= 2; ++j) {
          model.add_constraint(
              "pltadj_" + base + "_" + std::to_string(i) + "_" + std::to_string(j),
              LinearExpr(z(i, j)) - allowed, Sense::kLessEqual, 0.0);
        }
      }
    }
    enc.blocks.push_back(std::move(block));
  }
  return enc;
}

PltEncoding encode_branch_flow(const std::string& branch_id, int hour,
                               const LinearExpr& theta_m, Interval theta_m_box,
                               const LinearExpr& theta_n, Interval theta_n_box,
                               const LinearExpr& delta, Interval delta_box,
                               std::span<const double> tap_set, double x,
                               EncodingVariant variant, MilpModel& model) {
  if (!(x > 0.0)) throw ModelError("branch '" + branch_id + "' needs x > 0");
  std::vector<double> coefs;
  for (double w : tap_set) {
    if (!(w > 0.0)) throw ModelError("branch '" + branch_id + "' has a non-positive tap");
    coefs.push_back(1.0 / (w * x));
  }
  const AlphaInput alphas[] = {{"m", theta_m, theta_m_box.lo, theta_m_box.hi},
                               {"n", theta_n, theta_n_box.lo, theta_n_box.hi},
                               {"d", delta, delta_box.lo, delta_box.hi}};
  PltEncoding enc;
  enc.branch_id = branch_id;
  enc.hour = hour;
  enc.x = x;
  enc.product = encode_discrete_product(branch_id + "_" + std::to_string(hour), tap_set,
                                        coefs, alphas, variant, model);
  if (tap_set.size() == 1) {
    enc.flow_expression = (theta_m - theta_n - delta) * coefs.front();
  } else {
    const auto& b = enc.product.blocks;
    enc.flow_expression = b[0].product - b[1].product - b[2].product;
  }
  return enc;
}

PltValues recover_values(const PltEncoding& encoding, std::span<const double> assignment,
                         double tol) {
  const auto& p = encoding.product;
  const int k = static_cast<int>(p.levels.size());
  PltValues out;
  out.tap_mass.assign(k, 0.0);
  double products[3] = {0.0, 0.0, 0.0};
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const AlphaBlock& block = p.blocks[b];
    double mass = 0.0, alpha = 0.0, tau = 0.0, prod = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto z1 = block.weights[2 * i].index;
      const auto z2 = block.weights[2 * i + 1].index;
      if (std::max(z1, z2) >= static_cast<std::int32_t>(assignment.size())) {
        throw ModelError("assignment does not cover encoding '" + p.key + "'");
      }
      const double v1 = assignment[z1], v2 = assignment[z2];
      mass += v1 + v2;
      alpha += v2 * block.hi + v1 * block.lo;
      tau += (v1 + v2) * p.levels[i];
      prod += p.coefs[i] * (v2 * block.hi + v1 * block.lo);
      if (b == 0) out.tap_mass[i] = v1 + v2;
    }
    if (std::abs(mass - 1.0) > tol) {
      throw ModelError("weights of encoding '" + p.key + "' block '" + block.label +
                       "' sum to " + std::to_string(mass) + " instead of 1");
    }
    if (b == 0) out.tau = tau;
    out.alpha.push_back(alpha);
    if (b < 3) products[b] = prod;
  }
  out.flow = products[0] - products[1] - products[2];
  return out;
}

std::pair<RowId, RowId> linearize_abs_step(const LinearExpr& prev, const LinearExpr& cur,
                                           const LinearExpr& bound, const std::string& name,
                                           MilpModel& model) {
  const LinearExpr diff = cur - prev;
  const RowId up = model.add_constraint(name + "_up", diff - bound, Sense::kLessEqual, 0.0);
  const RowId dn =
      model.add_constraint(name + "_dn", diff * -1.0 - bound, Sense::kLessEqual, 0.0);
  return {up, dn};
}

}  // namespace edtr
