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

#include "basis_factor.hpp"

#include <cmath>

namespace edtr::internal {

bool BasisFactor::factorize(const SparseColumns& cols,
                            const std::vector<int>& head) {
  dim_ = cols.rows;
  etas_.clear();
  work_.resize(dim_);
  if (dim_ == 0) return true;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(head.size() * 4);
  for (int pos = 0; pos < static_cast<int>(head.size()); ++pos) {
    cols.for_each(head[pos], [&](int row, double v) {
      triplets.emplace_back(row, pos, v);
    });
  }
  Eigen::SparseMatrix<double> basis(dim_, dim_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) return false;
  // SparseLU only reports exact zero pivots; probing with a ones vector
  // catches nearly singular bases too.
  const Eigen::VectorXd probe = lu_.solve(Eigen::VectorXd::Ones(dim_));
  return probe.allFinite() && probe.cwiseAbs().maxCoeff() < 1e14;
}

void BasisFactor::ftran(std::vector<double>& rhs) const {
  if (dim_ == 0) return;
  for (int i = 0; i < dim_; ++i) work_[i] = rhs[i];
  Eigen::VectorXd sol = lu_.solve(work_);
  for (int i = 0; i < dim_; ++i) rhs[i] = sol[i];
  for (const auto& eta : etas_) {
    const double xr = rhs[eta.pivot_row];
    if (xr == 0.0) continue;
    rhs[eta.pivot_row] = xr * eta.pivot;
    for (std::size_t k = 0; k < eta.index.size(); ++k) {
      rhs[eta.index[k]] += eta.value[k] * xr;
    }
  }
}

void BasisFactor::btran(std::vector<double>& rhs) const {
  if (dim_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double sum = rhs[it->pivot_row] * it->pivot;
    for (std::size_t k = 0; k < it->index.size(); ++k) {
      sum += it->value[k] * rhs[it->index[k]];
    }
    rhs[it->pivot_row] = sum;
  }
  for (int i = 0; i < dim_; ++i) work_[i] = rhs[i];
  Eigen::VectorXd sol = lu_.transpose().solve(work_);
  for (int i = 0; i < dim_; ++i) rhs[i] = sol[i];
}

void BasisFactor::update(int r, const std::vector<double>& alpha) {
  Eta eta;
  eta.pivot_row = r;
  eta.pivot = 1.0 / alpha[r];
  for (int i = 0; i < dim_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    if (std::abs(alpha[i]) < 1e-14) continue;
    eta.index.push_back(i);
    eta.value.push_back(-alpha[i] * eta.pivot);
  }
  etas_.push_back(std::move(eta));
}

}  // namespace edtr::internal
