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

#ifndef EDTR_SRC_BASIS_FACTOR_HPP_
#define EDTR_SRC_BASIS_FACTOR_HPP_

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <vector>

namespace edtr::internal {

// Column-compressed constraint matrix [A | -I]; columns >= num_structural are
// the logical (row activity) columns.
struct SparseColumns {
  int rows = 0;
  int num_structural = 0;
  std::vector<int> start;
  std::vector<int> index;
  std::vector<double> value;

  template <typename Fn>
  void for_each(int col, Fn&& fn) const {
    if (col >= num_structural) {
      fn(col - num_structural, -1.0);
      return;
    }
    for (int k = start[col]; k < start[col + 1]; ++k) fn(index[k], value[k]);
  }
};

// LU of the basis matrix with product-form updates between
// refactorizations.
class BasisFactor {
 public:
  // Returns false when the basis matrix is numerically singular.
  bool factorize(const SparseColumns& cols, const std::vector<int>& head);

  // rhs <- B^{-1} rhs
  void ftran(std::vector<double>& rhs) const;
  // rhs <- B^{-T} rhs
  void btran(std::vector<double>& rhs) const;

  // Replaces basis position `r` by the column whose ftran image is `alpha`.
  void update(int r, const std::vector<double>& alpha);

  int num_updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pivot_row = 0;
    double pivot = 1.0;  // 1 / alpha_r
    std::vector<int> index;
    std::vector<double> value;  // -alpha_i / alpha_r for i != r
  };

  int dim_ = 0;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  mutable Eigen::VectorXd work_;
};

}  // namespace edtr::internal

#endif  // EDTR_SRC_BASIS_FACTOR_HPP_
