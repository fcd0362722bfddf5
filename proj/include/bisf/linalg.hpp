// Copyright 2026 The bisf Authors. All Rights Reserved.
//
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

#pragma once

#include <Eigen/Cholesky>

#include "bisf/types.hpp"

namespace bisf {

/// Cholesky factorization of a Hermitian positive-definite matrix.
///
/// If the plain factorization breaks down, a diagonal jitter starting at
/// 1e-12 * trace/n is added and grown tenfold until it succeeds or exceeds
/// 1e-6 * trace/n, at which point NumericalError is thrown. Only the lower
/// triangle of the input is read.
class HermitianFactor {
 public:
  HermitianFactor() = default;
  explicit HermitianFactor(const CMatrix& a);

  Index size() const { return llt_.rows(); }
  double jitter() const { return jitter_; }

  CMatrix solve(const CMatrix& rhs) const { return llt_.solve(rhs); }
  CVector solve(const CVector& rhs) const { return llt_.solve(rhs); }
  CMatrix inverse() const;
  /// log det, real for a Hermitian PD matrix.
  double log_det() const;
  /// Lower-triangular factor L with A + jitter I = L L^H.
  CMatrix lower() const { return llt_.matrixL(); }

 private:
  Eigen::LLT<CMatrix> llt_;
  double jitter_ = 0.0;
};

/// max |A - A^H| / max(1, max |A|).
double hermitian_defect(const CMatrix& a);

/// trace(A B) without forming the product.
Complex trace_of_product(const CMatrix& a, const CMatrix& b);

}  // namespace bisf
