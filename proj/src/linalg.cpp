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

#include "bisf/linalg.hpp"

#include <stdexcept>

namespace bisf {

HermitianFactor::HermitianFactor(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("HermitianFactor: matrix not square");
  if (a.size() == 0) {
    llt_.compute(a);
    return;
  }
  if (!a.allFinite()) throw NumericalError("HermitianFactor: non-finite matrix entries");
  llt_.compute(a);
  if (llt_.info() == Eigen::Success) return;

  const double scale = std::abs(a.diagonal().real().mean());
  const double ceiling = 1e-6 * scale;
  for (double jitter = 1e-12 * scale; jitter <= ceiling * (1.0 + 1e-12); jitter *= 10.0) {
    CMatrix shifted = a;
    shifted.diagonal().array() += jitter;
    llt_.compute(shifted);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      return;
    }
  }
  throw NumericalError("HermitianFactor: matrix is not positive definite");
}

CMatrix HermitianFactor::inverse() const {
  return llt_.solve(CMatrix::Identity(size(), size()));
}

double HermitianFactor::log_det() const {
  const auto& lu = llt_.matrixLLT();
  double acc = 0.0;
  for (Index i = 0; i < lu.rows(); ++i) acc += std::log(lu(i, i).real());
  return 2.0 * acc;
}

double hermitian_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw std::invalid_argument("trace_of_product: shape mismatch");
  }
  return a.transpose().cwiseProduct(b).sum();
}

}  // namespace bisf
