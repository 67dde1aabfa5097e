// Copyright 2026 The fluxsquid Authors
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

#include "fluxsquid/types.hpp"

#include <algorithm>

namespace fluxsquid {

std::string to_string(Design design) {
  return design == Design::Grounded ? "grounded" : "floating";
}

Design design_from_string(const std::string& name) {
  if (name == "grounded") return Design::Grounded;
  if (name == "floating") return Design::Floating;
  throw DomainError("unknown design '" + name + "'");
}

double hermiticity_defect(const MatrixXcd& a) {
  const double scale = std::max(a.norm(), 1e-300);
  return (a - a.adjoint()).norm() / scale;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace fluxsquid
