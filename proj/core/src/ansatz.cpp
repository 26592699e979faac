// Copyright 2026 The purity-vqa Authors
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

#include "pvqa/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "pvqa/swap_test.hpp"

namespace pvqa {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Interval> angle_domain(int count) {
  return std::vector<Interval>(static_cast<std::size_t>(count), Interval{-kPi, kPi});
}

void check_qubit_count(const DensityMatrix& rho, int n) {
  if (n < 1 || rho.dim() != (Eigen::Index{1} << n)) {
    throw Error(ErrorCode::DimMismatch,
                "state dimension " + std::to_string(rho.dim()) + " is not 2^" +
                    std::to_string(n));
  }
}

// |0..0> and |1..1> images under the product of y-rotations, as state
// vectors: the per-qubit columns are (cos, sin) and (-sin, cos).
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> rotated_poles(const Eigen::VectorXd& theta) {
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Ones(1);
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Ones(1);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double c = std::cos(0.5 * theta(i));
    const double s = std::sin(0.5 * theta(i));
    Eigen::VectorXcd n0(2 * v0.size());
    Eigen::VectorXcd n1(2 * v1.size());
    n0 << c * v0, s * v0;
    n1 << -s * v1, c * v1;
    v0 = std::move(n0);
    v1 = std::move(n1);
  }
  return {v0, v1};
}

Eigen::MatrixXcd y_rotation_product(const Eigen::VectorXd& theta) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Ones(1, 1);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double c = std::cos(0.5 * theta(i));
    const double s = std::sin(0.5 * theta(i));
    Eigen::Matrix2cd q;
    q << c, -s, s, c;
    Eigen::MatrixXcd next(2 * r.rows(), 2 * r.cols());
    next.block(0, 0, r.rows(), r.cols()) = q(0, 0) * r;
    next.block(0, r.cols(), r.rows(), r.cols()) = q(0, 1) * r;
    next.block(r.rows(), 0, r.rows(), r.cols()) = q(1, 0) * r;
    next.block(r.rows(), r.cols(), r.rows(), r.cols()) = q(1, 1) * r;
    r = std::move(next);
  }
  return r;
}

Eigen::VectorXd sphere_weights(const Eigen::VectorXd& theta) {
  const Eigen::Index rank = theta.size() + 1;
  Eigen::VectorXd w(rank);
  double tail = 1.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double c2 = std::cos(0.5 * theta(j)) * std::cos(0.5 * theta(j));
    w(j) = tail * c2;
    tail *= 1.0 - c2;
  }
  w(rank - 1) = tail;
  return w;
}

bool is_identity_prefix(const Eigen::MatrixXcd& eigvecs) {
  for (Eigen::Index j = 0; j < eigvecs.cols(); ++j) {
    for (Eigen::Index i = 0; i < eigvecs.rows(); ++i) {
      const cxd want = (i == j) ? cxd(1.0, 0.0) : cxd(0.0, 0.0);
      if (eigvecs(i, j) != want) return false;
    }
  }
  return true;
}

void check_orthonormal(const Eigen::MatrixXcd& eigvecs) {
  if (eigvecs.cols() < 2 || eigvecs.rows() < eigvecs.cols()) {
    throw Error(ErrorCode::NonOrthonormalBasis, "need at least two basis vectors");
  }
  const Eigen::MatrixXcd gram = eigvecs.adjoint() * eigvecs;
  const double gap =
      (gram - Eigen::MatrixXcd::Identity(eigvecs.cols(), eigvecs.cols())).cwiseAbs().maxCoeff();
  if (gap > 1e-8) {
    throw Error(ErrorCode::NonOrthonormalBasis,
                "basis vectors are not orthonormal (gap " + std::to_string(gap) + ")");
  }
}

DensityMatrix sphere_state(const Eigen::MatrixXcd& eigvecs, const Eigen::VectorXd& theta,
                           bool identity_basis) {
  if (theta.size() + 1 != eigvecs.cols()) {
    throw Error(ErrorCode::DimMismatch,
                "sphere over R vectors needs R-1 angles, got " + std::to_string(theta.size()));
  }
  const Eigen::VectorXd w = sphere_weights(theta);
  if (identity_basis) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(eigvecs.rows());
    full.head(w.size()) = w;
    return DensityMatrix::diagonal(full);
  }
  return DensityMatrix::from_spectrum(w, eigvecs);
}

}  // namespace

DensityMatrix diagonal_qubit(double theta) {
  const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  Eigen::VectorXd w(2);
  w << c2, 1.0 - c2;
  return DensityMatrix::diagonal(w);
}

DensityMatrix product_diagonal(double theta, int n) {
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd w(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    double v = 1.0;
    for (int b = 0; b < n; ++b) {
      v *= ((idx >> b) & 1) ? (1.0 - c2) : c2;
    }
    w(idx) = v;
  }
  return DensityMatrix::diagonal(w);
}

DensityMatrix rotated_spectrum(const DensityMatrix& rho, int k, const Eigen::VectorXd& theta) {
  return rotated_spectrum_family(rho, k).evaluate(theta);
}

DensityMatrix correlated_rotated_spectrum(const DensityMatrix& rho, int k, double theta, int n) {
  return rotated_spectrum(rho, k, Eigen::VectorXd::Constant(n, theta));
}

DensityMatrix sphere_low_rank(const Eigen::MatrixXcd& eigvecs, const Eigen::VectorXd& theta) {
  check_orthonormal(eigvecs);
  return sphere_state(eigvecs, theta, is_identity_prefix(eigvecs));
}

DensityMatrix rotated_fixed_spectrum(double mu, int n, const Eigen::VectorXd& theta) {
  return rotated_fixed_spectrum_family(mu, n).evaluate(theta);
}

AnsatzFamily diagonal_qubit_family() {
  AnsatzFamily f;
  f.name = "diagonal-qubit";
  f.domain = angle_domain(1);
  f.evaluate = [](const Eigen::VectorXd& theta) { return diagonal_qubit(theta(0)); };
  return f;
}

AnsatzFamily product_diagonal_family(int n) {
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  AnsatzFamily f;
  f.name = "product-diagonal";
  f.domain = angle_domain(1);
  f.evaluate = [n](const Eigen::VectorXd& theta) { return product_diagonal(theta(0), n); };
  return f;
}

AnsatzFamily rotated_spectrum_family(const DensityMatrix& rho, int k) {
  if (k < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "cost power must be a positive integer");
  }
  const int n = qubits_for_dim(rho.dim());
  check_qubit_count(rho, n);
  const DensityMatrix base = matrix_power(rho, -1.0 / (2.0 * k)).normalized();
  AnsatzFamily f;
  f.name = "rotated-spectrum";
  f.domain = angle_domain(n);
  f.evaluate = [base, n](const Eigen::VectorXd& theta) {
    if (theta.size() != n) {
      throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(n) + " angles");
    }
    return base.conjugated(y_rotation_product(theta));
  };
  return f;
}

AnsatzFamily correlated_rotated_spectrum_family(const DensityMatrix& rho, int k, int n) {
  check_qubit_count(rho, n);
  AnsatzFamily inner = rotated_spectrum_family(rho, k);
  AnsatzFamily f;
  f.name = "correlated-rotated-spectrum";
  f.domain = angle_domain(1);
  f.evaluate = [inner, n](const Eigen::VectorXd& theta) {
    return inner.evaluate(Eigen::VectorXd::Constant(n, theta(0)));
  };
  return f;
}

AnsatzFamily sphere_family(const Eigen::MatrixXcd& eigvecs) {
  check_orthonormal(eigvecs);
  const bool identity_basis = is_identity_prefix(eigvecs);
  AnsatzFamily f;
  f.name = "sphere";
  f.domain = angle_domain(static_cast<int>(eigvecs.cols()) - 1);
  f.evaluate = [eigvecs, identity_basis](const Eigen::VectorXd& theta) {
    return sphere_state(eigvecs, theta, identity_basis);
  };
  return f;
}

AnsatzFamily rotated_fixed_spectrum_family(double mu, int n) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorCode::MuOutOfRange,
                "mu must lie strictly inside (0, 1), got " + std::to_string(mu));
  }
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  AnsatzFamily f;
  f.name = "rotated-fixed-spectrum";
  f.domain = angle_domain(n);
  f.evaluate = [mu, n](const Eigen::VectorXd& theta) {
    if (theta.size() != n) {
      throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(n) + " angles");
    }
    const auto [v0, v1] = rotated_poles(theta);
    Eigen::MatrixXcd m = (1.0 - mu) * (v0 * v0.adjoint()) + mu * (v1 * v1.adjoint());
    return DensityMatrix(m);
  };
  return f;
}

AnsatzFamily sphere_family_for_state(const DensityMatrix& state) {
  if (state.dim() < 2) {
    throw Error(ErrorCode::RankTooLow, "sphere family needs dimension at least 2");
  }
  if (state.is_diagonal_form()) {
    return sphere_family(Eigen::MatrixXcd::Identity(state.dim(), state.dim()));
  }
  return sphere_family(state.spectrum().eigenvectors);
}

}  // namespace pvqa
