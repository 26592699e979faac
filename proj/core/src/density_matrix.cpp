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

#include "pvqa/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pvqa {

namespace {

bool offdiagonal_is_zero(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j) {
        if (m(i, j).imag() != 0.0) return false;
      } else if (m(i, j) != cxd(0.0, 0.0)) {
        return false;
      }
    }
  }
  return true;
}

Eigen::MatrixXcd hermitized(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

Spectrum dense_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonInvertible, "eigensolver failed to converge");
  }
  const Eigen::Index d = m.rows();
  Spectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    s.eigenvalues(i) = solver.eigenvalues()(d - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(const Eigen::MatrixXcd& entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw Error(ErrorCode::DimMismatch, "density matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double herm_gap = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm_gap > kHermitianTol * scale) {
    throw Error(ErrorCode::NotNormalized,
                "matrix is not Hermitian (max asymmetry " + std::to_string(herm_gap) + ")");
  }
  dim_ = entries.rows();
  if (offdiagonal_is_zero(entries)) {
    diagonal_form_ = true;
    diag_ = entries.diagonal().real();
    const double lo = diag_.minCoeff();
    if (lo < -kPsdTol * scale) {
      throw Error(ErrorCode::NotNormalized,
                  "matrix is not positive semidefinite (min diagonal " + std::to_string(lo) + ")");
    }
    diag_ = diag_.cwiseMax(0.0);
    normalized_ = std::abs(diag_.sum() - 1.0) <= kNormalizedTol;
  } else {
    dense_ = hermitized(entries);
    const Spectrum s = dense_spectrum(dense_);
    const double lo = s.eigenvalues.minCoeff();
    if (lo < -kPsdTol * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::NotNormalized,
                  "matrix is not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")");
    }
    normalized_ = std::abs(dense_.trace().real() - 1.0) <= kNormalizedTol;
  }
}

DensityMatrix::DensityMatrix(Trusted, Eigen::MatrixXcd entries, bool normalized) {
  dim_ = entries.rows();
  normalized_ = normalized;
  if (offdiagonal_is_zero(entries)) {
    diagonal_form_ = true;
    diag_ = entries.diagonal().real().cwiseMax(0.0);
  } else {
    dense_ = std::move(entries);
  }
}

DensityMatrix::DensityMatrix(Trusted, Eigen::VectorXd diag, bool normalized) {
  dim_ = diag.size();
  normalized_ = normalized;
  diagonal_form_ = true;
  diag_ = std::move(diag);
}

DensityMatrix DensityMatrix::diagonal(const Eigen::VectorXd& weights) {
  if (weights.size() < 1) {
    throw Error(ErrorCode::DimMismatch, "diagonal state needs at least one weight");
  }
  const double scale = std::max(1.0, weights.cwiseAbs().maxCoeff());
  if (weights.minCoeff() < -kPsdTol * scale) {
    throw Error(ErrorCode::NotNormalized, "diagonal weights must be nonnegative");
  }
  Eigen::VectorXd w = weights.cwiseMax(0.0);
  const bool normalized = std::abs(w.sum() - 1.0) <= kNormalizedTol;
  return DensityMatrix(Trusted{}, std::move(w), normalized);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::NotNormalized, "zero state vector");
  }
  Eigen::VectorXcd psi = amplitudes / norm;
  Eigen::MatrixXcd proj = psi * psi.adjoint();
  return DensityMatrix(Trusted{}, std::move(proj), true);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));
  return DensityMatrix(Trusted{}, std::move(w), true);
}

DensityMatrix DensityMatrix::from_spectrum(const Eigen::VectorXd& evals,
                                           const Eigen::MatrixXcd& evecs) {
  const Eigen::Index d = evecs.rows();
  if (evecs.cols() != evals.size() || d < evals.size() || evals.size() < 1) {
    throw Error(ErrorCode::DimMismatch, "spectrum shape mismatch");
  }
  const Eigen::MatrixXcd gram = evecs.adjoint() * evecs;
  const double gap = (gram - Eigen::MatrixXcd::Identity(evals.size(), evals.size()))
                         .cwiseAbs()
                         .maxCoeff();
  if (gap > 1e-8) {
    throw Error(ErrorCode::NonOrthonormalBasis,
                "eigenvector columns are not orthonormal (gap " + std::to_string(gap) + ")");
  }
  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  if (evals.minCoeff() < -kPsdTol * scale) {
    throw Error(ErrorCode::NotNormalized, "negative eigenvalue in spectrum");
  }
  Eigen::VectorXd w = evals.cwiseMax(0.0);
  Eigen::MatrixXcd m = evecs * w.asDiagonal() * evecs.adjoint();
  const bool normalized = std::abs(w.sum() - 1.0) <= kNormalizedTol;
  return DensityMatrix(Trusted{}, hermitized(m), normalized);
}

double DensityMatrix::trace() const {
  return diagonal_form_ ? diag_.sum() : dense_.trace().real();
}

Eigen::MatrixXcd DensityMatrix::matrix() const {
  if (!diagonal_form_) return dense_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) m(i, i) = diag_(i);
  return m;
}

const Eigen::VectorXd& DensityMatrix::diagonal_weights() const {
  if (!diagonal_form_) {
    throw std::logic_error("diagonal_weights() called on a dense-form state");
  }
  return diag_;
}

Eigen::VectorXd DensityMatrix::diagonal_part() const {
  return diagonal_form_ ? diag_ : dense_.diagonal().real().eval();
}

Spectrum DensityMatrix::spectrum() const {
  if (!diagonal_form_) return dense_spectrum(dense_);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim_));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return diag_(a) > diag_(b); });
  Spectrum s;
  s.eigenvalues.resize(dim_);
  s.eigenvectors = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    s.eigenvalues(i) = diag_(order[static_cast<std::size_t>(i)]);
    s.eigenvectors(order[static_cast<std::size_t>(i)], i) = 1.0;
  }
  return s;
}

DensityMatrix DensityMatrix::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) {
    throw Error(ErrorCode::NotNormalized, "cannot normalize a zero-trace state");
  }
  if (diagonal_form_) {
    return DensityMatrix(Trusted{}, Eigen::VectorXd(diag_ / t), true);
  }
  return DensityMatrix(Trusted{}, Eigen::MatrixXcd(dense_ / t), true);
}

DensityMatrix DensityMatrix::conjugated(const Eigen::MatrixXcd& unitary) const {
  if (unitary.rows() != dim_ || unitary.cols() != dim_) {
    throw Error(ErrorCode::DimMismatch, "unitary dimension mismatch");
  }
  Eigen::MatrixXcd m = unitary * matrix() * unitary.adjoint();
  return DensityMatrix(Trusted{}, hermitized(m), normalized_);
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  if (diagonal_form_ && other.diagonal_form_) {
    Eigen::VectorXd w(dim_ * other.dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      w.segment(i * other.dim_, other.dim_) = diag_(i) * other.diag_;
    }
    return DensityMatrix(Trusted{}, std::move(w), normalized_ && other.normalized_);
  }
  const Eigen::MatrixXcd a = matrix();
  const Eigen::MatrixXcd b = other.matrix();
  Eigen::MatrixXcd out(dim_ * other.dim_, dim_ * other.dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = 0; j < dim_; ++j) {
      out.block(i * other.dim_, j * other.dim_, other.dim_, other.dim_) = a(i, j) * b;
    }
  }
  return DensityMatrix(Trusted{}, std::move(out), normalized_ && other.normalized_);
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return a.tensor(b);
}

DensityMatrix matrix_power(const DensityMatrix& m, double alpha) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::AlphaOutOfRange, "power must be finite");
  }
  if (m.diagonal_form_) {
    // Diagonal weights are stored exactly, so only a true zero marks a
    // rank deficiency; no eigensolver noise floor applies here.
    const double top = m.diag_.maxCoeff();
    const double floor = alpha < 0.0 ? kRankCutoff * std::max(1.0, top) : 0.0;
    Eigen::VectorXd w(m.dim_);
    for (Eigen::Index i = 0; i < m.dim_; ++i) {
      const double lam = m.diag_(i);
      if (lam <= floor) {
        if (alpha < 0.0) {
          throw Error(ErrorCode::NonInvertible,
                      "negative power of a rank-deficient state (eigenvalue " +
                          std::to_string(lam) + ")");
        }
        w(i) = 0.0;
      } else {
        w(i) = std::pow(lam, alpha);
      }
    }
    return DensityMatrix::diagonal(w);
  }
  const Spectrum s = m.spectrum();
  const double cutoff = kRankCutoff * std::max(1.0, s.eigenvalues.maxCoeff());
  Eigen::VectorXd w(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double lam = s.eigenvalues(i);
    if (lam <= cutoff) {
      if (alpha < 0.0) {
        throw Error(ErrorCode::NonInvertible,
                    "negative power of a rank-deficient state (eigenvalue " +
                        std::to_string(lam) + ")");
      }
      w(i) = 0.0;
    } else {
      w(i) = std::pow(lam, alpha);
    }
  }
  return DensityMatrix::from_spectrum(w, s.eigenvectors);
}

double purity(const DensityMatrix& m) {
  if (std::abs(m.trace() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "purity requires a unit-trace state");
  }
  if (m.is_diagonal_form()) return m.diagonal_weights().squaredNorm();
  return m.matrix().squaredNorm();  // tr(m^2) = ||m||_F^2 for Hermitian m
}

cxd trace_product_exact(const std::vector<DensityMatrix>& ms) {
  if (ms.empty()) {
    throw Error(ErrorCode::DimMismatch, "trace product of an empty sequence");
  }
  const Eigen::Index d = ms.front().dim();
  bool all_diag = true;
  for (const auto& m : ms) {
    if (m.dim() != d) throw Error(ErrorCode::DimMismatch, "trace product dimension mismatch");
    all_diag = all_diag && m.is_diagonal_form();
  }
  if (all_diag) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      double term = 1.0;
      for (const auto& m : ms) term *= m.diagonal_weights()(i);
      total += term;
    }
    return cxd(total, 0.0);
  }
  if (ms.size() == 1) return ms.front().matrix().trace();
  Eigen::MatrixXcd acc = ms.front().matrix();
  for (std::size_t i = 1; i + 1 < ms.size(); ++i) acc = acc * ms[i].matrix();
  // trace of acc * last without forming the product
  return (acc.transpose().cwiseProduct(ms.back().matrix())).sum();
}

double hs_distance_sq(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "distance between states of different dimension");
  }
  if (a.is_diagonal_form() && b.is_diagonal_form()) {
    return (a.diagonal_weights() - b.diagonal_weights()).squaredNorm();
  }
  return (a.matrix() - b.matrix()).squaredNorm();
}

int numerical_rank(const DensityMatrix& m, double cutoff) {
  // The cutoff is an eigensolver noise floor. Diagonal weights are exact,
  // so any positive weight counts toward the rank.
  int r = 0;
  if (m.is_diagonal_form()) {
    for (Eigen::Index i = 0; i < m.dim(); ++i) r += m.diagonal_weights()(i) > 0.0 ? 1 : 0;
    return r;
  }
  const Eigen::VectorXd evals = m.spectrum().eigenvalues;
  for (Eigen::Index i = 0; i < evals.size(); ++i) r += evals(i) > cutoff ? 1 : 0;
  return r;
}

namespace {

double power_trace(const DensityMatrix& m, double alpha) {
  // Exactly stored diagonal weights all contribute; dense spectra pass
  // through an eigensolver whose noise floor the cutoff absorbs.
  const double floor = m.is_diagonal_form() ? 0.0 : kRankCutoff;
  Eigen::VectorXd evals = m.is_diagonal_form() ? m.diagonal_weights() : m.spectrum().eigenvalues;
  double s = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) > floor) s += std::pow(evals(i), alpha);
  }
  return s;
}

void check_entropy_alpha(double alpha) {
  if (!(alpha > 0.0) || std::abs(alpha - 1.0) < 1e-12) {
    throw Error(ErrorCode::AlphaOutOfRange,
                "entropy order must lie in (0,1) or (1,inf), got " + std::to_string(alpha));
  }
}

}  // namespace

double renyi_entropy(const DensityMatrix& m, double alpha) {
  check_entropy_alpha(alpha);
  if (std::abs(m.trace() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "entropy requires a unit-trace state");
  }
  return std::log(power_trace(m, alpha)) / (1.0 - alpha);
}

double tsallis_entropy(const DensityMatrix& m, double alpha) {
  check_entropy_alpha(alpha);
  if (std::abs(m.trace() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "entropy requires a unit-trace state");
  }
  return (power_trace(m, alpha) - 1.0) / (1.0 - alpha);
}

double bures_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "fidelity between states of different dimension");
  }
  if (std::abs(a.trace() - 1.0) > 1e-8 || std::abs(b.trace() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "fidelity requires unit-trace states");
  }
  if (a.is_diagonal_form() && b.is_diagonal_form()) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
      f += std::sqrt(std::max(0.0, a.diagonal_weights()(i) * b.diagonal_weights()(i)));
    }
    return f;
  }
  const Eigen::MatrixXcd root_b = matrix_power(b, 0.5).matrix();
  const Eigen::MatrixXcd core = root_b * a.matrix() * root_b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (core + core.adjoint()));
  double f = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    f += std::sqrt(std::max(0.0, solver.eigenvalues()(i)));
  }
  return f;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "distance between states of different dimension");
  }
  if (a.is_diagonal_form() && b.is_diagonal_form()) {
    return 0.5 * (a.diagonal_weights() - b.diagonal_weights()).cwiseAbs().sum();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix() - b.matrix());
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

DensityMatrix mix(double p, const DensityMatrix& a, double q, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "mixture of states of different dimension");
  }
  if (p < 0.0 || q < 0.0) {
    throw Error(ErrorCode::ParamOutOfRange, "mixture weights must be nonnegative");
  }
  const bool normalized = std::abs(p * a.trace() + q * b.trace() - 1.0) <= kNormalizedTol;
  if (a.is_diagonal_form() && b.is_diagonal_form()) {
    return DensityMatrix(DensityMatrix::Trusted{},
                         Eigen::VectorXd(p * a.diagonal_weights() + q * b.diagonal_weights()),
                         normalized);
  }
  return DensityMatrix(DensityMatrix::Trusted{},
                       Eigen::MatrixXcd(p * a.matrix() + q * b.matrix()), normalized);
}

DensityMatrix partial_trace_keep(const DensityMatrix& m,
                                 const std::vector<Eigen::Index>& dims,
                                 std::size_t keep) {
  if (keep >= dims.size()) {
    throw Error(ErrorCode::ParamOutOfRange, "subsystem index out of range");
  }
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d < 1) throw Error(ErrorCode::DimMismatch, "subsystem dimensions must be positive");
    total *= d;
  }
  if (total != m.dim()) {
    throw Error(ErrorCode::DimMismatch, "subsystem dimensions do not factor the state");
  }
  const Eigen::Index d_keep = dims[keep];
  Eigen::Index suffix = 1;
  for (std::size_t j = keep + 1; j < dims.size(); ++j) suffix *= dims[j];
  const Eigen::Index prefix = total / (d_keep * suffix);

  if (m.is_diagonal_form()) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d_keep);
    for (Eigen::Index p = 0; p < prefix; ++p) {
      for (Eigen::Index a = 0; a < d_keep; ++a) {
        for (Eigen::Index s = 0; s < suffix; ++s) {
          out(a) += m.diagonal_weights()((p * d_keep + a) * suffix + s);
        }
      }
    }
    return DensityMatrix(DensityMatrix::Trusted{}, std::move(out), m.is_normalized());
  }

  const Eigen::MatrixXcd& full = m.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_keep, d_keep);
  for (Eigen::Index p = 0; p < prefix; ++p) {
    for (Eigen::Index a = 0; a < d_keep; ++a) {
      for (Eigen::Index b = 0; b < d_keep; ++b) {
        cxd acc(0.0, 0.0);
        for (Eigen::Index s = 0; s < suffix; ++s) {
          acc += full((p * d_keep + a) * suffix + s, (p * d_keep + b) * suffix + s);
        }
        out(a, b) += acc;
      }
    }
  }
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(out), m.is_normalized());
}

ExactOracles exact_oracles(const DensityMatrix& m, const DensityMatrix& n, double alpha) {
  ExactOracles out;
  out.rank = numerical_rank(m);
  out.renyi = renyi_entropy(m, alpha);
  out.tsallis = tsallis_entropy(m, alpha);
  out.fidelity = bures_fidelity(m, n);
  out.qfi_supported = std::isfinite(out.fidelity) && out.fidelity >= 0.0 &&
                      out.fidelity <= 1.0 + 1e-9;
  return out;
}

nlohmann::json to_json(const DensityMatrix& m) {
  const Eigen::MatrixXcd full = m.matrix();
  const Eigen::Index d = m.dim();
  std::vector<double> re(static_cast<std::size_t>(d * d));
  std::vector<double> im(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      re[static_cast<std::size_t>(i * d + j)] = full(i, j).real();
      im[static_cast<std::size_t>(i * d + j)] = full(i, j).imag();
    }
  }
  return nlohmann::json{{"dim", d}, {"re", re}, {"im", im}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
    throw Error(ErrorCode::ConfigInvalid, "state JSON needs dim, re and im fields");
  }
  const Eigen::Index d = j.at("dim").get<Eigen::Index>();
  if (d < 1) throw Error(ErrorCode::ConfigInvalid, "state JSON has nonpositive dim");
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != static_cast<std::size_t>(d * d) || im.size() != re.size()) {
    throw Error(ErrorCode::DimMismatch, "state JSON entry count does not match dim");
  }
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j2 = 0; j2 < d; ++j2) {
      const std::size_t idx = static_cast<std::size_t>(i * d + j2);
      m(i, j2) = cxd(re[idx], im[idx]);
    }
  }
  return DensityMatrix(m);
}

DensityMatrix random_mixed_state(Eigen::Index dim, CounterRng& rng) {
  return random_mixed_state(dim, dim, rng);
}

DensityMatrix random_mixed_state(Eigen::Index dim, Eigen::Index rank, CounterRng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw Error(ErrorCode::DimMismatch, "invalid dimension or rank for random state");
  }
  Eigen::MatrixXcd g(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) {
      g(i, j) = cxd(rng.normal(), rng.normal());
    }
  }
  Eigen::MatrixXcd w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(0.5 * (w + w.adjoint()));
}

}  // namespace pvqa
