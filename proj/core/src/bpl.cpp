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

#include "pvqa/bpl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pvqa/optimizer.hpp"
#include "parallel.hpp"

namespace pvqa {

namespace {

void check_spectrum(const SpectrumPair& spec) {
  if (!(spec.lambda2 > 0.0) || spec.lambda1 < spec.lambda2 ||
      std::abs(spec.lambda1 + spec.lambda2 - 1.0) > 1e-9) {
    throw Error(ErrorCode::ParamOutOfRange,
                "spectrum must satisfy lambda1 >= lambda2 > 0 and lambda1 + lambda2 = 1");
  }
}

void check_power(int k) {
  if (k < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "cost power must be a positive integer");
  }
}

void check_unit_interval(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange,
                std::string(what) + " must lie strictly inside (0, 1), got " + std::to_string(x));
  }
}

double factor_ratio(const FactorConstants& fc, double theta) {
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  const double u = ch * ch;
  const double v = sh * sh;
  const double num = u * u + fc.b * u * v + fc.a * v * v;
  const double den = (u + fc.c * v) * (u + fc.c * v);
  return num / den;
}

// d(N/D)/dtheta of the per-qubit factor, via the homogeneous (u, v) form.
double factor_ratio_derivative(const FactorConstants& fc, double theta) {
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  const double u = ch * ch;
  const double v = sh * sh;
  const double s = std::sin(theta);  // du/dtheta = -s/2, dv/dtheta = s/2
  const double num = u * u + fc.b * u * v + fc.a * v * v;
  const double den_root = u + fc.c * v;
  const double dnum = 0.5 * s * (fc.b * u + 2.0 * fc.a * v - 2.0 * u - fc.b * v);
  const double dden = s * (fc.c - 1.0) * den_root;
  return (dnum * den_root * den_root - num * dden * den_root) /
         (den_root * den_root * den_root * den_root);
}

}  // namespace

FactorConstants factor_constants(const SpectrumPair& spec) {
  check_spectrum(spec);
  const double r = spec.lambda1 / spec.lambda2;
  FactorConstants fc;
  fc.a = 0.5 * (r * r + 1.0 / (r * r));
  fc.b = 2.0 * (r + 1.0 / r - 1.0);
  fc.c = 0.5 * (r + 1.0 / r);
  return fc;
}

double product_cost_closed_form(const SpectrumPair& spec, int k, const Eigen::VectorXd& theta) {
  check_power(k);
  if (theta.size() < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "need at least one angle");
  }
  const FactorConstants fc = factor_constants(spec);
  double value = std::pow(0.5, static_cast<double>(theta.size()));
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    value *= factor_ratio(fc, theta(j));
  }
  return value;
}

double correlated_expected_grad(const SpectrumPair& spec, int n, double delta) {
  const FactorConstants fc = factor_constants(spec);
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::ParamOutOfRange, "delta must be positive");
  }
  const double threshold = std::sqrt(spec.lambda2 / spec.lambda1);
  if (delta >= threshold) {
    throw Error(ErrorCode::DeltaTooLarge,
                "delta must stay below sqrt(lambda2/lambda1) = " + std::to_string(threshold));
  }
  const double bracket =
      1.0 - std::pow(1.0 + fc.c * delta * delta / 4.0, -static_cast<double>(n + 1));
  return std::abs(fc.b - 2.0 * fc.c) * n /
         (fc.c * (n + 1) * std::pow(2.0, static_cast<double>(n)) * delta) * bracket;
}

UncorrelatedBound uncorrelated_local_bound(const SpectrumPair& spec, int n, double delta) {
  const FactorConstants fc = factor_constants(spec);
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::ParamOutOfRange, "delta must be positive");
  }
  const double ratio = spec.lambda2 / spec.lambda1;
  if (delta >= ratio) {
    throw Error(ErrorCode::DeltaTooLarge,
                "delta must stay below lambda2/lambda1 = " + std::to_string(ratio));
  }

  // Mean of |d(N/D)/dtheta| over [-delta, delta]; the integrand is even, so
  // integrate half the range by composite Simpson.
  const int intervals = 2000;  // even
  const double h = delta / intervals;
  double integral = std::abs(factor_ratio_derivative(fc, 0.0)) +
                    std::abs(factor_ratio_derivative(fc, delta));
  for (int i = 1; i < intervals; ++i) {
    const double weight = (i % 2 == 1) ? 4.0 : 2.0;
    integral += weight * std::abs(factor_ratio_derivative(fc, i * h));
  }
  integral *= h / 3.0;

  UncorrelatedBound out;
  out.first_factor = integral / delta;
  out.base = 0.5 - delta * delta * 2.0 * fc.c / 48.0;
  out.value = out.first_factor * std::pow(out.base, static_cast<double>(n));
  return out;
}

double low_rank_landscape(double lambda, double mu, int k, const Eigen::VectorXd& theta) {
  check_unit_interval(lambda, "lambda");
  check_unit_interval(mu, "mu");
  check_power(k);
  const Eigen::Index n = theta.size();
  if (n < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "need at least one angle");
  }
  double a = 1.0;
  double b = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double ch = std::cos(0.5 * theta(j));
    const double sh = std::sin(0.5 * theta(j));
    a *= ch * ch;
    b *= sh * sh;
  }
  const double x0 = std::pow(1.0 - mu, 2.0 * k);
  const double x1 = std::pow(mu, 2.0 * k);
  // Interference of the two rotated poles: across n single-qubit rotations
  // the off-diagonal overlap picks up (-1)^n.
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double pa = x0 * a + x1 * b;
  const double pb = x0 * b + x1 * a;
  const double cross = x0 + sign * x1;
  const double num = lambda * lambda * pa * pa +
                     2.0 * lambda * (1.0 - lambda) * a * b * cross * cross +
                     (1.0 - lambda) * (1.0 - lambda) * pb * pb;
  const double den_root = lambda * pa + (1.0 - lambda) * pb;
  if (den_root * den_root < 1e-280) {
    throw Error(ErrorCode::DegenerateDenominator,
                "ansatz poles are orthogonal to the state support at this angle");
  }
  return num / (den_root * den_root);
}

GradientScan mc_gradient_scan(const std::function<double(const Eigen::VectorXd&)>& landscape,
                              int dim, int samples, const std::vector<Interval>& measure,
                              std::uint64_t seed, double fd_step) {
  if (dim < 1 || samples < 1 || !(fd_step > 0.0)) {
    throw Error(ErrorCode::ParamOutOfRange,
                "dimension, sample count and step must all be positive");
  }
  if (measure.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::DimMismatch, "need one sampling interval per dimension");
  }

  std::vector<double> values(static_cast<std::size_t>(samples));
  internal::parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd theta(dim);
    for (int j = 0; j < dim; ++j) {
      theta(j) = rng.uniform(measure[static_cast<std::size_t>(j)].lo,
                             measure[static_cast<std::size_t>(j)].hi);
    }
    const FdGradient g = fd_gradient(landscape, theta, fd_step);
    if (g.any_failed()) {
      throw Error(ErrorCode::AllProbesFailed,
                  "landscape rejected a finite-difference probe at sample " + std::to_string(i));
    }
    values[i] = g.gradient.cwiseAbs().sum() / dim;
  });

  // Compensated serial reduction keeps the result independent of the worker
  // layout above.
  double mean = 0.0;
  double comp = 0.0;
  for (const double v : values) {
    const double y = v - comp;
    const double t = mean + y;
    comp = (t - mean) - y;
    mean = t;
  }
  mean /= samples;
  double sq = 0.0;
  for (const double v : values) {
    sq += (v - mean) * (v - mean);
  }
  const double sample_std = samples > 1 ? std::sqrt(sq / (samples - 1)) : 0.0;

  GradientScan scan;
  scan.n_or_R = dim;
  scan.samples = samples;
  scan.mean_abs_grad = mean;
  scan.std_error = sample_std / std::sqrt(static_cast<double>(samples));
  scan.seed = seed;
  return scan;
}

namespace {

struct LinearFitAtC {
  double a = 0.0;
  double b = 0.0;
  double residual = std::numeric_limits<double>::infinity();
};

LinearFitAtC solve_at_exponent(const std::vector<std::pair<double, double>>& points, double c) {
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    design(i, 0) = std::pow(points[static_cast<std::size_t>(i)].first, c);
    design(i, 1) = std::pow(points[static_cast<std::size_t>(i)].first, c - 1.0);
    y(i) = points[static_cast<std::size_t>(i)].second;
  }
  LinearFitAtC fit;
  if (!design.allFinite()) return fit;
  const Eigen::Vector2d w = design.colPivHouseholderQr().solve(y);
  if (!w.allFinite()) return fit;
  fit.a = w(0);
  fit.b = w(1);
  fit.residual = (design * w - y).norm();
  return fit;
}

}  // namespace

PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    throw Error(ErrorCode::ParamOutOfRange, "need at least four points");
  }
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw Error(ErrorCode::ParamOutOfRange, "points must have positive coordinates");
    }
  }

  // Exponent by scan plus golden-section refinement; the amplitudes are a
  // linear subproblem at each candidate exponent.
  const double c_lo = -5.0;
  const double c_hi = 2.0;
  const double step = 0.01;
  double best_c = -1.0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (double c = c_lo; c <= c_hi + 0.5 * step; c += step) {
    const LinearFitAtC fit = solve_at_exponent(points, c);
    if (fit.residual < best_residual) {
      best_residual = fit.residual;
      best_c = c;
    }
  }
  if (!std::isfinite(best_residual)) {
    throw Error(ErrorCode::FitDiverged, "no exponent in [-5, 2] produced a finite fit");
  }

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_c - step;
  double hi = best_c + step;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = solve_at_exponent(points, x1).residual;
  double f2 = solve_at_exponent(points, x2).residual;
  for (int iter = 0; iter < 80 && hi - lo > 1e-12; ++iter) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = solve_at_exponent(points, x1).residual;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = solve_at_exponent(points, x2).residual;
    }
  }
  const double c_star = 0.5 * (lo + hi);
  const LinearFitAtC fit = solve_at_exponent(points, c_star);
  if (!std::isfinite(fit.residual)) {
    throw Error(ErrorCode::FitDiverged, "refined exponent produced a non-finite fit");
  }
  return PowerLawFit{fit.a, fit.b, c_star, fit.residual};
}

double near_optimum_gradient_asymptotic(double lambda, double mu, int k, int n,
                                        const Eigen::VectorXd& theta) {
  check_unit_interval(lambda, "lambda");
  check_unit_interval(mu, "mu");
  check_power(k);
  if (n < 1 || theta.size() != n) {
    throw Error(ErrorCode::DimMismatch, "theta must hold exactly n angles");
  }
  if (theta.cwiseAbs().maxCoeff() >= 1.0) {
    throw Error(ErrorCode::ParamOutOfRange, "neighborhood radius must stay below 1");
  }

  const double h = 1e-4;
  const int scalings = 10;
  double gm = 0.0;  // sum of gradient * model
  double mm = 0.0;  // sum of model^2
  double gg = 0.0;  // sum of gradient^2
  Eigen::VectorXd grads(scalings);
  Eigen::VectorXd models(scalings);
  for (int i = 0; i < scalings; ++i) {
    const double s = 1.0 - 0.09 * i;  // 1.0 down to 0.19
    Eigen::VectorXd t = s * theta;
    Eigen::VectorXd tp = t;
    Eigen::VectorXd tm = t;
    tp(0) += h;
    tm(0) -= h;
    const double grad =
        std::abs(low_rank_landscape(lambda, mu, k, tp) - low_rank_landscape(lambda, mu, k, tm)) /
        (2.0 * h);
    double model = std::abs(t(0)) / std::pow(4.0, static_cast<double>(n - 1));
    for (Eigen::Index j = 1; j < n; ++j) {
      model *= t(j) * t(j);
    }
    grads(i) = grad;
    models(i) = model;
    gm += grad * model;
    mm += model * model;
    gg += grad * grad;
  }
  if (mm == 0.0 || gg == 0.0) {
    // theta = 0 sits exactly at the optimum: no signal, no constant to fit.
    return 0.0;
  }
  const double f = gm / mm;
  const double residual = (grads - f * models).norm();
  const double signal = std::sqrt(gg);
  if (residual > 0.1 * signal) {
    throw Error(ErrorCode::NeighborhoodTooLarge,
                "gradient departs from the leading-order model; shrink the neighborhood");
  }
  return f;
}

}  // namespace pvqa
