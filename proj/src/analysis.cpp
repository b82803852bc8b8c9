/*
Copyright 2026 The hpdiss Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "hpdiss/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace hpdiss {

EquilibriumReport classify_point(const DissipatedField& df, const Vector& x, double tol) {
  EquilibriumReport r;
  r.point = x;
  r.tolerance = tol;
  const Matrix pi = df.system().pi(x);
  const Vector gh = df.grad_h(x);
  const Vector gc = df.grad_c(x);
  const Vector hamiltonian_part = pi * gh;
  const Vector dissipative_part = gh.dot(gc) * gh - gh.squaredNorm() * gc;

  r.pi_residual = hamiltonian_part.norm();
  r.field_residual = (hamiltonian_part + dissipative_part).norm();
  r.grad_c_norm = gc.norm();
  r.pi_scale = 1.0 + pi.norm() * gh.norm();
  r.field_scale = r.pi_scale + gh.squaredNorm() * gc.norm();

  const double cross = gc.squaredNorm() * gh.squaredNorm();
  const double dot = gc.dot(gh);
  r.dependence_defect = cross - dot * dot;
  r.dependent = r.dependence_defect <= kDependenceTolerance * (1.0 + cross);

  r.in_e_xi = r.field_residual <= tol * r.field_scale;
  r.in_e_pi = r.pi_residual <= tol * r.pi_scale;
  r.in_c_star = r.grad_c_norm <= tol;
  return r;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "positive definite";
    case Definiteness::PositiveSemidefinite:
      return "positive semidefinite";
    case Definiteness::Indefinite:
      return "not positive semidefinite";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid:
      return "valid";
    case Verdict::Invalid:
      return "invalid";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Definiteness classify_definiteness(const Matrix& m, double* min_eigenvalue) {
  const Matrix sym = 0.5 * (m + m.transpose());
  const double threshold = 1e-12 * std::fabs(sym.trace());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (min_eigenvalue) *min_eigenvalue = lambda_min;

  Eigen::LDLT<Matrix> ldlt(sym);
  bool pivots_positive = ldlt.info() == Eigen::Success && sym.trace() > 0.0;
  if (pivots_positive)
    for (Eigen::Index i = 0; i < sym.rows(); ++i)
      if (!(ldlt.vectorD()[i] > threshold)) pivots_positive = false;
  if (pivots_positive) return Definiteness::PositiveDefinite;
  if (lambda_min >= -std::max(threshold, 1e-14)) return Definiteness::PositiveSemidefinite;
  return Definiteness::Indefinite;
}

ScalarField compose_lyapunov(const DissipatedField& df, const ScalarField& psi,
                             const Vector& x_e) {
  if (psi.dimension() != 2)
    throw std::invalid_argument("psi must be a function of (H, C)");
  const Expr h = df.system().hamiltonian().expr();
  const Expr c = df.casimir().expr();
  const std::vector<Expr> args{h, c};
  const double level = psi.value(std::vector<double>{df.hamiltonian(x_e), df.casimir_value(x_e)});
  return ScalarField(psi.expr().substitute(args) - Expr::constant(level), df.dimension());
}

LyapunovCertificate build_certificate(const DissipatedField& df, const ScalarField& psi,
                                      const Vector& x_e) {
  if (psi.dimension() != 2)
    throw std::invalid_argument("psi must be a function of (H, C)");
  if (static_cast<std::size_t>(x_e.size()) != df.dimension())
    throw std::invalid_argument("equilibrium has the wrong dimension");
  const EquilibriumReport eq = classify_point(df, x_e);
  if (!eq.in_e_xi)
    throw std::invalid_argument("point is not an equilibrium of the dissipated field (residual " +
                                std::to_string(eq.field_residual) + ")");

  LyapunovCertificate cert;
  cert.equilibrium = x_e;
  cert.h_value = df.hamiltonian(x_e);
  cert.c_value = df.casimir_value(x_e);
  const std::vector<double> at{cert.h_value, cert.c_value};
  const std::vector<double> dpsi = psi.gradient_at(at);
  const std::vector<double> d2psi = psi.hessian_at(at);
  cert.dpsi_dh = dpsi[0];
  cert.dpsi_dc = dpsi[1];

  const auto n = static_cast<Eigen::Index>(df.dimension());
  const Vector gh = df.grad_h(x_e);
  const Vector gc = df.grad_c(x_e);
  const Matrix hh = to_matrix(df.system().hamiltonian().hessian_at(as_span(x_e)), n);
  const Matrix hc = to_matrix(df.casimir().hessian_at(as_span(x_e)), n);

  cert.gradient = cert.dpsi_dh * gh + cert.dpsi_dc * gc;
  cert.gradient_residual = cert.gradient.norm();
  // Hess L = psi_H Hess H + psi_C Hess C + psi_HH gh gh^T
  //          + psi_HC (gh gc^T + gc gh^T) + psi_CC gc gc^T
  cert.hessian = cert.dpsi_dh * hh + cert.dpsi_dc * hc + d2psi[0] * gh * gh.transpose() +
                 d2psi[1] * (gh * gc.transpose() + gc * gh.transpose()) +
                 d2psi[3] * gc * gc.transpose();

  const ScalarField composed = compose_lyapunov(df, psi, x_e);
  const Matrix direct = to_matrix(composed.hessian_at(as_span(x_e)), n);
  cert.composed_hessian_discrepancy = (direct - cert.hessian).cwiseAbs().maxCoeff();

  cert.definiteness = classify_definiteness(cert.hessian, &cert.min_eigenvalue);

  bool hard_failure = false;
  if (!(cert.gradient_residual <= kGradientTolerance)) {
    cert.reasons.push_back("grad L(x_e) is not zero (|grad L| = " +
                           std::to_string(cert.gradient_residual) + ")");
    hard_failure = true;
  }
  if (!(cert.dpsi_dc > 0.0)) {
    cert.reasons.push_back("d psi / dC is not positive at the equilibrium");
    hard_failure = true;
  }
  if (cert.definiteness == Definiteness::Indefinite) {
    cert.reasons.push_back("Hessian of L has a negative eigenvalue");
    hard_failure = true;
  } else if (cert.definiteness == Definiteness::PositiveSemidefinite) {
    cert.reasons.push_back("Hessian of L is only semidefinite; second-order test is inconclusive");
  }
  if (hard_failure)
    cert.verdict = Verdict::Invalid;
  else if (cert.definiteness == Definiteness::PositiveSemidefinite)
    cert.verdict = Verdict::Inconclusive;
  else
    cert.verdict = Verdict::Valid;
  return cert;
}

std::optional<Vector> predict_limit(const DissipatedField& df, const Vector& x0,
                                    const CandidateResolver& resolver) {
  const std::vector<Vector> candidates = resolver(df.hamiltonian(x0));
  if (candidates.size() != 1) return std::nullopt;
  return candidates.front();
}

}  // namespace hpdiss
