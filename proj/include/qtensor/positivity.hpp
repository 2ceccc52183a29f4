// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_POSITIVITY_HPP
#define QTENSOR_POSITIVITY_HPP

#include <optional>

#include "qtensor/tensors.hpp"

namespace qtensor {

// An orthonormalizing frame for g at a point: E^T g conj(E) = I (with the
// storage convention g(i,j) = g_{i jbar}), composed with a unitary rotation U.
struct FrameData {
  Eigen::MatrixXcd base;      // E
  Eigen::MatrixXcd rotation;  // U, unitary
  Eigen::MatrixXcd frame;     // F = E * U
};

// E from the Cholesky factor of g (E = (L^T)^{-1} for g = L L^dagger),
// then F = E * U. Throws on non-PD g (reports the minimum eigenvalue).
FrameData orthonormal_frame(const Eigen::MatrixXcd& g,
                            const Eigen::MatrixXcd& unitary);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the
// diagonal-phase correction. Deterministic per seed.
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

// The real symmetric matrix M with lambda^T M lambda =
// sum_{k,m} Re Q_{m mbar k kbar} (lambda_k^2 - lambda_k lambda_m),
// for Q expressed in an orthonormal frame. M (1,...,1)^T = 0 structurally.
struct QuadraticFormMatrix {
  Eigen::MatrixXd m;
  Eigen::MatrixXd q_pairs;  // q_{km} = Re Q_{m mbar k kbar}
};

// Throws DataError if the diagonal-pair entries Q_{m mbar k kbar} have
// imaginary parts above 1e-10 (signals a frame bug upstream).
QuadraticFormMatrix quadratic_form_matrix(const Tensor4& q_frame);
// Same assembly from the n x n pair matrix directly (test injection point).
QuadraticFormMatrix quadratic_form_from_pairs(const Eigen::MatrixXd& q_pairs);

// Direct evaluation of the frame quadratic form at a lambda list.
double eval_q_form(const Eigen::MatrixXd& q_pairs,
                   const Eigen::VectorXd& lambda);

// Minimum eigenvalue of M restricted to the hyperplane orthogonal to
// (1,...,1); the structural null mode is deflated away.
struct DeflatedMinEigen {
  double min_eigenvalue;
  Eigen::VectorXd eigenvector;  // in the full space, orthogonal to (1,..,1)
};
DeflatedMinEigen deflated_min_eigen(const Eigen::MatrixXd& m);

struct ViolationWitness {
  Point point;
  Eigen::MatrixXcd frame;
  Eigen::VectorXd lambda;
  double value;  // S(lambda) < 0
};

// Monte Carlo PSD evidence for the Q-nonnegativity quadratic form. A
// "no_violation_found" verdict is sampling evidence, not a proof.
struct PositivityCertificate {
  Json model_spec;
  std::uint64_t seed = 0;
  int n_points = 0;
  int n_frames = 0;
  double tol = 1e-8;
  double min_eigenvalue = 0.0;
  bool violation = false;
  std::optional<ViolationWitness> witness;
  std::string mode = "q";  // "q" or "qob"

  Json to_json() const;
};

struct CertifyOptions {
  int n_points = 100;
  int n_frames = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int order = 4;
};

// Q-nonnegativity certification over sampled points and Haar frames
// (augmented with the identity frame and the torsion-contraction eigenframe).
PositivityCertificate q_nonneg_certify(const MetricModel& model,
                                       const CertifyOptions& opts);

// Kaehler specialization (Q = R); enforces the torsion precondition first.
PositivityCertificate qob_check_kahler(const MetricModel& model,
                                       const CertifyOptions& opts);

// Per-pair report for the Vaisman lower-bound chain: for m != k,
// Q_{m mbar k kbar} - c phi^{-1} R^{ddbar phi}_{m mbar k kbar} must be
// >= -tol when |d log phi|^2 = 1.
struct VaismanBoundReport {
  Eigen::MatrixXd excess;  // (m, k) entries; diagonal zero
  double min_excess = 0.0;
  double lee_norm_sq = 0.0;
  bool pass = false;
};
VaismanBoundReport vaisman_reduction_bound(const MetricModel& model,
                                           const Point& p, int order,
                                           double tol = 1e-9);

}  // namespace qtensor

#endif
