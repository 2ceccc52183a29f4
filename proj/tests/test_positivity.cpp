// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qtensor/positivity.hpp"
#include "qtensor/rng.hpp"

using namespace qtensor;

TEST_CASE("orthonormal frame diagonalizes the metric form") {
  RandomSource rng(3);
  for (int n : {2, 3, 4}) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.complex_gaussian();
    Eigen::MatrixXcd g =
        a * a.adjoint() + Eigen::MatrixXcd::Identity(n, n);
    FrameData fr = orthonormal_frame(g, haar_unitary(n, 17));
    // with entries g(i,j) = g_{i jbar} the form value of (X, Y) is
    // X^T g conj(Y), so orthonormality reads F^T g conj(F) = I
    Eigen::MatrixXcd gram =
        fr.frame.transpose() * g * fr.frame.conjugate();
    CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  // non-PD input is a domain error, non-unitary rotation a usage error
  Eigen::MatrixXcd bad = -Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(orthonormal_frame(bad, Eigen::MatrixXcd::Identity(2, 2)),
                  DomainError);
  Eigen::MatrixXcd not_unitary = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(
      orthonormal_frame(Eigen::MatrixXcd::Identity(2, 2), not_unitary),
      UsageError);
}

TEST_CASE("haar unitaries are deterministic and unitary") {
  Eigen::MatrixXcd u1 = haar_unitary(3, 42);
  Eigen::MatrixXcd u2 = haar_unitary(3, 42);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((haar_unitary(3, 43) - u1).cwiseAbs().maxCoeff() > 1e-3);
  CHECK((u1.adjoint() * u1 - Eigen::MatrixXcd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("the assembled matrix reproduces the quadratic form") {
  RandomSource rng(9);
  Eigen::MatrixXd q(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q(i, j) = rng.uniform() - 0.5;
  QuadraticFormMatrix qm = quadratic_form_from_pairs(q);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd lambda(3);
    for (int i = 0; i < 3; ++i) lambda(i) = 2.0 * rng.uniform() - 1.0;
    double direct = eval_q_form(q, lambda);
    double via_m = lambda.dot(qm.m * lambda);
    CHECK(std::abs(direct - via_m) < 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("hand-built pair matrices give the textbook spectra") {
  Eigen::MatrixXd plus(2, 2), minus(2, 2);
  plus << 0.0, 1.0, 1.0, 0.0;    // S = (l1 - l2)^2
  minus << 0.0, -1.0, -1.0, 0.0; // S = -(l1 - l2)^2
  QuadraticFormMatrix qp = quadratic_form_from_pairs(plus);
  CHECK(std::abs(qp.m(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(qp.m(0, 1) + 1.0) < 1e-14);
  CHECK((qp.m * Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(deflated_min_eigen(qp.m).min_eigenvalue == doctest::Approx(2.0));

  DeflatedMinEigen bad = deflated_min_eigen(quadratic_form_from_pairs(minus).m);
  CHECK(bad.min_eigenvalue == doctest::Approx(-2.0));
  // witness proportional to (1, -1)
  CHECK(std::abs(bad.eigenvector(0) + bad.eigenvector(1)) < 1e-12);
  CHECK(std::abs(bad.eigenvector(0)) > 0.5);
}

TEST_CASE("flat models certify with a zero form") {
  CertifyOptions opts;
  opts.n_points = 5;
  opts.n_frames = 20;
  PositivityCertificate cert = q_nonneg_certify(make_flat(3), opts);
  CHECK_FALSE(cert.violation);
  CHECK(std::abs(cert.min_eigenvalue) < 1e-12);
}

TEST_CASE("the ball metric is a genuine violator with a witness") {
  CertifyOptions opts;
  opts.n_points = 10;
  opts.n_frames = 50;
  PositivityCertificate cert = q_nonneg_certify(make_poincare(2), opts);
  CHECK(cert.violation);
  CHECK(cert.min_eigenvalue < -0.1);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->value < -0.1);
  CHECK(cert.witness->lambda.size() == 2);
  Json j = cert.to_json();
  CHECK(j.at("verdict") == "violation");
  CHECK(j.contains("witness"));
  CHECK(j.at("witness").contains("lambda"));
  CHECK(j.at("min_eigenvalue").get<double>() < -0.1);
}

TEST_CASE("hopf certifies nonnegative at desk scale") {
  CertifyOptions opts;
  opts.n_points = 10;
  opts.n_frames = 50;
  PositivityCertificate cert = q_nonneg_certify(make_hopf(3), opts);
  CHECK_FALSE(cert.violation);
  CHECK(cert.min_eigenvalue >= -1e-8);
  CHECK(cert.to_json().at("verdict") == "no_violation_found");
}

TEST_CASE("kahler specialization accepts fubini-study, rejects hopf") {
  CertifyOptions opts;
  opts.n_points = 5;
  opts.n_frames = 30;
  PositivityCertificate cert = qob_check_kahler(make_fubini_study(2), opts);
  CHECK_FALSE(cert.violation);
  CHECK(cert.mode == "qob");
  PositivityCertificate prod = qob_check_kahler(
      make_product(make_fubini_study(1), make_fubini_study(1)), opts);
  CHECK_FALSE(prod.violation);
  CHECK_THROWS_AS(qob_check_kahler(make_hopf(2), opts), UsageError);
}

TEST_CASE("vaisman reduction bound holds on the hopf threefold") {
  MetricModel m = make_hopf(3);
  for (const Point& p : sample_points(m, 5, 23)) {
    VaismanBoundReport r = vaisman_reduction_bound(m, p, 4);
    CHECK(r.pass);
    CHECK(r.min_excess >= -1e-9);
    CHECK(std::abs(r.lee_norm_sq - 1.0) < 1e-10);
    for (int i = 0; i < 3; ++i) CHECK(r.excess(i, i) == 0.0);
  }
  CHECK_THROWS_AS(
      vaisman_reduction_bound(make_flat(2), Point{Complex(0.1), Complex(0.2)},
                              4),
      UsageError);
}
