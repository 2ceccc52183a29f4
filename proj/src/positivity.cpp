// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/positivity.hpp"

#include <cmath>
#include <limits>

namespace qtensor {
namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& z : p) a.push_back(complex_to_json(z));
  return a;
}

Json cmatrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// Flatten Q to the n^2 x n^2 matrix QM[(i,j),(k,l)].
Eigen::MatrixXcd tensor4_as_matrix(const Tensor4& q) {
  const int n = q.dim();
  Eigen::MatrixXcd qm(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) qm(i * n + j, k * n + l) = q(i, j, k, l);
  return qm;
}

// Diagonal-pair matrix q_pairs(k, m) = Q'_{m mbar k kbar} of the tensor
// rotated by the unitary U, without forming the full rank-4 transform.
Eigen::MatrixXcd rotated_pairs(const Eigen::MatrixXcd& qm,
                               const Eigen::MatrixXcd& u) {
  const int n = u.rows();
  Eigen::MatrixXcd p(n * n, n);
  for (int c = 0; c < n; ++c)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        p(k * n + l, c) = u(k, c) * std::conj(u(l, c));
  Eigen::MatrixXcd w = qm * p;                      // n^2 x n
  Eigen::MatrixXcd pairs_ac = p.transpose() * w;    // (a, c) = Q'_{a abar c cbar}
  Eigen::MatrixXcd q_pairs(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) q_pairs(k, m) = pairs_ac(m, k);
  return q_pairs;
}

Eigen::MatrixXd check_pairs_real(const Eigen::MatrixXcd& q_pairs) {
  double scale = std::max(1.0, q_pairs.cwiseAbs().maxCoeff());
  double im = q_pairs.imag().cwiseAbs().maxCoeff();
  if (im > 1e-10 * scale)
    throw DataError(
        "quadratic form: diagonal-pair entries have imaginary part " +
        std::to_string(im) + "; tensor is not in an orthonormal frame");
  return q_pairs.real();
}

// Orthonormal basis of the hyperplane orthogonal to (1,...,1).
Eigen::MatrixXd ones_complement_basis(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.col(0) = Eigen::VectorXd::Ones(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

struct FrameCheck {
  double min_eig;
  Eigen::VectorXd lambda;
  double s_value;
  bool violated;
};

// Evaluate one frame: assemble M, deflate, and also catch the asymmetric
// case where M*(1,..,1) != 0 -- there S goes negative along the gradient at
// lambda = (1,..,1) even if the deflated block looks fine.
FrameCheck check_frame(const Eigen::MatrixXd& q_pairs, double tol) {
  QuadraticFormMatrix qf = quadratic_form_from_pairs(q_pairs);
  const int n = static_cast<int>(q_pairs.rows());
  double scale = std::max(1.0, qf.m.cwiseAbs().maxCoeff());
  DeflatedMinEigen de = deflated_min_eigen(qf.m);
  FrameCheck fc{de.min_eigenvalue, de.eigenvector, 0.0, false};
  if (de.min_eigenvalue < -tol * scale) {
    fc.violated = true;
    fc.s_value = eval_q_form(q_pairs, de.eigenvector);
    return fc;
  }
  Eigen::VectorXd grad = qf.m * Eigen::VectorXd::Ones(n);
  double gn = grad.norm();
  if (gn > tol * scale) {
    Eigen::VectorXd u = grad / gn;
    double quad = u.dot(qf.m * u);
    double t = (std::abs(quad) > 1e-300) ? gn / std::abs(quad) : 1.0;
    Eigen::VectorXd lam = Eigen::VectorXd::Ones(n) - t * u;
    double s = eval_q_form(q_pairs, lam);
    if (s < -tol * scale) {
      fc.violated = true;
      fc.lambda = lam;
      fc.s_value = s;
      fc.min_eig = std::min(fc.min_eig, s / lam.squaredNorm());
    }
  }
  return fc;
}

}  // namespace

FrameData orthonormal_frame(const Eigen::MatrixXcd& g,
                            const Eigen::MatrixXcd& unitary) {
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.eigenvalues()(0) <= 0.0)
    throw DomainError("orthonormal_frame: g not positive definite (min eigenvalue " +
                      std::to_string(es.eigenvalues()(0)) + ")");
  if ((unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw UsageError("orthonormal_frame: rotation is not unitary");
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  Eigen::MatrixXcd l = llt.matrixL();
  FrameData f;
  // with entries g(i,j) = g_{i jbar} the form value is X^T g conj(Y), so the
  // frame columns must satisfy E^T g conj(E) = I
  f.base = l.transpose().inverse();
  f.rotation = unitary;
  f.frame = f.base * unitary;
  return f;
}

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw UsageError("haar_unitary: n must be >= 1");
  RandomSource rng(seed);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    Complex phase = (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0);
    q.col(j) *= phase;
  }
  return q;
}

QuadraticFormMatrix quadratic_form_from_pairs(const Eigen::MatrixXd& q_pairs) {
  const int n = static_cast<int>(q_pairs.rows());
  QuadraticFormMatrix qf;
  qf.q_pairs = q_pairs;
  qf.m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double dk = q_pairs.row(k).sum();
    for (int m = 0; m < n; ++m) {
      qf.m(k, m) = -0.5 * (q_pairs(k, m) + q_pairs(m, k));
      if (k == m) qf.m(k, m) += dk;
    }
  }
  return qf;
}

QuadraticFormMatrix quadratic_form_matrix(const Tensor4& q_frame) {
  const int n = q_frame.dim();
  Eigen::MatrixXcd pairs(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) pairs(k, m) = q_frame(m, m, k, k);
  return quadratic_form_from_pairs(check_pairs_real(pairs));
}

double eval_q_form(const Eigen::MatrixXd& q_pairs,
                   const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(q_pairs.rows());
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      s += q_pairs(k, m) * (lambda(k) * lambda(k) - lambda(k) * lambda(m));
  return s;
}

DeflatedMinEigen deflated_min_eigen(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return {0.0, Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd b = ones_complement_basis(n);
  Eigen::MatrixXd md = b.transpose() * m * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md);
  DeflatedMinEigen de;
  de.min_eigenvalue = es.eigenvalues()(0);
  de.eigenvector = b * es.eigenvectors().col(0);
  return de;
}

Json PositivityCertificate::to_json() const {
  Json j;
  j["model"] = model_spec;
  j["mode"] = mode;
  j["seed"] = seed;
  j["n_points"] = n_points;
  j["n_frames"] = n_frames;
  j["tol"] = tol;
  j["min_eigenvalue"] = min_eigenvalue;
  j["verdict"] = violation ? "violation" : "no_violation_found";
  j["note"] =
      "Monte Carlo sampling evidence over random orthonormal frames; "
      "a no-violation verdict is not a proof";
  if (witness) {
    Json w;
    w["point"] = point_to_json(witness->point);
    w["frame"] = cmatrix_to_json(witness->frame);
    Json lam = Json::array();
    for (int i = 0; i < witness->lambda.size(); ++i) lam.push_back(witness->lambda(i));
    w["lambda"] = lam;
    w["value"] = witness->value;
    j["witness"] = w;
  }
  return j;
}

namespace {

PositivityCertificate certify_impl(const MetricModel& model,
                                   const CertifyOptions& opts, bool use_r,
                                   const char* mode) {
  const int n = model.dim;
  PositivityCertificate cert;
  cert.model_spec = model.spec;
  cert.seed = opts.seed;
  cert.n_points = opts.n_points;
  cert.n_frames = opts.n_frames;
  cert.tol = opts.tol;
  cert.mode = mode;
  cert.min_eigenvalue = std::numeric_limits<double>::infinity();

  std::vector<Point> pts = sample_points(model, opts.n_points, opts.seed);
  for (int pi = 0; pi < static_cast<int>(pts.size()); ++pi) {
    const Point& p = pts[pi];
    PointTensors pt = compute_point_tensors(model, p, opts.order);
    const Tensor4& qt = use_r ? pt.chern_r : pt.q;
    FrameData base = orthonormal_frame(pt.mj.g_val,
                                       Eigen::MatrixXcd::Identity(n, n));
    Tensor4 q_e = transform_tensor4(qt, base.base);
    Eigen::MatrixXcd qm = tensor4_as_matrix(q_e);

    // deterministic frames first: identity, then the eigenframe of the
    // torsion contraction C_{m m'} = sum_{k,p} T_{k p mbar} conj(T_{k p m'bar})
    std::vector<Eigen::MatrixXcd> rotations;
    rotations.push_back(Eigen::MatrixXcd::Identity(n, n));
    {
      Grid3<Complex> t_e = transform_torsion_low(pt.tor.low, base.base);
      Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
      for (int m = 0; m < n; ++m)
        for (int m2 = 0; m2 < n; ++m2)
          for (int k = 0; k < n; ++k)
            for (int q = 0; q < n; ++q)
              c(m, m2) += t_e(k, q, m) * std::conj(t_e(k, q, m2));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
      rotations.push_back(es.eigenvectors());
    }
    for (int fi = 0; fi < opts.n_frames; ++fi)
      rotations.push_back(haar_unitary(
          n, derive_seed(opts.seed, static_cast<std::uint64_t>(pi),
                         static_cast<std::uint64_t>(fi))));

    for (const auto& u : rotations) {
      Eigen::MatrixXd q_pairs = check_pairs_real(rotated_pairs(qm, u));
      FrameCheck fc = check_frame(q_pairs, opts.tol);
      if (fc.min_eig < cert.min_eigenvalue) cert.min_eigenvalue = fc.min_eig;
      if (fc.violated && !cert.violation) {
        cert.violation = true;
        ViolationWitness w;
        w.point = p;
        w.frame = base.base * u;
        w.lambda = fc.lambda;
        w.value = fc.s_value;
        cert.witness = w;
      }
    }
  }
  return cert;
}

}  // namespace

PositivityCertificate q_nonneg_certify(const MetricModel& model,
                                       const CertifyOptions& opts) {
  return certify_impl(model, opts, /*use_r=*/false, "q");
}

PositivityCertificate qob_check_kahler(const MetricModel& model,
                                       const CertifyOptions& opts) {
  std::vector<Point> probe = sample_points(model, 5, opts.seed ^ 0xdeadULL);
  for (const auto& p : probe) {
    PointTensors pt = compute_point_tensors(model, p, 2);
    if (max_abs(pt.tor.low) > 1e-8)
      throw UsageError("qob_check_kahler: model is not Kaehler (torsion " +
                       std::to_string(max_abs(pt.tor.low)) + ")");
  }
  return certify_impl(model, opts, /*use_r=*/true, "qob");
}

VaismanBoundReport vaisman_reduction_bound(const MetricModel& model,
                                           const Point& p, int order,
                                           double tol) {
  if (!model.potential)
    throw UsageError("vaisman_reduction_bound: model has no potential data");
  const int n = model.dim;
  const ScalarFieldModel& phi = model.potential->phi;
  const double c = model.potential->c;

  JetSeries f = phi.eval(p, 2);
  double phival = f.value().real();
  if (phival <= 0.0)
    throw DomainError("vaisman_reduction_bound: potential not positive here");
  // the reduction is stated in a frame normal for ddbar phi
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Exponents e{};
      e[i] += 1;
      e[n + j] += 1;
      Complex hij = f.extract(e);
      if (std::abs(hij - (i == j ? Complex(1.0) : Complex(0.0))) > 1e-8)
        throw UsageError(
            "vaisman_reduction_bound: chart is not normal for ddbar phi");
    }

  PointTensors pt = compute_point_tensors(model, p, order);
  MetricModel cover = make_kahler_potential(n, phi);
  PointTensors cover_pt = compute_point_tensors(cover, p, order);

  VaismanBoundReport rep;
  rep.excess = Eigen::MatrixXd::Zero(n, n);
  rep.min_excess = std::numeric_limits<double>::infinity();
  LeeData lee = lee_data(phi, model, p, c);
  rep.lee_norm_sq = lee.norm_sq;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      if (m == k) continue;
      Complex q = pt.q(m, m, k, k);
      Complex r = cover_pt.chern_r(m, m, k, k);
      double excess = (q - (c / phival) * r).real();
      rep.excess(m, k) = excess;
      rep.min_excess = std::min(rep.min_excess, excess);
    }
  rep.pass = rep.min_excess >= -tol;
  return rep;
}

}  // namespace qtensor
