// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/identities.hpp"

#include <cmath>
#include <limits>

namespace qtensor {
namespace {

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& z : p) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

Complex second_mixed_value(const JetSeries& a, int i, int jbar) {
  Exponents e{};
  e[i] += 1;
  e[a.context()->complex_vars() + jbar] += 1;
  return a.extract(e);
}

void require_kahler(const MetricModel& model, const std::vector<Point>& pts,
                    const char* who) {
  int checked = 0;
  for (const auto& p : pts) {
    if (checked++ >= 5) break;
    PointTensors pt = compute_point_tensors(model, p, 2);
    double t = max_abs(pt.tor.low);
    if (t > 1e-8)
      throw UsageError(std::string(who) + ": base metric is not Kaehler (torsion " +
                       std::to_string(t) + ")");
  }
}

}  // namespace

void IdentityReport::accumulate(double residual, const Point& p,
                                std::vector<int> idx) {
  if (residual >= max_residual) {
    max_residual = residual;
    worst_point = p;
    worst_indices = std::move(idx);
  }
}

void IdentityReport::finish() { pass = max_residual < tolerance; }

Json IdentityReport::to_json() const {
  Json j;
  j["identity"] = id;
  j["model"] = model_spec;
  j["n_points"] = n_points;
  j["max_residual"] = max_residual;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  if (informational) j["informational"] = true;
  if (!note.empty()) j["note"] = note;
  Json w;
  w["point"] = point_to_json(worst_point);
  w["indices"] = worst_indices;
  j["worst"] = w;
  return j;
}

IdentityReport check_q_bismut_proposition(const MetricModel& model,
                                          const std::vector<Point>& points,
                                          int order, double tol) {
  IdentityReport rep;
  rep.id = "q_bismut_proposition";
  rep.model_spec = model.spec;
  rep.tolerance = tol;
  const int n = model.dim;
  for (const auto& p : points) {
    if (model.domain && !model.domain(p)) {
      rep.note = "some points outside the chart domain were skipped";
      continue;
    }
    PointTensors pt = compute_point_tensors(model, p, order);
    double scale = std::max({1.0, pt.q.max_abs(), pt.bismut_direct.max_abs()});
    ++rep.n_points;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Complex lhs = pt.q(i, j, k, l);
            Complex rhs = pt.bismut_direct(k, l, i, j) + pt.ddbar(i, j, k, l);
            rep.accumulate(std::abs(lhs - rhs) / scale, p, {i, j, k, l});
          }
  }
  rep.finish();
  return rep;
}

IdentityReport check_two_route(const MetricModel& model,
                               const std::vector<Point>& points, int order,
                               double tol) {
  IdentityReport rep;
  rep.id = "bismut_two_route";
  rep.model_spec = model.spec;
  rep.tolerance = tol;
  const int n = model.dim;
  for (const auto& p : points) {
    if (model.domain && !model.domain(p)) continue;
    PointTensors pt = compute_point_tensors(model, p, order);
    double scale = std::max(1.0, pt.bismut_direct.max_abs());
    ++rep.n_points;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            rep.accumulate(std::abs(pt.bismut_direct(i, j, k, l) -
                                    pt.bismut_lemma(i, j, k, l)) /
                               scale,
                           p, {i, j, k, l});
  }
  rep.finish();
  return rep;
}

IdentityReport check_conformal_lemma(const MetricModel& base,
                                     const ScalarFieldModel& f,
                                     const std::vector<Point>& points,
                                     int order, double tol) {
  require_kahler(base, points, "check_conformal_lemma");
  MetricModel tilted = make_conformal(base, f);
  IdentityReport rep;
  rep.id = "conformal_lemma";
  rep.model_spec = tilted.spec;
  rep.tolerance = tol;
  const int n = base.dim;
  for (const auto& p : points) {
    if (base.domain && !base.domain(p)) continue;
    PointTensors direct = compute_point_tensors(tilted, p, order);
    PointTensors bt = compute_point_tensors(base, p, order);
    JetSeries fj = f.eval(p, 2);
    double ef = std::exp(fj.value().real());
    Eigen::VectorXcd fz(n), fzb(n);
    Eigen::MatrixXcd fzzb(n, n);
    for (int i = 0; i < n; ++i) {
      fz(i) = fj.derive_z(i).value();
      fzb(i) = fj.derive_zbar(i).value();
      for (int j = 0; j < n; ++j) fzzb(i, j) = second_mixed_value(fj, i, j);
    }
    Complex df2 = 0.0;  // |df|^2 = g^{p qbar} f_p f_qbar
    for (int q = 0; q < n; ++q)
      for (int pp = 0; pp < n; ++pp)
        df2 += bt.mj.ginv_val(pp, q) * fz(pp) * fzb(q);
    const Eigen::MatrixXcd& g = bt.mj.g_val;
    double scale = std::max(1.0, direct.q.max_abs());
    ++rep.n_points;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Complex closed =
                ef * (bt.chern_r(i, j, k, l) - g(k, l) * fzzb(i, j) -
                      fz(k) * fzb(l) * g(i, j) - df2 * g(k, j) * g(i, l) +
                      fz(k) * fzb(j) * g(i, l) + fz(i) * fzb(l) * g(k, j));
            rep.accumulate(std::abs(direct.q(i, j, k, l) - closed) / scale, p,
                           {i, j, k, l});
          }
  }
  rep.finish();
  return rep;
}

IdentityReport check_q_symmetry(const MetricModel& model,
                                const std::vector<Point>& points, int order,
                                double tol) {
  IdentityReport rep;
  rep.id = "q_pair_symmetry";
  rep.model_spec = model.spec;
  rep.tolerance = tol;
  rep.informational = !(model.kahler || model.potential.has_value());
  if (rep.informational)
    rep.note = "model carries no potential and is not Kaehler; the pair "
               "symmetry is not expected to hold";
  const int n = model.dim;
  for (const auto& p : points) {
    if (model.domain && !model.domain(p)) continue;
    PointTensors pt = compute_point_tensors(model, p, order);
    double scale = std::max(1.0, pt.q.max_abs());
    ++rep.n_points;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            rep.accumulate(
                std::abs(pt.q(i, j, k, l) - pt.q(k, l, i, j)) / scale, p,
                {i, j, k, l});
  }
  rep.finish();
  if (rep.informational) rep.pass = true;
  return rep;
}

IdentityReport check_commutation_identity(const MetricModel& model,
                                          const OneOneFormModel& rho,
                                          const std::vector<Point>& points,
                                          int order, double tol) {
  if (order < 3)
    throw UsageError("check_commutation_identity: metric jets need order >= 3");
  IdentityReport rep;
  rep.id = "bochner_commutation";
  rep.model_spec = model.spec;
  rep.tolerance = tol;
  const int n = model.dim;
  for (const auto& p : points) {
    if (model.domain && !model.domain(p)) continue;
    JetMatrix gj = model.eval(p, order);
    MetricJets mj = MetricJets::compute(gj);
    JetMatrix rj = rho.eval(p, order);
    Grid3<JetSeries> du =
        covariant_derivative_unbar_jets(rj, mj, ConnectionKind::Chern);
    Grid3<JetSeries> db =
        covariant_derivative_bar_jets(rj, mj, ConnectionKind::Chern);
    Tensor4 r = chern_curvature(mj);
    // R with the last slot raised: (k, l, i, m) -> R_{k lbar i}^m
    Grid4<Complex> rup(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int m = 0; m < n; ++m) {
            Complex s = 0.0;
            for (int q = 0; q < n; ++q) s += mj.ginv_val(m, q) * r(k, l, i, q);
            rup(k, l, i, m) = s;
          }
    Grid3<Complex> gam(n), tup(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          gam(a, b, c) = mj.gamma(a, b, c).value();
          tup(a, b, c) = mj.t_up(a, b, c).value();
        }
    std::vector<Complex> rv(n * n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) rv[k * n + l] = rj.at(k, l).value();

    double scale = 1.0;
    Grid4<Complex> lhs(n), rhs(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            // nabla_i nabla_jbar rho_{k lbar}: the Chern connection touches
            // only the unbarred slot k under nabla_i.
            Complex a = db(j, k, l).derive_z(i).value();
            for (int m = 0; m < n; ++m) a -= gam(i, k, m) * db(j, m, l).value();
            // nabla_lbar nabla_k rho_{i jbar}: only jbar is corrected.
            Complex b = du(k, i, j).derive_zbar(l).value();
            for (int m = 0; m < n; ++m)
              b -= std::conj(gam(l, j, m)) * du(k, i, m).value();
            for (int m = 0; m < n; ++m) {
              b += tup(k, i, m) * db(l, m, j).value();
              b += std::conj(tup(l, j, m)) * du(i, k, m).value();
              b -= rup(k, l, i, m) * rv[m * n + j];
              b += std::conj(rup(j, i, l, m)) * rv[k * n + m];
            }
            lhs(i, j, k, l) = a;
            rhs(i, j, k, l) = b;
            scale = std::max({scale, std::abs(a), std::abs(b)});
          }
    ++rep.n_points;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            rep.accumulate(std::abs(lhs(i, j, k, l) - rhs(i, j, k, l)) / scale,
                           p, {i, j, k, l});
  }
  rep.finish();
  return rep;
}

IdentityReport check_vaisman_norm(const MetricModel& model,
                                  const std::vector<Point>& points,
                                  double tol) {
  if (!model.potential)
    throw UsageError("check_vaisman_norm: model has no potential data");
  IdentityReport rep;
  rep.id = "vaisman_lee_norm";
  rep.model_spec = model.spec;
  rep.tolerance = tol;
  for (const auto& p : points) {
    if (model.domain && !model.domain(p)) continue;
    LeeData lee =
        lee_data(model.potential->phi, model, p, model.potential->c);
    ++rep.n_points;
    rep.accumulate(std::abs(lee.norm_sq - 1.0), p, {});
  }
  rep.finish();
  return rep;
}

double trace_variation(const MetricModel& model, const OneOneFormModel& rho,
                       const Point& p, double h) {
  const int n = model.dim;
  auto trace_at = [&](const Point& q) {
    MetricJets mj = MetricJets::compute(model.eval(q, 1));
    JetMatrix rj = rho.eval(q, 1);
    Complex t = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        t += mj.ginv_val(k, l) * rj.at(k, l).value();
    return t.real();
  };
  double lo = trace_at(p), hi = lo;
  for (int d = 0; d < 6; ++d) {
    Point q = p;
    int c = d % n;
    double sign = (d % 2 == 0) ? 1.0 : -1.0;
    Complex off = ((d / 2) % 2 == 0) ? Complex(sign * h, 0.0)
                                     : Complex(0.0, sign * h);
    q[c] += off;
    if (model.domain && !model.domain(q)) continue;
    double t = trace_at(q);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return hi - lo;
}

BochnerReport bochner_residual(const MetricModel& model,
                               const OneOneFormModel& rho, const Point& p,
                               int order) {
  const int n = model.dim;
  BochnerReport rep;
  rep.trace_probe = trace_variation(model, rho, p);
  if (rep.trace_probe > 1e-8)
    throw DataError("bochner_residual: tr_omega rho varies by " +
                    std::to_string(rep.trace_probe) +
                    " near the point; constant trace is a precondition");

  JetMatrix gj = model.eval(p, order);
  MetricJets mj = MetricJets::compute(gj);
  JetMatrix rj = rho.eval(p, order);

  // |rho|^2 as a jet: g^{p qbar} g^{k lbar} rho_{k qbar} rho_{p lbar}
  JetSeries norm_sq(JetContext::get(n, order), p);
  for (int pp = 0; pp < n; ++pp)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          norm_sq += mj.ginv.at(pp, q) * mj.ginv.at(k, l) * rj.at(k, q) *
                     rj.at(pp, l);
  Complex lhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lhs += mj.ginv_val(i, j) * second_mixed_value(norm_sq, i, j);

  Tensor4 r = chern_curvature(mj);
  TorsionTensor tor = torsion(mj);
  Tensor4 q = q_tensor(mj.ginv_val, r, tor.low);
  CovariantDerivative nb =
      covariant_derivative(rj, mj, ConnectionKind::Bismut);

  // 2 |nabla^+ rho|^2 over unbarred derivative slots
  Complex grad2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int pp = 0; pp < n; ++pp)
          for (int qq = 0; qq < n; ++qq)
            for (int l = 0; l < n; ++l)
              grad2 += mj.ginv_val(i, j) * mj.ginv_val(k, pp) *
                       mj.ginv_val(qq, l) * nb.unbar(i, k, l) *
                       std::conj(nb.unbar(j, pp, qq));

  Eigen::MatrixXcd rv(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) rv(k, l) = rj.at(k, l).value();
  Eigen::MatrixXcd rho2(n, n);  // (rho^2)_{k lbar} = rho_{k qbar} g^{p qbar} rho_{p lbar}
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Complex s = 0.0;
      for (int pp = 0; pp < n; ++pp)
        for (int qq = 0; qq < n; ++qq)
          s += rv(k, qq) * mj.ginv_val(pp, qq) * rv(pp, l);
      rho2(k, l) = s;
    }
  auto raise = [&](const Eigen::MatrixXcd& x) {
    // x^{i jbar} = g^{i lbar} g^{k jbar} x_{k lbar}
    Eigen::MatrixXcd out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            s += mj.ginv_val(i, l) * mj.ginv_val(k, j) * x(k, l);
        out(i, j) = s;
      }
    return out;
  };
  Eigen::MatrixXcd rho_up = raise(rv);
  Eigen::MatrixXcd rho2_up = raise(rho2);
  Complex qterm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          qterm += q(i, j, k, l) * (mj.ginv_val(i, j) * rho2_up(k, l) -
                                    rho_up(i, j) * rho_up(k, l));

  Complex rhs = 2.0 * grad2 + 2.0 * qterm;
  rep.lhs = lhs.real();
  rep.rhs = rhs.real();
  rep.residual =
      std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return rep;
}

EigenTorsionReport eigenspace_torsion_check(const Eigen::MatrixXcd& g_val,
                                            const Grid3<Complex>& t_low,
                                            const Eigen::MatrixXcd& rho_val) {
  const int n = static_cast<int>(g_val.rows());
  if ((rho_val - rho_val.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw UsageError("eigenspace_torsion_check: rho value is not Hermitian");
  // the frame columns must satisfy V^T g conj(V) = I and diagonalize
  // V^T rho conj(V); conjugating turns this into the standard generalized
  // problem for the transposed matrices
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      rho_val.transpose(), g_val.transpose());
  EigenTorsionReport rep;
  rep.lambdas = es.eigenvalues();
  rep.eigvecs = es.eigenvectors();
  for (int c = 0; c < n; ++c) {
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(rep.eigvecs(i, c)) > std::abs(rep.eigvecs(imax, c))) imax = i;
    Complex top = rep.eigvecs(imax, c);
    if (std::abs(top) > 0.0) rep.eigvecs.col(c) *= std::abs(top) / top;
  }
  for (int c = 0; c + 1 < n; ++c)
    if (rep.lambdas(c + 1) - rep.lambdas(c) < 1e-10) rep.gauge_ambiguous = true;
  Grid3<Complex> t_frame = transform_torsion_low(t_low, rep.eigvecs);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        rep.max_scaled = std::max(
            rep.max_scaled,
            std::abs(t_frame(k, i, m)) *
                std::abs(rep.lambdas(k) + rep.lambdas(i) - rep.lambdas(m)));
  return rep;
}

}  // namespace qtensor
