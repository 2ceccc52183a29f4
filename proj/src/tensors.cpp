// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/tensors.hpp"

#include <cmath>

namespace qtensor {
namespace {

Exponents unit_exp(int v) {
  Exponents e{};
  e[v] = 1;
  return e;
}

// d_i d_jbar of a jet entry, as a value.
Complex second_mixed(const JetSeries& a, int i, int jbar) {
  const int n = a.context()->complex_vars();
  Exponents e{};
  e[i] += 1;
  e[n + jbar] += 1;
  return a.extract(e);
}

Complex first_z(const JetSeries& a, int i) { return a.extract(unit_exp(i)); }

}  // namespace

const char* tensor_role_name(TensorRole role) {
  switch (role) {
    case TensorRole::ChernR: return "chern_r";
    case TensorRole::Q: return "q";
    case TensorRole::Bismut11: return "bismut11";
    case TensorRole::DdbarOmega: return "ddbar_omega";
  }
  return "?";
}

double Tensor4::max_abs() const {
  double m = 0.0;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) m = std::max(m, std::abs(v(i, j, k, l)));
  return m;
}

double Tensor4::conj_symmetry_residual() const {
  double m = 0.0;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          m = std::max(m, std::abs(v(i, j, k, l) - std::conj(v(j, i, l, k))));
  return m;
}

double max_abs(const Grid3<Complex>& t) {
  double m = 0.0;
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(t(i, j, k)));
  return m;
}

MetricJets MetricJets::compute(const JetMatrix& g) {
  MetricJets mj;
  mj.n = g.dim();
  mj.order = g.context()->order();
  mj.point = g.base_point();
  mj.g = g;
  if (mj.order < 1)
    throw UsageError("metric jets: need order >= 1 for connection data");

  // g^{i jbar} = (G^{-1})_{ji}
  JetMatrix inv = g.inverse();
  mj.ginv = JetMatrix(mj.n, g.context(), mj.point);
  for (int i = 0; i < mj.n; ++i)
    for (int j = 0; j < mj.n; ++j) mj.ginv.at(i, j) = inv.at(j, i);

  const int n = mj.n;
  const int km1 = mj.order - 1;
  JetMatrix ginv_km1 = mj.ginv.truncate(km1);

  Grid3<JetSeries> dg(n);  // (k, i, m) -> d_k g_{i mbar}
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) dg(k, i, m) = g.at(i, m).derive_z(k);

  mj.gamma = Grid3<JetSeries>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        JetSeries s(JetContext::get(n, km1), mj.point);
        for (int m = 0; m < n; ++m) s += ginv_km1.at(j, m) * dg(k, i, m);
        mj.gamma(k, i, j) = s;
      }

  mj.t_low = Grid3<JetSeries>(n);
  mj.t_up = Grid3<JetSeries>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        mj.t_low(i, j, k) = dg(i, j, k) - dg(j, i, k);
        mj.t_up(i, j, k) = mj.gamma(i, j, k) - mj.gamma(j, i, k);
      }

  mj.g_val.resize(n, n);
  mj.ginv_val.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mj.g_val(i, j) = g.at(i, j).value();
      mj.ginv_val(i, j) = mj.ginv.at(i, j).value();
    }
  return mj;
}

ConnectionCoeffs chern_connection(const MetricJets& mj) {
  ConnectionCoeffs c{Grid3<Complex>(mj.n)};
  for (int k = 0; k < mj.n; ++k)
    for (int i = 0; i < mj.n; ++i)
      for (int j = 0; j < mj.n; ++j) c.gamma(k, i, j) = mj.gamma(k, i, j).value();
  return c;
}

TorsionTensor torsion(const MetricJets& mj) {
  TorsionTensor t{Grid3<Complex>(mj.n), Grid3<Complex>(mj.n)};
  for (int i = 0; i < mj.n; ++i)
    for (int j = 0; j < mj.n; ++j)
      for (int k = 0; k < mj.n; ++k) {
        t.up(i, j, k) = mj.t_up(i, j, k).value();
        t.low(i, j, k) = mj.t_low(i, j, k).value();
      }
  return t;
}

Tensor4 chern_curvature(const MetricJets& mj) {
  if (mj.order < 2)
    throw UsageError("chern_curvature: metric jets need order >= 2");
  const int n = mj.n;
  const int km2 = mj.order - 2;
  JetMatrix g_km2 = mj.g.truncate(km2);
  Tensor4 r(n, TensorRole::ChernR);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        // R_{i jbar k}^m = -d_jbar Gamma^m_{ik}
        for (int j = 0; j < n; ++j) {
          JetSeries rj = -mj.gamma(i, k, m).derive_zbar(j);
          for (int l = 0; l < n; ++l)
            r(i, j, k, l) += (g_km2.at(m, l) * rj).value();
        }
      }
  return r;
}

Tensor4 q_tensor(const Eigen::MatrixXcd& ginv_val, const Tensor4& chern_r,
                 const Grid3<Complex>& torsion_low) {
  const int n = chern_r.dim();
  Tensor4 q(n, TensorRole::Q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex tt = 0.0;
          for (int p = 0; p < n; ++p)
            for (int qq = 0; qq < n; ++qq)
              tt += ginv_val(p, qq) * torsion_low(k, p, j) *
                    std::conj(torsion_low(l, qq, i));
          q(i, j, k, l) = chern_r(i, j, k, l) - tt;
        }
  return q;
}

BismutCoeffs bismut_coeffs(const MetricJets& mj) {
  const int n = mj.n;
  BismutCoeffs b{Grid3<Complex>(n), Grid3<Complex>(n)};
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        b.hol(i, m, k) = mj.gamma(m, i, k).value();
        Complex s = 0.0;
        for (int q = 0; q < n; ++q)
          s += mj.ginv_val(k, q) * std::conj(mj.t_low(i, q, m).value());
        b.antihol(i, m, k) = s;
      }
  return b;
}

Tensor4 bismut_curvature_direct(const MetricJets& mj) {
  if (mj.order < 2)
    throw UsageError("bismut_curvature_direct: metric jets need order >= 2");
  const int n = mj.n;
  const int km1 = mj.order - 1;
  const int km2 = mj.order - 2;
  JetMatrix ginv_km1 = mj.ginv.truncate(km1);
  auto ctx_km1 = JetContext::get(n, km1);

  // A^k_{i m} = Gamma^k_{m i};  A^k_{jbar m} = g^{k qbar} conj(T_{j q mbar})
  Grid3<JetSeries> a_hol(n), a_anti(n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        a_hol(i, m, k) = mj.gamma(m, i, k);
        JetSeries s(ctx_km1, mj.point);
        for (int q = 0; q < n; ++q)
          s += ginv_km1.at(k, q) * mj.t_low(i, q, m).conj();
        a_anti(i, m, k) = s;
      }

  JetMatrix g_km2 = mj.g.truncate(km2);
  Tensor4 b(n, TensorRole::Bismut11);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
          // B_{i jbar m}^k
          JetSeries bk = a_anti(j, m, k).derive_z(i) -
                         a_hol(i, m, k).derive_zbar(j);
          for (int l = 0; l < n; ++l)
            bk += (a_hol(i, l, k) * a_anti(j, m, l) -
                   a_anti(j, l, k) * a_hol(i, m, l))
                      .truncate(km2);
          for (int l = 0; l < n; ++l)
            b(i, j, m, l) += (g_km2.at(k, l) * bk).value();
        }
      }
  return b;
}

Tensor4 bismut_curvature_lemma(const Eigen::MatrixXcd& ginv_val,
                               const Tensor4& chern_r,
                               const Grid3<Complex>& torsion_low,
                               const Grid3<Complex>& torsion_up) {
  const int n = chern_r.dim();
  Tensor4 b(n, TensorRole::Bismut11);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s = chern_r(k, j, i, l) - chern_r(i, j, k, l) +
                      chern_r(i, l, k, j);
          for (int c = 0; c < n; ++c)
            s -= torsion_low(k, i, c) * std::conj(torsion_up(j, l, c));
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              s -= ginv_val(c, d) * torsion_low(i, c, l) *
                   std::conj(torsion_low(j, d, k));
          b(i, j, k, l) = s;
        }
  return b;
}

Tensor4 ddbar_omega_block(const MetricJets& mj) {
  if (mj.order < 2)
    throw UsageError("ddbar_omega_block: metric jets need order >= 2");
  const int n = mj.n;
  Tensor4 d(n, TensorRole::DdbarOmega);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // d_lbar T_{i k jbar} - d_jbar T_{i k lbar} as second partials of g
          d(i, j, k, l) = second_mixed(mj.g.at(k, j), i, l) -
                          second_mixed(mj.g.at(i, j), k, l) -
                          second_mixed(mj.g.at(k, l), i, j) +
                          second_mixed(mj.g.at(i, l), k, j);
        }
  return d;
}

namespace {

struct ConnJets {
  // coefficients as jets at order `ord`
  Grid3<JetSeries> hol;   // (i, k, m): coefficient of rho_{m lbar} in nabla_i rho_{k lbar}
  Grid3<JetSeries> anti;  // (j, k, m): A^m_{jbar k}
  int ord;
};

ConnJets connection_jets(const MetricJets& mj, ConnectionKind kind, int ord) {
  const int n = mj.n;
  ConnJets c{Grid3<JetSeries>(n), Grid3<JetSeries>(n), ord};
  JetMatrix ginv_o = mj.ginv.truncate(ord);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        if (kind == ConnectionKind::Chern) {
          // Gamma^m_{ik}: derivative index i
          c.hol(i, k, m) = mj.gamma(i, k, m).truncate(ord);
          c.anti(i, k, m) = JetSeries(JetContext::get(n, ord), mj.point);
        } else {
          c.hol(i, k, m) = mj.gamma(k, i, m).truncate(ord);  // A^m_{ik} = Gamma^m_{ki}
          JetSeries s(JetContext::get(n, ord), mj.point);
          for (int q = 0; q < n; ++q)
            s += ginv_o.at(m, q) * mj.t_low(i, q, k).conj().truncate(ord);
          c.anti(i, k, m) = s;
        }
      }
  return c;
}

}  // namespace

Grid3<JetSeries> covariant_derivative_unbar_jets(const JetMatrix& rho,
                                                 const MetricJets& mj,
                                                 ConnectionKind kind) {
  if (rho.base_point() != mj.point)
    throw UsageError("covariant_derivative: rho and metric base points differ");
  const int n = mj.n;
  const int krho = rho.context()->order();
  if (krho < 1) throw UsageError("covariant_derivative: rho jets need order >= 1");
  const int ord = std::min(krho - 1, mj.order - 1);
  ConnJets c = connection_jets(mj, kind, ord);
  Grid3<JetSeries> out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        // nabla_i rho_{k lbar} = d_i rho - A^m_{ik} rho_{m lbar}
        //                        - conj(A^m_{ibar l}) rho_{k mbar}
        JetSeries s = rho.at(k, l).derive_z(i).truncate(ord);
        for (int m = 0; m < n; ++m) {
          s -= c.hol(i, k, m) * rho.at(m, l).truncate(ord);
          s -= c.anti(i, l, m).conj() * rho.at(k, m).truncate(ord);
        }
        out(i, k, l) = s;
      }
  return out;
}

Grid3<JetSeries> covariant_derivative_bar_jets(const JetMatrix& rho,
                                               const MetricJets& mj,
                                               ConnectionKind kind) {
  if (rho.base_point() != mj.point)
    throw UsageError("covariant_derivative: rho and metric base points differ");
  const int n = mj.n;
  const int krho = rho.context()->order();
  if (krho < 1) throw UsageError("covariant_derivative: rho jets need order >= 1");
  const int ord = std::min(krho - 1, mj.order - 1);
  ConnJets c = connection_jets(mj, kind, ord);
  Grid3<JetSeries> out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        // nabla_ibar rho_{k lbar} = d_ibar rho - A^m_{ibar k} rho_{m lbar}
        //                           - conj(A^m_{il}) rho_{k mbar}
        JetSeries s = rho.at(k, l).derive_zbar(i).truncate(ord);
        for (int m = 0; m < n; ++m) {
          s -= c.anti(i, k, m) * rho.at(m, l).truncate(ord);
          s -= c.hol(i, l, m).conj() * rho.at(k, m).truncate(ord);
        }
        out(i, k, l) = s;
      }
  return out;
}

CovariantDerivative covariant_derivative(const JetMatrix& rho,
                                         const MetricJets& mj,
                                         ConnectionKind kind) {
  const int n = mj.n;
  Grid3<JetSeries> u = covariant_derivative_unbar_jets(rho, mj, kind);
  Grid3<JetSeries> b = covariant_derivative_bar_jets(rho, mj, kind);
  CovariantDerivative cd{Grid3<Complex>(n), Grid3<Complex>(n)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        cd.unbar(i, k, l) = u(i, k, l).value();
        cd.bar(i, k, l) = b(i, k, l).value();
      }
  return cd;
}

LeeData lee_data(const ScalarFieldModel& phi, const MetricModel& metric,
                 const Point& p, double c) {
  const int n = phi.dim;
  JetSeries f = phi.eval(p, 2);
  Complex f0 = f.value();
  if (std::abs(f0.imag()) > 1e-10 * std::max(1.0, std::abs(f0)) ||
      f0.real() <= 0.0)
    throw DomainError("lee_data: potential must be real positive at the point");
  const double phival = f0.real();

  LeeData out;
  out.theta.resize(n);
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i) {
    out.theta(i) = -first_z(f, i) / phival;
    for (int j = 0; j < n; ++j) h(i, j) = second_mixed(f, i, j) / phival;
  }
  // h^{i jbar} = (H^{-1})_{ji}
  Eigen::MatrixXcd hinv = h.inverse();
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += hinv(j, i) * out.theta(i) * std::conj(out.theta(j));
  out.norm_sq = s.real();

  Eigen::MatrixXcd gm(n, n);
  JetMatrix g = metric.eval(p, 0);
  auto v = g.values();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm(i, j) = v[i * n + j];
  out.metric_consistency = (gm - c * h).cwiseAbs().maxCoeff();
  return out;
}

Tensor4 transform_tensor4(const Tensor4& t, const Eigen::MatrixXcd& frame) {
  const int n = t.dim();
  Tensor4 r1(n, t.role), r2(n, t.role), r3(n, t.role), r4(n, t.role);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int i = 0; i < n; ++i) s += frame(i, a) * t(i, j, k, l);
          r1(a, j, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int j = 0; j < n; ++j) s += std::conj(frame(j, b)) * r1(a, j, k, l);
          r2(a, b, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cdx = 0; cdx < n; ++cdx)
        for (int l = 0; l < n; ++l) {
          Complex s = 0.0;
          for (int k = 0; k < n; ++k) s += frame(k, cdx) * r2(a, b, k, l);
          r3(a, b, cdx, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cdx = 0; cdx < n; ++cdx)
        for (int d = 0; d < n; ++d) {
          Complex s = 0.0;
          for (int l = 0; l < n; ++l) s += std::conj(frame(l, d)) * r3(a, b, cdx, l);
          r4(a, b, cdx, d) = s;
        }
  return r4;
}

Grid3<Complex> transform_torsion_low(const Grid3<Complex>& t,
                                     const Eigen::MatrixXcd& frame) {
  const int n = t.dim();
  Grid3<Complex> out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cdx = 0; cdx < n; ++cdx) {
        Complex s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              s += frame(i, a) * frame(j, b) * std::conj(frame(k, cdx)) *
                   t(i, j, k);
        out(a, b, cdx) = s;
      }
  return out;
}

PointTensors compute_point_tensors(const MetricModel& model, const Point& p,
                                   int order) {
  if (!model.domain(p))
    throw DomainError("compute_point_tensors: point outside model domain");
  PointTensors pt;
  pt.mj = MetricJets::compute(model.eval(p, order));
  pt.conn = chern_connection(pt.mj);
  pt.tor = torsion(pt.mj);
  pt.chern_r = chern_curvature(pt.mj);
  pt.q = q_tensor(pt.mj.ginv_val, pt.chern_r, pt.tor.low);
  pt.bismut_direct = bismut_curvature_direct(pt.mj);
  pt.bismut_lemma = bismut_curvature_lemma(pt.mj.ginv_val, pt.chern_r,
                                           pt.tor.low, pt.tor.up);
  pt.ddbar = ddbar_omega_block(pt.mj);
  return pt;
}

}  // namespace qtensor
