// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fd_oracle.hpp"
#include "qtensor/tensors.hpp"

using namespace qtensor;

namespace {

fd::Field metric_entry(const MetricModel& m, int i, int j) {
  return [&m, i, j](const Point& p) { return m.eval(p, 0).at(i, j).value(); };
}

MetricJets jets_at(const MetricModel& m, const Point& p, int order = 4) {
  return MetricJets::compute(m.eval(p, order));
}

}  // namespace

TEST_CASE("chern connection vanishes for flat and at the fubini-study origin") {
  MetricJets flat = jets_at(make_flat(2), {Complex(0.4, 0.2), Complex(-1.0)});
  CHECK(max_abs(chern_connection(flat).gamma) < 1e-14);
  MetricJets fs = jets_at(make_fubini_study(1), {Complex(0.0)});
  CHECK(max_abs(chern_connection(fs).gamma) < 1e-14);
}

TEST_CASE("chern connection matches the finite-difference oracle on hopf") {
  MetricModel m = make_hopf(2);
  Point p{Complex(0.7, 0.3), Complex(-0.5, 0.9)};
  MetricJets mj = jets_at(m, p);
  ConnectionCoeffs conn = chern_connection(mj);
  // Gamma^j_{ki} = g^{j mbar} d_k g_{i mbar}, with the inverse taken from
  // plain Eigen at the point
  Eigen::MatrixXcd gv(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gv(i, j) = mj.g.at(i, j).value();
  Eigen::MatrixXcd ginv = gv.inverse().transpose();
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Complex want = 0.0;
        for (int mm = 0; mm < 2; ++mm)
          want += ginv(j, mm) * fd::dz(metric_entry(m, i, mm), p, k);
        CHECK(std::abs(conn.gamma(k, i, j) - want) < 1e-8);
      }
}

TEST_CASE("hopf torsion matches its closed form on the shell") {
  MetricModel m = make_hopf(2);
  for (const Point& p : sample_points(m, 10, 7)) {
    double r2 = std::norm(p[0]) + std::norm(p[1]);
    TorsionTensor t = torsion(jets_at(m, p));
    // T_{i j kbar} = -4 (delta_{jk} zbar_i - delta_{ik} zbar_j) / |z|^4
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Complex want = -4.0 *
                         ((j == k ? std::conj(p[i]) : 0.0) -
                          (i == k ? std::conj(p[j]) : 0.0)) /
                         (r2 * r2);
          CHECK(std::abs(t.low(i, j, k) - want) < 1e-11);
        }
  }
  // the fixture value at z = (1, 0)
  TorsionTensor t0 = torsion(jets_at(m, {Complex(1.0), Complex(0.0)}));
  CHECK(std::abs(t0.low(0, 1, 1) - Complex(-4.0)) < 1e-12);
}

TEST_CASE("fubini-study curvature at the origin") {
  MetricJets mj = jets_at(make_fubini_study(1), {Complex(0.0)});
  Tensor4 r = chern_curvature(mj);
  CHECK(std::abs(r(0, 0, 0, 0) - Complex(2.0)) < 1e-13);
}

TEST_CASE("curvature and q satisfy the reality symmetry on random metrics") {
  for (std::uint64_t seed : {3ull, 17ull, 40ull}) {
    MetricModel m = make_polynomial_random(3, 3, seed);
    for (const Point& p : sample_points(m, 3, seed + 1)) {
      PointTensors pt = compute_point_tensors(m, p, 4);
      CHECK(pt.chern_r.conj_symmetry_residual() < 1e-12);
      CHECK(pt.q.conj_symmetry_residual() < 1e-12);
    }
  }
}

TEST_CASE("hopf surface: q, bismut (1,1) part, and ddbar omega all vanish") {
  MetricModel m = make_hopf(2);
  for (const Point& p : sample_points(m, 10, 21)) {
    PointTensors pt = compute_point_tensors(m, p, 4);
    CHECK(pt.q.max_abs() < 1e-10);
    CHECK(pt.bismut_direct.max_abs() < 1e-10);
    CHECK(pt.ddbar.max_abs() < 1e-10);
  }
}

TEST_CASE("hopf threefold has a nonzero ddbar omega block, oracle-checked") {
  MetricModel m = make_hopf(3);
  Point p{Complex(1.0), Complex(0.0), Complex(0.0)};
  MetricJets mj = jets_at(m, p);
  Tensor4 dd = ddbar_omega_block(mj);
  CHECK(dd.max_abs() > 1e-3);
  // outer dbar derivative by finite differences of the torsion entries
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          auto t_entry = [&m, i, k](int b) {
            return [&m, i, k, b](const Point& q) {
              TorsionTensor t = torsion(MetricJets::compute(m.eval(q, 2)));
              return t.low(i, k, b);
            };
          };
          Complex want =
              fd::dzbar(t_entry(j), p, l) - fd::dzbar(t_entry(l), p, j);
          CHECK(std::abs(dd(i, j, k, l) - want) < 1e-7);
        }
}

TEST_CASE("bismut antiholomorphic coefficients match their formula") {
  MetricModel m = make_hopf(2);
  Point p{Complex(1.0), Complex(0.0)};
  MetricJets mj = jets_at(m, p);
  BismutCoeffs bc = bismut_coeffs(mj);
  TorsionTensor t = torsion(mj);
  for (int j = 0; j < 2; ++j)
    for (int mm = 0; mm < 2; ++mm)
      for (int k = 0; k < 2; ++k) {
        Complex want = 0.0;
        for (int q = 0; q < 2; ++q)
          want += mj.ginv_val(k, q) * std::conj(t.low(j, q, mm));
        CHECK(std::abs(bc.antihol(j, mm, k) - want) < 1e-12);
      }
  // the holomorphic part is the Chern connection with swapped lower indices
  ConnectionCoeffs conn = chern_connection(mj);
  for (int i = 0; i < 2; ++i)
    for (int mm = 0; mm < 2; ++mm)
      for (int k = 0; k < 2; ++k)
        CHECK(std::abs(bc.hol(i, mm, k) - conn.gamma(mm, i, k)) < 1e-12);
}

TEST_CASE("covariant derivative on a flat background is the plain derivative") {
  MetricModel m = make_flat(2);
  // rho_{1 1bar} = z1 zbar1 via the potential |z1|^4 / 4
  auto u = scalar_poly(2, {PolyTerm{{2, 0}, {2, 0}, Complex(0.25)}});
  OneOneFormModel rho = rho_from_potential(Eigen::MatrixXcd::Zero(2, 2), u);
  Point p{Complex(0.6, -0.3), Complex(0.2, 0.1)};
  MetricJets mj = jets_at(m, p);
  CovariantDerivative cd =
      covariant_derivative(rho.eval(p, 2), mj, ConnectionKind::Chern);
  CHECK(std::abs(cd.unbar(0, 0, 0) - std::conj(p[0])) < 1e-13);
  CHECK(std::abs(cd.bar(0, 0, 0) - p[0]) < 1e-13);
  CHECK(std::abs(cd.unbar(1, 0, 0)) < 1e-13);
  // oracle for a second entry
  fd::Field r00 = [&rho](const Point& q) {
    return rho.eval(q, 0).at(0, 0).value();
  };
  CHECK(std::abs(cd.unbar(0, 0, 0) - fd::dz(r00, p, 0)) < 1e-9);
}

TEST_CASE("both connections are metric-compatible") {
  for (const char* name : {"hopf", "fubini_study"}) {
    Json spec;
    spec["name"] = name;
    spec["dim"] = 2;
    MetricModel m = catalog_get(spec);
    Point p = sample_points(m, 1, 13).at(0);
    MetricJets mj = jets_at(m, p);
    for (ConnectionKind kind :
         {ConnectionKind::Chern, ConnectionKind::Bismut}) {
      CovariantDerivative cd = covariant_derivative(mj.g, mj, kind);
      CHECK(max_abs(cd.unbar) < 1e-11);
      CHECK(max_abs(cd.bar) < 1e-11);
    }
  }
}

TEST_CASE("lee form of the hopf potential has unit norm") {
  MetricModel m = make_hopf(3);
  for (const Point& p : sample_points(m, 10, 31)) {
    LeeData ld = lee_data(m.potential->phi, m, p, m.potential->c);
    CHECK(std::abs(ld.norm_sq - 1.0) < 1e-12);
    CHECK(ld.metric_consistency < 1e-10);
  }
}

TEST_CASE("tensor transforms compose") {
  MetricModel m = make_hopf(3);
  Point p = sample_points(m, 1, 3).at(0);
  Tensor4 r = compute_point_tensors(m, p, 4).chern_r;
  RandomSource rng(5);
  Eigen::MatrixXcd f1(3, 3), f2(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      f1(i, j) = rng.complex_gaussian();
      f2(i, j) = rng.complex_gaussian();
    }
  Tensor4 two_step = transform_tensor4(transform_tensor4(r, f1), f2);
  Tensor4 one_step = transform_tensor4(r, f1 * f2);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          worst = std::max(worst,
                           std::abs(two_step(i, j, k, l) - one_step(i, j, k, l)));
  CHECK(worst < 1e-10 * std::max(1.0, one_step.max_abs()));
}
