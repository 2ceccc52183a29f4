// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.
//
// End-to-end acceptance run: one line per criterion, nonzero exit on any
// failure. Every numbered block is self-contained and seeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fd_oracle.hpp"
#include "qtensor/engine.hpp"

using namespace qtensor;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int num, const char* label) : num_(num), label_(label) {
    start_ = std::chrono::steady_clock::now();
  }
  void fail(const std::string& why) {
    ok_ = false;
    if (!why.empty()) notes_.push_back(why);
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
  void note_max(double v) { max_seen_ = std::max(max_seen_, v); }
  ~Criterion() {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
    std::printf("[%2d] %s  %-58s max_resid=%.3e  (%.2f s)\n", num_,
                ok_ ? "PASS" : "FAIL", label_, max_seen_, secs);
    for (const auto& n : notes_) std::printf("       - %s\n", n.c_str());
    if (!ok_) ++g_failures;
    std::fflush(stdout);
  }

 private:
  int num_;
  const char* label_;
  bool ok_ = true;
  double max_seen_ = 0.0;
  std::vector<std::string> notes_;
  std::chrono::steady_clock::time_point start_;
};

double tensor_diff(const Tensor4& a, const Tensor4& b) {
  int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(a(i, j, k, l) - b(i, j, k, l)));
  return worst;
}

void run_1() {
  Criterion c(1, "kahler reduction: q coincides with chern curvature");
  for (const char* name : {"fubini_study", "flat"}) {
    int dim = std::string(name) == "flat" ? 3 : 2;
    Json spec{{"name", name}, {"dim", dim}};
    MetricModel m = catalog_get(spec);
    for (const Point& p : sample_points(m, 50, 101)) {
      PointTensors pt = compute_point_tensors(m, p, 4);
      double d = tensor_diff(pt.q, pt.chern_r);
      c.note_max(d);
      c.require(d < 1e-10, "q != r on a kahler model");
    }
  }
}

void run_2_and_3() {
  std::vector<std::pair<MetricModel, std::vector<Point>>> corpus;
  for (int n : {2, 3}) {
    MetricModel m = make_hopf(n);
    corpus.emplace_back(m, sample_points(m, 20, 200 + n));
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MetricModel m = make_polynomial_random(2, 3, seed);
    corpus.emplace_back(m, sample_points(m, 1, seed + 7));
  }
  {
    Criterion c(2, "proposition: q = bismut(1,1) + ddbar-omega block");
    for (const auto& [m, pts] : corpus) {
      IdentityReport r = check_q_bismut_proposition(m, pts, 4, 1e-9);
      c.note_max(r.max_residual);
      c.require(r.pass, "proposition residual above 1e-9 on " + m.name);
    }
  }
  {
    Criterion c(3, "two-route bismut curvature agreement");
    for (const auto& [m, pts] : corpus) {
      IdentityReport r = check_two_route(m, pts, 4, 1e-9);
      c.note_max(r.max_residual);
      c.require(r.pass, "two-route residual above 1e-9 on " + m.name);
    }
  }
}

void run_4() {
  Criterion c(4, "hopf surface fixtures: pluriclosed, q = b = 0, torsion");
  MetricModel m = make_hopf(2);
  for (const Point& p : sample_points(m, 100, 44)) {
    PointTensors pt = compute_point_tensors(m, p, 4);
    double worst = std::max({pt.ddbar.max_abs(), pt.q.max_abs(),
                             pt.bismut_direct.max_abs()});
    c.note_max(worst);
    c.require(worst < 1e-9, "nonzero ddbar/q/b on the hopf surface");
  }
  Point z0{Complex(1.0), Complex(0.0)};
  TorsionTensor t = torsion(MetricJets::compute(m.eval(z0, 2)));
  c.require(std::abs(t.low(0, 1, 1) - Complex(-4.0)) < 1e-10,
            "torsion fixture T_{1 2 2bar} != -4 at (1, 0)");
  // independent finite-difference route for the same entry
  auto g_entry = [&m](int i, int j) {
    return fd::Field([&m, i, j](const Point& q) {
      return m.eval(q, 0).at(i, j).value();
    });
  };
  Complex fd_t = fd::dz(g_entry(1, 1), z0, 0) - fd::dz(g_entry(0, 1), z0, 1);
  c.note_max(std::abs(fd_t - Complex(-4.0)));
  c.require(std::abs(fd_t - Complex(-4.0)) < 1e-8,
            "finite-difference oracle disagrees with the torsion fixture");
}

void run_5() {
  Criterion c(5, "conformal-change closed form on 100 fuzz cases");
  for (std::uint64_t i = 0; i < 100; ++i) {
    MetricModel base = (i % 2 == 0) ? make_flat(2) : make_fubini_study(2);
    ScalarFieldModel f = scalar_poly_random(2, 3, 500 + i, 0.1);
    IdentityReport r =
        check_conformal_lemma(base, f, sample_points(base, 2, 600 + i), 4, 1e-9);
    c.note_max(r.max_residual);
    c.require(r.pass, "conformal residual above 1e-9");
  }
}

void run_6() {
  Criterion c(6, "pair symmetry of q on hopf(2), hopf(3), hopf(4)");
  for (int n : {2, 3, 4}) {
    MetricModel m = make_hopf(n);
    IdentityReport r =
        check_q_symmetry(m, sample_points(m, 100, 660 + n), 4, 1e-9);
    c.note_max(r.max_residual);
    c.require(r.pass && !r.informational, "pair symmetry failed on hopf");
  }
}

void run_7() {
  Criterion c(7, "unit lee-form norm for the hopf potential");
  for (int n : {2, 3, 4}) {
    MetricModel m = make_hopf(n);
    IdentityReport r = check_vaisman_norm(m, sample_points(m, 50, 770 + n));
    c.note_max(r.max_residual);
    c.require(r.pass, "|d log phi|^2 != 1 beyond 1e-12");
  }
}

void run_8() {
  Criterion c(8, "q-nonnegativity certification on hopf(3) and hopf(4)");
  for (int n : {3, 4}) {
    CertifyOptions opts;
    opts.n_points = 100;
    opts.n_frames = 1000;
    opts.seed = 880 + n;
    opts.tol = 1e-8;
    PositivityCertificate cert = q_nonneg_certify(make_hopf(n), opts);
    c.note_max(std::abs(cert.min_eigenvalue));
    c.require(!cert.violation && cert.min_eigenvalue >= -1e-8,
              "violation reported on a hopf model");
  }
  // cross-check: the hopf metric is e^f * flat for f = log 4 - log |z|^2,
  // so the conformal closed form must reproduce its q tensor
  MetricModel hopf3 = make_hopf(3);
  ScalarFieldModel f =
      scalar_named(3, "log_norm_sq", -1.0, std::log(4.0));
  IdentityReport r = check_conformal_lemma(make_flat(3), f,
                                           sample_points(hopf3, 5, 888), 4,
                                           1e-9);
  c.note_max(r.max_residual);
  c.require(r.pass, "conformal cross-check of the hopf q tensor failed");
}

void run_9() {
  Criterion c(9, "bochner chain: commutation, flat fixtures, rho = omega");
  for (std::uint64_t i = 0; i < 100; ++i) {
    MetricModel m = make_polynomial_random(2, 3, 900 + i);
    OneOneFormModel rho =
        rho_from_potential(Eigen::MatrixXcd::Identity(2, 2),
                           scalar_poly_random(2, 3, 950 + i, 0.05));
    IdentityReport r =
        check_commutation_identity(m, rho, sample_points(m, 1, 990 + i), 4,
                                   1e-7);
    c.note_max(r.max_residual);
    c.require(r.pass, "commutation residual above 1e-7");
  }
  MetricModel flat = make_flat(2);
  auto harmonic =
      scalar_poly(2, {PolyTerm{{2, 0}, {0, 1}, Complex(1.0)}}, true);
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 2.0, Complex(0.3, 0.1), Complex(0.3, -0.1), 1.0;
  OneOneFormModel fixture = rho_from_potential(rho0, harmonic);
  for (const Point& p : sample_points(flat, 20, 909)) {
    BochnerReport br = bochner_residual(flat, fixture, p);
    c.note_max(br.residual);
    c.require(br.residual < 1e-8, "bochner residual above 1e-8 on flat");
  }
  MetricModel fs = make_fubini_study(2);
  for (const Point& p : sample_points(fs, 10, 911)) {
    BochnerReport br = bochner_residual(fs, rho_from_metric(fs), p);
    c.require(std::abs(br.lhs) < 1e-10 && std::abs(br.rhs) < 1e-10,
              "rho = omega should zero both sides on a kahler model");
  }
}

void run_10() {
  Criterion c(10, "covariance, reality, and the quadratic-form identity");
  MetricModel m = make_hopf(2);
  RandomSource rng(1010);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd a(2, 2);
    do {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          a(i, j) = 0.5 * rng.complex_gaussian() + (i == j ? 1.0 : 0.0);
    } while (std::abs(a.determinant()) < 0.3);
    MetricModel pulled = make_linear_change(m, a);
    for (const Point& w : sample_points(m, 5, 1020 + trial)) {
      Point z(2);
      for (int i = 0; i < 2; ++i) {
        z[i] = 0.0;
        for (int j = 0; j < 2; ++j) z[i] += a(i, j) * w[j];
      }
      if (!m.domain(z) || !pulled.domain(w)) continue;
      Tensor4 q_w = compute_point_tensors(pulled, w, 4).q;
      Tensor4 q_z = compute_point_tensors(m, z, 4).q;
      double d = tensor_diff(q_w, transform_tensor4(q_z, a));
      c.note_max(d);
      c.require(d < 1e-9, "q does not transform tensorially");
    }
  }
  // reality of the diagonal pairs and the Eq. 4 matrix identity, per frame
  MetricModel h3 = make_hopf(3);
  for (const Point& p : sample_points(h3, 5, 1030)) {
    PointTensors pt = compute_point_tensors(h3, p, 4);
    for (int fr = 0; fr < 3; ++fr) {
      FrameData frame =
          orthonormal_frame(pt.mj.g_val, haar_unitary(3, 1040 + fr));
      Tensor4 qf = transform_tensor4(pt.q, frame.frame);
      for (int mm = 0; mm < 3; ++mm)
        for (int k = 0; k < 3; ++k)
          c.require(std::abs(std::imag(qf(mm, mm, k, k))) < 1e-12,
                    "imaginary diagonal pair entry");
      QuadraticFormMatrix qm = quadratic_form_matrix(qf);
      for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd lambda(3);
        for (int i = 0; i < 3; ++i) lambda(i) = 2.0 * rng.uniform() - 1.0;
        double direct = eval_q_form(qm.q_pairs, lambda);
        double via_m = lambda.dot(qm.m * lambda);
        c.require(std::abs(direct - via_m) <
                      1e-12 * std::max(1.0, std::abs(direct)),
                  "lambda^T M lambda disagrees with the direct form");
      }
    }
  }
}

void run_11() {
  Criterion c(11, "determinism: replayed runs are byte-for-byte identical");
  Json qcfg{{"command", "qcheck"},
            {"model", {{"name", "poincare"}, {"dim", 2}}},
            {"points", 5},
            {"frames", 50},
            {"seed", 11},
            {"replay_out", "/tmp/qtensor_acceptance_replay.json"}};
  RunResult first = run_config(qcfg);
  c.require(first.exit_code == 1, "the ball metric should report a violation");
  RunResult again = run_config(qcfg);
  c.require(first.output == again.output, "rerun output differs");

  Json rcfg{{"command", "qcheck"},
            {"replay", "/tmp/qtensor_acceptance_replay.json"}};
  RunResult replay = run_config(rcfg);
  c.require(replay.exit_code == 1, "replay did not reproduce the violation");
  Json orig = Json::parse(first.output);
  Json rep = Json::parse(replay.output);
  c.require(rep.contains("runs") && rep.at("runs").size() == 1,
            "replay report shape");
  if (rep.contains("runs") && rep.at("runs").size() == 1) {
    const Json& body = rep.at("runs").at(0).at("body");
    c.require(body.at("witness").dump() == orig.at("witness").dump(),
              "replayed witness differs");
    c.require(body.at("min_eigenvalue").dump() ==
                  orig.at("min_eigenvalue").dump(),
              "replayed minimum eigenvalue differs");
  }
  // same determinism contract for fuzz
  Json fcfg{{"command", "fuzz"}, {"cases", 5}, {"dim", 2}, {"seed", 7}};
  c.require(run_config(fcfg).output == run_config(fcfg).output,
            "fuzz output not deterministic");
}

}  // namespace

int main() {
  run_1();
  run_2_and_3();
  run_4();
  run_5();
  run_6();
  run_7();
  run_8();
  run_9();
  run_10();
  run_11();
  if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
  else std::printf("all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
