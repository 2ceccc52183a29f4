// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_TENSORS_HPP
#define QTENSOR_TENSORS_HPP

#include <Eigen/Dense>

#include "qtensor/catalog.hpp"
#include "qtensor/jet.hpp"

namespace qtensor {

// Index conventions, frozen across the project:
//  - metric entries g.at(i, j) hold g_{i jbar};
//  - inverse metric entries ginv.at(i, j) hold g^{i jbar}, i.e. the
//    transpose of the matrix inverse, so that sum_j g^{i jbar} g_{k jbar} =
//    delta_{ik};
//  - Gamma^j_{ki} carries (derivative index k, lower i, upper j);
//  - rank-4 tensors are indexed (i, jbar, k, lbar): first barred slot pairs
//    with the first unbarred one, the last index is the metric-lowering slot.

template <typename T>
class Grid3 {
 public:
  Grid3() : n_(0) {}
  explicit Grid3(int n, const T& fill = T()) : n_(n), v_(n * n * n, fill) {}
  int dim() const { return n_; }
  T& operator()(int i, int j, int k) { return v_[(i * n_ + j) * n_ + k]; }
  const T& operator()(int i, int j, int k) const {
    return v_[(i * n_ + j) * n_ + k];
  }

 private:
  int n_;
  std::vector<T> v_;
};

template <typename T>
class Grid4 {
 public:
  Grid4() : n_(0) {}
  explicit Grid4(int n, const T& fill = T())
      : n_(n), v_(static_cast<size_t>(n) * n * n * n, fill) {}
  int dim() const { return n_; }
  T& operator()(int i, int j, int k, int l) {
    return v_[((i * static_cast<size_t>(n_) + j) * n_ + k) * n_ + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return v_[((i * static_cast<size_t>(n_) + j) * n_ + k) * n_ + l];
  }

 private:
  int n_;
  std::vector<T> v_;
};

enum class TensorRole { ChernR, Q, Bismut11, DdbarOmega };

const char* tensor_role_name(TensorRole role);

// Rank-4 complex tensor indexed (i, jbar, k, lbar).
struct Tensor4 {
  TensorRole role = TensorRole::ChernR;
  Grid4<Complex> v;

  Tensor4() = default;
  Tensor4(int n, TensorRole r) : role(r), v(n) {}
  int dim() const { return v.dim(); }
  Complex& operator()(int i, int j, int k, int l) { return v(i, j, k, l); }
  Complex operator()(int i, int j, int k, int l) const { return v(i, j, k, l); }

  double max_abs() const;
  // max |T(i,j,k,l) - conj(T(j,i,l,k))| -- the reality symmetry of R and Q.
  double conj_symmetry_residual() const;
};

double max_abs(const Grid3<Complex>& t);

// Jets of everything derived directly from the metric field at one point.
struct MetricJets {
  int n = 0;
  int order = 0;  // order of the g jets
  Point point;
  JetMatrix g;               // g_{i jbar}, order K
  JetMatrix ginv;            // g^{i jbar}, order K
  Grid3<JetSeries> gamma;    // (k, i, j) -> Gamma^j_{ki}, order K-1
  Grid3<JetSeries> t_low;    // (i, j, k) -> T_{i j kbar}, order K-1
  Grid3<JetSeries> t_up;     // (i, j, k) -> T^k_{ij}, order K-1
  Eigen::MatrixXcd g_val;    // constant terms
  Eigen::MatrixXcd ginv_val;

  static MetricJets compute(const JetMatrix& g);
};

struct ConnectionCoeffs {
  Grid3<Complex> gamma;  // (k, i, j) -> Gamma^j_{ki}
};

struct TorsionTensor {
  Grid3<Complex> up;   // (i, j, k) -> T^k_{ij}
  Grid3<Complex> low;  // (i, j, k) -> T_{i j kbar}
};

struct BismutCoeffs {
  Grid3<Complex> hol;      // (i, m, k) -> A^k_{i m} = Gamma^k_{m i}
  Grid3<Complex> antihol;  // (j, m, k) -> A^k_{jbar m} = g^{k qbar} conj(T_{j q mbar})
};

struct LeeData {
  Eigen::VectorXcd theta;  // theta_i = -d_i log(phi)
  double norm_sq = 0.0;    // |d log phi|^2 in the metric phi^{-1} ddbar phi
  // max deviation between the model metric and c * phi^{-1} ddbar phi at the
  // point; large values mean the potential does not describe this metric.
  double metric_consistency = 0.0;
};

ConnectionCoeffs chern_connection(const MetricJets& mj);
TorsionTensor torsion(const MetricJets& mj);
// Chern curvature with all indices lowered, R_{i jbar k lbar}. Needs order >= 2.
Tensor4 chern_curvature(const MetricJets& mj);
// Q_{i jbar k lbar} = R_{i jbar k lbar} - g^{p qbar} T_{k p jbar} conj(T_{l q ibar}).
Tensor4 q_tensor(const Eigen::MatrixXcd& ginv_val, const Tensor4& chern_r,
                 const Grid3<Complex>& torsion_low);
BismutCoeffs bismut_coeffs(const MetricJets& mj);
// (1,1)-part of the Bismut curvature from its connection coefficients.
Tensor4 bismut_curvature_direct(const MetricJets& mj);
// Same tensor from the closed form in Chern curvature and torsion.
Tensor4 bismut_curvature_lemma(const Eigen::MatrixXcd& ginv_val,
                               const Tensor4& chern_r,
                               const Grid3<Complex>& torsion_low,
                               const Grid3<Complex>& torsion_up);
// d_lbar T_{i k jbar} - d_jbar T_{i k lbar}, as plain second partials of g;
// the components of ddbar omega. Needs order >= 2.
Tensor4 ddbar_omega_block(const MetricJets& mj);

enum class ConnectionKind { Chern, Bismut };

struct CovariantDerivative {
  Grid3<Complex> unbar;  // (i, k, l) -> nabla_i rho_{k lbar}
  Grid3<Complex> bar;    // (i, k, l) -> nabla_ibar rho_{k lbar}
};

// Covariant derivative of a (1,1)-form jet in the Chern or Bismut connection.
// rho must share the base point with mj; its jets must have order >= 1.
CovariantDerivative covariant_derivative(const JetMatrix& rho,
                                         const MetricJets& mj,
                                         ConnectionKind kind);
// Jet-valued version (order drops by one); used for second derivatives.
Grid3<JetSeries> covariant_derivative_unbar_jets(const JetMatrix& rho,
                                                 const MetricJets& mj,
                                                 ConnectionKind kind);
Grid3<JetSeries> covariant_derivative_bar_jets(const JetMatrix& rho,
                                               const MetricJets& mj,
                                               ConnectionKind kind);

// Lee-form data of an LCK-with-potential model at a point.
LeeData lee_data(const ScalarFieldModel& phi, const MetricModel& metric,
                 const Point& p, double c);

// Q'_{a bbar c dbar} = F^i_a conj(F^j_b) F^k_c conj(F^l_d) Q_{i jbar k lbar}.
Tensor4 transform_tensor4(const Tensor4& t, const Eigen::MatrixXcd& frame);
// Covariant transform of T_{i j kbar} (two unbarred slots, one barred).
Grid3<Complex> transform_torsion_low(const Grid3<Complex>& t,
                                     const Eigen::MatrixXcd& frame);

// Everything the identity suite consumes at one point.
struct PointTensors {
  MetricJets mj;
  ConnectionCoeffs conn;
  TorsionTensor tor;
  Tensor4 chern_r;
  Tensor4 q;
  Tensor4 bismut_direct;
  Tensor4 bismut_lemma;
  Tensor4 ddbar;
};

PointTensors compute_point_tensors(const MetricModel& model, const Point& p,
                                   int order);

}  // namespace qtensor

#endif
