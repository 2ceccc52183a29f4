// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_JET_HPP
#define QTENSOR_JET_HPP

#include <array>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qtensor/common.hpp"

namespace qtensor {

// Exponent vector of a monomial in the 2n Wirtinger variables.
// Slots [0, n) are the z-exponents (alpha), slots [n, 2n) the zbar-exponents
// (beta). Unused slots stay zero.
using Exponents = std::array<std::uint8_t, 8>;

constexpr int kMaxComplexVars = 4;
constexpr int kMaxJetOrder = 12;

// Shared monomial basis for jets in 2n variables truncated at total degree K.
// Holds the monomial enumeration and a precomputed multiplication table.
// Contexts are cached per (n, K) and shared by const pointer.
class JetContext {
 public:
  static std::shared_ptr<const JetContext> get(int complex_vars, int order);

  int complex_vars() const { return n_; }
  int vars() const { return 2 * n_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }

  const Exponents& exponents(int idx) const { return exps_[idx]; }
  int degree(int idx) const { return degree_[idx]; }
  // Index of a monomial, -1 if its total degree exceeds the order.
  int index_of(const Exponents& e) const;

  struct MulTriple {
    std::int32_t a, b, dst;
  };
  const std::vector<MulTriple>& mul_table() const { return mul_; }

  JetContext(int complex_vars, int order);

 private:
  int n_;
  int order_;
  std::vector<Exponents> exps_;
  std::vector<int> degree_;
  // mixed-radix exponent key (base order+1) -> index; dense table when it
  // fits, hash map otherwise
  std::uint64_t key_of(const Exponents& e) const;
  std::vector<int> lookup_;
  std::unordered_map<std::uint64_t, int> lookup_map_;
  std::vector<MulTriple> mul_;
};

using JetContextPtr = std::shared_ptr<const JetContext>;

// Truncated Taylor expansion of a smooth function of (z, zbar) at a base
// point. Coefficients are stored against the context's monomial basis; the
// monomial variables are offsets from the base point.
class JetSeries {
 public:
  JetSeries() = default;
  JetSeries(JetContextPtr ctx, Point base_point);

  static JetSeries constant(JetContextPtr ctx, Point base_point, Complex value);
  // The coordinate function z_i (0-based) expanded at the base point.
  static JetSeries coordinate(JetContextPtr ctx, Point base_point, int i);
  // The coordinate function zbar_i expanded at the base point.
  static JetSeries coordinate_conj(JetContextPtr ctx, Point base_point, int i);

  const JetContextPtr& context() const { return ctx_; }
  const Point& base_point() const { return base_; }
  int order() const { return ctx_->order(); }

  Complex value() const { return coeff_[0]; }
  Complex coefficient(int idx) const { return coeff_[idx]; }
  Complex& coefficient(int idx) { return coeff_[idx]; }
  Complex coefficient(const Exponents& e) const;
  void set_coefficient(const Exponents& e, Complex v);

  // Mixed partial d^alpha dbar^beta at the base point (factorial-normalized).
  Complex extract(const Exponents& alpha_beta) const;
  Complex extract(const std::vector<int>& alpha,
                  const std::vector<int>& beta) const;

  JetSeries operator+(const JetSeries& o) const;
  JetSeries operator-(const JetSeries& o) const;
  JetSeries operator*(const JetSeries& o) const;
  JetSeries operator*(Complex s) const;
  JetSeries operator-() const;
  JetSeries& operator+=(const JetSeries& o);
  JetSeries& operator-=(const JetSeries& o);

  // Complex conjugate of the represented function: swaps the z / zbar
  // exponent blocks and conjugates coefficients.
  JetSeries conj() const;
  // Reciprocal; requires a nonzero constant term.
  JetSeries inverse() const;
  JetSeries exp() const;
  // Principal-branch log; requires a nonzero constant term.
  JetSeries log() const;

  // Partial derivative with respect to variable v (0..2n-1; v >= n means
  // zbar_{v-n}). The result lives one order lower.
  JetSeries derive(int v) const;
  JetSeries derive_z(int i) const { return derive(i); }
  JetSeries derive_zbar(int i) const { return derive(ctx_->complex_vars() + i); }

  // Same series re-truncated to a lower order.
  JetSeries truncate(int new_order) const;

  double max_abs_coefficient() const;
  // Whether the represented function is real: coeff(alpha,beta) ==
  // conj(coeff(beta,alpha)) within tol.
  bool is_real(double tol = 1e-12) const;

 private:
  void check_compatible(const JetSeries& o) const;

  JetContextPtr ctx_;
  Point base_;
  std::vector<Complex> coeff_;
};

inline JetSeries operator*(Complex s, const JetSeries& a) { return a * s; }

// n x n array of jets sharing base point and order. Row index i, column
// index j; for metric fields entry (i, j) holds g_{i jbar}.
class JetMatrix {
 public:
  JetMatrix() : n_(0) {}
  JetMatrix(int n, JetContextPtr ctx, Point base_point);

  int dim() const { return n_; }
  const JetContextPtr& context() const { return ctx_; }
  const Point& base_point() const { return base_; }

  JetSeries& at(int i, int j) { return e_[i * n_ + j]; }
  const JetSeries& at(int i, int j) const { return e_[i * n_ + j]; }

  JetMatrix operator+(const JetMatrix& o) const;
  JetMatrix operator-(const JetMatrix& o) const;
  JetMatrix operator*(const JetMatrix& o) const;
  JetMatrix scaled(const JetSeries& s) const;

  // Jet-exact matrix inverse (Neumann series on the nilpotent part).
  // Throws SingularityError if the constant term is singular.
  JetMatrix inverse() const;

  // Hermitian-field check: entry(i,j) == conj-jet of entry(j,i).
  bool is_hermitian_field(double tol = 1e-10) const;

  JetMatrix truncate(int new_order) const;

  // Constant terms as a dense matrix (row-major n x n of values).
  std::vector<Complex> values() const;

 private:
  int n_;
  JetContextPtr ctx_;
  Point base_;
  std::vector<JetSeries> e_;
};

}  // namespace qtensor

#endif
