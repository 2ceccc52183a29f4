// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>

namespace qtensor {
namespace {

void enumerate(int vars, int order, int v, int remaining, Exponents& cur,
               std::vector<Exponents>& out) {
  if (v == vars) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[v] = static_cast<std::uint8_t>(e);
    enumerate(vars, order, v + 1, remaining - e, cur, out);
  }
  cur[v] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetContext::JetContext(int complex_vars, int order) : n_(complex_vars), order_(order) {
  if (complex_vars < 1 || complex_vars > kMaxComplexVars)
    throw UsageError("jet context: complex dimension must be in [1, 4]");
  if (order < 0 || order > kMaxJetOrder)
    throw UsageError("jet context: order must be in [0, 12]");
  Exponents cur{};
  enumerate(vars(), order, 0, order, cur, exps_);
  // sort by total degree, then lexicographically; index 0 is the constant
  std::sort(exps_.begin(), exps_.end(), [this](const Exponents& a, const Exponents& b) {
    int da = 0, db = 0;
    for (int v = 0; v < vars(); ++v) {
      da += a[v];
      db += b[v];
    }
    if (da != db) return da < db;
    return a < b;
  });
  degree_.resize(exps_.size());
  std::uint64_t table = 1;
  for (int v = 0; v < vars(); ++v) table *= static_cast<std::uint64_t>(order + 1);
  if (table <= (1u << 26)) lookup_.assign(table, -1);
  for (int idx = 0; idx < static_cast<int>(exps_.size()); ++idx) {
    int d = 0;
    for (int v = 0; v < vars(); ++v) d += exps_[idx][v];
    degree_[idx] = d;
    if (!lookup_.empty())
      lookup_[key_of(exps_[idx])] = idx;
    else
      lookup_map_[key_of(exps_[idx])] = idx;
  }
  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (degree_[a] + degree_[b] > order_) continue;
      Exponents s{};
      for (int v = 0; v < vars(); ++v)
        s[v] = static_cast<std::uint8_t>(exps_[a][v] + exps_[b][v]);
      mul_.push_back({a, b, index_of(s)});
    }
  }
}

std::uint64_t JetContext::key_of(const Exponents& e) const {
  std::uint64_t k = 0;
  for (int v = vars() - 1; v >= 0; --v)
    k = k * static_cast<std::uint64_t>(order_ + 1) + e[v];
  return k;
}

int JetContext::index_of(const Exponents& e) const {
  int d = 0;
  for (int v = 0; v < vars(); ++v) d += e[v];
  if (d > order_) return -1;
  if (!lookup_.empty()) return lookup_[key_of(e)];
  auto it = lookup_map_.find(key_of(e));
  return it == lookup_map_.end() ? -1 : it->second;
}

JetContextPtr JetContext::get(int complex_vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, JetContextPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(complex_vars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<JetContext>(complex_vars, order);
  cache[key] = ctx;
  return ctx;
}

JetSeries::JetSeries(JetContextPtr ctx, Point base_point)
    : ctx_(std::move(ctx)), base_(std::move(base_point)) {
  if (static_cast<int>(base_.size()) != ctx_->complex_vars())
    throw UsageError("jet: base point dimension does not match context");
  coeff_.assign(ctx_->size(), Complex(0.0));
}

JetSeries JetSeries::constant(JetContextPtr ctx, Point base_point, Complex value) {
  JetSeries j(std::move(ctx), std::move(base_point));
  j.coeff_[0] = value;
  return j;
}

JetSeries JetSeries::coordinate(JetContextPtr ctx, Point base_point, int i) {
  JetSeries j(ctx, base_point);
  j.coeff_[0] = j.base_[i];
  if (ctx->order() >= 1) {
    Exponents e{};
    e[i] = 1;
    j.coeff_[ctx->index_of(e)] = 1.0;
  }
  return j;
}

JetSeries JetSeries::coordinate_conj(JetContextPtr ctx, Point base_point, int i) {
  JetSeries j(ctx, base_point);
  j.coeff_[0] = std::conj(j.base_[i]);
  if (ctx->order() >= 1) {
    Exponents e{};
    e[ctx->complex_vars() + i] = 1;
    j.coeff_[ctx->index_of(e)] = 1.0;
  }
  return j;
}

Complex JetSeries::coefficient(const Exponents& e) const {
  int idx = ctx_->index_of(e);
  if (idx < 0) throw UsageError("jet: coefficient request beyond truncation order");
  return coeff_[idx];
}

void JetSeries::set_coefficient(const Exponents& e, Complex v) {
  int idx = ctx_->index_of(e);
  if (idx < 0) throw UsageError("jet: coefficient request beyond truncation order");
  coeff_[idx] = v;
}

Complex JetSeries::extract(const Exponents& alpha_beta) const {
  int idx = ctx_->index_of(alpha_beta);
  if (idx < 0) throw UsageError("jet: derivative request beyond truncation order");
  double norm = 1.0;
  for (int v = 0; v < ctx_->vars(); ++v) norm *= factorial(alpha_beta[v]);
  return coeff_[idx] * norm;
}

Complex JetSeries::extract(const std::vector<int>& alpha,
                           const std::vector<int>& beta) const {
  const int n = ctx_->complex_vars();
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
    throw UsageError("jet: multi-index dimension mismatch");
  Exponents e{};
  for (int i = 0; i < n; ++i) {
    e[i] = static_cast<std::uint8_t>(alpha[i]);
    e[n + i] = static_cast<std::uint8_t>(beta[i]);
  }
  return extract(e);
}

void JetSeries::check_compatible(const JetSeries& o) const {
  if (ctx_ != o.ctx_)
    throw UsageError("jet: mismatched context (dimension or order)");
  if (base_ != o.base_) throw UsageError("jet: mismatched base point");
}

JetSeries JetSeries::operator+(const JetSeries& o) const {
  JetSeries r = *this;
  r += o;
  return r;
}

JetSeries JetSeries::operator-(const JetSeries& o) const {
  JetSeries r = *this;
  r -= o;
  return r;
}

JetSeries& JetSeries::operator+=(const JetSeries& o) {
  check_compatible(o);
  for (size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

JetSeries& JetSeries::operator-=(const JetSeries& o) {
  check_compatible(o);
  for (size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

JetSeries JetSeries::operator*(const JetSeries& o) const {
  check_compatible(o);
  JetSeries r(ctx_, base_);
  for (const auto& t : ctx_->mul_table())
    r.coeff_[t.dst] += coeff_[t.a] * o.coeff_[t.b];
  return r;
}

JetSeries JetSeries::operator*(Complex s) const {
  JetSeries r = *this;
  for (auto& c : r.coeff_) c *= s;
  return r;
}

JetSeries JetSeries::operator-() const { return *this * Complex(-1.0); }

JetSeries JetSeries::conj() const {
  JetSeries r(ctx_, base_);
  const int n = ctx_->complex_vars();
  for (int idx = 0; idx < ctx_->size(); ++idx) {
    const Exponents& e = ctx_->exponents(idx);
    Exponents s{};
    for (int i = 0; i < n; ++i) {
      s[i] = e[n + i];
      s[n + i] = e[i];
    }
    r.coeff_[ctx_->index_of(s)] = std::conj(coeff_[idx]);
  }
  return r;
}

JetSeries JetSeries::inverse() const {
  Complex c = coeff_[0];
  if (std::abs(c) == 0.0)
    throw SingularityError("jet: reciprocal of series with zero constant term", 0.0);
  // a = c (1 + e); 1/a = (1/c) sum (-e)^k, evaluated by Horner.
  JetSeries e = *this * (1.0 / c);
  e.coeff_[0] = 0.0;
  JetSeries r = constant(ctx_, base_, 1.0);
  JetSeries one = constant(ctx_, base_, 1.0);
  for (int k = 0; k < ctx_->order(); ++k) r = one - e * r;
  return r * (1.0 / c);
}

JetSeries JetSeries::exp() const {
  Complex c = coeff_[0];
  JetSeries p = *this;
  p.coeff_[0] = 0.0;
  JetSeries r = constant(ctx_, base_, 1.0);
  JetSeries one = constant(ctx_, base_, 1.0);
  for (int k = ctx_->order(); k >= 1; --k) r = one + p * r * (1.0 / k);
  return r * std::exp(c);
}

JetSeries JetSeries::log() const {
  Complex c = coeff_[0];
  if (std::abs(c) == 0.0)
    throw SingularityError("jet: log of series with zero constant term", 0.0);
  JetSeries e = *this * (1.0 / c);
  e.coeff_[0] = 0.0;
  // log(1 + e) = e (1/1 - e (1/2 - e (1/3 - ...)))
  const int K = ctx_->order();
  JetSeries t = constant(ctx_, base_, K > 0 ? 1.0 / K : 0.0);
  for (int k = K - 1; k >= 1; --k)
    t = constant(ctx_, base_, 1.0 / k) - e * t;
  return e * t + constant(ctx_, base_, std::log(c));
}

JetSeries JetSeries::derive(int v) const {
  if (v < 0 || v >= ctx_->vars()) throw UsageError("jet: derivative variable out of range");
  if (ctx_->order() == 0)
    throw UsageError("jet: cannot differentiate an order-0 jet");
  auto dctx = JetContext::get(ctx_->complex_vars(), ctx_->order() - 1);
  JetSeries r(dctx, base_);
  for (int idx = 0; idx < ctx_->size(); ++idx) {
    const Exponents& e = ctx_->exponents(idx);
    if (e[v] == 0) continue;
    Exponents s = e;
    s[v] -= 1;
    r.coeff_[dctx->index_of(s)] += coeff_[idx] * static_cast<double>(e[v]);
  }
  return r;
}

JetSeries JetSeries::truncate(int new_order) const {
  if (new_order > ctx_->order())
    throw UsageError("jet: cannot truncate upward");
  if (new_order == ctx_->order()) return *this;
  auto tctx = JetContext::get(ctx_->complex_vars(), new_order);
  JetSeries r(tctx, base_);
  for (int idx = 0; idx < tctx->size(); ++idx)
    r.coeff_[idx] = coeff_[ctx_->index_of(tctx->exponents(idx))];
  return r;
}

double JetSeries::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : coeff_) m = std::max(m, std::abs(c));
  return m;
}

bool JetSeries::is_real(double tol) const {
  JetSeries diff = *this - conj();
  return diff.max_abs_coefficient() <= tol;
}

JetMatrix::JetMatrix(int n, JetContextPtr ctx, Point base_point)
    : n_(n), ctx_(std::move(ctx)), base_(std::move(base_point)) {
  e_.assign(static_cast<size_t>(n_) * n_, JetSeries(ctx_, base_));
}

JetMatrix JetMatrix::operator+(const JetMatrix& o) const {
  JetMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

JetMatrix JetMatrix::operator-(const JetMatrix& o) const {
  JetMatrix r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
  return r;
}

JetMatrix JetMatrix::operator*(const JetMatrix& o) const {
  if (n_ != o.n_) throw UsageError("jet matrix: dimension mismatch");
  JetMatrix r(n_, ctx_, base_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
  return r;
}

JetMatrix JetMatrix::scaled(const JetSeries& s) const {
  JetMatrix r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

JetMatrix JetMatrix::truncate(int new_order) const {
  JetMatrix r(n_, JetContext::get(ctx_->complex_vars(), new_order), base_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(i, j) = at(i, j).truncate(new_order);
  return r;
}

JetMatrix JetMatrix::inverse() const {
  Eigen::MatrixXcd c(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) c(i, j) = at(i, j).value();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  double smin = svd.singularValues()(n_ - 1);
  double smax = svd.singularValues()(0);
  if (smin <= 1e-13 * std::max(1.0, smax))
    throw SingularityError("jet matrix: singular constant term", smin);
  Eigen::MatrixXcd cinv = c.inverse();

  // G = C (I + E) with E = C^{-1}(G - C) nilpotent at this order;
  // G^{-1} = (sum (-E)^k) C^{-1} via Horner.
  JetMatrix cinv_jet(n_, ctx_, base_);
  JetMatrix identity(n_, ctx_, base_);
  for (int i = 0; i < n_; ++i) {
    identity.at(i, i) = JetSeries::constant(ctx_, base_, 1.0);
    for (int j = 0; j < n_; ++j)
      cinv_jet.at(i, j) = JetSeries::constant(ctx_, base_, cinv(i, j));
  }
  JetMatrix delta = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      delta.at(i, j) -= JetSeries::constant(ctx_, base_, c(i, j));
  JetMatrix e = cinv_jet * delta;
  JetMatrix r = identity;
  for (int k = 0; k < ctx_->order(); ++k) r = identity - e * r;
  return r * cinv_jet;
}

std::vector<Complex> JetMatrix::values() const {
  std::vector<Complex> v(e_.size());
  for (size_t i = 0; i < e_.size(); ++i) v[i] = e_[i].value();
  return v;
}

bool JetMatrix::is_hermitian_field(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      JetSeries diff = at(i, j) - at(j, i).conj();
      if (diff.max_abs_coefficient() > tol) return false;
    }
  return true;
}

}  // namespace qtensor
