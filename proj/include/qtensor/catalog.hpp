// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_CATALOG_HPP
#define QTENSOR_CATALOG_HPP

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "qtensor/jet.hpp"
#include "qtensor/rng.hpp"

namespace qtensor {

using Json = nlohmann::json;

// A named scalar field producing jet values at any chart point and order.
struct ScalarFieldModel {
  std::string name;
  int dim = 0;
  std::function<JetSeries(const Point&, int order)> eval;
};

struct PolyTerm {
  std::vector<int> alpha;  // z exponents
  std::vector<int> beta;   // zbar exponents
  Complex coeff;
};

ScalarFieldModel scalar_zero(int dim);
ScalarFieldModel scalar_const(int dim, Complex value);
// Polynomial in (z, zbar). If symmetrize_real, each term t is emitted as
// (t + conj t)/2 so the field is real.
ScalarFieldModel scalar_poly(int dim, std::vector<PolyTerm> terms,
                             bool symmetrize_real = false);
// Seeded real random polynomial of bounded degree.
ScalarFieldModel scalar_poly_random(int dim, int degree, std::uint64_t seed,
                                    double amplitude = 0.1);
// value = offset + scale * base(named). Known names: zero, re_z1, z1z1bar,
// norm_sq, one_plus_norm_sq, re_z1sq_z2bar, log_norm_sq.
ScalarFieldModel scalar_named(int dim, const std::string& base_name,
                              double scale = 1.0, double offset = 0.0);
ScalarFieldModel scalar_from_json(int dim, const Json& spec);

// The Kaehler-cover potential of an LCK-with-potential model:
// g = c * phi^{-1} dd^bar phi.
struct LckPotential {
  ScalarFieldModel phi;
  double c = 1.0;
};

// A parametrized Hermitian metric field on a single chart.
struct MetricModel {
  std::string name;
  int dim = 0;
  Json spec;  // {name, dim, params, seed}; reproducible serialization
  bool kahler = false;
  std::function<JetMatrix(const Point&, int order)> eval;
  std::function<bool(const Point&)> domain;
  std::function<Point(RandomSource&)> sample;
  std::optional<LckPotential> potential;
};

MetricModel make_flat(int dim);
MetricModel make_fubini_study(int dim);
MetricModel make_hopf(int dim);
MetricModel make_conformal(const MetricModel& base, const ScalarFieldModel& f);
MetricModel make_product(const MetricModel& a, const MetricModel& b);
MetricModel make_polynomial_random(int dim, int degree, std::uint64_t seed,
                                   double amplitude = 0.05);
// Kaehler metric g_{ij} = d_i dbar_j phi for a strictly plurisubharmonic phi.
MetricModel make_kahler_potential(int dim, const ScalarFieldModel& phi);
// Ball metric dd^bar(-log(1 - |z|^2)); negatively curved, used as the
// built-in Q-nonnegativity violator.
MetricModel make_poincare(int dim);

// Pullback of a model under the constant linear coordinate change z = A w.
MetricModel make_linear_change(const MetricModel& base,
                               const Eigen::MatrixXcd& a);

// Model from a serialized spec {name, dim, params, seed}.
MetricModel catalog_get(const Json& spec);

// Hopf chart validity: |z|^2 at least 1e-8.
bool hopf_domain_valid(const Point& p);

// Sample `count` in-domain points of the model, deterministically per seed.
std::vector<Point> sample_points(const MetricModel& model, int count,
                                 std::uint64_t seed);

// A (1,1)-form field rho_{i jbar} with a closedness-by-construction flag.
struct OneOneFormModel {
  std::string name;
  int dim = 0;
  bool closed = false;
  std::function<JetMatrix(const Point&, int order)> eval;
};

// rho = rho0 + multiplier * dd^bar u (componentwise d_i dbar_j u).
OneOneFormModel rho_from_potential(const Eigen::MatrixXcd& rho0,
                                   const ScalarFieldModel& u,
                                   double multiplier = 1.0);
// rho = omega of the model; closed iff the model is Kaehler.
OneOneFormModel rho_from_metric(const MetricModel& m);

// Linear substitution: re-expands the series under old_offset = A * new_offset
// (and conjugates for the zbar block), at a new base point.
JetSeries substitute_linear(const JetSeries& a, const Eigen::MatrixXcd& a_map,
                            const Point& new_base);

}  // namespace qtensor

#endif
