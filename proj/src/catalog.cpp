// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/catalog.hpp"

#include <cmath>
#include <utility>

namespace qtensor {
namespace {

constexpr double kHopfOriginThreshold = 1e-8;

JetSeries jet_monomial(const JetContextPtr& ctx, const Point& p,
                       const std::vector<int>& alpha,
                       const std::vector<int>& beta) {
  JetSeries r = JetSeries::constant(ctx, p, 1.0);
  for (size_t i = 0; i < alpha.size(); ++i) {
    JetSeries zi = JetSeries::coordinate(ctx, p, static_cast<int>(i));
    for (int k = 0; k < alpha[i]; ++k) r = r * zi;
  }
  for (size_t i = 0; i < beta.size(); ++i) {
    JetSeries zbi = JetSeries::coordinate_conj(ctx, p, static_cast<int>(i));
    for (int k = 0; k < beta[i]; ++k) r = r * zbi;
  }
  return r;
}

JetSeries norm_sq_jet(const JetContextPtr& ctx, const Point& p) {
  JetSeries s(ctx, p);
  for (int i = 0; i < ctx->complex_vars(); ++i) {
    s += JetSeries::coordinate(ctx, p, i) * JetSeries::coordinate_conj(ctx, p, i);
  }
  return s;
}

double norm_sq(const Point& p) {
  double s = 0.0;
  for (const auto& z : p) s += std::norm(z);
  return s;
}

Eigen::MatrixXcd constant_term(const JetMatrix& g) {
  Eigen::MatrixXcd c(g.dim(), g.dim());
  auto v = g.values();
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) c(i, j) = v[i * g.dim() + j];
  return c;
}

// Enforces the catalog invariant: g Hermitian positive-definite at the point.
JetMatrix checked_metric(JetMatrix g, const std::string& name) {
  Eigen::MatrixXcd c = constant_term(g);
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw DataError(name + ": metric constant term is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  if (es.eigenvalues()(0) <= 0.0)
    throw DomainError(name + ": metric is not positive definite at this point (min eigenvalue " +
                      std::to_string(es.eigenvalues()(0)) + ")");
  return g;
}

// Re-index a jet in m variables into a product chart with n >= m complex
// variables, placing its coordinates at `offset`.
JetSeries embed_jet(const JetSeries& a, const JetContextPtr& big_ctx,
                    const Point& big_base, int offset) {
  const int m = a.context()->complex_vars();
  const int n = big_ctx->complex_vars();
  JetSeries r(big_ctx, big_base);
  for (int idx = 0; idx < a.context()->size(); ++idx) {
    const Exponents& e = a.context()->exponents(idx);
    Exponents s{};
    for (int i = 0; i < m; ++i) {
      s[offset + i] = e[i];
      s[n + offset + i] = e[m + i];
    }
    int dst = big_ctx->index_of(s);
    if (dst >= 0) r.coefficient(dst) += a.coefficient(idx);
  }
  return r;
}

std::vector<int> zeros(int n) { return std::vector<int>(n, 0); }

Point polydisk_sample(int dim, double radius, RandomSource& rng) {
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = rng.disk(radius);
  return p;
}

Point shell_sample(int dim, RandomSource& rng) {
  // Gaussian direction, uniform radius on the scale-invariance shell.
  Point p(dim);
  double s = 0.0;
  do {
    for (int i = 0; i < dim; ++i) p[i] = rng.complex_gaussian();
    s = std::sqrt(norm_sq(p));
  } while (s < 1e-6);
  double r = rng.uniform(0.5, 2.0);
  for (auto& z : p) z *= r / s;
  return p;
}

}  // namespace

JetSeries substitute_linear(const JetSeries& a, const Eigen::MatrixXcd& a_map,
                            const Point& new_base) {
  const auto& ctx = a.context();
  const int n = ctx->complex_vars();
  // jets of the old offset variables in the new chart
  std::vector<JetSeries> old_var(2 * n, JetSeries(ctx, new_base));
  for (int i = 0; i < n; ++i) {
    JetSeries zi(ctx, new_base);
    JetSeries zbi(ctx, new_base);
    for (int b = 0; b < n; ++b) {
      Exponents ez{};
      ez[b] = 1;
      Exponents ezb{};
      ezb[n + b] = 1;
      zi.coefficient(ctx->index_of(ez)) += a_map(i, b);
      zbi.coefficient(ctx->index_of(ezb)) += std::conj(a_map(i, b));
    }
    old_var[i] = zi;
    old_var[n + i] = zbi;
  }
  // powers memo
  const int K = ctx->order();
  std::vector<std::vector<JetSeries>> pow(2 * n);
  for (int v = 0; v < 2 * n; ++v) {
    pow[v].push_back(JetSeries::constant(ctx, new_base, 1.0));
    for (int k = 1; k <= K; ++k) pow[v].push_back(pow[v][k - 1] * old_var[v]);
  }
  JetSeries r(ctx, new_base);
  for (int idx = 0; idx < ctx->size(); ++idx) {
    Complex c = a.coefficient(idx);
    if (c == Complex(0.0)) continue;
    const Exponents& e = ctx->exponents(idx);
    JetSeries term = JetSeries::constant(ctx, new_base, c);
    for (int v = 0; v < 2 * n; ++v)
      if (e[v] > 0) term = term * pow[v][e[v]];
    r += term;
  }
  return r;
}

ScalarFieldModel scalar_zero(int dim) {
  return {"zero", dim, [dim](const Point& p, int order) {
            return JetSeries(JetContext::get(dim, order), p);
          }};
}

ScalarFieldModel scalar_const(int dim, Complex value) {
  return {"const", dim, [dim, value](const Point& p, int order) {
            return JetSeries::constant(JetContext::get(dim, order), p, value);
          }};
}

ScalarFieldModel scalar_poly(int dim, std::vector<PolyTerm> terms,
                             bool symmetrize_real) {
  for (const auto& t : terms)
    if (static_cast<int>(t.alpha.size()) != dim ||
        static_cast<int>(t.beta.size()) != dim)
      throw UsageError("scalar_poly: term multi-index dimension mismatch");
  auto eval = [dim, terms = std::move(terms), symmetrize_real](const Point& p,
                                                               int order) {
    auto ctx = JetContext::get(dim, order);
    JetSeries r(ctx, p);
    for (const auto& t : terms) {
      JetSeries m = jet_monomial(ctx, p, t.alpha, t.beta) * t.coeff;
      if (symmetrize_real)
        r += (m + m.conj()) * 0.5;
      else
        r += m;
    }
    return r;
  };
  return {"poly", dim, eval};
}

ScalarFieldModel scalar_poly_random(int dim, int degree, std::uint64_t seed,
                                    double amplitude) {
  if (degree < 1) throw UsageError("scalar_poly_random: degree must be >= 1");
  RandomSource rng(derive_seed(seed, 0x5ca1a));
  auto big = JetContext::get(dim, degree);
  std::vector<PolyTerm> terms;
  for (int idx = 1; idx < big->size(); ++idx) {
    const Exponents& e = big->exponents(idx);
    PolyTerm t;
    t.alpha = zeros(dim);
    t.beta = zeros(dim);
    for (int i = 0; i < dim; ++i) {
      t.alpha[i] = e[i];
      t.beta[i] = e[dim + i];
    }
    t.coeff = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    terms.push_back(t);
  }
  double l1 = 0.0;
  for (const auto& t : terms) l1 += std::abs(t.coeff);
  if (l1 > 0.0)
    for (auto& t : terms) t.coeff *= amplitude / l1;
  ScalarFieldModel m = scalar_poly(dim, std::move(terms), /*symmetrize_real=*/true);
  m.name = "poly_random";
  return m;
}

ScalarFieldModel scalar_named(int dim, const std::string& base_name,
                              double scale, double offset) {
  std::function<JetSeries(const Point&, int)> base;
  if (base_name == "zero") {
    base = scalar_zero(dim).eval;
  } else if (base_name == "re_z1") {
    base = [dim](const Point& p, int order) {
      auto ctx = JetContext::get(dim, order);
      JetSeries z1 = JetSeries::coordinate(ctx, p, 0);
      return (z1 + z1.conj()) * 0.5;
    };
  } else if (base_name == "z1z1bar") {
    base = [dim](const Point& p, int order) {
      auto ctx = JetContext::get(dim, order);
      return JetSeries::coordinate(ctx, p, 0) *
             JetSeries::coordinate_conj(ctx, p, 0);
    };
  } else if (base_name == "norm_sq") {
    base = [dim](const Point& p, int order) {
      return norm_sq_jet(JetContext::get(dim, order), p);
    };
  } else if (base_name == "one_plus_norm_sq") {
    base = [dim](const Point& p, int order) {
      auto ctx = JetContext::get(dim, order);
      return norm_sq_jet(ctx, p) + JetSeries::constant(ctx, p, 1.0);
    };
  } else if (base_name == "re_z1sq_z2bar") {
    if (dim < 2) throw UsageError("re_z1sq_z2bar needs dim >= 2");
    base = [dim](const Point& p, int order) {
      auto ctx = JetContext::get(dim, order);
      JetSeries m = JetSeries::coordinate(ctx, p, 0) *
                    JetSeries::coordinate(ctx, p, 0) *
                    JetSeries::coordinate_conj(ctx, p, 1);
      return (m + m.conj()) * 0.5;
    };
  } else if (base_name == "log_norm_sq") {
    base = [dim](const Point& p, int order) {
      if (norm_sq(p) < kHopfOriginThreshold)
        throw DomainError("log_norm_sq: point too close to the origin");
      return norm_sq_jet(JetContext::get(dim, order), p).log();
    };
  } else {
    throw UsageError("unknown scalar field name: " + base_name);
  }
  auto eval = [dim, base, scale, offset](const Point& p, int order) {
    JetSeries b = base(p, order);
    return b * Complex(scale) +
           JetSeries::constant(b.context(), p, Complex(offset));
  };
  return {base_name, dim, eval};
}

ScalarFieldModel scalar_from_json(int dim, const Json& spec) {
  if (spec.is_string()) return scalar_named(dim, spec.get<std::string>());
  std::string kind = spec.value("kind", "named");
  double scale = spec.value("scale", 1.0);
  double offset = spec.value("offset", 0.0);
  if (kind == "named")
    return scalar_named(dim, spec.at("name").get<std::string>(), scale, offset);
  if (kind == "zero") return scalar_zero(dim);
  if (kind == "const") return scalar_const(dim, Complex(spec.value("value", 0.0)));
  if (kind == "poly") {
    std::vector<PolyTerm> terms;
    for (const auto& t : spec.at("terms")) {
      PolyTerm pt;
      pt.alpha = t.at("alpha").get<std::vector<int>>();
      pt.beta = t.at("beta").get<std::vector<int>>();
      pt.coeff = Complex(t.value("re", 0.0), t.value("im", 0.0));
      terms.push_back(pt);
    }
    return scalar_poly(dim, std::move(terms), spec.value("real", false));
  }
  if (kind == "poly_random")
    return scalar_poly_random(dim, spec.value("degree", 2),
                              spec.value("seed", 1ULL),
                              spec.value("amplitude", 0.1));
  throw UsageError("unknown scalar field kind: " + kind);
}

bool hopf_domain_valid(const Point& p) {
  return norm_sq(p) >= kHopfOriginThreshold;
}

MetricModel make_flat(int dim) {
  MetricModel m;
  m.name = "flat";
  m.dim = dim;
  m.spec = {{"name", "flat"}, {"dim", dim}};
  m.kahler = true;
  m.eval = [dim](const Point& p, int order) {
    auto ctx = JetContext::get(dim, order);
    JetMatrix g(dim, ctx, p);
    for (int i = 0; i < dim; ++i)
      g.at(i, i) = JetSeries::constant(ctx, p, 1.0);
    return g;
  };
  m.domain = [](const Point&) { return true; };
  m.sample = [dim](RandomSource& rng) { return polydisk_sample(dim, 1.0, rng); };
  return m;
}

MetricModel make_kahler_potential(int dim, const ScalarFieldModel& phi) {
  if (phi.dim != dim) throw UsageError("kahler_potential: potential dimension mismatch");
  MetricModel m;
  m.name = "kahler_potential(" + phi.name + ")";
  m.dim = dim;
  m.spec = {{"name", "kahler_potential"}, {"dim", dim}};
  m.kahler = true;
  auto eval_phi = phi.eval;
  auto name = m.name;
  m.eval = [dim, eval_phi, name](const Point& p, int order) {
    JetSeries f = eval_phi(p, order + 2);
    auto ctx = JetContext::get(dim, order);
    JetMatrix g(dim, ctx, p);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        g.at(i, j) = f.derive_z(i).derive_zbar(j);
    return checked_metric(std::move(g), name);
  };
  m.domain = [](const Point&) { return true; };
  m.sample = [dim](RandomSource& rng) { return polydisk_sample(dim, 0.5, rng); };
  return m;
}

MetricModel make_fubini_study(int dim) {
  ScalarFieldModel phi = scalar_named(dim, "one_plus_norm_sq");
  ScalarFieldModel logphi{"log_one_plus_norm_sq", dim,
                          [phi](const Point& p, int order) {
                            return phi.eval(p, order).log();
                          }};
  MetricModel m = make_kahler_potential(dim, logphi);
  m.name = "fubini_study";
  m.spec = {{"name", "fubini_study"}, {"dim", dim}};
  m.sample = [dim](RandomSource& rng) { return polydisk_sample(dim, 1.0, rng); };
  return m;
}

MetricModel make_hopf(int dim) {
  if (dim < 2) throw UsageError("hopf: complex dimension must be >= 2");
  MetricModel m;
  m.name = "hopf";
  m.dim = dim;
  m.spec = {{"name", "hopf"}, {"dim", dim}};
  m.kahler = false;
  m.eval = [dim](const Point& p, int order) {
    if (!hopf_domain_valid(p))
      throw DomainError("hopf: point excluded (|z|^2 below origin threshold)");
    auto ctx = JetContext::get(dim, order);
    JetSeries w = norm_sq_jet(ctx, p).inverse() * 4.0;
    JetMatrix g(dim, ctx, p);
    for (int i = 0; i < dim; ++i) g.at(i, i) = w;
    return g;
  };
  m.domain = hopf_domain_valid;
  m.sample = [dim](RandomSource& rng) { return shell_sample(dim, rng); };
  m.potential = LckPotential{scalar_named(dim, "norm_sq"), 4.0};
  return m;
}

MetricModel make_conformal(const MetricModel& base, const ScalarFieldModel& f) {
  if (f.dim != base.dim) throw UsageError("conformal: factor dimension mismatch");
  MetricModel m;
  m.name = "conformal(" + base.name + ")";
  m.dim = base.dim;
  m.spec = {{"name", "conformal"},
            {"dim", base.dim},
            {"params", {{"base", base.spec}, {"f", f.name}}}};
  m.kahler = false;  // conformal factors generically break the Kaehler property
  auto base_eval = base.eval;
  auto f_eval = f.eval;
  auto name = m.name;
  m.eval = [base_eval, f_eval, name](const Point& p, int order) {
    JetMatrix g = base_eval(p, order);
    JetSeries w = f_eval(p, order).exp();
    return checked_metric(g.scaled(w), name);
  };
  m.domain = base.domain;
  m.sample = base.sample;
  return m;
}

MetricModel make_product(const MetricModel& a, const MetricModel& b) {
  MetricModel m;
  m.name = "product(" + a.name + "," + b.name + ")";
  m.dim = a.dim + b.dim;
  if (m.dim > kMaxComplexVars)
    throw UsageError("product: total dimension exceeds the supported maximum");
  m.spec = {{"name", "product"},
            {"dim", m.dim},
            {"params", {{"factors", Json::array({a.spec, b.spec})}}}};
  m.kahler = a.kahler && b.kahler;
  const int na = a.dim, nb = b.dim, n = m.dim;
  auto ea = a.eval, eb = b.eval;
  m.eval = [na, nb, n, ea, eb](const Point& p, int order) {
    Point pa(p.begin(), p.begin() + na);
    Point pb(p.begin() + na, p.end());
    JetMatrix ga = ea(pa, order);
    JetMatrix gb = eb(pb, order);
    auto ctx = JetContext::get(n, order);
    JetMatrix g(n, ctx, p);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < na; ++j)
        g.at(i, j) = embed_jet(ga.at(i, j), ctx, p, 0);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        g.at(na + i, na + j) = embed_jet(gb.at(i, j), ctx, p, na);
    return g;
  };
  auto da = a.domain, db = b.domain;
  m.domain = [na, da, db](const Point& p) {
    Point pa(p.begin(), p.begin() + na);
    Point pb(p.begin() + na, p.end());
    return da(pa) && db(pb);
  };
  auto sa = a.sample, sb = b.sample;
  m.sample = [sa, sb](RandomSource& rng) {
    Point pa = sa(rng);
    Point pb = sb(rng);
    pa.insert(pa.end(), pb.begin(), pb.end());
    return pa;
  };
  return m;
}

MetricModel make_polynomial_random(int dim, int degree, std::uint64_t seed,
                                   double amplitude) {
  if (degree < 1 || degree > 3)
    throw UsageError("polynomial_random: degree must be in [1, 3]");
  if (amplitude <= 0.0 || amplitude >= 0.5)
    throw UsageError("polynomial_random: amplitude must be in (0, 0.5)");
  // One random Hermitian polynomial perturbation per entry pair; coefficients
  // scaled so every Gershgorin row sum on the unit polydisk stays below
  // `amplitude`, which keeps g positive definite there.
  auto big = JetContext::get(dim, degree);
  struct EntryTerm {
    int i, j;
    PolyTerm t;
  };
  RandomSource rng(derive_seed(seed, 0x9e7));
  std::vector<EntryTerm> terms;
  const double per_entry = amplitude / dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      std::vector<PolyTerm> entry;
      double l1 = 0.0;
      for (int idx = 1; idx < big->size(); ++idx) {
        const Exponents& e = big->exponents(idx);
        PolyTerm t;
        t.alpha = zeros(dim);
        t.beta = zeros(dim);
        for (int v = 0; v < dim; ++v) {
          t.alpha[v] = e[v];
          t.beta[v] = e[dim + v];
        }
        t.coeff = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        l1 += std::abs(t.coeff);
        entry.push_back(t);
      }
      for (auto& t : entry) {
        t.coeff *= per_entry / l1;
        terms.push_back({i, j, t});
      }
    }
  }
  // build-time PD bound check
  std::vector<double> row_sum(dim, 0.0);
  for (const auto& et : terms) {
    // diagonal entries are symmetrized below, which preserves the l1 bound
    row_sum[et.i] += std::abs(et.t.coeff);
    if (et.i != et.j) row_sum[et.j] += std::abs(et.t.coeff);
  }
  for (int i = 0; i < dim; ++i)
    if (row_sum[i] >= 1.0)
      throw DataError("polynomial_random: perturbation rejected, PD bound violated");

  MetricModel m;
  m.name = "polynomial_random";
  m.dim = dim;
  m.spec = {{"name", "polynomial_random"},
            {"dim", dim},
            {"params", {{"degree", degree}, {"amplitude", amplitude}}},
            {"seed", seed}};
  m.kahler = false;
  auto name = m.name;
  m.eval = [dim, terms, name](const Point& p, int order) {
    auto ctx = JetContext::get(dim, order);
    JetMatrix g(dim, ctx, p);
    for (int i = 0; i < dim; ++i)
      g.at(i, i) = JetSeries::constant(ctx, p, 1.0);
    for (const auto& et : terms) {
      JetSeries mono = jet_monomial(ctx, p, et.t.alpha, et.t.beta) * et.t.coeff;
      if (et.i == et.j) {
        g.at(et.i, et.i) += (mono + mono.conj()) * 0.5;
      } else {
        g.at(et.i, et.j) += mono;
        g.at(et.j, et.i) += mono.conj();
      }
    }
    return checked_metric(std::move(g), name);
  };
  m.domain = [dim](const Point& p) {
    for (const auto& z : p)
      if (std::abs(z) > 1.0) return false;
    return true;
  };
  m.sample = [dim](RandomSource& rng) { return polydisk_sample(dim, 0.8, rng); };
  return m;
}

MetricModel make_poincare(int dim) {
  ScalarFieldModel phi{"neg_log_one_minus_norm_sq", dim,
                       [dim](const Point& p, int order) {
                         auto ctx = JetContext::get(dim, order);
                         JetSeries s = JetSeries::constant(ctx, p, 1.0) -
                                       norm_sq_jet(ctx, p);
                         if (std::abs(s.value()) < 1e-8 || s.value().real() <= 0.0)
                           throw DomainError("poincare: point outside the unit ball");
                         return -s.log();
                       }};
  MetricModel m = make_kahler_potential(dim, phi);
  m.name = "poincare";
  m.spec = {{"name", "poincare"}, {"dim", dim}};
  m.domain = [](const Point& p) { return norm_sq(p) < 0.81; };
  m.sample = [dim](RandomSource& rng) {
    Point p;
    do {
      p = polydisk_sample(dim, 0.5, rng);
    } while (norm_sq(p) >= 0.6);
    return p;
  };
  return m;
}

MetricModel make_linear_change(const MetricModel& base,
                               const Eigen::MatrixXcd& a) {
  const int n = base.dim;
  if (a.rows() != n || a.cols() != n)
    throw UsageError("linear_change: matrix dimension mismatch");
  if (std::abs(a.determinant()) < 1e-10)
    throw UsageError("linear_change: coordinate change must be invertible");
  MetricModel m;
  m.name = "linear_change(" + base.name + ")";
  m.dim = n;
  m.spec = base.spec;
  m.kahler = base.kahler;
  auto base_eval = base.eval;
  Eigen::MatrixXcd amat = a;
  m.eval = [n, base_eval, amat](const Point& w, int order) {
    Point z(n);
    for (int i = 0; i < n; ++i) {
      z[i] = 0.0;
      for (int j = 0; j < n; ++j) z[i] += amat(i, j) * w[j];
    }
    JetMatrix gz = base_eval(z, order);
    auto ctx = gz.context();
    JetMatrix g(n, ctx, w);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        JetSeries s = substitute_linear(gz.at(p, q), amat, w);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            g.at(i, j) += s * (amat(p, i) * std::conj(amat(q, j)));
      }
    return g;
  };
  auto base_domain = base.domain;
  m.domain = [n, base_domain, amat](const Point& w) {
    Point z(n);
    for (int i = 0; i < n; ++i) {
      z[i] = 0.0;
      for (int j = 0; j < n; ++j) z[i] += amat(i, j) * w[j];
    }
    return base_domain(z);
  };
  auto base_sample = base.sample;
  Eigen::MatrixXcd ainv = a.inverse();
  m.sample = [n, base_sample, ainv](RandomSource& rng) {
    Point z = base_sample(rng);
    Point w(n);
    for (int i = 0; i < n; ++i) {
      w[i] = 0.0;
      for (int j = 0; j < n; ++j) w[i] += ainv(i, j) * z[j];
    }
    return w;
  };
  return m;
}

MetricModel catalog_get(const Json& spec) {
  if (!spec.contains("name")) throw UsageError("model spec: missing name");
  std::string name = spec.at("name").get<std::string>();
  int dim = spec.value("dim", 2);
  std::uint64_t seed = spec.value("seed", 1ULL);
  Json params = spec.value("params", Json::object());
  if (dim < 1 || dim > kMaxComplexVars)
    throw UsageError("model spec: dim must be in [1, 4]");

  if (name == "flat") return make_flat(dim);
  if (name == "fubini_study") return make_fubini_study(dim);
  if (name == "hopf") return make_hopf(dim);
  if (name == "poincare") return make_poincare(dim);
  if (name == "polynomial_random")
    return make_polynomial_random(dim, params.value("degree", 3), seed,
                                  params.value("amplitude", 0.05));
  if (name == "conformal") {
    MetricModel base = catalog_get(params.at("base"));
    ScalarFieldModel f = scalar_from_json(base.dim, params.at("f"));
    return make_conformal(base, f);
  }
  if (name == "product") {
    const auto& factors = params.at("factors");
    if (factors.size() != 2) throw UsageError("product: expected two factors");
    return make_product(catalog_get(factors[0]), catalog_get(factors[1]));
  }
  if (name == "kahler_potential") {
    ScalarFieldModel phi = scalar_from_json(dim, params.at("phi"));
    return make_kahler_potential(dim, phi);
  }
  throw UsageError("unknown model name: " + name);
}

std::vector<Point> sample_points(const MetricModel& model, int count,
                                 std::uint64_t seed) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    RandomSource rng(derive_seed(seed, 0x90125, static_cast<std::uint64_t>(i)));
    Point p = model.sample(rng);
    int guard = 0;
    while (!model.domain(p) && guard++ < 100) p = model.sample(rng);
    if (!model.domain(p))
      throw DataError("sample_points: could not find an in-domain point");
    pts.push_back(p);
  }
  return pts;
}

OneOneFormModel rho_from_potential(const Eigen::MatrixXcd& rho0,
                                   const ScalarFieldModel& u,
                                   double multiplier) {
  const int n = u.dim;
  if (rho0.rows() != n || rho0.cols() != n)
    throw UsageError("rho_from_potential: rho0 dimension mismatch");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw UsageError("rho_from_potential: rho0 must be Hermitian");
  OneOneFormModel m;
  m.name = "rho(" + u.name + ")";
  m.dim = n;
  m.closed = true;
  Eigen::MatrixXcd r0 = rho0;
  auto ueval = u.eval;
  m.eval = [n, r0, ueval, multiplier](const Point& p, int order) {
    if (order + 2 > kMaxJetOrder)
      throw UsageError("rho_from_potential: requested order needs a potential jet beyond the supported maximum");
    JetSeries f = ueval(p, order + 2) * Complex(multiplier);
    auto ctx = JetContext::get(n, order);
    JetMatrix rho(n, ctx, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rho.at(i, j) = f.derive_z(i).derive_zbar(j) +
                       JetSeries::constant(ctx, p, r0(i, j));
    return rho;
  };
  return m;
}

OneOneFormModel rho_from_metric(const MetricModel& m) {
  OneOneFormModel r;
  r.name = "omega(" + m.name + ")";
  r.dim = m.dim;
  r.closed = m.kahler;
  r.eval = m.eval;
  return r;
}

}  // namespace qtensor
