// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_TESTS_FD_ORACLE_HPP
#define QTENSOR_TESTS_FD_ORACLE_HPP

#include <functional>

#include "qtensor/common.hpp"

namespace qtensor::fd {

using Field = std::function<Complex(const Point&)>;

constexpr double kStep = 1e-3;

// Central difference along a real coordinate perturbation, with one level of
// Richardson extrapolation: (4 D(h/2) - D(h)) / 3.
inline Complex central(const Field& f, const Point& p, int var, Complex dir,
                       double h = kStep) {
  auto d = [&](double hh) {
    Point a = p, b = p;
    a[var] += dir * hh;
    b[var] -= dir * hh;
    return (f(a) - f(b)) / (2.0 * hh);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

// Wirtinger derivatives: d = (d_x - i d_y)/2, dbar = (d_x + i d_y)/2.
inline Complex dz(const Field& f, const Point& p, int i, double h = kStep) {
  Complex dx = central(f, p, i, Complex(1.0, 0.0), h);
  Complex dy = central(f, p, i, Complex(0.0, 1.0), h);
  return 0.5 * (dx - Complex(0.0, 1.0) * dy);
}

inline Complex dzbar(const Field& f, const Point& p, int i, double h = kStep) {
  Complex dx = central(f, p, i, Complex(1.0, 0.0), h);
  Complex dy = central(f, p, i, Complex(0.0, 1.0), h);
  return 0.5 * (dx + Complex(0.0, 1.0) * dy);
}

// Field-valued versions, composable for mixed higher derivatives.
inline Field dz_field(Field f, int i, double h = kStep) {
  return [f = std::move(f), i, h](const Point& p) { return dz(f, p, i, h); };
}

inline Field dzbar_field(Field f, int i, double h = kStep) {
  return [f = std::move(f), i, h](const Point& p) { return dzbar(f, p, i, h); };
}

}  // namespace qtensor::fd

#endif
