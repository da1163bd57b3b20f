#pragma once

// Small dense polynomials (ascending coefficients) and real-root isolation on
// an interval via the derivative cascade: the roots of p' split [lo, hi] into
// monotone pieces, each holding at most one root of p.

#include <vector>

namespace mmrelay::detail {

using Poly = std::vector<double>;

double eval(const Poly& p, double x);
Poly derivative(const Poly& p);
Poly multiply(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b);
Poly scale(const Poly& a, double s);

/// Sorted real roots of p in [lo, hi]. Even-multiplicity roots that do not
/// change sign are only found when p evaluates to exactly zero there.
std::vector<double> real_roots(const Poly& p, double lo, double hi);

}  // namespace mmrelay::detail
