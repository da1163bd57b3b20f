#include "mmrelay/detail/poly.hpp"

#include <algorithm>
#include <cmath>

namespace mmrelay::detail {

double eval(const Poly& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
  return d;
}

Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly scale(const Poly& a, double s) {
  Poly out = a;
  for (auto& c : out) c *= s;
  return out;
}

namespace {

double bisect(const Poly& p, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = eval(p, m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> real_roots(const Poly& p_in, double lo, double hi) {
  Poly p = p_in;
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  std::vector<double> roots;
  if (p.size() <= 1 || lo > hi) return roots;
  if (p.size() == 2) {
    const double r = -p[0] / p[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }

  std::vector<double> knots{lo};
  for (double c : real_roots(derivative(p), lo, hi)) {
    if (c > knots.back()) knots.push_back(c);
  }
  if (hi > knots.back()) knots.push_back(hi);

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    const double fa = eval(p, a);
    const double fb = eval(p, b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      roots.push_back(bisect(p, a, b, fa));
    }
  }
  if (eval(p, knots.back()) == 0.0) roots.push_back(knots.back());

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace mmrelay::detail
