#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "darboux/types.hpp"

namespace darboux {

// Truncated bivariate Taylor series: c(i,j) is the coefficient of x^i y^j,
// kept for total degree i+j <= deg. Arithmetic propagates the valid degree
// (min of the operands), so a chain of operations cannot silently claim
// more derivative information than its inputs carry.
class Jet {
 public:
  static constexpr int kMaxDeg = 6;
  static constexpr int kDim = kMaxDeg + 1;

  Jet() : deg_(kMaxDeg) { c_.fill(0.0); }

  explicit Jet(double v, int deg = kMaxDeg) : deg_(deg) {
    check_deg(deg);
    c_.fill(0.0);
    c_[0] = v;
  }

  // Seed for the coordinate function of the given axis (0 = x, 1 = y).
  static Jet variable(double value, int axis, int deg) {
    Jet j(value, deg);
    if (deg >= 1) {
      if (axis == 0)
        j.at(1, 0) = 1.0;
      else
        j.at(0, 1) = 1.0;
    }
    return j;
  }

  int degree() const { return deg_; }
  double value() const { return c_[0]; }

  double coeff(int i, int j) const { return c_[i * kDim + j]; }
  double& at(int i, int j) { return c_[i * kDim + j]; }

  // The partial derivative d^{i+j} f / dx^i dy^j at the expansion point.
  double partial(int i, int j) const {
    if (i < 0 || j < 0 || i + j > deg_)
      throw std::logic_error("jet: partial order exceeds tracked degree");
    return coeff(i, j) * factorial(i) * factorial(j);
  }

  Jet truncate(int deg) const {
    check_deg(deg);
    Jet r(0.0, std::min(deg, deg_));
    for (int i = 0; i <= r.deg_; ++i)
      for (int j = 0; i + j <= r.deg_; ++j) r.at(i, j) = coeff(i, j);
    return r;
  }

  Jet deriv_x() const {
    if (deg_ == 0) throw std::logic_error("jet: derivative of degree-0 jet");
    Jet r(0.0, deg_ - 1);
    for (int i = 0; i <= r.deg_; ++i)
      for (int j = 0; i + j <= r.deg_; ++j) r.at(i, j) = (i + 1) * coeff(i + 1, j);
    return r;
  }

  Jet deriv_y() const {
    if (deg_ == 0) throw std::logic_error("jet: derivative of degree-0 jet");
    Jet r(0.0, deg_ - 1);
    for (int i = 0; i <= r.deg_; ++i)
      for (int j = 0; i + j <= r.deg_; ++j) r.at(i, j) = (j + 1) * coeff(i, j + 1);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    deg_ = std::min(deg_, o.deg_);
    for (int i = 0; i <= deg_; ++i)
      for (int j = 0; i + j <= deg_; ++j) at(i, j) += o.coeff(i, j);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    deg_ = std::min(deg_, o.deg_);
    for (int i = 0; i <= deg_; ++i)
      for (int j = 0; i + j <= deg_; ++j) at(i, j) -= o.coeff(i, j);
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator+(double b, Jet a) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend Jet operator-(double b, const Jet& a) { return -a + b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(0.0, std::min(a.deg_, b.deg_));
    for (int i = 0; i <= r.deg_; ++i)
      for (int j = 0; i + j <= r.deg_; ++j) {
        double s = 0.0;
        for (int p = 0; p <= i; ++p)
          for (int q = 0; q <= j; ++q) s += a.coeff(p, q) * b.coeff(i - p, j - q);
        r.at(i, j) = s;
      }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.recip(); }
  friend Jet operator/(double a, const Jet& b) { return b.recip() * a; }

  // Composition g(f) where series[k] = g^{(k)}(f.value())/k!.
  Jet compose(const std::array<double, kDim>& series) const {
    Jet w = *this;
    w.c_[0] = 0.0;
    Jet r(series[deg_], deg_);
    for (int k = deg_ - 1; k >= 0; --k) r = r * w + series[k];
    return r;
  }

  Jet recip() const {
    double f0 = value();
    if (f0 == 0.0) throw std::domain_error("jet: reciprocal of zero");
    std::array<double, kDim> s{};
    double t = 1.0 / f0;
    for (int k = 0; k <= deg_; ++k) {
      s[k] = t;
      t *= -1.0 / f0;
    }
    return compose(s);
  }

 private:
  static void check_deg(int deg) {
    if (deg < 0 || deg > kMaxDeg) throw std::logic_error("jet: degree out of range");
  }
  static double factorial(int n) {
    static const double f[kDim] = {1, 1, 2, 6, 24, 120, 720};
    return f[n];
  }

  int deg_;
  std::array<double, kDim * kDim> c_;
};

inline Jet jsqrt(const Jet& f) {
  double f0 = f.value();
  if (!(f0 > 0.0)) throw std::domain_error("jet: sqrt of non-positive value");
  std::array<double, Jet::kDim> s{};
  s[0] = std::sqrt(f0);
  for (int k = 1; k <= f.degree(); ++k) s[k] = s[k - 1] * (1.5 / k - 1.0) / f0;
  return f.compose(s);
}

inline Jet jpow(const Jet& f, double a) {
  double f0 = f.value();
  if (!(f0 > 0.0)) throw std::domain_error("jet: pow of non-positive base");
  std::array<double, Jet::kDim> s{};
  s[0] = std::pow(f0, a);
  for (int k = 1; k <= f.degree(); ++k) s[k] = s[k - 1] * ((a - k + 1) / k) / f0;
  return f.compose(s);
}

inline Jet jexp(const Jet& f) {
  std::array<double, Jet::kDim> s{};
  double e = std::exp(f.value());
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    s[k] = e / fact;
  }
  return f.compose(s);
}

inline Jet jlog(const Jet& f) {
  double f0 = f.value();
  if (!(f0 > 0.0)) throw std::domain_error("jet: log of non-positive value");
  std::array<double, Jet::kDim> s{};
  s[0] = std::log(f0);
  double t = 1.0;
  for (int k = 1; k <= f.degree(); ++k) {
    t *= 1.0 / f0;
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) * t / k;
  }
  return f.compose(s);
}

inline Jet jsin(const Jet& f) {
  std::array<double, Jet::kDim> s{};
  const double sn = std::sin(f.value()), cs = std::cos(f.value());
  const double cyc[4] = {sn, cs, -sn, -cs};
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    s[k] = cyc[k % 4] / fact;
  }
  return f.compose(s);
}

inline Jet jcos(const Jet& f) {
  std::array<double, Jet::kDim> s{};
  const double sn = std::sin(f.value()), cs = std::cos(f.value());
  const double cyc[4] = {cs, -sn, -cs, sn};
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    s[k] = cyc[k % 4] / fact;
  }
  return f.compose(s);
}

inline Jet jsinh(const Jet& f) {
  std::array<double, Jet::kDim> s{};
  const double sh = std::sinh(f.value()), ch = std::cosh(f.value());
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    s[k] = ((k % 2 == 0) ? sh : ch) / fact;
  }
  return f.compose(s);
}

inline Jet jcosh(const Jet& f) {
  std::array<double, Jet::kDim> s{};
  const double sh = std::sinh(f.value()), ch = std::cosh(f.value());
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    s[k] = ((k % 2 == 0) ? ch : sh) / fact;
  }
  return f.compose(s);
}

// Assembles the jet of a function from its value and the jets of its two
// first partials (for fields defined through an exact differential).
inline Jet jet_from_gradient(double value, const Jet& gx, const Jet& gy) {
  int deg = std::min({std::min(gx.degree(), gy.degree()) + 1, Jet::kMaxDeg});
  Jet r(value, deg);
  for (int i = 1; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) r.at(i, j) = gx.coeff(i - 1, j) / i;
  for (int j = 1; j <= deg; ++j) r.at(0, j) = gy.coeff(0, j - 1) / j;
  return r;
}

}  // namespace darboux
