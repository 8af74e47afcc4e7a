#pragma once

#include <vector>

#include "qmax/rational.hpp"

namespace qmax {

// Truncated formal power series: exact arithmetic through a fixed degree.
// Operands must share the same order; every access past the truncation
// degree throws rather than silently extending or clipping.
template <class T>
class Series {
 public:
  explicit Series(int order) : c_(check_order(order) + 1, T(0)) {}

  static Series constant(const T& v, int order) {
    Series s(order);
    s.c_[0] = v;
    return s;
  }

  static Series monomial(const T& v, int degree, int order) {
    Series s(order);
    s.at(degree) = v;
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }

  T& at(int k) {
    range_check(k);
    return c_[k];
  }
  const T& at(int k) const {
    range_check(k);
    return c_[k];
  }
  const T& operator[](int k) const { return at(k); }

  bool operator==(const Series& o) const { return c_ == o.c_; }

  Series operator-() const {
    Series r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Series operator+(const Series& o) const {
    Series r = aligned(o);
    for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
  }

  Series operator-(const Series& o) const {
    Series r = aligned(o);
    for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
  }

  Series operator*(const Series& o) const {
    Series r = aligned(o);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == T(0)) continue;
      for (size_t j = 0; i + j < c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
    }
    return r;
  }

  // Cauchy division; the divisor needs an invertible constant term.
  Series operator/(const Series& o) const {
    Series r = aligned(o);
    if (o.c_[0] == T(0))
      throw numeric_error("series division requires a nonzero constant term");
    for (size_t k = 0; k < c_.size(); ++k) {
      T acc = c_[k];
      for (size_t j = 1; j <= k; ++j) acc -= o.c_[j] * r.c_[k - j];
      r.c_[k] = acc / o.c_[0];
    }
    return r;
  }

  Series operator*(const T& s) const {
    Series r = *this;
    for (auto& v : r.c_) v = v * s;
    return r;
  }

  Series pow(unsigned e) const {
    Series acc = constant(T(1), order());
    Series base = *this;
    while (e) {
      if (e & 1u) acc = acc * base;
      base = base * base;
      e >>= 1u;
    }
    return acc;
  }

  const std::vector<T>& coeffs() const { return c_; }

 private:
  static int check_order(int order) {
    if (order < 0) throw validation_error("series order must be >= 0");
    return order;
  }
  void range_check(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size()))
      throw numeric_error("series coefficient index past truncation degree");
  }
  Series aligned(const Series& o) const {
    if (o.c_.size() != c_.size())
      throw numeric_error("series operands have mismatched truncation degrees");
    return Series(order());
  }

  std::vector<T> c_;
};

// 1/(1 - lambda) = 1 + lambda + lambda^2 + ...
template <class T>
Series<T> geometric_series(int order) {
  Series<T> s(order);
  for (int k = 0; k <= order; ++k) s.at(k) = T(1);
  return s;
}

}  // namespace qmax
