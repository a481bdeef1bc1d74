#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace gptlab {

using Rational = mpq_class;

/// Absolute comparison slack used by floating-point code paths. Exact paths ignore it.
struct Tolerance {
  double abs = 1e-9;
};

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
concept Field = std::is_same_v<S, double> || std::is_same_v<S, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <Field S>
S from_double(double x) {
  if constexpr (is_exact_v<S>) {
    return Rational(x);
  } else {
    return x;
  }
}

template <Field S>
S from_int(long n) {
  if constexpr (is_exact_v<S>) {
    return Rational(n);
  } else {
    return static_cast<double>(n);
  }
}

template <Field S>
S from_ratio(long p, long q) {
  if constexpr (is_exact_v<S>) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  } else {
    return static_cast<double>(p) / static_cast<double>(q);
  }
}

/// -1, 0 or +1; for doubles, values within `tol` of zero count as zero.
template <Field S>
int sign(const S& x, Tolerance tol = {}) {
  if constexpr (is_exact_v<S>) {
    return sgn(x);
  } else {
    if (std::abs(x) <= tol.abs) return 0;
    return x > 0 ? 1 : -1;
  }
}

template <Field S>
bool is_zero(const S& x, Tolerance tol = {}) {
  return sign(x, tol) == 0;
}

template <Field S>
bool approx_eq(const S& a, const S& b, Tolerance tol = {}) {
  return is_zero<S>(a - b, tol);
}

/// a >= b with slack in float mode.
template <Field S>
bool approx_ge(const S& a, const S& b, Tolerance tol = {}) {
  return sign<S>(a - b, tol) >= 0;
}

template <Field S>
bool approx_le(const S& a, const S& b, Tolerance tol = {}) {
  return sign<S>(a - b, tol) <= 0;
}

template <Field S>
S abs_value(const S& x) {
  if constexpr (is_exact_v<S>) {
    return abs(x);
  } else {
    return std::abs(x);
  }
}

inline std::string to_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

/// Parses "p/q", "p", or a decimal literal.
template <Field S>
S parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<S>) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational literal: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    r.canonicalize();
    return r;
  } else {
    auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    double q = std::stod(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + text);
    return std::stod(text.substr(0, slash)) / q;
  }
}

}  // namespace gptlab
