#include "pyspecies/combinatorics.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "pyspecies/errors.hpp"
#include "pyspecies/special_functions.hpp"

namespace pyspecies {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

}  // namespace

SignedLog SignedLog::from_value(double v) {
  if (v == 0.0) return {};
  return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignedLog operator+(SignedLog x, SignedLog y) {
  if (x.sign == 0) return y;
  if (y.sign == 0) return x;
  if (x.log_abs < y.log_abs) std::swap(x, y);
  const double d = y.log_abs - x.log_abs;  // <= 0
  if (x.sign == y.sign) return {x.log_abs + std::log1p(std::exp(d)), x.sign};
  if (d == 0.0) return {};
  return {x.log_abs + std::log1p(-std::exp(d)), x.sign};
}

SignedLog operator*(SignedLog x, SignedLog y) {
  if (x.sign == 0 || y.sign == 0) return {};
  return {x.log_abs + y.log_abs, x.sign * y.sign};
}

double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
  double mx = neg_inf;
  for (double x : xs) mx = std::max(mx, x);
  if (mx == neg_inf) return neg_inf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

double log_rising_factorial(double a, std::int64_t u) {
  if (u < 0) throw DomainError("log_rising_factorial: negative order");
  if (u == 0) return 0.0;
  if (!(a > 0.0))
    throw DomainError("log_rising_factorial: factor a = " + std::to_string(a) +
                      " is not positive");
  if (u <= 4096) {
    long double s = 0.0L;
    for (std::int64_t i = 0; i < u; ++i) s += std::log(static_cast<long double>(a) + i);
    return static_cast<double>(s);
  }
  return log_gamma(a + static_cast<double>(u)) - log_gamma(a);
}

double log_rising_ratio(double x, double delta, std::int64_t m) {
  if (m <= 0) return 0.0;
  if (!(x > 0.0) || !(x + delta > 0.0))
    throw DomainError("log_rising_ratio: factors must be positive");
  if (m <= 1000000) {
    long double s = 0.0L;
    for (std::int64_t i = 0; i < m; ++i)
      s += std::log1p(static_cast<long double>(delta) / (static_cast<long double>(x) + i));
    return static_cast<double>(s);
  }
  const double md = static_cast<double>(m);
  return (log_gamma(x + delta + md) - log_gamma(x + md)) -
         (log_gamma(x + delta) - log_gamma(x));
}

bool generalized_factorial_recurrence_is_positive(int u_max, double a, double b) {
  if (u_max <= 0) return true;
  // min over 0 <= v <= u < u_max of (u - v a - b), attained at v = u.
  const double slope = 1.0 - a;
  const double worst = slope >= 0 ? -b : (u_max - 1) * slope - b;
  return worst >= 0.0;
}

namespace {

struct QuadSignedLog {
  __float128 log_abs;
  int sign;
};

// (x)_(u) for real x in quad precision, as sign and log-magnitude.
QuadSignedLog quad_rising(__float128 x, int u) {
  QuadSignedLog r{0, 1};
  for (int i = 0; i < u; ++i) {
    const __float128 f = x + i;
    if (f == 0) return {0, 0};
    if (f < 0) r.sign = -r.sign;
    r.log_abs += logq(fabsq(f));
  }
  return r;
}

// Explicit sum for one (u, v) given the precomputed (-j a - b)_(u).
SignedLog explicit_entry(int v, const std::vector<QuadSignedLog>& rising, double log_scale) {
  __float128 log_vfact = lgammaq(static_cast<__float128>(v) + 1);
  std::vector<QuadSignedLog> terms;
  terms.reserve(v + 1);
  __float128 mx = -HUGE_VALQ;
  for (int j = 0; j <= v; ++j) {
    if (rising[j].sign == 0) continue;
    const __float128 log_binom = lgammaq(static_cast<__float128>(v) + 1) -
                                 lgammaq(static_cast<__float128>(j) + 1) -
                                 lgammaq(static_cast<__float128>(v - j) + 1);
    const int sgn = (j % 2 == 0 ? 1 : -1) * rising[j].sign;
    const QuadSignedLog t{log_binom + rising[j].log_abs - log_vfact, sgn};
    mx = t.log_abs > mx ? t.log_abs : mx;
    terms.push_back(t);
  }
  if (terms.empty()) return {};
  // Neumaier summation of the rescaled terms.
  __float128 sum = 0;
  __float128 comp = 0;
  for (const auto& t : terms) {
    const __float128 x = t.sign * expq(t.log_abs - mx);
    const __float128 s = sum + x;
    if (fabsq(sum) >= fabsq(x))
      comp += (sum - s) + x;
    else
      comp += (x - s) + sum;
    sum = s;
  }
  sum += comp;
  if (sum == 0) return {};
  return {static_cast<double>(mx + logq(fabsq(sum))) - log_scale, sum > 0 ? 1 : -1};
}

std::vector<SignedLog> explicit_row(int u, double a, double b, bool scaled) {
  std::vector<QuadSignedLog> rising(u + 1);
  for (int j = 0; j <= u; ++j)
    rising[j] = quad_rising(-static_cast<__float128>(j) * a - b, u);
  std::vector<SignedLog> row(u + 1);
  for (int v = 0; v <= u; ++v) {
    const double log_scale = scaled ? v * std::log(a) : 0.0;
    row[v] = explicit_entry(v, rising, log_scale);
  }
  return row;
}

// Advance a nonnegative row (stored as logs) from u to u + 1.
void advance_positive_row(std::vector<double>& row, int u, double a, double b, bool scaled) {
  const double log_a = scaled ? 0.0 : (a > 0 ? std::log(a) : neg_inf);
  row.push_back(neg_inf);
  for (int v = u + 1; v >= 0; --v) {
    const double mult = u - v * a - b;
    const double stay = (v <= u && mult > 0) ? std::log(mult) + row[v] : neg_inf;
    const double step = v >= 1 ? log_a + row[v - 1] : neg_inf;
    row[v] = log_add(stay, step);
  }
}

}  // namespace

std::vector<SignedLog> generalized_factorial_row(int u, double a, double b, bool scaled) {
  if (u < 0) throw DomainError("generalized_factorial_row: negative index");
  if (a < 0) throw DomainError("generalized_factorial_row: a must be >= 0");
  if (generalized_factorial_recurrence_is_positive(u, a, b)) {
    std::vector<double> row{0.0};
    row.reserve(u + 1);
    for (int i = 0; i < u; ++i) advance_positive_row(row, i, a, b, scaled);
    std::vector<SignedLog> out(u + 1);
    for (int v = 0; v <= u; ++v)
      if (row[v] != neg_inf) out[v] = SignedLog::from_log(row[v]);
    return out;
  }
  if (scaled && a == 0.0)
    throw DomainError("generalized_factorial_row: scaled coefficients at a = 0 need b <= 0");
  return explicit_row(u, a, b, scaled);
}

std::vector<double> log_stirling_row(int u, double b) {
  if (b < 0) throw DomainError("non-centered Stirling numbers require b >= 0");
  const auto row = generalized_factorial_row(u, 0.0, -b, true);
  std::vector<double> out(row.size());
  for (std::size_t v = 0; v < row.size(); ++v) out[v] = row[v].log_abs;
  return out;
}

SignedLog gen_factorial_coeff(int u, int v, double a, double b) {
  if (v < 0 || u < 0) throw DomainError("gen_factorial_coeff: negative index");
  if (v > u) return {};
  return generalized_factorial_row(u, a, b, false)[v];
}

SignedLog gen_factorial_coeff_explicit(int u, int v, double a, double b) {
  if (v < 0 || u < 0) throw DomainError("gen_factorial_coeff_explicit: negative index");
  if (v > u) return {};
  std::vector<QuadSignedLog> rising(v + 1);
  for (int j = 0; j <= v; ++j)
    rising[j] = quad_rising(-static_cast<__float128>(j) * a - b, u);
  return explicit_entry(v, rising, 0.0);
}

double log_signless_stirling(int u, int v, double b) {
  if (b < 0) throw DomainError("non-centered Stirling numbers require b >= 0");
  if (v < 0 || u < 0) throw DomainError("log_signless_stirling: negative index");
  if (v > u) return neg_inf;
  return log_stirling_row(u, b)[v];
}

LogCoeffTable::LogCoeffTable(Family f, int u_max, double a, double b)
    : family_(f), u_max_(u_max), a_(a), b_(b) {
  if (u_max < 0) throw DomainError("LogCoeffTable: u_max must be >= 0");
  cells_.resize(static_cast<std::size_t>(u_max + 1) * (u_max + 2) / 2);
  const bool scaled = f != Family::generalized_factorial;
  const double ga = f == Family::stirling ? 0.0 : a;
  const double gb = f == Family::stirling ? -b : b;
  if (f == Family::stirling && b < 0)
    throw DomainError("non-centered Stirling numbers require b >= 0");
  if (generalized_factorial_recurrence_is_positive(u_max, ga, gb)) {
    std::vector<double> row{0.0};
    for (int u = 0;; ++u) {
      for (int v = 0; v <= u; ++v)
        if (row[v] != neg_inf) cells_[index(u, v)] = SignedLog::from_log(row[v]);
      if (u == u_max) break;
      advance_positive_row(row, u, ga, gb, scaled);
    }
  } else {
    for (int u = 0; u <= u_max; ++u) {
      const auto row = explicit_row(u, ga, gb, scaled);
      std::copy(row.begin(), row.end(), cells_.begin() + index(u, 0));
    }
  }
}

LogCoeffTable LogCoeffTable::generalized_factorial(int u_max, double a, double b) {
  return LogCoeffTable(Family::generalized_factorial, u_max, a, b);
}

LogCoeffTable LogCoeffTable::scaled_generalized_factorial(int u_max, double a, double b) {
  return LogCoeffTable(Family::scaled_generalized_factorial, u_max, a, b);
}

LogCoeffTable LogCoeffTable::stirling(int u_max, double b) {
  return LogCoeffTable(Family::stirling, u_max, 0.0, b);
}

std::size_t LogCoeffTable::index(int u, int v) const {
  return static_cast<std::size_t>(u) * (u + 1) / 2 + v;
}

SignedLog LogCoeffTable::at(int u, int v) const {
  if (u < 0 || u > u_max_ || v < 0)
    throw DomainError("LogCoeffTable::at: index out of range");
  if (v > u) return {};
  return cells_[index(u, v)];
}

}  // namespace pyspecies
