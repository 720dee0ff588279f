#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pyspecies {

// A real number held as sign * exp(log_abs). Zero is {-inf, 0}.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog from_value(double v);
  static SignedLog from_log(double log_abs) { return {log_abs, 1}; }
  double value() const;
  bool is_zero() const { return sign == 0; }
};

SignedLog operator+(SignedLog x, SignedLog y);
SignedLog operator*(SignedLog x, SignedLog y);

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);
double log_sum_exp(std::span<const double> xs);

// log of the rising factorial (a)_(u) = a (a+1) ... (a+u-1).
// Requires every factor to be positive; (a)_(0) = 1.
double log_rising_factorial(double a, std::int64_t u);

// log[(x + delta)_(m) / (x)_(m)], summed term by term with log1p for
// m up to 10^6 and by log-Gamma differences beyond.
double log_rising_ratio(double x, double delta, std::int64_t m);

// Non-centered generalized factorial coefficients C(u,v;a,b), defined by
//   (a t - b)_(u) = sum_v C(u,v;a,b) (t)_(v),
// and non-centered signless Stirling numbers of the first kind |s(u,v;b)|,
//   (t + b)_(u) = sum_v |s(u,v;b)| t^v.
//
// Rows are produced by the triangular recurrence
//   C(u+1,v) = a C(u,v-1) + (u - v a - b) C(u,v),   C(0,0) = 1,
// whenever every multiplier (u - v a - b) is nonnegative; otherwise each
// entry comes from the explicit alternating sum evaluated in quad precision.
// The table is immutable once built.
class LogCoeffTable {
public:
  enum class Family { generalized_factorial, scaled_generalized_factorial, stirling };

  static LogCoeffTable generalized_factorial(int u_max, double a, double b);
  // Entries are C(u,v;a,b) / a^v; well defined as a -> 0.
  static LogCoeffTable scaled_generalized_factorial(int u_max, double a, double b);
  static LogCoeffTable stirling(int u_max, double b);

  int u_max() const { return u_max_; }
  double a() const { return a_; }
  double b() const { return b_; }
  Family family() const { return family_; }

  SignedLog at(int u, int v) const;
  double value(int u, int v) const { return at(u, v).value(); }

private:
  LogCoeffTable(Family f, int u_max, double a, double b);
  std::size_t index(int u, int v) const;

  Family family_;
  int u_max_;
  double a_;
  double b_;
  std::vector<SignedLog> cells_;
};

// Row u of C(u,.;a,b), optionally divided by a^v, using O(u) memory.
std::vector<SignedLog> generalized_factorial_row(int u, double a, double b, bool scaled);

// Row u of log|s(u,.;b)|; b >= 0.
std::vector<double> log_stirling_row(int u, double b);

// C(u,v;a,b) as a signed log value.
SignedLog gen_factorial_coeff(int u, int v, double a, double b);

// C(u,v;a,b) straight from the explicit alternating sum
//   (1/v!) sum_j (-1)^j binom(v,j) (-j a - b)_(u),
// summed in quad precision. Used when the recurrence would mix signs.
SignedLog gen_factorial_coeff_explicit(int u, int v, double a, double b);

// log |s(u,v;b)|, b >= 0.
double log_signless_stirling(int u, int v, double b);

// True when the recurrence for rows up to u_max has only nonnegative
// multipliers, so it never cancels.
bool generalized_factorial_recurrence_is_positive(int u_max, double a, double b);

}  // namespace pyspecies
