#pragma once

namespace pyspecies {

// log Γ(x) for x > 0. Thread-safe (does not touch signgam).
double log_gamma(double x);

// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Digamma ψ(x) = d/dx log Γ(x), x > 0.
///
/// Shifts x upward with ψ(x) = ψ(x+1) − 1/x until x ≥ 10 and then sums the
/// asymptotic series; absolute error below 1e-13 on the whole half-line.
/// Throws DomainError for x ≤ 0.
double digamma(double x);

/// Trigamma ψ'(x), x > 0, same shift-then-asymptotic scheme.
double trigamma(double x);

/// Regularized incomplete Beta function I_x(a, b), continued fraction
/// (modified Lentz) with the usual symmetry swap.
double beta_inc(double a, double b, double x);

/// Quantile of Beta(a, b): bisection down to a 1e-7 bracket, then Newton
/// steps kept inside the bracket. Absolute accuracy about 1e-12.
double beta_quantile(double a, double b, double p);

}  // namespace pyspecies
