#include <doctest.h>

#include <cmath>
#include <vector>

#include "pyspecies/rng.hpp"

using namespace pyspecies;

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ_c |= x != c();
    differ_d |= x != d();
  }
  CHECK(differ_c);
  CHECK(differ_d);
}

TEST_CASE("uniform and bounded draws") {
  RngStream r(1);
  double s = 0;
  const int n = 200000;
  std::vector<int> bins(7, 0);
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    ++bins[r.below(7)];
  }
  CHECK(std::fabs(s / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  for (int c : bins) CHECK(std::fabs(c - n / 7.0) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("beta and binomial moments") {
  RngStream r(9);
  const int n = 200000;
  for (auto [a, b] : {std::pair{0.05, 3.0}, std::pair{2.0, 5.0}, std::pair{40.0, 0.3}}) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.beta(a, b);
    const double mean = a / (a + b);
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1)));
    CHECK(std::fabs(s / n - mean) < 5 * sd / std::sqrt(n));
  }
  for (auto [t, p] : {std::pair<std::int64_t, double>{5, 0.3}, {1000, 0.2}, {100000, 0.9}}) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.binomial(t, p);
    CHECK(std::fabs(s / n - t * p) < 5 * std::sqrt(t * p * (1 - p) / n));
  }
}
