#include "pyspecies/rng.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <cmath>

#include "pyspecies/errors.hpp"

namespace pyspecies {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t x = seed;
  const std::uint64_t mixed = splitmix64(x) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL);
  std::uint64_t y = mixed;
  for (auto& w : s_) w = splitmix64(y);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream::result_type RngStream::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("RngStream::below: bound must be >= 1");
  // Lemire's nearly divisionless method.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

double RngStream::gamma(double shape) {
  if (!(shape > 0)) throw DomainError("gamma variate: shape must be > 0");
  boost::random::gamma_distribution<double> dist(shape);
  return dist(*this);
}

// log of a Gamma(shape) variate; stays finite for tiny shapes by using
// G(a) = G(a+1) U^{1/a}.
double RngStream::log_gamma_variate(double shape) {
  if (!(shape > 0)) throw DomainError("gamma variate: shape must be > 0");
  if (shape >= 1.0) return std::log(gamma(shape));
  const double g = gamma(shape + 1.0);
  return std::log(g) + std::log(uniform_open()) / shape;
}

double RngStream::beta(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw DomainError("beta variate: shapes must be > 0");
  const double la = log_gamma_variate(a);
  const double lb = log_gamma_variate(b);
  // a / (a + b) in log space
  return 1.0 / (1.0 + std::exp(lb - la));
}

std::int64_t RngStream::binomial(std::int64_t trials, double p) {
  if (trials < 0 || !(p >= 0 && p <= 1)) throw DomainError("binomial variate: bad arguments");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  boost::random::binomial_distribution<std::int64_t, double> dist(trials, p);
  return dist(*this);
}

}  // namespace pyspecies
