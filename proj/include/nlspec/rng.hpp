#pragma once
// Counter-based random number generation.
//
// Every draw is a pure function of (stream seed, counter index), so a matrix
// fill can be split across threads in any order and still reproduce the
// serial fill bit for bit.  std::normal_distribution and friends are
// deliberately avoided: their output sequences are unspecified and differ
// across standard library versions, which would break the byte-identical
// output contract.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlspec {

// Finalizer from the splitmix64 generator (Steele, Lea, Flood; public domain
// reference implementation).  Bijective mixing of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derive a child seed; used for trial seeds hash(seed, t) and per-matrix
// role seeds hash(trial_seed, role).
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(splitmix64(seed) ^ splitmix64(k ^ 0xD1B54A32D192ED03ULL));
}

// Raw word at position `index` of stream `seed`.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * index);
}

// Uniform double in the open interval (0,1); never returns 0 or 1, so it is
// safe inside log() for Box-Muller.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  return double(counter_word(seed, index) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Standard normal via Box-Muller on the counter pair (2k, 2k+1).  Both
// outputs of the pair are used; entry k of a gaussian fill reads the cos
// branch for even k and the sin branch for odd k of the same pair.
inline double counter_gaussian(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t pair = index >> 1;
  const double u1 = counter_uniform(seed, 2 * pair);
  const double u2 = counter_uniform(seed, 2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return (index & 1) ? r * std::sin(a) : r * std::cos(a);
}

// Entry distributions for W and X.  All kinds are mean zero with the declared
// variance, and either bounded or Gaussian, so the sub-Gaussian tail
// assumption of the model holds by construction.
struct DistributionSpec {
  enum class Kind { gaussian, rademacher, uniform, centered_bernoulli };
  Kind kind = Kind::gaussian;
  double variance = 1.0;
  double p = 0.5;  // centered-bernoulli success probability

  double draw(std::uint64_t seed, std::uint64_t index) const {
    const double sigma = std::sqrt(variance);
    switch (kind) {
      case Kind::gaussian:
        return sigma * counter_gaussian(seed, index);
      case Kind::rademacher:
        return (counter_word(seed, index) >> 63) ? sigma : -sigma;
      case Kind::uniform:
        // [-a, a] with a = sigma*sqrt(3) has variance sigma^2
        return sigma * std::numbers::sqrt3 *
               (2.0 * counter_uniform(seed, index) - 1.0);
      case Kind::centered_bernoulli: {
        // raw law: 1-p with prob p, -p with prob 1-p; variance p(1-p)
        const double s = sigma / std::sqrt(p * (1.0 - p));
        return (counter_uniform(seed, index) < p) ? (1.0 - p) * s : -p * s;
      }
    }
    throw std::logic_error("DistributionSpec: unreachable kind");
  }

  static DistributionSpec parse(const std::string& name, double variance) {
    DistributionSpec d;
    d.variance = variance;
    if (name == "gaussian") d.kind = Kind::gaussian;
    else if (name == "rademacher") d.kind = Kind::rademacher;
    else if (name == "uniform") d.kind = Kind::uniform;
    else if (name == "centered-bernoulli") d.kind = Kind::centered_bernoulli;
    else throw std::invalid_argument("unknown distribution kind: " + name);
    return d;
  }

  const char* name() const {
    switch (kind) {
      case Kind::gaussian: return "gaussian";
      case Kind::rademacher: return "rademacher";
      case Kind::uniform: return "uniform";
      case Kind::centered_bernoulli: return "centered-bernoulli";
    }
    return "?";
  }
};

}  // namespace nlspec
