#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

// Common scalar types and error categories shared by every fge module.
//
// Counting quantities (energies, Gowers norms, T_k for indicator inputs)
// are exact big integers; derived exponents are exact rationals.  Floating
// point appears only where a quantity is inherently numerical (Fourier
// matrices, operator norms, measured exponents).

namespace fge {

using Count = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Rng = std::mt19937_64;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: bad spec parameters, mismatched groups, arity errors.
struct ValidationError : Error {
  using Error::Error;
};

// A request whose exact computation would exceed a configured cap.
struct CapacityError : Error {
  using Error::Error;
};

// A precondition of a theorem-shaped check failed on this instance.
struct PreconditionError : Error {
  using Error::Error;
};

// A scan finished without a witness at the configured resolution.
struct ResolutionError : Error {
  using Error::Error;
};

// Work cap for a single counting call, in elementary operations.
// Overridable through the FGE_WORK_CAP environment variable.
inline std::uint64_t work_cap() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("FGE_WORK_CAP")) {
      const unsigned long long v = std::strtoull(env, nullptr, 10);
      if (v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(1'000'000'000);
  }();
  return cap;
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long long mod_pow(long long base, long long exp, long long mod) {
  long long r = 1 % mod;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

// 64-bit FNV-1a, used for instance digests and member-list hashing.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t seed = 1469598103934665603ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s,
                           std::uint64_t seed = 1469598103934665603ULL) {
  return fnv1a(s.data(), s.size(), seed);
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace fge
