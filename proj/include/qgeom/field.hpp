#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgeom {

/// Element of GF(q), q = p^e, encoded as an integer in [0, q).  The base-p
/// digits of the code are the coefficients of the representing polynomial,
/// constant term in the least significant digit.  The encoding is total-order
/// friendly, which the subspace canonical forms rely on.
using Code = std::uint32_t;

/// Largest supported field order; the enumeration kernels are desk-scale.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 16;

/// Deterministic trial-division primality check (inputs are <= 2^16 anyway).
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Factor q as p^e with p prime.  Returns nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>>
factor_prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  std::uint32_t e = 0;
  std::uint64_t m = q;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  if (m != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), e);
}

namespace poly {

// Dense polynomials over GF(p), coefficients ascending from the constant
// term.  Only what the modulus machinery needs.

inline int degree(const std::vector<std::uint32_t>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

/// Remainder of a modulo a monic divisor b, in place on a copy.
inline std::vector<std::uint32_t> mod_monic(std::vector<std::uint32_t> a,
                                            const std::vector<std::uint32_t>& b,
                                            std::uint32_t p) {
  const int db = degree(b);
  for (int i = degree(a); i >= db && db >= 0; i = degree(a)) {
    const std::uint64_t c = a[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto& t = a[static_cast<std::size_t>(i - db + j)];
      t = static_cast<std::uint32_t>(
          (t + (p - b[static_cast<std::size_t>(j)]) * c) % p);
    }
  }
  return a;
}

/// Exhaustive trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const int df = degree(f);
  if (df < 1) return false;
  if (df == 1) return true;
  std::vector<std::uint32_t> div;
  for (int d = 1; d <= df / 2; ++d) {
    div.assign(static_cast<std::size_t>(d) + 1, 0);
    div[static_cast<std::size_t>(d)] = 1;
    // Odometer over the d lower coefficients.
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= p;
    for (std::uint64_t v = 0; v < total; ++v) {
      std::uint64_t rem = v;
      for (int i = 0; i < d; ++i) {
        div[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rem % p);
        rem /= p;
      }
      if (degree(mod_monic(f, div, p)) < 0) return false;
    }
  }
  return true;
}

}  // namespace poly

/// Lexicographically least (by coefficient sequence read from the constant
/// term upward) monic irreducible polynomial of degree e over GF(p).
/// Deterministic, so serialized matrices reproduce across runs.
inline std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw std::invalid_argument("default_modulus: p = " + std::to_string(p) + " is not prime");
  if (e < 1) throw std::invalid_argument("default_modulus: e must be >= 1");
  if (e == 1) return {0, 1};  // x; arithmetic is plain integers mod p
  std::vector<std::uint32_t> f(e + 1, 0);
  f[e] = 1;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < e; ++i) total *= p;
  // v counts with the constant term as the MOST significant digit, giving
  // lexicographic order on (c0, c1, ..., c_{e-1}).
  for (std::uint64_t v = 0; v < total; ++v) {
    for (std::uint32_t i = 0; i < e; ++i) {
      std::uint64_t w = 1;
      for (std::uint32_t s = i + 1; s < e; ++s) w *= p;
      f[i] = static_cast<std::uint32_t>((v / w) % p);
    }
    if (poly::is_irreducible(f, p)) return f;
  }
  throw std::logic_error("default_modulus: no irreducible polynomial found");  // unreachable
}

/// GF(p^e) with a fixed monic irreducible modulus.  Immutable value; all
/// operations are pure, so specs can be shared across workers freely.
struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::uint32_t q = 2;
  std::vector<std::uint32_t> modulus = {0, 1};  // e+1 coefficients, constant first

  bool operator==(const FieldSpec&) const = default;

  static FieldSpec make(std::uint32_t p, std::uint32_t e,
                        std::vector<std::uint32_t> modulus) {
    if (!is_prime(p)) throw std::invalid_argument("field: p = " + std::to_string(p) + " is not prime");
    if (e < 1) throw std::invalid_argument("field: e must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxFieldOrder) throw std::invalid_argument("field: q exceeds the supported bound 2^16");
    }
    if (modulus.size() != static_cast<std::size_t>(e) + 1)
      throw std::invalid_argument("field: modulus must have e+1 coefficients");
    for (auto c : modulus)
      if (c >= p) throw std::invalid_argument("field: modulus coefficient out of range");
    if (modulus.back() != 1) throw std::invalid_argument("field: modulus must be monic");
    if (!poly::is_irreducible(modulus, p))
      throw std::invalid_argument("field: modulus is reducible over GF(p)");
    FieldSpec f;
    f.p = p;
    f.e = e;
    f.q = static_cast<std::uint32_t>(q);
    f.modulus = std::move(modulus);
    return f;
  }

  static FieldSpec make(std::uint32_t p, std::uint32_t e) {
    return make(p, e, default_modulus(p, e));
  }

  static FieldSpec make(std::uint64_t q) {
    auto pe = factor_prime_power(q);
    if (!pe) throw std::invalid_argument("field: q = " + std::to_string(q) + " is not a prime power");
    if (q > kMaxFieldOrder) throw std::invalid_argument("field: q exceeds the supported bound 2^16");
    return make(pe->first, pe->second);
  }

  void check_code(Code a) const {
    if (a >= q) throw std::invalid_argument("field: element code " + std::to_string(a) + " out of range for q = " + std::to_string(q));
  }

  Code add(Code a, Code b) const {
    check_code(a);
    check_code(b);
    if (e == 1) return (a + b) % p;
    Code out = 0;
    std::uint32_t w = 1;
    while (a != 0 || b != 0) {
      out += ((a % p + b % p) % p) * w;
      a /= p;
      b /= p;
      w *= p;
    }
    return out;
  }

  Code neg(Code a) const {
    check_code(a);
    if (e == 1) return a == 0 ? 0 : p - a;
    Code out = 0;
    std::uint32_t w = 1;
    while (a != 0) {
      const Code d = a % p;
      out += (d == 0 ? 0 : p - d) * w;
      a /= p;
      w *= p;
    }
    return out;
  }

  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  Code mul(Code a, Code b) const {
    check_code(a);
    check_code(b);
    if (e == 1) return static_cast<Code>((std::uint64_t{a} * b) % p);
    // Convolve base-p digit vectors, then reduce modulo the modulus using
    // x^e = -(m_0 + m_1 x + ... + m_{e-1} x^{e-1}).
    std::uint32_t da[17] = {0}, db[17] = {0};
    std::uint64_t conv[33] = {0};
    for (std::uint32_t i = 0, t = a; t != 0; ++i, t /= p) da[i] = t % p;
    for (std::uint32_t i = 0, t = b; t != 0; ++i, t /= p) db[i] = t % p;
    for (std::uint32_t i = 0; i < e; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < e; ++j)
        conv[i + j] += std::uint64_t{da[i]} * db[j];
    }
    for (int i = 2 * static_cast<int>(e) - 2; i >= static_cast<int>(e); --i) {
      const std::uint64_t c = conv[i] % p;
      conv[i] = 0;
      if (c == 0) continue;
      for (std::uint32_t j = 0; j < e; ++j)
        conv[i - e + j] += (p - modulus[j]) * c;
    }
    Code out = 0;
    std::uint32_t w = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      out += static_cast<Code>(conv[i] % p) * w;
      w *= p;
    }
    return out;
  }

  Code pow(Code a, std::uint64_t n) const {
    check_code(a);
    Code r = 1, base = a;
    while (n != 0) {
      if (n & 1) r = mul(r, base);
      base = mul(base, base);
      n >>= 1;
    }
    return r;
  }

  Code inv(Code a) const {
    check_code(a);
    if (a == 0) throw std::domain_error("field: inverse of zero");
    return pow(a, q - 2);
  }

  /// All q element codes in ascending order.
  std::vector<Code> elements() const {
    std::vector<Code> out(q);
    for (Code i = 0; i < q; ++i) out[i] = i;
    return out;
  }
};

}  // namespace qgeom
