#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace oplab {

// Arbitrary-precision rational scalar. All homology claims in this project
// are exact statements over Q, so there is no floating point anywhere.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Reduce r modulo a word-sized prime. Returns false when the denominator
// vanishes mod p (the caller must then exclude this prime).
inline bool rat_mod(const Rat& r, std::uint64_t p, std::uint64_t& out) {
  const mpz_class num = r.get_num();
  const mpz_class den = r.get_den();
  mpz_class pz(static_cast<unsigned long>(p));
  mpz_class dm = den % pz;
  if (dm == 0) return false;
  mpz_class nm = num % pz;
  if (nm < 0) nm += pz;
  std::uint64_t d = dm.get_ui();
  std::uint64_t n = nm.get_ui();
  // modular inverse of d via Fermat (p prime)
  std::uint64_t inv = 1, base = d, e = p - 2;
  auto mulmod = [p](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  while (e) {
    if (e & 1) inv = mulmod(inv, base);
    base = mulmod(base, base);
    e >>= 1;
  }
  out = mulmod(n, inv);
  return true;
}

}  // namespace oplab
