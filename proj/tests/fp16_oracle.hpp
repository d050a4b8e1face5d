#pragma once

// Independent binary16 rounding oracle for the tests: exact rational
// arithmetic plus a search over the value-ordered bit patterns. Shares no
// code with the implementation under test.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

#include "sphx/binary16.hpp"

namespace sphx_test {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact value of a finite positive pattern (0x0000..0x7BFF); patterns are
// value-ordered in that range.
inline Rational value_of_bits(std::uint16_t mag) {
  const int exp_field = (mag >> 10) & 0x1F;
  const int frac = mag & 0x3FF;
  if (exp_field == 0) {
    return Rational(frac, BigInt(1) << 24);
  }
  const int e = exp_field - 25;
  const BigInt sig = 1024 + frac;
  if (e >= 0) return Rational(sig << e);
  return Rational(sig, BigInt(1) << (-e));
}

struct OracleResult {
  bool is_inf = false;
  bool negative = false;
  std::uint16_t mag = 0;  // magnitude bits when finite

  double to_f64() const {
    if (is_inf) {
      const double inf = std::numeric_limits<double>::infinity();
      return negative ? -inf : inf;
    }
    const Rational v = value_of_bits(mag);
    const double d = static_cast<double>(v);  // exact: value fits a double
    return negative ? -d : d;
  }
};

// Round a rational to the nearest binary16, ties to even mantissa.
inline OracleResult round_rational(const Rational& x) {
  OracleResult out;
  Rational mag = x;
  if (mag < 0) {
    out.negative = true;
    mag = -mag;
  }
  const Rational max_finite = value_of_bits(0x7BFF);
  const Rational overflow_tie = Rational(65520);
  if (mag > max_finite) {
    if (mag >= overflow_tie) {
      out.is_inf = true;  // the tie itself rounds up to infinity
    } else {
      out.mag = 0x7BFF;
    }
    return out;
  }
  // binary search the largest pattern with value <= mag
  std::uint16_t lo = 0, hi = 0x7BFF;
  while (lo < hi) {
    const std::uint16_t mid = static_cast<std::uint16_t>((lo + hi + 1) / 2);
    if (value_of_bits(mid) <= mag) {
      lo = mid;
    } else {
      hi = static_cast<std::uint16_t>(mid - 1);
    }
  }
  const Rational below = value_of_bits(lo);
  if (below == mag || lo == 0x7BFF) {
    out.mag = lo;
    return out;
  }
  const Rational above = value_of_bits(static_cast<std::uint16_t>(lo + 1));
  const Rational d_lo = mag - below;
  const Rational d_hi = above - mag;
  if (d_lo < d_hi) {
    out.mag = lo;
  } else if (d_hi < d_lo) {
    out.mag = static_cast<std::uint16_t>(lo + 1);
  } else {
    out.mag = (lo % 2 == 0) ? lo : static_cast<std::uint16_t>(lo + 1);
  }
  return out;
}

inline Rational rational_of(sphx::Binary16 h) {
  const std::uint16_t b = h.bits();
  Rational v = value_of_bits(static_cast<std::uint16_t>(b & 0x7FFF));
  if (b & 0x8000) v = -v;
  return v;
}

inline OracleResult oracle_add(sphx::Binary16 a, sphx::Binary16 b) {
  return round_rational(rational_of(a) + rational_of(b));
}

inline OracleResult oracle_mul(sphx::Binary16 a, sphx::Binary16 b) {
  return round_rational(rational_of(a) * rational_of(b));
}

inline OracleResult oracle_fma(sphx::Binary16 a, sphx::Binary16 b, sphx::Binary16 c) {
  return round_rational(rational_of(a) * rational_of(b) + rational_of(c));
}

// Correctly rounded sqrt by exact midpoint comparison: the candidate k is the
// answer iff mid(k-1,k)^2 < x < mid(k,k+1)^2, with ties settled exactly.
inline OracleResult oracle_sqrt(sphx::Binary16 a) {
  OracleResult out;
  const Rational x = rational_of(a);
  if (x < 0) {
    out.mag = 0;  // caller never passes negatives; sqrt16 yields NaN there
    return out;
  }
  std::uint16_t lo = 0, hi = 0x7BFF;
  // largest k with value(k)^2 <= x
  while (lo < hi) {
    const std::uint16_t mid = static_cast<std::uint16_t>((lo + hi + 1) / 2);
    const Rational v = value_of_bits(mid);
    if (v * v <= x) {
      lo = mid;
    } else {
      hi = static_cast<std::uint16_t>(mid - 1);
    }
  }
  if (lo == 0x7BFF) {
    out.mag = lo;
    return out;
  }
  const Rational v_lo = value_of_bits(lo);
  const Rational v_hi = value_of_bits(static_cast<std::uint16_t>(lo + 1));
  const Rational mid = (v_lo + v_hi) / 2;
  const Rational mid2 = mid * mid;
  if (x < mid2) {
    out.mag = lo;
  } else if (x > mid2) {
    out.mag = static_cast<std::uint16_t>(lo + 1);
  } else {
    out.mag = (lo % 2 == 0) ? lo : static_cast<std::uint16_t>(lo + 1);
  }
  return out;
}

// Value-level identity; the sign of an exact-zero result is not part of any
// contract exercised here.
inline bool same_value(sphx::Binary16 got, const OracleResult& want) {
  return got.to_f64() == want.to_f64() || (got.is_nan() && false);
}

}  // namespace sphx_test
