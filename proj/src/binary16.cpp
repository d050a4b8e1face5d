#include "sphx/binary16.hpp"

namespace sphx {

namespace {

constexpr std::uint64_t kF64SignMask = 0x8000000000000000ull;
constexpr std::uint64_t kF64FracMask = 0x000FFFFFFFFFFFFFull;

}  // namespace

Binary16 Binary16::from_f64(double x) {
  const std::uint64_t b = std::bit_cast<std::uint64_t>(x);
  const auto sign = static_cast<std::uint16_t>((b & kF64SignMask) >> 48);
  const int exp_field = static_cast<int>((b >> 52) & 0x7FF);
  const std::uint64_t frac = b & kF64FracMask;

  if (exp_field == 0x7FF) {
    if (frac != 0) return from_bits(kQuietNan);
    return from_bits(static_cast<std::uint16_t>(sign | 0x7C00u));
  }
  if ((b & ~kF64SignMask) == 0) return from_bits(sign);

  const int e = exp_field - 1023;  // unbiased; double subnormals fall far below
  if (e >= 16) return from_bits(static_cast<std::uint16_t>(sign | 0x7C00u));

  // 53-bit significand; value = sig * 2^(e-52). Subnormal doubles carry no
  // implicit bit but they underflow to zero below anyway.
  std::uint64_t sig = frac;
  if (exp_field != 0) sig |= (1ull << 52);

  int he = e + 15;  // tentative biased binary16 exponent
  int shift = 42;   // keep the top 11 bits for a normal result
  if (he < 1) {
    shift += 1 - he;
    he = 0;
    if (shift >= 54) return from_bits(sign);  // below half of the min subnormal
  }

  std::uint64_t half_sig = sig >> shift;
  const std::uint64_t rem = sig & ((1ull << shift) - 1);
  const std::uint64_t halfway = 1ull << (shift - 1);
  if (rem > halfway || (rem == halfway && (half_sig & 1))) ++half_sig;

  std::uint16_t out;
  if (he == 0) {
    // Subnormal path; a carry to 0x400 lands on exponent 1 with zero mantissa,
    // which is exactly the right encoding.
    out = static_cast<std::uint16_t>(sign | half_sig);
  } else {
    const std::uint32_t packed =
        (static_cast<std::uint32_t>(he) << 10) + static_cast<std::uint32_t>(half_sig - 0x400);
    if (packed >= 0x7C00u) return from_bits(static_cast<std::uint16_t>(sign | 0x7C00u));
    out = static_cast<std::uint16_t>(sign | packed);
  }
  return from_bits(out);
}

double Binary16::to_f64() const {
  const int exp_field = (bits_ >> 10) & 0x1F;
  const int frac = bits_ & 0x3FF;
  const bool neg = (bits_ & 0x8000u) != 0;

  double mag;
  if (exp_field == 0x1F) {
    if (frac != 0) return std::numeric_limits<double>::quiet_NaN();
    mag = std::numeric_limits<double>::infinity();
  } else if (exp_field == 0) {
    mag = std::ldexp(static_cast<double>(frac), -24);
  } else {
    mag = std::ldexp(static_cast<double>(frac | 0x400), exp_field - 25);
  }
  return neg ? -mag : mag;
}

Binary16 sqrt16(Binary16 a) {
  // double sqrt is correctly rounded and 53 >= 2*11+2, so the double rounding
  // here is innocuous.
  return Binary16::from_f64(std::sqrt(a.to_f64()));
}

Binary16 fma16(Binary16 a, Binary16 b, Binary16 c) {
  const double p = a.to_f64() * b.to_f64();  // exact: 22-bit product
  const double cd = c.to_f64();
  double s = p + cd;
  if (std::isfinite(s)) {
    // Residual of the double addition is exact via 2Sum; force round-to-odd
    // so the final rounding to binary16 is the correctly rounded fma.
    const double bv = (std::abs(p) >= std::abs(cd)) ? cd : p;
    const double av = (std::abs(p) >= std::abs(cd)) ? p : cd;
    const double r = (av - s) + bv;
    if (r != 0.0) {
      const std::uint64_t sb = std::bit_cast<std::uint64_t>(s);
      if ((sb & 1ull) == 0) {
        s = std::nextafter(s, r > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity());
      }
    }
  }
  return Binary16::from_f64(s);
}

}  // namespace sphx
