#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace sphx {

// IEEE 754-2008 binary16 carried as a raw bit pattern. Arithmetic follows the
// "upconvert, compute exactly in wide precision, round once" model: sums and
// products of two binary16 values are exact in double, so a single rounding
// back to binary16 yields the correctly rounded result.
class Binary16 {
 public:
  constexpr Binary16() = default;

  static constexpr Binary16 from_bits(std::uint16_t b) {
    Binary16 h;
    h.bits_ = b;
    return h;
  }

  // Round-to-nearest-even conversion, subnormals included. Magnitudes above
  // 65504 overflow to infinity (65520 is the tie and already rounds up).
  // Every NaN canonicalizes to one quiet pattern.
  static Binary16 from_f64(double x);
  static Binary16 from_f32(float x) { return from_f64(static_cast<double>(x)); }

  double to_f64() const;
  float to_f32() const { return static_cast<float>(to_f64()); }

  constexpr std::uint16_t bits() const { return bits_; }

  constexpr bool sign_bit() const { return (bits_ & 0x8000u) != 0; }
  constexpr bool is_nan() const {
    return (bits_ & 0x7C00u) == 0x7C00u && (bits_ & 0x03FFu) != 0;
  }
  constexpr bool is_inf() const { return (bits_ & 0x7FFFu) == 0x7C00u; }
  constexpr bool is_finite() const { return (bits_ & 0x7C00u) != 0x7C00u; }

  static constexpr Binary16 infinity(bool negative = false) {
    return from_bits(negative ? 0xFC00u : 0x7C00u);
  }
  static constexpr Binary16 quiet_nan() { return from_bits(kQuietNan); }
  static constexpr double max_finite() { return 65504.0; }

  friend Binary16 operator+(Binary16 a, Binary16 b) {
    return from_f64(a.to_f64() + b.to_f64());
  }
  friend Binary16 operator-(Binary16 a, Binary16 b) {
    return from_f64(a.to_f64() - b.to_f64());
  }
  friend Binary16 operator*(Binary16 a, Binary16 b) {
    return from_f64(a.to_f64() * b.to_f64());
  }
  friend Binary16 operator-(Binary16 a) {
    return from_bits(static_cast<std::uint16_t>(a.bits_ ^ 0x8000u));
  }

  // Value comparisons (IEEE semantics: comparisons with NaN are false).
  friend bool operator<(Binary16 a, Binary16 b) { return a.to_f64() < b.to_f64(); }
  friend bool operator<=(Binary16 a, Binary16 b) { return a.to_f64() <= b.to_f64(); }
  friend bool operator>(Binary16 a, Binary16 b) { return a.to_f64() > b.to_f64(); }
  friend bool operator>=(Binary16 a, Binary16 b) { return a.to_f64() >= b.to_f64(); }
  friend bool operator==(Binary16 a, Binary16 b) { return a.to_f64() == b.to_f64(); }

  static constexpr std::uint16_t kQuietNan = 0x7E00u;

 private:
  std::uint16_t bits_ = 0;
};

Binary16 sqrt16(Binary16 a);

// Fused a*b + c with a single rounding. The exact product is a double; the sum
// is carried through a round-to-odd double so the final binary16 rounding
// matches the infinitely precise result.
Binary16 fma16(Binary16 a, Binary16 b, Binary16 c);

inline Binary16 add16(Binary16 a, Binary16 b) { return a + b; }
inline Binary16 sub16(Binary16 a, Binary16 b) { return a - b; }
inline Binary16 mul16(Binary16 a, Binary16 b) { return a * b; }

// Value-level round trip: the nearest binary16, expressed back as a double.
inline double round16(double x) { return Binary16::from_f64(x).to_f64(); }

enum class Precision { fp64, fp32, fp16 };

inline const char* to_string(Precision p) {
  switch (p) {
    case Precision::fp64: return "fp64";
    case Precision::fp32: return "fp32";
    default: return "fp16";
  }
}

inline double round_to(Precision p, double x) {
  switch (p) {
    case Precision::fp64: return x;
    case Precision::fp32: return static_cast<double>(static_cast<float>(x));
    default: return round16(x);
  }
}

}  // namespace sphx
