#include <doctest.h>

#include <cmath>
#include <limits>

#include "sphx/binary16.hpp"
#include "sphx/rng.hpp"
#include "fp16_oracle.hpp"

using sphx::Binary16;
using sphx::Precision;

TEST_CASE("known encodings") {
  CHECK(Binary16::from_f64(1.0).bits() == 0x3C00);
  CHECK(Binary16::from_f64(2.0).bits() == 0x4000);
  CHECK(Binary16::from_f64(-1.0).bits() == 0xBC00);
  CHECK(Binary16::from_f64(0.0).bits() == 0x0000);
  CHECK(Binary16::from_f64(-0.0).bits() == 0x8000);
  CHECK(Binary16::from_f64(65504.0).bits() == 0x7BFF);
  // smallest subnormal and largest subnormal
  CHECK(Binary16::from_f64(std::ldexp(1.0, -24)).bits() == 0x0001);
  CHECK(Binary16::from_f64(std::ldexp(1023.0, -24)).bits() == 0x03FF);
}

TEST_CASE("rounding examples") {
  // spacing at 2048 is 2, so 2049 ties to the even neighbor 2048
  CHECK(Binary16::from_f64(2049.0).to_f64() == 2048.0);
  CHECK(Binary16::from_f64(2051.0).to_f64() == 2052.0);
  CHECK(Binary16::from_f64(70000.0).is_inf());
  CHECK(Binary16::from_f64(-70000.0).bits() == 0xFC00);
  // 65520 is the overflow tie and rounds away to infinity
  CHECK(Binary16::from_f64(65520.0).is_inf());
  CHECK(Binary16::from_f64(std::nextafter(65520.0, 0.0)).to_f64() == 65504.0);
  // halfway below the smallest subnormal goes to zero (ties to even)
  CHECK(Binary16::from_f64(std::ldexp(1.0, -25)).bits() == 0x0000);
  CHECK(Binary16::from_f64(std::ldexp(1.0, -25) * 1.0000001).bits() == 0x0001);
}

TEST_CASE("special values") {
  CHECK(Binary16::from_f64(std::numeric_limits<double>::quiet_NaN()).bits() ==
        Binary16::kQuietNan);
  CHECK(Binary16::from_f64(std::numeric_limits<double>::infinity()).bits() == 0x7C00);
  CHECK(std::isnan(Binary16::from_bits(0x7C01).to_f64()));
  CHECK(std::isinf(Binary16::from_bits(0xFC00).to_f64()));
  // NaN comparisons are false
  const Binary16 qn = Binary16::quiet_nan();
  CHECK_FALSE(qn < qn);
  CHECK_FALSE(qn == qn);
}

TEST_CASE("exhaustive finite round trip") {
  int finite = 0;
  for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
    const auto h = Binary16::from_bits(static_cast<std::uint16_t>(b));
    if (!h.is_finite()) continue;
    ++finite;
    const double v = h.to_f64();
    CHECK(Binary16::from_f64(v).bits() == h.bits());
  }
  CHECK(finite == 65536 - 2 * 1024);  // all patterns minus exponent-31 ones
}

TEST_CASE("arithmetic examples") {
  const auto one = Binary16::from_f64(1.0);
  CHECK((one + one).to_f64() == 2.0);
  CHECK((Binary16::from_f64(2048.0) + one).to_f64() == 2048.0);  // rounds to even
  CHECK(sphx::sqrt16(Binary16::from_f64(4.0)).to_f64() == 2.0);
  CHECK((Binary16::from_f64(3.0) * Binary16::from_f64(0.5)).to_f64() == 1.5);
  CHECK((one - one).to_f64() == 0.0);
}

namespace {

Binary16 random_finite(sphx::Rng& rng) {
  for (;;) {
    const auto h = Binary16::from_bits(static_cast<std::uint16_t>(rng.next_u64() & 0xFFFF));
    if (h.is_finite()) return h;
  }
}

}  // namespace

TEST_CASE("correctly rounded ops against the rational oracle") {
  sphx::Rng rng(20240601);
  for (int it = 0; it < 40000; ++it) {
    const Binary16 a = random_finite(rng);
    const Binary16 b = random_finite(rng);
    {
      const auto got = a + b;
      const auto want = sphx_test::oracle_add(a, b);
      CAPTURE(a.bits());
      CAPTURE(b.bits());
      CHECK(sphx_test::same_value(got, want));
    }
    {
      const auto got = a - b;
      const auto want = sphx_test::oracle_add(a, -b);
      CHECK(sphx_test::same_value(got, want));
    }
    {
      const auto got = a * b;
      const auto want = sphx_test::oracle_mul(a, b);
      CHECK(sphx_test::same_value(got, want));
    }
  }
}

TEST_CASE("sqrt and fma against exact oracles") {
  sphx::Rng rng(77);
  for (int it = 0; it < 20000; ++it) {
    Binary16 a = random_finite(rng);
    if (a.sign_bit()) a = -a;
    CHECK(sphx_test::same_value(sphx::sqrt16(a), sphx_test::oracle_sqrt(a)));
    const Binary16 b = random_finite(rng);
    const Binary16 c = random_finite(rng);
    CHECK(sphx_test::same_value(sphx::fma16(a, b, c), sphx_test::oracle_fma(a, b, c)));
  }
  // classic double-rounding trap: product + tiny opposite-signed term
  const Binary16 x = Binary16::from_bits(0x3C01);  // 1 + 2^-10
  const Binary16 y = Binary16::from_bits(0x3C01);
  const Binary16 z = Binary16::from_bits(0x8001);  // -2^-24
  CHECK(sphx_test::same_value(sphx::fma16(x, y, z), sphx_test::oracle_fma(x, y, z)));
}

TEST_CASE("monotonicity of from_f64") {
  sphx::Rng rng(99);
  for (int it = 0; it < 40000; ++it) {
    // mix magnitudes across the whole half range
    const double ea = rng.uniform(-26.0, 17.0);
    const double eb = rng.uniform(-26.0, 17.0);
    double a = std::ldexp(rng.uniform(-2.0, 2.0), static_cast<int>(ea));
    double b = std::ldexp(rng.uniform(-2.0, 2.0), static_cast<int>(eb));
    if (a > b) std::swap(a, b);
    const double fa = Binary16::from_f64(a).to_f64();
    const double fb = Binary16::from_f64(b).to_f64();
    CAPTURE(a);
    CAPTURE(b);
    CHECK(fa <= fb);
  }
}

TEST_CASE("round_to dispatch") {
  CHECK(sphx::round_to(Precision::fp64, 0.1) == 0.1);
  CHECK(sphx::round_to(Precision::fp32, 0.1) == static_cast<double>(0.1f));
  CHECK(sphx::round_to(Precision::fp16, 0.1) == Binary16::from_f64(0.1).to_f64());
}
