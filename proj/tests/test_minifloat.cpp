#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>

#include "positlab/minifloat.hpp"
#include "support/oracle.hpp"

using namespace positlab;
using oracle::MiniOracle;
using oracle::MiniParams;

namespace {

MiniParams params_of(MiniFloatSpec s) {
  return {s.exp_bits, s.man_bits,
          s.inf_mode == MiniFloatSpec::InfMode::finite_only_nan};
}

mpq_class exact_to_rational(const ExactValue& v) {
  if (v.is_zero()) return mpq_class(0);
  mpq_class q(v.significand());
  q *= oracle::pow2(v.exp2());
  return v.is_negative() ? mpq_class(-q) : q;
}

mpq_class mini_value(const MiniValue& v) {
  REQUIRE(v.kind == MiniValue::Kind::Finite);
  return exact_to_rational(v.value);
}

// The library result and oracle expectation for one binary op on finite
// operands (specials are handled by the IEEE tables in the callers).
mpq_class rational_of(const MiniOracle& orc, std::uint32_t p) {
  return orc.value(p);
}

}  // namespace

TEST_CASE("spec fields and parsing") {
  MiniFloatSpec h = MiniFloatSpec::fp16();
  CHECK(h.bias == 15);
  CHECK(h.emax() == 15);
  CHECK(h.emin() == -14);
  CHECK(h.total_bits() == 16);
  CHECK(h.name() == "fp16");
  MiniFloatSpec b = MiniFloatSpec::bf16();
  CHECK(b.bias == 127);
  CHECK(b.emax() == 127);
  CHECK(b.emin() == -126);
  MiniFloatSpec e4 = MiniFloatSpec::fp8e4m3();
  CHECK(e4.bias == 7);
  CHECK(e4.emax() == 8);  // top exponent slot stays numeric
  CHECK(e4.emin() == -6);
  MiniFloatSpec e5 = MiniFloatSpec::fp8e5m2();
  CHECK(e5.emax() == 15);
  CHECK(e5.emin() == -14);

  CHECK(MiniFloatSpec::parse("bf16") == b);
  CHECK(MiniFloatSpec::parse("f5e10m") == h);
  CHECK(MiniFloatSpec::parse("fp8e4m3") == e4);
  CHECK_THROWS_AS(MiniFloatSpec::parse("fp37"), std::invalid_argument);
  CHECK_THROWS_AS(MiniFloatSpec::parse("f1e3m"), std::invalid_argument);
}

TEST_CASE("decode matches the field formula for every 8-bit pattern") {
  for (MiniFloatSpec spec : {MiniFloatSpec::fp8e5m2(), MiniFloatSpec::fp8e4m3()}) {
    MiniOracle orc(params_of(spec));
    for (std::uint32_t p = 0; p < 256; ++p) {
      MiniValue got = mf_decode(MiniFloatBits(p, spec));
      switch (orc.kind(p)) {
        case MiniOracle::nan:
          CHECK(got.kind == MiniValue::Kind::NaN);
          break;
        case MiniOracle::inf:
          CHECK(got.kind == MiniValue::Kind::Inf);
          CHECK(got.negative == orc.sign_bit(p));
          break;
        case MiniOracle::finite:
          REQUIRE(got.kind == MiniValue::Kind::Finite);
          CHECK(mini_value(got) == orc.value(p));
          CHECK(got.negative == orc.sign_bit(p));  // -0 keeps its sign
          break;
      }
    }
  }
}

TEST_CASE("decode/encode round-trips every fp16 and bf16 pattern") {
  for (MiniFloatSpec spec : {MiniFloatSpec::fp16(), MiniFloatSpec::bf16()}) {
    int nan_count = 0;
    for (std::uint32_t p = 0; p < 0x10000; ++p) {
      MiniFloatBits in(p, spec);
      MiniValue v = mf_decode(in);
      MiniFloatBits back = mf_encode(v, spec);
      if (v.kind == MiniValue::Kind::NaN) {
        // NaNs collapse to the canonical quiet pattern.
        CHECK(mf_decode(back).kind == MiniValue::Kind::NaN);
        ++nan_count;
      } else {
        REQUIRE(back.pattern == p);
      }
    }
    CHECK(nan_count > 0);
  }
}

TEST_CASE("extreme values per format") {
  CHECK(exact_to_rational(mf_max_finite(MiniFloatSpec::fp16())) == 65504);
  CHECK(exact_to_rational(mf_overflow_bound(MiniFloatSpec::fp16())) == 65520);
  CHECK(exact_to_rational(mf_min_pos(MiniFloatSpec::fp16())) == oracle::pow2(-24));
  CHECK(exact_to_rational(mf_max_finite(MiniFloatSpec::fp8e4m3())) == 448);
  CHECK(exact_to_rational(mf_overflow_bound(MiniFloatSpec::fp8e4m3())) == 464);
  CHECK(exact_to_rational(mf_max_finite(MiniFloatSpec::fp8e5m2())) == 57344);
  CHECK(exact_to_rational(mf_min_pos(MiniFloatSpec::fp8e4m3())) == mpq_class(1, 512));
  // bf16 max finite: (2 - 2^-7) * 2^127.
  mpq_class bfmax = mpq_class(255) * oracle::pow2(120);
  CHECK(exact_to_rational(mf_max_finite(MiniFloatSpec::bf16())) == bfmax);
}

TEST_CASE("encode rounds to nearest even, overflows per format flavor") {
  MiniFloatSpec h = MiniFloatSpec::fp16();
  MiniOracle horc(params_of(h));
  // 65519.999 -> max finite; 65520 (exact halfway) -> +Inf; -65520 -> -Inf.
  CHECK(mf_encode(ExactValue::from_double(65519.5), h).pattern ==
        horc.max_finite_pattern());
  CHECK(mf_encode(ExactValue::from_int(65520), h) == MiniFloatBits(0x7C00, h));
  CHECK(mf_encode(ExactValue::from_int(-65520), h) == MiniFloatBits(0xFC00, h));
  CHECK(mf_encode(ExactValue::from_int(65519), h).pattern ==
        horc.max_finite_pattern());

  // fp8e4m3 overflows to NaN, with the 448/464 boundary.
  MiniFloatSpec e4 = MiniFloatSpec::fp8e4m3();
  MiniOracle e4orc(params_of(e4));
  CHECK(mf_encode(ExactValue::from_int(448), e4).pattern == 0x7E);
  CHECK(mf_encode(ExactValue::from_int(464), e4).pattern == 0x7E);  // tie to even 448
  CHECK(mf_encode(ExactValue::from_int(465), e4).pattern == e4orc.canonical_nan());
  CHECK(mf_encode(ExactValue::from_int(-465), e4).pattern == e4orc.canonical_nan());
  CHECK(mf_encode(ExactValue::from_int(466), e4).pattern == e4orc.canonical_nan());

  // Gradual underflow: fp16 subnormal grid is 2^-24.
  CHECK(mf_encode(ExactValue::from_parts(1, 1, -24), h).pattern == 1);
  CHECK(mf_encode(ExactValue::from_parts(1, 1, -25), h).pattern == 0);   // tie to even 0
  CHECK(mf_encode(ExactValue::from_parts(1, 3, -26), h).pattern == 1);   // 0.75*minsub
  CHECK(mf_encode(ExactValue::from_parts(-1, 3, -26), h).pattern == 0x8001);
  CHECK(mf_encode(ExactValue::from_parts(1, 3, -25), h).pattern == 2);   // tie to even
  CHECK(mf_encode(ExactValue::from_parts(-1, 1, -25), h).pattern == 0x8000);
}

TEST_CASE("encode matches the rational oracle on random values") {
  std::mt19937_64 rng(777);
  for (MiniFloatSpec spec : {MiniFloatSpec::fp16(), MiniFloatSpec::bf16(),
                             MiniFloatSpec::fp8e5m2(), MiniFloatSpec::fp8e4m3()}) {
    MiniOracle orc(params_of(spec));
    for (int i = 0; i < 20000; ++i) {
      std::int64_t num = static_cast<std::int64_t>(rng() % 8192) - 4096;
      if (num == 0) num = 3;
      int k = static_cast<int>(rng() % 60) - 30;
      ExactValue x = ExactValue::from_parts(num < 0 ? -1 : 1,
                                            mpz_class(num < 0 ? -num : num), k);
      std::uint32_t want = orc.round(exact_to_rational(x));
      CHECK(mf_encode(x, spec).pattern == want);
    }
  }
}

TEST_CASE("signed zero and special-value arithmetic") {
  MiniFloatSpec h = MiniFloatSpec::fp16();
  MiniFloatBits pz(0x0000, h), nz(0x8000, h);
  MiniFloatBits one(0x3C00, h), inf(0x7C00, h), ninf(0xFC00, h);

  CHECK(mf_add(nz, nz) == nz);
  CHECK(mf_add(pz, nz) == pz);
  CHECK(mf_sub(one, one) == pz);   // exact cancellation gives +0
  CHECK(mf_sub(nz, pz) == nz);
  CHECK(mf_mul(nz, one) == nz);
  CHECK(mf_mul(nz, nz) == pz);
  CHECK(mf_div(nz, one) == nz);
  CHECK(mf_sqrt(nz) == nz);        // IEEE: sqrt(-0) is -0
  CHECK(mf_sqrt(pz) == pz);

  CHECK(mf_add(inf, one) == inf);
  CHECK(mf_add(inf, ninf).exp_field() == 0x1F);
  CHECK(mf_decode(mf_add(inf, ninf)).kind == MiniValue::Kind::NaN);
  CHECK(mf_mul(inf, nz).man_field() != 0);  // Inf * 0 = NaN
  CHECK(mf_div(one, pz) == inf);
  CHECK(mf_div(one, nz) == ninf);
  CHECK(mf_div(pz, pz).man_field() != 0);   // 0/0 = NaN
  CHECK(mf_div(inf, inf).man_field() != 0);
  CHECK(mf_div(ninf, one) == ninf);
  CHECK(mf_sqrt(ninf).man_field() != 0);
  CHECK(mf_sqrt(inf) == inf);

  // NaN propagates through everything.
  MiniFloatBits qnan(0x7E00, h);
  CHECK(mf_decode(mf_add(qnan, one)).kind == MiniValue::Kind::NaN);
  CHECK(mf_decode(mf_div(qnan, pz)).kind == MiniValue::Kind::NaN);
  CHECK(mf_decode(mf_sqrt(qnan)).kind == MiniValue::Kind::NaN);
}

TEST_CASE("finite-only formats turn every would-be Inf into NaN") {
  MiniFloatSpec e4 = MiniFloatSpec::fp8e4m3();
  MiniOracle orc(params_of(e4));
  MiniFloatBits big(orc.max_finite_pattern(), e4);  // 448
  MiniFloatBits two(0x40, e4);
  CHECK(mf_mul(big, two).pattern == orc.canonical_nan());
  CHECK(mf_div(two, MiniFloatBits(0, e4)).pattern == orc.canonical_nan());
  CHECK(mf_add(big, big).pattern == orc.canonical_nan());
  // There is no Inf pattern to decode: 0xFF and 0x7F are the NaNs.
  CHECK(mf_decode(MiniFloatBits(0x7F, e4)).kind == MiniValue::Kind::NaN);
  CHECK(mf_decode(MiniFloatBits(0xFF, e4)).kind == MiniValue::Kind::NaN);
  // 0x78 would be Inf under IEEE rules but is plain 256 here.
  CHECK(mini_value(mf_decode(MiniFloatBits(0x78, e4))) == 256);
}

TEST_CASE("arithmetic matches the oracle on a dense fp8e5m2 slice") {
  MiniFloatSpec spec = MiniFloatSpec::fp8e5m2();
  MiniOracle orc(params_of(spec));
  for (std::uint32_t a = 0; a < 256; a += 2) {
    for (std::uint32_t b = 1; b < 256; b += 3) {
      if (orc.kind(a) != MiniOracle::finite || orc.kind(b) != MiniOracle::finite)
        continue;
      mpq_class va = rational_of(orc, a), vb = rational_of(orc, b);
      MiniFloatBits fa(a, spec), fb(b, spec);

      mpq_class s = va + vb;
      std::uint32_t want;
      if (sgn(s) == 0)
        want = orc.zero(orc.sign_bit(a) && orc.sign_bit(b));
      else
        want = orc.round(s);
      CHECK(mf_add(fa, fb).pattern == want);

      mpq_class m = va * vb;
      bool msign = orc.sign_bit(a) != orc.sign_bit(b);
      want = (sgn(m) == 0) ? orc.zero(msign) : orc.round(m);
      CHECK(mf_mul(fa, fb).pattern == want);

      if (sgn(vb) != 0) {
        mpq_class d = va / vb;
        want = (sgn(d) == 0) ? orc.zero(msign) : orc.round(d);
        CHECK(mf_div(fa, fb).pattern == want);
      }
    }
  }
  for (std::uint32_t a = 0; a < 256; ++a) {
    if (orc.kind(a) != MiniOracle::finite || orc.sign_bit(a)) continue;
    mpq_class va = rational_of(orc, a);
    std::uint32_t want = (sgn(va) == 0) ? 0 : orc.round_sqrt(va);
    CHECK(mf_sqrt(MiniFloatBits(a, spec)).pattern == want);
  }
}

TEST_CASE("next_up and local accuracy") {
  MiniFloatSpec h = MiniFloatSpec::fp16();
  MiniFloatBits one = mf_encode(ExactValue::from_int(1), h);
  CHECK(one.pattern == 0x3C00);
  CHECK(mf_next_up(one).pattern == 0x3C01);
  CHECK(mini_value(mf_decode(mf_next_up(one))) == 1 + oracle::pow2(-10));

  // At 1.0 the relative gap is 2^-10; just below it tightens to 2^-11.
  const double log10_2 = std::log10(2.0);
  CHECK(mf_accuracy_at(one) == doctest::Approx(10 * log10_2).epsilon(1e-9));
  MiniFloatBits below(0x3BFF, h);  // largest value < 1
  CHECK(mf_accuracy_at(below) == doctest::Approx(11 * log10_2).epsilon(1e-3));
  // Subnormals lose digits linearly.
  MiniFloatBits minsub(0x0001, h);
  CHECK(mf_accuracy_at(minsub) < 1.0);
}
