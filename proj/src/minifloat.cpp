#include "positlab/minifloat.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace positlab {

MiniFloatSpec::MiniFloatSpec(int e, int m, InfMode mode)
    : exp_bits(e), man_bits(m), bias((1 << (e - 1)) - 1), inf_mode(mode) {
  if (e < 2 || m < 1 || 1 + e + m > 32) {
    throw std::invalid_argument("float format out of range: e=" + std::to_string(e) +
                                " m=" + std::to_string(m) +
                                " (need exp>=2, man>=1, total<=32)");
  }
}

MiniFloatSpec MiniFloatSpec::parse(const std::string& name) {
  if (name == "fp16") return fp16();
  if (name == "bf16") return bf16();
  if (name == "fp8e5m2") return fp8e5m2();
  if (name == "fp8e4m3") return fp8e4m3();
  // generic f<E>e<M>m
  const char* s = name.c_str();
  const char* end = s + name.size();
  int e = 0, m = 0;
  if (end - s >= 5 && *s == 'f') {
    auto r1 = std::from_chars(s + 1, end, e);
    if (r1.ec == std::errc{} && r1.ptr < end && *r1.ptr == 'e') {
      auto r2 = std::from_chars(r1.ptr + 1, end, m);
      if (r2.ec == std::errc{} && r2.ptr + 1 == end && *r2.ptr == 'm') {
        if (e < 2 || m < 1 || 1 + e + m > 32)
          throw std::invalid_argument("float format out of range: " + name);
        return MiniFloatSpec(e, m, InfMode::ieee_inf_nan);
      }
    }
  }
  throw std::invalid_argument("bad float format name: " + name);
}

std::string MiniFloatSpec::name() const {
  if (*this == fp16()) return "fp16";
  if (*this == bf16()) return "bf16";
  if (*this == fp8e5m2()) return "fp8e5m2";
  if (*this == fp8e4m3()) return "fp8e4m3";
  return "f" + std::to_string(exp_bits) + "e" + std::to_string(man_bits) + "m";
}

std::string MiniFloatBits::to_hex() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%0*X", (spec.total_bits() + 3) / 4, pattern);
  return buf;
}

MiniFloatBits MiniFloatBits::from_hex(const std::string& hex, MiniFloatSpec spec) {
  std::size_t i = (hex.size() > 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) ? 2 : 0;
  std::uint32_t v = 0;
  auto r = std::from_chars(hex.data() + i, hex.data() + hex.size(), v, 16);
  if (r.ec != std::errc{} || r.ptr != hex.data() + hex.size() || i == hex.size())
    throw std::invalid_argument("bad float pattern: " + hex);
  if ((v & ~spec.pattern_mask()) != 0)
    throw std::invalid_argument("pattern " + hex + " does not fit in " + spec.name());
  return MiniFloatBits(v, spec);
}

MiniValue mf_decode(MiniFloatBits b) {
  const MiniFloatSpec& sp = b.spec;
  const bool neg = b.sign_bit() != 0;
  const std::uint32_t E = b.exp_field();
  const std::uint32_t M = b.man_field();
  const std::uint32_t man_max = (1u << sp.man_bits) - 1;

  if (sp.inf_mode == MiniFloatSpec::InfMode::ieee_inf_nan) {
    if (E == static_cast<std::uint32_t>(sp.exp_max_field())) {
      return M == 0 ? MiniValue::inf(neg) : MiniValue::nan();
    }
  } else {
    if (E == static_cast<std::uint32_t>(sp.exp_max_field()) && M == man_max) {
      return MiniValue::nan();
    }
  }
  if (E == 0) {  // subnormal (or signed zero)
    if (M == 0) return MiniValue::finite(neg, ExactValue::zero());
    return MiniValue::finite(
        neg, ExactValue::from_parts(neg ? -1 : 1, M, sp.emin() - sp.man_bits));
  }
  const mpz_class sig = (mpz_class{1} << sp.man_bits) + M;
  return MiniValue::finite(
      neg, ExactValue::from_parts(neg ? -1 : 1, sig,
                                  static_cast<std::int64_t>(E) - sp.bias - sp.man_bits));
}

static MiniFloatBits nan_pattern(MiniFloatSpec sp) {
  std::uint32_t p;
  if (sp.inf_mode == MiniFloatSpec::InfMode::ieee_inf_nan) {
    // quiet NaN: top mantissa bit set, positive sign
    p = (static_cast<std::uint32_t>(sp.exp_max_field()) << sp.man_bits) |
        (1u << (sp.man_bits - 1));
  } else {
    p = (static_cast<std::uint32_t>(sp.exp_max_field()) << sp.man_bits) |
        ((1u << sp.man_bits) - 1);
  }
  return MiniFloatBits(p, sp);
}

static MiniFloatBits inf_pattern(bool neg, MiniFloatSpec sp) {
  if (sp.inf_mode == MiniFloatSpec::InfMode::finite_only_nan) return nan_pattern(sp);
  std::uint32_t p = static_cast<std::uint32_t>(sp.exp_max_field()) << sp.man_bits;
  if (neg) p |= 1u << (sp.total_bits() - 1);
  return MiniFloatBits(p, sp);
}

static MiniFloatBits zero_pattern(bool neg, MiniFloatSpec sp) {
  return MiniFloatBits(neg ? 1u << (sp.total_bits() - 1) : 0u, sp);
}

namespace detail {

MiniFloatBits mf_encode_rounded(bool negative, const mpz_class& sig, std::int64_t exp2,
                                bool sticky, MiniFloatSpec sp) {
  if (sig == 0) return zero_pattern(negative, sp);
  auto rb = round_to_binary(sig, exp2, sp.man_bits + 1, sp.emin() - sp.man_bits, sticky);
  if (rb.sig == 0) return zero_pattern(negative, sp);  // underflowed to zero

  const std::int64_t bl = static_cast<std::int64_t>(mpz_sizeinbase(rb.sig.get_mpz_t(), 2));
  const std::int64_t eu = bl - 1 + rb.exp2;  // unbiased exponent of the rounded value
  if (eu > sp.emax()) {
    return sp.inf_mode == MiniFloatSpec::InfMode::ieee_inf_nan ? inf_pattern(negative, sp)
                                                               : nan_pattern(sp);
  }

  std::uint32_t E, M;
  if (eu < sp.emin()) {  // subnormal: exponent field 0, no hidden bit
    mpz_class man = rb.sig << (rb.exp2 - (sp.emin() - sp.man_bits));
    E = 0;
    M = static_cast<std::uint32_t>(man.get_ui());
  } else {
    // Align to man_bits+1 bits; a rounding carry (sig == 2^(man_bits+1))
    // right-shifts exactly.
    mpz_class full;
    if (bl <= sp.man_bits + 1)
      full = rb.sig << (sp.man_bits + 1 - bl);
    else
      full = rb.sig >> (bl - sp.man_bits - 1);
    E = static_cast<std::uint32_t>(eu + sp.bias);
    M = static_cast<std::uint32_t>(full.get_ui()) & ((1u << sp.man_bits) - 1);
  }
  if (sp.inf_mode == MiniFloatSpec::InfMode::finite_only_nan &&
      E == static_cast<std::uint32_t>(sp.exp_max_field()) && M == (1u << sp.man_bits) - 1) {
    return nan_pattern(sp);  // rounded onto the repurposed top slot
  }
  std::uint32_t p = (E << sp.man_bits) | M;
  if (negative) p |= 1u << (sp.total_bits() - 1);
  return MiniFloatBits(p, sp);
}

}  // namespace detail

MiniFloatBits mf_encode(const MiniValue& v, MiniFloatSpec spec) {
  switch (v.kind) {
    case MiniValue::Kind::NaN:
      return nan_pattern(spec);
    case MiniValue::Kind::Inf:
      return inf_pattern(v.negative, spec);
    case MiniValue::Kind::Finite:
      if (v.value.is_zero()) return zero_pattern(v.negative, spec);
      return detail::mf_encode_rounded(v.value.is_negative(), v.value.significand(),
                                       v.value.exp2(), false, spec);
  }
  return nan_pattern(spec);
}

MiniFloatBits mf_encode(const ExactValue& x, MiniFloatSpec spec) {
  if (x.is_nar()) return nan_pattern(spec);
  if (x.is_zero()) return zero_pattern(false, spec);
  return detail::mf_encode_rounded(x.is_negative(), x.significand(), x.exp2(), false, spec);
}

static MiniValue neg_value(MiniValue v) {
  if (v.kind == MiniValue::Kind::NaN) return v;
  v.negative = !v.negative;
  if (v.kind == MiniValue::Kind::Finite && !v.value.is_zero()) v.value = -v.value;
  return v;
}

static MiniFloatBits add_values(const MiniValue& da, const MiniValue& db, MiniFloatSpec sp) {
  using K = MiniValue::Kind;
  if (da.kind == K::NaN || db.kind == K::NaN) return nan_pattern(sp);
  if (da.kind == K::Inf && db.kind == K::Inf) {
    if (da.negative != db.negative) return nan_pattern(sp);  // Inf - Inf
    return inf_pattern(da.negative, sp);
  }
  if (da.kind == K::Inf) return inf_pattern(da.negative, sp);
  if (db.kind == K::Inf) return inf_pattern(db.negative, sp);
  const ExactValue sum = da.value + db.value;
  if (sum.is_zero()) {
    // (+0)+(+0)=+0, (-0)+(-0)=-0; exact cancellation of nonzeros gives +0.
    const bool neg = da.negative && db.negative;
    return zero_pattern(neg, sp);
  }
  return detail::mf_encode_rounded(sum.is_negative(), sum.significand(), sum.exp2(), false, sp);
}

MiniFloatBits mf_add(MiniFloatBits a, MiniFloatBits b) {
  assert(a.spec == b.spec);
  return add_values(mf_decode(a), mf_decode(b), a.spec);
}

MiniFloatBits mf_sub(MiniFloatBits a, MiniFloatBits b) {
  assert(a.spec == b.spec);
  return add_values(mf_decode(a), neg_value(mf_decode(b)), a.spec);
}

MiniFloatBits mf_mul(MiniFloatBits a, MiniFloatBits b) {
  assert(a.spec == b.spec);
  using K = MiniValue::Kind;
  const MiniValue da = mf_decode(a), db = mf_decode(b);
  if (da.kind == K::NaN || db.kind == K::NaN) return nan_pattern(a.spec);
  const bool neg = da.negative != db.negative;
  if (da.kind == K::Inf || db.kind == K::Inf) {
    if (da.is_zero() || db.is_zero()) return nan_pattern(a.spec);  // Inf * 0
    return inf_pattern(neg, a.spec);
  }
  const ExactValue prod = da.value * db.value;
  if (prod.is_zero()) return zero_pattern(neg, a.spec);
  return detail::mf_encode_rounded(neg, prod.significand(), prod.exp2(), false, a.spec);
}

MiniFloatBits mf_div(MiniFloatBits a, MiniFloatBits b) {
  assert(a.spec == b.spec);
  using K = MiniValue::Kind;
  const MiniValue da = mf_decode(a), db = mf_decode(b);
  if (da.kind == K::NaN || db.kind == K::NaN) return nan_pattern(a.spec);
  const bool neg = da.negative != db.negative;
  if (da.kind == K::Inf) {
    if (db.kind == K::Inf) return nan_pattern(a.spec);
    return inf_pattern(neg, a.spec);
  }
  if (db.kind == K::Inf) return zero_pattern(neg, a.spec);
  if (db.is_zero()) {
    if (da.is_zero()) return nan_pattern(a.spec);  // 0/0
    return inf_pattern(neg, a.spec);
  }
  if (da.is_zero()) return zero_pattern(neg, a.spec);

  const mpz_class& na = da.value.significand();
  const mpz_class& nb = db.value.significand();
  const std::int64_t la = static_cast<std::int64_t>(mpz_sizeinbase(na.get_mpz_t(), 2));
  const std::int64_t lb = static_cast<std::int64_t>(mpz_sizeinbase(nb.get_mpz_t(), 2));
  std::int64_t shift = a.spec.man_bits + 8;
  if (lb > la) shift += lb - la;
  mpz_class q, rem;
  mpz_class num = na << shift;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), nb.get_mpz_t());
  return detail::mf_encode_rounded(neg, q, da.value.exp2() - db.value.exp2() - shift,
                                   rem != 0, a.spec);
}

MiniFloatBits mf_sqrt(MiniFloatBits a) {
  using K = MiniValue::Kind;
  const MiniValue da = mf_decode(a);
  if (da.kind == K::NaN) return nan_pattern(a.spec);
  if (da.is_zero()) return a;  // sqrt(+/-0) = +/-0
  if (da.negative) return nan_pattern(a.spec);
  if (da.kind == K::Inf) return inf_pattern(false, a.spec);

  const mpz_class& m = da.value.significand();
  const std::int64_t bits = static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
  const std::int64_t want = 2 * (a.spec.man_bits + 8);
  std::int64_t sh = bits < want ? want - bits : 0;
  if ((da.value.exp2() - sh) & 1) ++sh;
  mpz_class arg = m << sh, root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), arg.get_mpz_t());
  return detail::mf_encode_rounded(false, root, (da.value.exp2() - sh) / 2, rem != 0, a.spec);
}

ExactValue mf_max_finite(MiniFloatSpec sp) {
  const int top_man = sp.inf_mode == MiniFloatSpec::InfMode::ieee_inf_nan
                          ? (1 << (sp.man_bits + 1)) - 1    // 1.11...1
                          : (1 << (sp.man_bits + 1)) - 2;   // NaN takes the last slot
  return ExactValue::from_parts(1, top_man, sp.emax() - sp.man_bits);
}

ExactValue mf_overflow_bound(MiniFloatSpec sp) {
  // maxfinite + ulp/2 at the top binade
  return mf_max_finite(sp) + ExactValue::from_parts(1, 1, sp.emax() - sp.man_bits - 1);
}

ExactValue mf_min_pos(MiniFloatSpec sp) {
  return ExactValue::from_parts(1, 1, sp.emin() - sp.man_bits);
}

MiniFloatBits mf_next_up(MiniFloatBits b) {
  assert(b.sign_bit() == 0 && mf_decode(b).kind == MiniValue::Kind::Finite);
  return MiniFloatBits(b.pattern + 1, b.spec);  // positive patterns are value-ordered
}

double mf_accuracy_at(MiniFloatBits b) {
  const MiniValue v = mf_decode(b);
  assert(v.kind == MiniValue::Kind::Finite && !v.value.is_zero() && !v.negative);
  const std::int64_t eu = v.value.floor_log2();
  const std::int64_t gap_exp2 =
      (eu < b.spec.emin() ? b.spec.emin() : eu) - b.spec.man_bits;  // ulp(x)
  // digits = log10(x / ulp); keep it in log space so huge formats don't
  // overflow binary64.
  const double sig = mpz_get_d(v.value.significand().get_mpz_t());  // exact, <= 2^(m+1)
  const double log2_ratio =
      std::log2(sig) + static_cast<double>(v.value.exp2() - gap_exp2);
  return log2_ratio * std::log10(2.0);
}

}  // namespace positlab
