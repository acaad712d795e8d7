#include "positlab/posit.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace positlab {

FormatSpec::FormatSpec(int n_, int es_) : n(n_), es(es_) {
  if (!is_valid(n_, es_)) {
    throw std::invalid_argument("posit format out of range: n=" + std::to_string(n_) +
                                " es=" + std::to_string(es_) + " (need 3<=n<=32, 0<=es<=4)");
  }
}

FormatSpec FormatSpec::parse(const std::string& name) {
  // p<N>e<ES>, all lowercase, no padding: p8e2, p16e2, p32e4, ...
  const char* s = name.c_str();
  const char* end = s + name.size();
  int n = 0, es = 0;
  if (end - s < 4 || *s != 'p') throw std::invalid_argument("bad posit format name: " + name);
  auto r1 = std::from_chars(s + 1, end, n);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != 'e')
    throw std::invalid_argument("bad posit format name: " + name);
  auto r2 = std::from_chars(r1.ptr + 1, end, es);
  if (r2.ec != std::errc{} || r2.ptr != end)
    throw std::invalid_argument("bad posit format name: " + name);
  if (!is_valid(n, es))
    throw std::invalid_argument("posit format out of range: " + name +
                                " (need 3<=n<=32, 0<=es<=4)");
  return FormatSpec(n, es);
}

std::string FormatSpec::name() const {
  return "p" + std::to_string(n) + "e" + std::to_string(es);
}

std::string PositBits::to_hex() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%0*X", (spec.n + 3) / 4, bits);
  return buf;
}

PositBits PositBits::from_hex(const std::string& hex, FormatSpec spec) {
  std::size_t i = (hex.size() > 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) ? 2 : 0;
  std::uint32_t v = 0;
  auto r = std::from_chars(hex.data() + i, hex.data() + hex.size(), v, 16);
  if (r.ec != std::errc{} || r.ptr != hex.data() + hex.size() || i == hex.size())
    throw std::invalid_argument("bad posit pattern: " + hex);
  if ((v & ~spec.pattern_mask()) != 0)
    throw std::invalid_argument("pattern " + hex + " does not fit in " + spec.name());
  return PositBits(v, spec);
}

DecodedPosit decode(PositBits p) {
  DecodedPosit d;
  if (p.is_zero()) {
    d.kind = DecodedPosit::Kind::Zero;
    return d;
  }
  if (p.is_nar()) {
    d.kind = DecodedPosit::Kind::NaR;
    d.value = ExactValue::nar();
    return d;
  }
  const int n = p.spec.n;
  const int es = p.spec.es;
  d.kind = DecodedPosit::Kind::Finite;
  d.sign = (p.bits >> (n - 1)) & 1;

  const std::uint32_t body = p.bits & (p.spec.pattern_mask() >> 1);  // n-1 bits
  const int r0 = (body >> (n - 2)) & 1;
  int k = 1;
  while (k < n - 1 && ((body >> (n - 2 - k)) & 1) == static_cast<std::uint32_t>(r0)) ++k;
  d.regime_run = k;
  d.regime = r0 ? k - 1 : -k;
  d.regime_field_bits = k + (k < n - 1 ? 1 : 0);

  const int rem = (n - 1) - d.regime_field_bits;
  const int e_avail = es < rem ? es : rem;
  const std::uint32_t low = rem ? body & ((std::uint32_t{1} << rem) - 1) : 0;
  // Exponent bits squeezed out by the regime read as zero.
  d.exponent = static_cast<int>(low >> (rem - e_avail)) << (es - e_avail);
  d.exponent_field_bits = e_avail;
  d.fraction_bits = rem - e_avail;
  d.fraction = d.fraction_bits ? low & ((std::uint32_t{1} << d.fraction_bits) - 1) : 0;

  // ((1-3s) + F/2^m) * 2^((1-2s)(2^es r + e + s)), kept exact.
  const int s = d.sign ? 1 : 0;
  const std::int64_t scale =
      (1 - 2 * s) * ((static_cast<std::int64_t>(d.regime) << es) + d.exponent + s);
  mpz_class num;
  if (!s) {
    num = (mpz_class{1} << d.fraction_bits) + d.fraction;
  } else {
    num = (mpz_class{1} << (d.fraction_bits + 1)) - d.fraction;  // |F/2^m - 2| * 2^m
  }
  d.value = ExactValue::from_parts(s ? -1 : 1, num, scale - d.fraction_bits);
  return d;
}

namespace detail {

PositBits encode_rounded(int sign, const mpz_class& sig, std::int64_t exp2,
                         bool sticky, FormatSpec spec) {
  if (sig == 0) return PositBits(sticky ? 1u : 0u, spec);  // nonzero never rounds to zero

  const ExactValue mag = ExactValue::from_parts(1, sig, exp2);
  // Saturate outside the representable magnitude range; never round to 0/NaR.
  if (mag.compare(ExactValue::from_parts(1, 1, spec.maxpos_exp2())) >= 0) {
    std::uint32_t body = spec.maxpos_pattern();
    return PositBits(sign < 0 ? -body : body, spec);
  }
  if (mag.compare(ExactValue::from_parts(1, 1, -spec.maxpos_exp2())) <= 0) {
    return PositBits(sign < 0 ? spec.pattern_mask() : 1u, spec);
  }

  // Build the infinite-width pattern body (regime, exponent, full fraction)
  // and truncate to n-1 bits with round-to-nearest, ties-to-even on the
  // pattern. Appending zeros to a posit pattern preserves its value, so bit
  // drop + pattern increment is exactly posit rounding, including in regions
  // where the dropped bits are exponent or regime rather than fraction.
  const mpz_class& m = mag.significand();
  const std::int64_t fl = static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
  const std::int64_t scale = fl + mag.exp2();  // floor(log2 |x|)
  std::int64_t r = scale >> spec.es;           // floor division
  std::int64_t e = scale - (r << spec.es);

  mpz_class ext;
  std::int64_t run_len;
  if (r >= 0) {
    run_len = r + 2;  // r+1 ones then a zero terminator
    ext = ((mpz_class{1} << (r + 1)) - 1) << 1;
  } else {
    run_len = -r + 1;  // -r zeros then a one terminator
    ext = 1;
  }
  ext <<= spec.es;
  ext |= static_cast<unsigned long>(e);
  ext <<= fl;
  ext |= m - (mpz_class{1} << fl);  // fraction: significand minus its lead bit
  const std::int64_t total = run_len + spec.es + fl;

  const std::int64_t keep = spec.n - 1;
  std::uint32_t body;
  if (total <= keep) {
    // Exactly representable at this width. A sticky tail from div/sqrt is at
    // least six bit positions below the last pattern bit (callers compute
    // max_fraction_bits+8 significand bits), far inside the half-gap to the
    // neighboring pattern, so it can never move the result.
    ext <<= keep - total;
    body = static_cast<std::uint32_t>(ext.get_ui());
  } else {
    const std::int64_t drop = total - keep;
    const bool guard = mpz_tstbit(ext.get_mpz_t(), drop - 1) != 0;
    bool st = sticky;
    if (!st && drop >= 2) {
      const auto first = mpz_scan1(ext.get_mpz_t(), 0);
      st = first < static_cast<mp_bitcnt_t>(drop - 1);
    }
    mpz_class kept = ext >> drop;
    body = static_cast<std::uint32_t>(kept.get_ui());
    if (guard && (st || (body & 1u))) {
      ++body;
      if (body == spec.nar_pattern()) body = spec.maxpos_pattern();  // saturate
    }
  }
  assert(body >= 1 && body < spec.nar_pattern());
  return PositBits(sign < 0 ? -body : body, spec);
}

}  // namespace detail

PositBits encode(const ExactValue& x, FormatSpec spec) {
  if (x.is_nar()) return PositBits(spec.nar_pattern(), spec);
  if (x.is_zero()) return PositBits(0, spec);
  return detail::encode_rounded(x.sign(), x.significand(), x.exp2(), false, spec);
}

static PositBits nar_of(FormatSpec spec) { return PositBits(spec.nar_pattern(), spec); }

PositBits add(PositBits a, PositBits b) {
  assert(a.spec == b.spec);
  if (a.is_nar() || b.is_nar()) return nar_of(a.spec);
  return encode(decode(a).value + decode(b).value, a.spec);
}

PositBits sub(PositBits a, PositBits b) {
  assert(a.spec == b.spec);
  if (a.is_nar() || b.is_nar()) return nar_of(a.spec);
  return encode(decode(a).value - decode(b).value, a.spec);
}

PositBits mul(PositBits a, PositBits b) {
  assert(a.spec == b.spec);
  if (a.is_nar() || b.is_nar()) return nar_of(a.spec);
  return encode(decode(a).value * decode(b).value, a.spec);
}

PositBits div(PositBits a, PositBits b) {
  assert(a.spec == b.spec);
  if (a.is_nar() || b.is_nar() || b.is_zero()) return nar_of(a.spec);
  if (a.is_zero()) return PositBits(0, a.spec);
  const DecodedPosit da = decode(a), db = decode(b);
  const mpz_class& na = da.value.significand();
  const mpz_class& nb = db.value.significand();
  const std::int64_t la = static_cast<std::int64_t>(mpz_sizeinbase(na.get_mpz_t(), 2));
  const std::int64_t lb = static_cast<std::int64_t>(mpz_sizeinbase(nb.get_mpz_t(), 2));
  // Enough quotient bits that everything past them is pure sticky.
  std::int64_t shift = a.spec.max_fraction_bits() + 8;
  if (lb > la) shift += lb - la;
  mpz_class q, rem;
  mpz_class num = na << shift;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), nb.get_mpz_t());
  const int sign = da.value.sign() * db.value.sign();
  return detail::encode_rounded(sign, q, da.value.exp2() - db.value.exp2() - shift,
                                rem != 0, a.spec);
}

PositBits sqrt(PositBits a) {
  if (a.is_nar()) return nar_of(a.spec);
  if (a.is_zero()) return PositBits(0, a.spec);
  const DecodedPosit da = decode(a);
  if (da.value.is_negative()) return nar_of(a.spec);
  const mpz_class& m = da.value.significand();
  const std::int64_t bits = static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
  const std::int64_t want = 2 * (a.spec.max_fraction_bits() + 8);
  std::int64_t sh = bits < want ? want - bits : 0;
  if ((da.value.exp2() - sh) & 1) ++sh;  // even exponent so the root is 2-adic
  mpz_class arg = m << sh, root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), arg.get_mpz_t());
  return detail::encode_rounded(1, root, (da.value.exp2() - sh) / 2, rem != 0, a.spec);
}

std::strong_ordering compare(PositBits a, PositBits b) {
  assert(a.spec == b.spec);
  const int sh = 32 - a.spec.n;
  const std::int32_t sa = static_cast<std::int32_t>(a.bits << sh) >> sh;
  const std::int32_t sb = static_cast<std::int32_t>(b.bits << sh) >> sh;
  return sa <=> sb;
}

PositBits negate(PositBits a) { return PositBits(0u - a.bits, a.spec); }

PositBits absval(PositBits a) {
  if (a.is_nar()) return a;
  return (a.bits >> (a.spec.n - 1)) & 1 ? negate(a) : a;
}

PositBits sign_inject(PositBits a, PositBits b, SignMode mode) {
  const std::uint32_t sa = (a.bits >> (a.spec.n - 1)) & 1;
  const std::uint32_t sb = (b.bits >> (b.spec.n - 1)) & 1;
  std::uint32_t target = sb;
  if (mode == SignMode::negate) target = sb ^ 1;
  if (mode == SignMode::xor_) target = sa ^ sb;
  return target != sa ? negate(a) : a;
}

std::int64_t cvt_posit_int(PositBits a, bool is_signed, int width) {
  assert(width == 32 || width == 64);
  if (a.is_nar()) {
    if (!is_signed) return 0;
    return width == 32 ? INT32_MIN : INT64_MIN;
  }
  if (a.is_zero()) return 0;
  const DecodedPosit d = decode(a);
  auto rb = detail::round_to_binary(d.value.significand(), d.value.exp2(),
                                    /*max_sig_bits=*/160, /*min_lsb_exp2=*/0, false);
  mpz_class v = rb.sig << rb.exp2;
  if (d.value.is_negative()) v = -v;
  mpz_class lo, hi;
  if (is_signed) {
    hi = (mpz_class{1} << (width - 1)) - 1;
    lo = -hi - 1;
  } else {
    lo = 0;
    hi = (mpz_class{1} << width) - 1;
  }
  if (v < lo) v = lo;
  if (v > hi) v = hi;
  if (v >= 0) return static_cast<std::int64_t>(mpz_get_ui(v.get_mpz_t()));
  mpz_class mag = -v;
  // Two's-complement negate in unsigned space; INT64_MIN round-trips safely.
  return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(mpz_get_ui(mag.get_mpz_t())));
}

PositBits cvt_int_posit(std::int64_t v, FormatSpec spec) {
  return encode(ExactValue::from_int(v), spec);
}

PositBits cvt_posit_posit(PositBits a, FormatSpec to) {
  if (a.is_nar()) return nar_of(to);
  if (a.is_zero()) return PositBits(0, to);
  return encode(decode(a).value, to);
}

double cvt_posit_binary64(PositBits a) {
  if (a.is_nar()) return std::numeric_limits<double>::quiet_NaN();
  if (a.is_zero()) return 0.0;
  return decode(a).value.to_double();
}

PositBits cvt_binary64_posit(double x, FormatSpec spec) {
  return encode(ExactValue::from_double(x), spec);  // NaN/Inf land on NaR
}

}  // namespace positlab
