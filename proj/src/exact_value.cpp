#include "positlab/exact_value.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace positlab {

ExactValue ExactValue::nar() {
  ExactValue v;
  v.kind_ = Kind::NaR;
  return v;
}

ExactValue ExactValue::from_parts(int sign, mpz_class significand, std::int64_t exp2) {
  if (sgn(significand) < 0) throw std::invalid_argument("significand must be >= 0");
  ExactValue v;
  if (significand == 0) return v;
  v.kind_ = Kind::Finite;
  v.negative_ = sign < 0;
  // Canonical form: odd significand.
  const mp_bitcnt_t tz = mpz_scan1(significand.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(significand.get_mpz_t(), significand.get_mpz_t(), tz);
    exp2 += static_cast<std::int64_t>(tz);
  }
  v.sig_ = std::move(significand);
  v.exp2_ = exp2;
  return v;
}

ExactValue ExactValue::from_int(std::int64_t v) {
  if (v == 0) return zero();
  const bool neg = v < 0;
  const std::uint64_t mag = neg ? (~static_cast<std::uint64_t>(v) + 1) : static_cast<std::uint64_t>(v);
  mpz_class sig;
  mpz_import(sig.get_mpz_t(), 1, 1, sizeof(mag), 0, 0, &mag);
  return from_parts(neg ? -1 : 1, std::move(sig), 0);
}

ExactValue ExactValue::from_uint(std::uint64_t v) {
  if (v == 0) return zero();
  mpz_class sig;
  mpz_import(sig.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return from_parts(1, std::move(sig), 0);
}

ExactValue ExactValue::from_double(double v) {
  if (!std::isfinite(v)) return nar();
  if (v == 0.0) return zero();
  const auto raw = std::bit_cast<std::uint64_t>(v);
  const bool neg = raw >> 63;
  const std::int64_t biased = static_cast<std::int64_t>((raw >> 52) & 0x7FF);
  const std::uint64_t frac = raw & ((std::uint64_t{1} << 52) - 1);
  // Subnormals have an implicit exponent of 1 and no hidden bit.
  const std::uint64_t mant = biased == 0 ? frac : (frac | (std::uint64_t{1} << 52));
  const std::int64_t exp2 = (biased == 0 ? 1 : biased) - 1023 - 52;
  mpz_class sig;
  mpz_import(sig.get_mpz_t(), 1, 1, sizeof(mant), 0, 0, &mant);
  return from_parts(neg ? -1 : 1, std::move(sig), exp2);
}

std::int64_t ExactValue::floor_log2() const {
  if (!is_finite()) throw std::logic_error("floor_log2 of non-finite value");
  return static_cast<std::int64_t>(mpz_sizeinbase(sig_.get_mpz_t(), 2)) - 1 + exp2_;
}

std::size_t ExactValue::bit_count() const {
  if (!is_finite()) throw std::logic_error("bit_count of non-finite value");
  return mpz_sizeinbase(sig_.get_mpz_t(), 2);
}

ExactValue ExactValue::operator-() const {
  ExactValue v = *this;
  if (v.is_finite()) v.negative_ = !v.negative_;
  return v;
}

ExactValue ExactValue::abs() const {
  ExactValue v = *this;
  v.negative_ = false;
  return v;
}

ExactValue operator+(const ExactValue& a, const ExactValue& b) {
  if (a.is_nar() || b.is_nar()) return ExactValue::nar();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  // Align to the smaller exponent so both significands are integers.
  const std::int64_t e = std::min(a.exp2_, b.exp2_);
  mpz_class sa = a.sig_;
  mpz_class sb = b.sig_;
  mpz_mul_2exp(sa.get_mpz_t(), sa.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp2_ - e));
  mpz_mul_2exp(sb.get_mpz_t(), sb.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exp2_ - e));
  if (a.negative_) sa = -sa;
  if (b.negative_) sb = -sb;
  mpz_class sum = sa + sb;
  const int s = sgn(sum);
  if (s == 0) return ExactValue::zero();
  if (s < 0) sum = -sum;
  return ExactValue::from_parts(s, std::move(sum), e);
}

ExactValue operator-(const ExactValue& a, const ExactValue& b) { return a + (-b); }

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  if (a.is_nar() || b.is_nar()) return ExactValue::nar();
  if (a.is_zero() || b.is_zero()) return ExactValue::zero();
  // odd * odd stays odd, so the canonical form is preserved without rescan.
  ExactValue v;
  v.kind_ = ExactValue::Kind::Finite;
  v.negative_ = a.negative_ != b.negative_;
  v.sig_ = a.sig_ * b.sig_;
  v.exp2_ = a.exp2_ + b.exp2_;
  return v;
}

int ExactValue::compare(const ExactValue& other) const {
  if (is_nar() || other.is_nar()) {
    if (is_nar() && other.is_nar()) return 0;
    return is_nar() ? -1 : 1;
  }
  const int sa = is_zero() ? 0 : sign();
  const int sb = other.is_zero() ? 0 : other.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  // Same nonzero sign: compare magnitudes, cheap binade check first.
  const std::int64_t la = floor_log2();
  const std::int64_t lb = other.floor_log2();
  int mag;
  if (la != lb) {
    mag = la < lb ? -1 : 1;
  } else {
    const std::int64_t e = std::min(exp2_, other.exp2_);
    mpz_class ma = sig_;
    mpz_class mb = other.sig_;
    mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<mp_bitcnt_t>(exp2_ - e));
    mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<mp_bitcnt_t>(other.exp2_ - e));
    mag = cmp(ma, mb);
    mag = mag < 0 ? -1 : (mag > 0 ? 1 : 0);
  }
  return sa > 0 ? mag : -mag;
}

namespace detail {

RoundedBinary round_to_binary(const mpz_class& sig, std::int64_t exp2,
                              int max_sig_bits, std::int64_t min_lsb_exp2,
                              bool extra_sticky) {
  RoundedBinary out;
  if (sig == 0) {
    out.inexact = extra_sticky;
    return out;
  }
  const std::int64_t bits = static_cast<std::int64_t>(mpz_sizeinbase(sig.get_mpz_t(), 2));
  const std::int64_t leading = bits - 1 + exp2;  // floor(log2 |v|)
  std::int64_t lsb = leading - (max_sig_bits - 1);
  if (min_lsb_exp2 != std::numeric_limits<std::int64_t>::min() && lsb < min_lsb_exp2)
    lsb = min_lsb_exp2;
  if (lsb <= exp2) {
    // Already at or above the required precision: exact shift.
    out.sig = sig;
    out.exp2 = exp2;
    out.inexact = extra_sticky;
    if (extra_sticky) {
      // A nonzero tail below the kept bits still needs a rounding decision
      // when the tail sits exactly at the guard position; callers guarantee
      // the tail is strictly below the guard bit, so truncation stands.
    }
    return out;
  }
  const mp_bitcnt_t drop = static_cast<mp_bitcnt_t>(lsb - exp2);
  mpz_class kept;
  mpz_fdiv_q_2exp(kept.get_mpz_t(), sig.get_mpz_t(), drop);
  const bool guard = mpz_tstbit(sig.get_mpz_t(), drop - 1) != 0;
  bool sticky = extra_sticky;
  if (!sticky && drop >= 2) {
    const mp_bitcnt_t first_one = mpz_scan1(sig.get_mpz_t(), 0);
    sticky = first_one < drop - 1;
  }
  out.inexact = guard || sticky;
  if (guard && (sticky || mpz_odd_p(kept.get_mpz_t()))) kept += 1;
  out.sig = std::move(kept);
  out.exp2 = lsb;
  return out;
}

}  // namespace detail

double ExactValue::to_double() const {
  if (is_nar()) return std::numeric_limits<double>::quiet_NaN();
  if (is_zero()) return 0.0;
  const std::int64_t leading = floor_log2();
  if (leading > 1024) return negative_ ? -HUGE_VAL : HUGE_VAL;
  if (leading < -1080) return negative_ ? -0.0 : 0.0;
  const auto r = detail::round_to_binary(sig_, exp2_, 53, -1074, false);
  if (r.sig == 0) return negative_ ? -0.0 : 0.0;
  // r.sig has at most 54 bits (53 plus a possible carry), exact in double.
  const double m = mpz_get_d(r.sig.get_mpz_t());
  const double v = std::ldexp(m, static_cast<int>(r.exp2));
  return negative_ ? -v : v;
}

std::string ExactValue::to_decimal_string() const {
  if (is_nar()) return "NaR";
  if (is_zero()) return "0";
  std::string out = negative_ ? "-" : "";
  if (exp2_ >= 0) {
    mpz_class whole = sig_;
    mpz_mul_2exp(whole.get_mpz_t(), whole.get_mpz_t(), static_cast<mp_bitcnt_t>(exp2_));
    out += whole.get_str();
    return out;
  }
  // sig * 2^-d == (sig * 5^d) / 10^d: exact decimal with d fraction digits.
  const std::uint64_t d = static_cast<std::uint64_t>(-exp2_);
  mpz_class scaled = sig_;
  mpz_class five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, d);
  scaled *= five;
  std::string digits = scaled.get_str();
  if (digits.size() <= d) digits.insert(0, d + 1 - digits.size(), '0');
  digits.insert(digits.size() - d, ".");
  // The significand is odd, so the last decimal digit is nonzero: no trailing
  // zeros to trim.
  out += digits;
  return out;
}

}  // namespace positlab
