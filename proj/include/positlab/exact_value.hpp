#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace positlab {

/// Exact binary real: sign * significand * 2^exp2 with an arbitrary-precision
/// odd significand, plus Zero and NaR as distinguished states. Closed under
/// add/sub/mul; division and square root are provided by the consuming
/// formats via guarded approximation (see posit.cpp / minifloat.cpp).
///
/// Values are immutable once built; all operations return new values.
class ExactValue {
 public:
  enum class Kind : std::uint8_t { Zero, NaR, Finite };

  ExactValue() = default;  // zero

  static ExactValue zero() { return ExactValue(); }
  static ExactValue nar();
  /// sign is +1/-1; significand may carry trailing zero bits (normalized here).
  /// A zero significand collapses to Zero regardless of sign.
  static ExactValue from_parts(int sign, mpz_class significand, std::int64_t exp2);
  static ExactValue from_int(std::int64_t v);
  static ExactValue from_uint(std::uint64_t v);
  /// Exact: every finite binary64 is representable. NaN and +/-Inf map to NaR.
  static ExactValue from_double(double v);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_nar() const { return kind_ == Kind::NaR; }
  bool is_finite() const { return kind_ == Kind::Finite; }

  /// +1 or -1. Finite values only.
  int sign() const { return negative_ ? -1 : 1; }
  bool is_negative() const { return negative_; }
  const mpz_class& significand() const { return sig_; }
  std::int64_t exp2() const { return exp2_; }

  /// Exponent of the leading significand bit, i.e. floor(log2 |v|). Finite only.
  std::int64_t floor_log2() const;
  /// Number of significand bits (leading one included). Finite only.
  std::size_t bit_count() const;

  ExactValue operator-() const;
  ExactValue abs() const;
  friend ExactValue operator+(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator-(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator*(const ExactValue& a, const ExactValue& b);

  /// Three-way compare. NaR compares less than everything and equal to itself
  /// (mirroring posit ordering); Zero sits between negatives and positives.
  int compare(const ExactValue& other) const;
  bool operator==(const ExactValue& other) const { return compare(other) == 0; }

  /// Round-to-nearest-even conversion, subnormals and overflow handled.
  /// NaR -> quiet NaN.
  double to_double() const;

  /// Exact decimal rendering ("-0.046875", "1", "0", "NaR"). Finite values
  /// print all digits; intended for inspection and golden files.
  std::string to_decimal_string() const;

 private:
  Kind kind_ = Kind::Zero;
  bool negative_ = false;
  mpz_class sig_;  // > 0 and odd when finite
  std::int64_t exp2_ = 0;
};

namespace detail {

/// Round |sig| * 2^exp2 to at most `max_sig_bits` significand bits using
/// round-to-nearest, ties-to-even, never keeping a bit below 2^min_lsb_exp2
/// (pass INT64_MIN for a purely floating rounding). `extra_sticky` marks a
/// nonzero tail beyond sig (used by guarded div/sqrt). Result significand may
/// carry a rounding carry (e.g. 2^p); callers renormalize via from_parts.
struct RoundedBinary {
  mpz_class sig;  // >= 0
  std::int64_t exp2 = 0;
  bool inexact = false;
};
RoundedBinary round_to_binary(const mpz_class& sig, std::int64_t exp2,
                              int max_sig_bits, std::int64_t min_lsb_exp2,
                              bool extra_sticky);

}  // namespace detail

}  // namespace positlab
