#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "positlab/exact_value.hpp"

namespace positlab {

/// Posit format descriptor: total width n and exponent-field size es.
/// Standard formats fix es = 2; es up to 4 is accepted for non-standard
/// configurations (e.g. a 16-bit posit with 3 exponent bits).
struct FormatSpec {
  int n = 16;
  int es = 2;

  FormatSpec() = default;
  FormatSpec(int n_, int es_);

  static bool is_valid(int n, int es) { return n >= 3 && n <= 32 && es >= 0 && es <= 4; }

  /// Parses "p<N>e<ES>" (e.g. "p16e2"). Throws std::invalid_argument.
  static FormatSpec parse(const std::string& name);
  std::string name() const;  // canonical "p<N>e<ES>"

  std::uint32_t pattern_mask() const {
    return n == 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << n) - 1);
  }
  std::uint32_t nar_pattern() const { return std::uint32_t{1} << (n - 1); }
  std::uint32_t maxpos_pattern() const { return nar_pattern() - 1; }
  std::uint32_t minpos_pattern() const { return 1; }
  /// maxpos == 2^((n-2) * 2^es); minpos is its reciprocal.
  std::int64_t maxpos_exp2() const { return static_cast<std::int64_t>(n - 2) << es; }
  /// Largest fraction field any pattern of this format can carry.
  int max_fraction_bits() const { return n - 3 - es > 0 ? n - 3 - es : 0; }

  friend bool operator==(const FormatSpec&, const FormatSpec&) = default;
};

/// A raw n-bit posit pattern tagged with its format. Bits above n-1 are zero.
struct PositBits {
  std::uint32_t bits = 0;
  FormatSpec spec;

  PositBits() = default;
  PositBits(std::uint32_t bits_, FormatSpec spec_) : bits(bits_ & spec_.pattern_mask()), spec(spec_) {}

  bool is_zero() const { return bits == 0; }
  bool is_nar() const { return bits == spec.nar_pattern(); }

  /// "0x…" with ceil(n/4) digits.
  std::string to_hex() const;
  static PositBits from_hex(const std::string& hex, FormatSpec spec);

  friend bool operator==(const PositBits&, const PositBits&) = default;
};

/// Field-level view of a pattern. For Finite patterns, `value` is the exact
/// real ((1-3s) + f) * 2^((1-2s) * (2^es * r + e + s)); the pattern is never
/// negated during decoding.
struct DecodedPosit {
  enum class Kind : std::uint8_t { Zero, NaR, Finite };
  Kind kind = Kind::Zero;
  bool sign = false;        // s
  int regime_run = 0;       // k, length of the leading run
  int regime = 0;           // r: -k if the run is zeros, k-1 if ones
  int regime_field_bits = 0;  // run plus terminator as present in the pattern
  int exponent = 0;         // e, truncated bits read as zero
  int exponent_field_bits = 0;  // how many exponent bits are physically present
  std::uint32_t fraction = 0;   // F
  int fraction_bits = 0;        // m
  ExactValue value;
};

DecodedPosit decode(PositBits p);

/// Nearest representable posit under round-to-nearest, ties-to-even on the
/// pattern. Saturates: |x| > maxpos gives +/-maxpos, 0 < |x| < minpos gives
/// +/-minpos; nonzero never rounds to zero, nothing rounds to NaR.
PositBits encode(const ExactValue& x, FormatSpec spec);

// Correctly rounded arithmetic: exact operation then a single encode.
// NaR operands propagate; div by zero and sqrt of a negative give NaR.
PositBits add(PositBits a, PositBits b);
PositBits sub(PositBits a, PositBits b);
PositBits mul(PositBits a, PositBits b);
PositBits div(PositBits a, PositBits b);
PositBits sqrt(PositBits a);

/// Signed comparison of the raw patterns; NaR is less than every other posit
/// and equal to itself.
std::strong_ordering compare(PositBits a, PositBits b);

PositBits negate(PositBits a);  // 2's complement of the pattern
PositBits absval(PositBits a);

enum class SignMode { copy, negate, xor_ };
/// a's magnitude with the sign taken from b (copy), the opposite of b
/// (negate), or sign(a) xor sign(b). Implemented as conditional pattern
/// negation, matching the 2's-complement coding.
PositBits sign_inject(PositBits a, PositBits b, SignMode mode);

/// Round-to-nearest-even to an integer, clamped to the target range.
/// width is 32 or 64. NaR gives the most negative signed integer of the
/// width; for unsigned targets (spec is silent there) NaR gives 0.
std::int64_t cvt_posit_int(PositBits a, bool is_signed, int width);
PositBits cvt_int_posit(std::int64_t v, FormatSpec spec);

PositBits cvt_posit_posit(PositBits a, FormatSpec to);
/// Exact for every format with |maxpos_exp2| <= 1023 (all es<=2 formats and
/// p16e3); wider dynamic ranges (es=4 near n=32) saturate to +/-Inf / 0.
double cvt_posit_binary64(PositBits a);
PositBits cvt_binary64_posit(double x, FormatSpec spec);

namespace detail {
/// encode() taking an explicit sticky tail, the single rounding step shared
/// by div/sqrt. `sig` must carry at least max_fraction_bits+3 significant
/// bits when sticky is set.
PositBits encode_rounded(int sign, const mpz_class& sig, std::int64_t exp2,
                         bool sticky, FormatSpec spec);
}  // namespace detail

}  // namespace positlab
