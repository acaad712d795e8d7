#pragma once

#include <cstdint>
#include <string>

#include "positlab/exact_value.hpp"

namespace positlab {

/// IEEE-like narrow binary float: 1 sign bit, exp_bits exponent, man_bits
/// mantissa, subnormals always enabled. Two conventions for the top exponent:
///   ieee_inf_nan:    all-ones exponent encodes +/-Inf (mantissa 0) and NaN.
///   finite_only_nan: no infinities; the single NaN is the all-ones pattern
///                    (exponent and mantissa both maximal), every other
///                    top-exponent pattern is an ordinary number (E4M3 style).
struct MiniFloatSpec {
  int exp_bits = 5;
  int man_bits = 10;
  int bias = 15;
  enum class InfMode : std::uint8_t { ieee_inf_nan, finite_only_nan };
  InfMode inf_mode = InfMode::ieee_inf_nan;

  MiniFloatSpec() = default;
  MiniFloatSpec(int e, int m, InfMode mode);

  static MiniFloatSpec fp16() { return {5, 10, InfMode::ieee_inf_nan}; }
  static MiniFloatSpec bf16() { return {8, 7, InfMode::ieee_inf_nan}; }
  static MiniFloatSpec fp8e5m2() { return {5, 2, InfMode::ieee_inf_nan}; }
  static MiniFloatSpec fp8e4m3() { return {4, 3, InfMode::finite_only_nan}; }

  /// Preset names fp16/bf16/fp8e4m3/fp8e5m2 or generic "f<E>e<M>m"
  /// (e.g. "f5e10m"); generic formats use the ieee convention.
  static MiniFloatSpec parse(const std::string& name);
  std::string name() const;

  int total_bits() const { return 1 + exp_bits + man_bits; }
  std::uint32_t pattern_mask() const {
    return total_bits() == 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << total_bits()) - 1);
  }
  int exp_max_field() const { return (1 << exp_bits) - 1; }
  /// Largest exponent of a finite value (unbiased). For ieee formats the
  /// all-ones field is reserved; finite-only formats use it for numbers.
  int emax() const {
    return (inf_mode == InfMode::ieee_inf_nan ? exp_max_field() - 1 : exp_max_field()) - bias;
  }
  int emin() const { return 1 - bias; }

  friend bool operator==(const MiniFloatSpec&, const MiniFloatSpec&) = default;
};

struct MiniFloatBits {
  std::uint32_t pattern = 0;
  MiniFloatSpec spec;

  MiniFloatBits() = default;
  MiniFloatBits(std::uint32_t pattern_, MiniFloatSpec spec_)
      : pattern(pattern_ & spec_.pattern_mask()), spec(spec_) {}

  std::uint32_t sign_bit() const { return (pattern >> (spec.total_bits() - 1)) & 1; }
  std::uint32_t exp_field() const { return (pattern >> spec.man_bits) & ((1u << spec.exp_bits) - 1); }
  std::uint32_t man_field() const { return pattern & ((1u << spec.man_bits) - 1); }

  std::string to_hex() const;
  static MiniFloatBits from_hex(const std::string& hex, MiniFloatSpec spec);

  friend bool operator==(const MiniFloatBits&, const MiniFloatBits&) = default;
};

/// Decoded value: finite values carry an exact real (zero keeps its pattern
/// sign separately so +/-0 survive a decode/encode round trip).
struct MiniValue {
  enum class Kind : std::uint8_t { Finite, Inf, NaN };
  Kind kind = Kind::Finite;
  bool negative = false;  // sign of Inf, or of a finite value (including zero)
  ExactValue value;       // Finite only

  static MiniValue finite(bool neg, ExactValue v) { return {Kind::Finite, neg, std::move(v)}; }
  static MiniValue inf(bool neg) { return {Kind::Inf, neg, {}}; }
  static MiniValue nan() { return {Kind::NaN, false, {}}; }
  bool is_zero() const { return kind == Kind::Finite && value.is_zero(); }
};

MiniValue mf_decode(MiniFloatBits b);
/// Round-to-nearest-even encode. Ieee formats overflow to +/-Inf at
/// maxfinite + ulp/2 and beyond; the finite-only format turns anything that
/// rounds past max finite into NaN. Ties on the underflow side round to
/// +/-0 with the sign preserved.
MiniFloatBits mf_encode(const MiniValue& v, MiniFloatSpec spec);
/// ExactValue entry point: NaR encodes as NaN, zero as +0.
MiniFloatBits mf_encode(const ExactValue& x, MiniFloatSpec spec);

// Exact computation, one rounding, IEEE special-value and signed-zero rules.
MiniFloatBits mf_add(MiniFloatBits a, MiniFloatBits b);
MiniFloatBits mf_sub(MiniFloatBits a, MiniFloatBits b);
MiniFloatBits mf_mul(MiniFloatBits a, MiniFloatBits b);
MiniFloatBits mf_div(MiniFloatBits a, MiniFloatBits b);
MiniFloatBits mf_sqrt(MiniFloatBits a);

ExactValue mf_max_finite(MiniFloatSpec spec);
/// Boundary of the finite rounding range: maxfinite + ulp/2. Ieee formats
/// send this value (a tie) and everything above it to Inf; the finite-only
/// format keeps the tie at max finite and overflows only strictly above it.
ExactValue mf_overflow_bound(MiniFloatSpec spec);
/// Smallest positive value (subnormal), 2^(emin - man_bits).
ExactValue mf_min_pos(MiniFloatSpec spec);

/// Next representable value above a positive finite pattern; +Inf (or NaN for
/// finite-only) past max finite. Precondition: positive finite input.
MiniFloatBits mf_next_up(MiniFloatBits b);
/// Decimal digits of accuracy at a representable positive finite x:
/// -log10((nextUp(x) - x) / x).
double mf_accuracy_at(MiniFloatBits b);

namespace detail {
/// Shared rounding core for div/sqrt: round sign*sig*2^exp2 with a sticky
/// tail. sig must carry at least man_bits+3 significant bits when sticky set.
MiniFloatBits mf_encode_rounded(bool negative, const mpz_class& sig, std::int64_t exp2,
                                bool sticky, MiniFloatSpec spec);
}  // namespace detail

}  // namespace positlab
