#pragma once

#include <cstdint>
#include <string>

#include "positlab/minifloat.hpp"
#include "positlab/posit.hpp"
#include "positlab/quire.hpp"

namespace positlab {

/// Closed variant over the three scalar families the kernels run on:
/// posits, narrow IEEE-like floats, and native binary64 (the reference).
/// A Scalar is the raw pattern widened to 64 bits; for binary64 it is the
/// bit pattern of the double itself. All arithmetic is the single-rounding
/// operation of the format's home module.
class NumberFormat {
 public:
  using Scalar = std::uint64_t;
  enum class Kind : std::uint8_t { posit, minifloat, binary64 };

  NumberFormat() : kind_(Kind::binary64) {}

  static NumberFormat posit(FormatSpec spec);
  static NumberFormat minifloat(MiniFloatSpec spec);
  static NumberFormat binary64();
  /// "p<N>e<ES>", a minifloat name (fp16, bf16, fp8e4m3, fp8e5m2, f<E>e<M>m),
  /// or "binary64". Throws invalid_argument for anything else.
  static NumberFormat parse(const std::string& name);

  Kind kind() const { return kind_; }
  bool is_posit() const { return kind_ == Kind::posit; }
  std::string name() const;
  int total_bits() const;
  const FormatSpec& posit_spec() const { return pspec_; }
  const MiniFloatSpec& minifloat_spec() const { return mspec_; }

  /// True for posit formats with es=2 (the ones that carry a quire).
  bool has_quire() const { return kind_ == Kind::posit && pspec_.es == 2; }

  Scalar add(Scalar a, Scalar b) const;
  Scalar sub(Scalar a, Scalar b) const;
  Scalar mul(Scalar a, Scalar b) const;
  Scalar div(Scalar a, Scalar b) const;
  Scalar sqrt(Scalar a) const;

  Scalar from_double(double x) const;
  double to_double(Scalar a) const;
  /// Encode an exact value (round to nearest even; NaR becomes NaR/NaN).
  Scalar from_exact(const ExactValue& x) const;
  /// Exact value of a pattern. NaR, NaN and infinities all map to NaR;
  /// signed zero collapses to zero.
  ExactValue to_exact(Scalar a) const;

  /// Exceptional patterns (NaR / NaN / Inf) that poison error measurement.
  bool is_exceptional(Scalar a) const;

  Scalar min_pos() const;
  Scalar max_finite() const;
  /// Next representable above a positive finite pattern (may leave the
  /// finite range at max_finite; callers guard).
  Scalar next_up(Scalar a) const;

  std::string pattern_hex(Scalar a) const;

  friend bool operator==(const NumberFormat&, const NumberFormat&) = default;

 private:
  Kind kind_;
  FormatSpec pspec_{16, 2};
  MiniFloatSpec mspec_ = MiniFloatSpec::fp16();
};

}  // namespace positlab
