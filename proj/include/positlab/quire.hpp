#pragma once

#include <string>

#include "positlab/posit.hpp"

namespace positlab {

/// Fixed-point accumulator for exact multiply-accumulate of posit products.
/// For an n-bit posit with es=2 the register is 16n bits: a two's-complement
/// integer with 8(n-2) fraction bits, covering every product of two posits
/// with 30 bits of carry headroom (at least 2^30 accumulations cannot
/// overflow). Overflow and NaR inputs poison the quire to its NaR state,
/// which only q_clear removes.
class Quire {
 public:
  /// Only es=2 formats carry a quire; anything else throws invalid_argument.
  explicit Quire(FormatSpec spec);

  const FormatSpec& spec() const { return spec_; }
  int bits() const { return 16 * spec_.n; }
  int fraction_bits() const { return 8 * (spec_.n - 2); }

  bool is_nar() const { return nar_; }

  void clear();
  void negate();
  /// quire += a*b, exactly. NaR operands or accumulator overflow set NaR.
  void mac(PositBits a, PositBits b);
  /// Round the accumulated sum to the nearest posit (ties to even on the
  /// pattern, saturating). Leaves the quire unchanged.
  PositBits to_posit() const;

  /// Current contents as an exact value (NaR state gives NaR).
  ExactValue exact_value() const;

  /// Big-endian hex of the 16n-bit two's-complement register, 4n digits,
  /// "0x" prefix. NaR state dumps the pattern 1000...0.
  std::string dump_hex() const;
  /// Inverse of dump_hex: installs a raw register state (testing hook; the
  /// 2^30-MAC overflow guarantee is impractical to reach by accumulation).
  static Quire from_hex(const std::string& hex, FormatSpec spec);

 private:
  void set_nar();
  void check_range();

  FormatSpec spec_;
  bool nar_ = false;
  // Signed integer I; represented value is I * 2^-fraction_bits, with
  // I in [-2^(16n-1), 2^(16n-1)). The NaR pattern -2^(16n-1) is excluded
  // from arithmetic states and expressed via nar_ instead.
  mpz_class acc_ = 0;
};

}  // namespace positlab
