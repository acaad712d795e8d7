#include "positlab/quire.hpp"

#include <cassert>
#include <cctype>
#include <stdexcept>

namespace positlab {

Quire::Quire(FormatSpec spec) : spec_(spec) {
  if (spec.es != 2) {
    throw std::invalid_argument("quire is defined for es=2 formats only, got " + spec.name());
  }
}

void Quire::set_nar() {
  nar_ = true;
  acc_ = 0;
}

void Quire::check_range() {
  const mpz_class bound = mpz_class{1} << (bits() - 1);
  if (acc_ >= bound || acc_ < -bound) set_nar();
}

void Quire::clear() {
  nar_ = false;
  acc_ = 0;
}

void Quire::negate() {
  if (nar_) return;
  acc_ = -acc_;  // range is symmetric for arithmetic states, cannot overflow
}

void Quire::mac(PositBits a, PositBits b) {
  assert(a.spec == spec_ && b.spec == spec_);
  if (nar_) return;
  if (a.is_nar() || b.is_nar()) {
    set_nar();
    return;
  }
  if (a.is_zero() || b.is_zero()) return;
  const ExactValue prod = decode(a).value * decode(b).value;
  // Every product of two posits lands on the quire's fixed-point grid:
  // |exponents| are at most 4(n-2) each, so the product LSB is >= 2^-8(n-2).
  const std::int64_t shift = prod.exp2() + fraction_bits();
  assert(shift >= 0);
  mpz_class term = prod.significand() << shift;
  if (prod.is_negative()) term = -term;
  acc_ += term;
  check_range();
}

PositBits Quire::to_posit() const {
  if (nar_) return PositBits(spec_.nar_pattern(), spec_);
  if (acc_ == 0) return PositBits(0, spec_);
  const int s = acc_ < 0 ? -1 : 1;
  const mpz_class mag = abs(acc_);
  return encode(ExactValue::from_parts(s, mag, -fraction_bits()), spec_);
}

ExactValue Quire::exact_value() const {
  if (nar_) return ExactValue::nar();
  if (acc_ == 0) return ExactValue::zero();
  const int s = acc_ < 0 ? -1 : 1;
  return ExactValue::from_parts(s, abs(acc_), -fraction_bits());
}

std::string Quire::dump_hex() const {
  mpz_class u;
  if (nar_) {
    u = mpz_class{1} << (bits() - 1);
  } else {
    u = acc_ < 0 ? acc_ + (mpz_class{1} << bits()) : acc_;
  }
  std::string digits = u.get_str(16);
  for (char& c : digits) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const std::size_t want = static_cast<std::size_t>(bits()) / 4;
  return "0x" + std::string(want - digits.size(), '0') + digits;
}

Quire Quire::from_hex(const std::string& hex, FormatSpec spec) {
  Quire q(spec);
  const std::size_t want = static_cast<std::size_t>(q.bits()) / 4;
  if (hex.size() != want + 2 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X'))
    throw std::invalid_argument("quire hex must be 0x followed by exactly " +
                                std::to_string(want) + " digits: " + hex);
  for (std::size_t j = 2; j < hex.size(); ++j) {
    if (!std::isxdigit(static_cast<unsigned char>(hex[j])))
      throw std::invalid_argument("bad quire hex: " + hex);
  }
  mpz_class u;
  mpz_set_str(u.get_mpz_t(), hex.c_str() + 2, 16);
  const mpz_class half = mpz_class{1} << (q.bits() - 1);
  if (u == half) {
    q.set_nar();
  } else {
    q.acc_ = u >= half ? u - (mpz_class{1} << q.bits()) : u;
  }
  return q;
}

}  // namespace positlab
