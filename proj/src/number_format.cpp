#include "positlab/number_format.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace positlab {

NumberFormat NumberFormat::posit(FormatSpec spec) {
  NumberFormat f;
  f.kind_ = Kind::posit;
  f.pspec_ = spec;
  return f;
}

NumberFormat NumberFormat::minifloat(MiniFloatSpec spec) {
  NumberFormat f;
  f.kind_ = Kind::minifloat;
  f.mspec_ = spec;
  return f;
}

NumberFormat NumberFormat::binary64() { return NumberFormat(); }

NumberFormat NumberFormat::parse(const std::string& name) {
  if (name == "binary64") return binary64();
  if (!name.empty() && name[0] == 'p') return posit(FormatSpec::parse(name));
  if (!name.empty() && (name[0] == 'f' || name[0] == 'b')) {
    return minifloat(MiniFloatSpec::parse(name));
  }
  throw std::invalid_argument("unknown format: " + name);
}

std::string NumberFormat::name() const {
  switch (kind_) {
    case Kind::posit: return pspec_.name();
    case Kind::minifloat: return mspec_.name();
    case Kind::binary64: return "binary64";
  }
  return {};
}

int NumberFormat::total_bits() const {
  switch (kind_) {
    case Kind::posit: return pspec_.n;
    case Kind::minifloat: return mspec_.total_bits();
    case Kind::binary64: return 64;
  }
  return 0;
}

namespace {
double as_d(NumberFormat::Scalar a) { return std::bit_cast<double>(a); }
NumberFormat::Scalar as_s(double d) { return std::bit_cast<NumberFormat::Scalar>(d); }
}  // namespace

#define POSITLAB_NF_BINOP(method, pop, mop, dexpr)                                    \
  NumberFormat::Scalar NumberFormat::method(Scalar a, Scalar b) const {               \
    switch (kind_) {                                                                  \
      case Kind::posit:                                                               \
        return pop(PositBits(static_cast<std::uint32_t>(a), pspec_),                  \
                   PositBits(static_cast<std::uint32_t>(b), pspec_)).bits;            \
      case Kind::minifloat:                                                           \
        return mop(MiniFloatBits(static_cast<std::uint32_t>(a), mspec_),              \
                   MiniFloatBits(static_cast<std::uint32_t>(b), mspec_)).pattern;     \
      case Kind::binary64:                                                            \
        return as_s(dexpr);                                                           \
    }                                                                                 \
    return 0;                                                                         \
  }

POSITLAB_NF_BINOP(add, positlab::add, mf_add, as_d(a) + as_d(b))
POSITLAB_NF_BINOP(sub, positlab::sub, mf_sub, as_d(a) - as_d(b))
POSITLAB_NF_BINOP(mul, positlab::mul, mf_mul, as_d(a) * as_d(b))
POSITLAB_NF_BINOP(div, positlab::div, mf_div, as_d(a) / as_d(b))
#undef POSITLAB_NF_BINOP

NumberFormat::Scalar NumberFormat::sqrt(Scalar a) const {
  switch (kind_) {
    case Kind::posit:
      return positlab::sqrt(PositBits(static_cast<std::uint32_t>(a), pspec_)).bits;
    case Kind::minifloat:
      return mf_sqrt(MiniFloatBits(static_cast<std::uint32_t>(a), mspec_)).pattern;
    case Kind::binary64:
      return as_s(std::sqrt(as_d(a)));
  }
  return 0;
}

NumberFormat::Scalar NumberFormat::from_double(double x) const {
  switch (kind_) {
    case Kind::posit: return cvt_binary64_posit(x, pspec_).bits;
    case Kind::minifloat: return mf_encode(ExactValue::from_double(x), mspec_).pattern;
    case Kind::binary64: return as_s(x);
  }
  return 0;
}

double NumberFormat::to_double(Scalar a) const {
  switch (kind_) {
    case Kind::posit:
      return cvt_posit_binary64(PositBits(static_cast<std::uint32_t>(a), pspec_));
    case Kind::minifloat: {
      const MiniValue v = mf_decode(MiniFloatBits(static_cast<std::uint32_t>(a), mspec_));
      if (v.kind == MiniValue::Kind::NaN) return std::numeric_limits<double>::quiet_NaN();
      if (v.kind == MiniValue::Kind::Inf) {
        return v.negative ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
      }
      const double d = v.value.to_double();
      return v.negative && d == 0.0 ? -0.0 : d;
    }
    case Kind::binary64:
      return as_d(a);
  }
  return 0;
}

NumberFormat::Scalar NumberFormat::from_exact(const ExactValue& x) const {
  switch (kind_) {
    case Kind::posit: return encode(x, pspec_).bits;
    case Kind::minifloat: return mf_encode(x, mspec_).pattern;
    case Kind::binary64: return as_s(x.to_double());
  }
  return 0;
}

ExactValue NumberFormat::to_exact(Scalar a) const {
  switch (kind_) {
    case Kind::posit: {
      const DecodedPosit d = decode(PositBits(static_cast<std::uint32_t>(a), pspec_));
      if (d.kind == DecodedPosit::Kind::NaR) return ExactValue::nar();
      if (d.kind == DecodedPosit::Kind::Zero) return ExactValue::zero();
      return d.value;
    }
    case Kind::minifloat: {
      const MiniValue v = mf_decode(MiniFloatBits(static_cast<std::uint32_t>(a), mspec_));
      if (v.kind != MiniValue::Kind::Finite) return ExactValue::nar();
      return v.value;
    }
    case Kind::binary64:
      return ExactValue::from_double(as_d(a));
  }
  return ExactValue::zero();
}

bool NumberFormat::is_exceptional(Scalar a) const {
  switch (kind_) {
    case Kind::posit:
      return PositBits(static_cast<std::uint32_t>(a), pspec_).is_nar();
    case Kind::minifloat: {
      const MiniValue v = mf_decode(MiniFloatBits(static_cast<std::uint32_t>(a), mspec_));
      return v.kind != MiniValue::Kind::Finite;
    }
    case Kind::binary64:
      return !std::isfinite(as_d(a));
  }
  return false;
}

NumberFormat::Scalar NumberFormat::min_pos() const {
  switch (kind_) {
    case Kind::posit: return pspec_.minpos_pattern();
    case Kind::minifloat: return 1;  // smallest subnormal
    case Kind::binary64: return 1;   // 0x1 = smallest binary64 subnormal
  }
  return 0;
}

NumberFormat::Scalar NumberFormat::max_finite() const {
  switch (kind_) {
    case Kind::posit: return pspec_.maxpos_pattern();
    case Kind::minifloat: return mf_encode(mf_max_finite(mspec_), mspec_).pattern;
    case Kind::binary64: return as_s(std::numeric_limits<double>::max());
  }
  return 0;
}

NumberFormat::Scalar NumberFormat::next_up(Scalar a) const {
  // For all three families, positive finite patterns are value-ordered.
  return a + 1;
}

std::string NumberFormat::pattern_hex(Scalar a) const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%0*llX", (total_bits() + 3) / 4,
                static_cast<unsigned long long>(a));
  return buf;
}

}  // namespace positlab
