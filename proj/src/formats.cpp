#include "flexmac/formats.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace flexmac {

ExactValue ExactValue::finite(bool negative, uint64_t significand, int exp2) {
  if (significand == 0) return zero();
  ExactValue v;
  v.kind_ = Kind::Finite;
  v.negative_ = negative;
  // Canonicalize: strip trailing zero bits into the exponent.
  while ((significand & 1) == 0) {
    significand >>= 1;
    ++exp2;
  }
  v.sig_ = significand;
  v.exp2_ = exp2;
  return v;
}

ExactValue ExactValue::operator*(const ExactValue& rhs) const {
  if (is_zero() || rhs.is_zero()) return zero();
  bool neg = negative_ ^ rhs.negative_;
  if (!is_finite() || !rhs.is_finite()) return saturated(neg);
  unsigned __int128 wide =
      static_cast<unsigned __int128>(sig_) * rhs.sig_;
  assert(wide >> 64 == 0 && "significand product exceeds 64 bits");
  return finite(neg, static_cast<uint64_t>(wide), exp2_ + rhs.exp2_);
}

ExactValue ExactValue::operator-() const {
  ExactValue v = *this;
  switch (kind_) {
    case Kind::Zero:
      break;
    case Kind::Finite:
      v.negative_ = !negative_;
      break;
    case Kind::SaturatedMax:
      v.kind_ = Kind::SaturatedMin;
      break;
    case Kind::SaturatedMin:
      v.kind_ = Kind::SaturatedMax;
      break;
  }
  return v;
}

double ExactValue::to_double() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::SaturatedMax:
      return std::numeric_limits<double>::infinity();
    case Kind::SaturatedMin:
      return -std::numeric_limits<double>::infinity();
    case Kind::Finite:
      break;
  }
  double m = std::ldexp(static_cast<double>(sig_), exp2_);
  return negative_ ? -m : m;
}

int default_bias(const FloatFormat& fmt) { return fmt.default_bias(); }

ExactValue decode_float(const FloatValue& v) {
  const FloatFormat& f = v.format;
  assert(f.valid());
  uint32_t bits = v.bits & ((1u << f.width()) - 1u);
  int m = f.mantissa_bits;
  uint32_t exp_field = (bits >> m) & uint32_t(f.max_exp_field());
  if (exp_field == 0) return ExactValue::zero();  // flush-to-zero encoding
  bool neg = (bits >> (f.width() - 1)) & 1u;
  uint32_t mant = bits & ((1u << m) - 1u);
  uint64_t sig = (uint64_t(1) << m) | mant;  // hidden bit
  int exp2 = int(exp_field) - v.bias() - m;
  return ExactValue::finite(neg, sig, exp2);
}

FloatValue encode_float(const ExactValue& x, const FloatFormat& fmt,
                        int bias) {
  assert(fmt.valid());
  FloatValue out;
  out.format = fmt;
  if (bias != fmt.default_bias()) out.bias_override = bias;

  const int m = fmt.mantissa_bits;
  const uint32_t sign_bit = 1u << (fmt.width() - 1);
  auto saturate = [&](bool neg) {
    out.bits = fmt.max_finite_bits() | (neg ? sign_bit : 0u);
    return out;
  };

  switch (x.kind()) {
    case ExactValue::Kind::Zero:
      out.bits = 0;
      return out;
    case ExactValue::Kind::SaturatedMax:
      return saturate(false);
    case ExactValue::Kind::SaturatedMin:
      return saturate(true);
    case ExactValue::Kind::Finite:
      break;
  }

  // Position of the leading one gives the unbiased exponent.
  uint64_t sig = x.significand();
  int msb = 63 - __builtin_clzll(sig);
  int exp_unbiased = msb + x.exp2();

  // Round the significand to m fraction bits (ties to even).
  uint64_t rounded;
  int drop = msb - m;
  if (drop <= 0) {
    rounded = sig << -drop;
  } else {
    uint64_t keep = sig >> drop;
    uint64_t rem = sig & ((uint64_t(1) << drop) - 1);
    uint64_t half = uint64_t(1) << (drop - 1);
    if (rem > half || (rem == half && (keep & 1))) ++keep;
    rounded = keep;
  }
  if (rounded >> (m + 1)) {  // carry out of the mantissa: 1.11..1 -> 10.0..0
    rounded >>= 1;
    ++exp_unbiased;
  }

  int exp_field = exp_unbiased + bias;
  if (exp_field < 1) {  // below the smallest normal: flush to zero
    out.bits = 0;
    return out;
  }
  if (exp_field > fmt.max_exp_field()) return saturate(x.negative());

  uint32_t mant = uint32_t(rounded) & ((1u << m) - 1u);
  out.bits = (x.negative() ? sign_bit : 0u) |
             (uint32_t(exp_field) << m) | mant;
  return out;
}

int64_t decode_int(uint32_t bits, const IntFormat& fmt) {
  assert(fmt.valid());
  uint32_t mask = (fmt.width == 8) ? 0xFFu : 0xFu;
  uint32_t v = bits & mask;
  if (fmt.is_signed && (v >> (fmt.width - 1))) {
    return int64_t(v) - (int64_t(1) << fmt.width);
  }
  return int64_t(v);
}

uint32_t encode_int(int64_t value, const IntFormat& fmt) {
  assert(fmt.valid());
  if (value < fmt.min_value() || value > fmt.max_value()) {
    throw std::out_of_range("integer value out of range for " +
                            format_name(fmt));
  }
  uint32_t mask = (fmt.width == 8) ? 0xFFu : 0xFu;
  return uint32_t(value) & mask;
}

std::optional<FloatFormat> parse_float_format(std::string_view name) {
  if (name == "bf16") return kBf16;
  if (name == "fp8a") return kFp8A;
  if (name == "fp8b") return kFp8B;
  // Generic fp{e}_{m}
  if (name.size() >= 5 && name.substr(0, 2) == "fp") {
    auto rest = name.substr(2);
    auto sep = rest.find('_');
    if (sep == std::string_view::npos || sep == 0 ||
        sep + 1 >= rest.size()) {
      return std::nullopt;
    }
    int e = 0, m = 0;
    for (char c : rest.substr(0, sep)) {
      if (c < '0' || c > '9') return std::nullopt;
      e = e * 10 + (c - '0');
    }
    for (char c : rest.substr(sep + 1)) {
      if (c < '0' || c > '9') return std::nullopt;
      m = m * 10 + (c - '0');
    }
    FloatFormat f{e, m};
    if (f.valid()) return f;
  }
  return std::nullopt;
}

std::optional<IntFormat> parse_int_format(std::string_view name) {
  if (name == "int8") return IntFormat{8, true};
  if (name == "int4") return IntFormat{4, true};
  if (name == "uint8") return IntFormat{8, false};
  if (name == "uint4") return IntFormat{4, false};
  return std::nullopt;
}

std::string format_name(const FloatFormat& fmt) {
  if (fmt == kBf16) return "bf16";
  if (fmt == kFp8A) return "fp8a";
  if (fmt == kFp8B) return "fp8b";
  return "fp" + std::to_string(fmt.exponent_bits) + "_" +
         std::to_string(fmt.mantissa_bits);
}

std::string format_name(const IntFormat& fmt) {
  return std::string(fmt.is_signed ? "int" : "uint") +
         std::to_string(fmt.width);
}

}  // namespace flexmac
