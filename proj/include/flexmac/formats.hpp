// Numeric formats of the multi-precision datapath: small floats with a
// programmable exponent bias, and 4b/8b integers. Values decode to exact
// dyadic rationals so codecs and oracles never round behind your back.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace flexmac {

// Bit layout is [sign | exponent | mantissa], MSB first.
// Exponent field 0 decodes as exact zero; there are no NaN/Inf encodings and
// no subnormals, so the all-ones exponent is an ordinary value.
struct FloatFormat {
  int exponent_bits = 0;  // 1..8
  int mantissa_bits = 0;  // 2, 3 or 7

  constexpr int width() const { return 1 + exponent_bits + mantissa_bits; }
  constexpr int default_bias() const { return (1 << (exponent_bits - 1)) - 1; }
  constexpr int max_exp_field() const { return (1 << exponent_bits) - 1; }
  // All-ones exponent, all-ones mantissa, sign clear.
  constexpr uint32_t max_finite_bits() const {
    return (uint32_t(max_exp_field()) << mantissa_bits) |
           ((1u << mantissa_bits) - 1u);
  }
  constexpr bool valid() const {
    return exponent_bits >= 1 && exponent_bits <= 8 &&
           (mantissa_bits == 2 || mantissa_bits == 3 || mantissa_bits == 7);
  }
  bool operator==(const FloatFormat&) const = default;
};

inline constexpr FloatFormat kBf16{8, 7};
inline constexpr FloatFormat kFp8A{4, 3};
inline constexpr FloatFormat kFp8B{5, 2};

struct IntFormat {
  int width = 8;  // 4 or 8
  bool is_signed = true;

  constexpr bool valid() const { return width == 4 || width == 8; }
  constexpr int64_t min_value() const {
    return is_signed ? -(int64_t(1) << (width - 1)) : 0;
  }
  constexpr int64_t max_value() const {
    return is_signed ? (int64_t(1) << (width - 1)) - 1
                     : (int64_t(1) << width) - 1;
  }
  bool operator==(const IntFormat&) const = default;
};

// A bit pattern plus its format. bias_override, when set, replaces the
// format's default bias for decoding (programmable-bias semantics).
struct FloatValue {
  uint32_t bits = 0;
  FloatFormat format;
  std::optional<int> bias_override;

  int bias() const {
    return bias_override ? *bias_override : format.default_bias();
  }
  bool operator==(const FloatValue&) const = default;
};

// Exact dyadic rational: (-1)^negative * significand * 2^exp2.
// Every value of the supported formats is dyadic and products of dyadics stay
// dyadic, so this represents codec and multiplier results without rounding.
// The saturation markers tag out-of-range results before encoding.
class ExactValue {
 public:
  enum class Kind { Zero, Finite, SaturatedMax, SaturatedMin };

  ExactValue() = default;
  static ExactValue zero() { return ExactValue{}; }
  static ExactValue finite(bool negative, uint64_t significand, int exp2);
  static ExactValue saturated(bool negative) {
    ExactValue v;
    v.kind_ = negative ? Kind::SaturatedMin : Kind::SaturatedMax;
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool negative() const { return negative_; }
  // Normalized so the significand is odd (canonical form).
  uint64_t significand() const { return sig_; }
  int exp2() const { return exp2_; }

  ExactValue operator*(const ExactValue& rhs) const;
  ExactValue operator-() const;
  bool operator==(const ExactValue&) const = default;

  double to_double() const;  // display/diagnostics only

 private:
  Kind kind_ = Kind::Zero;
  bool negative_ = false;
  uint64_t sig_ = 0;
  int exp2_ = 0;
};

int default_bias(const FloatFormat& fmt);

// Exponent field 0 decodes as exact zero regardless of mantissa bits.
ExactValue decode_float(const FloatValue& v);

// Round-to-nearest-even onto the format's normal grid. After rounding,
// exponent overflow saturates to the max-finite pattern and exponent
// underflow (biased exponent < 1) flushes to the canonical all-zero word.
FloatValue encode_float(const ExactValue& x, const FloatFormat& fmt, int bias);
inline FloatValue encode_float(const ExactValue& x, const FloatFormat& fmt) {
  return encode_float(x, fmt, fmt.default_bias());
}

int64_t decode_int(uint32_t bits, const IntFormat& fmt);
// Throws std::out_of_range when the value does not fit the format.
uint32_t encode_int(int64_t value, const IntFormat& fmt);

// Canonical format names: bf16, fp8a, fp8b, fp{e}_{m}, int8, int4, uint8,
// uint4.
std::optional<FloatFormat> parse_float_format(std::string_view name);
std::optional<IntFormat> parse_int_format(std::string_view name);
std::string format_name(const FloatFormat& fmt);
std::string format_name(const IntFormat& fmt);

}  // namespace flexmac
