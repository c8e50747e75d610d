#include "flexmac/reference_mult.hpp"

#include <stdexcept>

namespace flexmac {

namespace {

int64_t int_operand(uint32_t bits, int width, bool is_signed) {
  return decode_int(bits, IntFormat{width, is_signed});
}

}  // namespace

MultOutput reference_multiply(uint32_t a_bits, uint32_t b_bits,
                              const MultMode& mode) {
  std::string why;
  if (!mode.valid(&why)) {
    throw std::invalid_argument("reference_multiply: " + why);
  }

  MultOutput out;
  out.mode = mode;
  out.lane_count = mode.lane_count();

  if (mode.datatype == Datatype::Int) {
    const bool sgn = mode.int_signed;
    int64_t sum = 0;
    if (mode.a_sig_width == 8 && mode.b_sig_width == 8) {
      sum = int_operand(a_bits, 8, sgn) * int_operand(b_bits, 8, sgn);
    } else if (mode.a_sig_width == 4 && mode.b_sig_width == 4) {
      for (int i = 0; i < 4; ++i) {
        sum += int_operand(a_bits >> (4 * i), 4, sgn) *
               int_operand(b_bits >> (4 * i), 4, sgn);
      }
    } else {
      const bool a_narrow = mode.a_sig_width == 4;
      uint32_t narrow = a_narrow ? a_bits : b_bits;
      int64_t wide = int_operand(a_narrow ? b_bits : a_bits, 8, sgn);
      for (int i = 0; i < 2; ++i) {
        sum += int_operand(narrow >> (4 * i), 4, sgn) * wide;
      }
    }
    out.int_value = sum;
    return out;
  }

  const FloatFormat& fmt = mode.float_format;
  const int bias = mode.effective_bias();
  const int w = fmt.width();
  const uint32_t word_mask = (1u << w) - 1u;
  for (int i = 0; i < out.lane_count; ++i) {
    FloatValue va{(a_bits >> (w * i)) & word_mask, fmt, bias};
    FloatValue vb{(b_bits >> (w * i)) & word_mask, fmt, bias};
    ExactValue product = decode_float(va) * decode_float(vb);
    out.float_lanes[i] = encode_float(product, fmt, bias);
  }
  return out;
}

}  // namespace flexmac
