#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "flexmac/formats.hpp"

using namespace flexmac;

namespace {

const std::vector<FloatFormat> kSweepFormats = {
    kFp8A, kFp8B, kBf16, FloatFormat{1, 3}, FloatFormat{8, 2},
    FloatFormat{3, 7}, FloatFormat{5, 3}};

}  // namespace

TEST_CASE("default bias") {
  CHECK(default_bias(kBf16) == 127);
  CHECK(default_bias(FloatFormat{1, 3}) == 0);
  CHECK(default_bias(kFp8A) == 7);
}

TEST_CASE("decode examples") {
  // FP8-A {1,4,3}: 0b0_0111_000 is 1.0 (E == bias, M == 0).
  CHECK(decode_float({0x38, kFp8A, {}}) == ExactValue::finite(false, 1, 0));
  // 0b1_1000_100: (-1) * 1.5 * 2^(8-7) = -3.0.
  CHECK(decode_float({0xC4, kFp8A, {}}) == ExactValue::finite(true, 3, 0));
  // Exponent field zero decodes as zero whatever the mantissa holds.
  for (uint32_t mant = 0; mant < 8; ++mant) {
    CHECK(decode_float({mant, kFp8A, {}}).is_zero());
    CHECK(decode_float({0x80u | mant, kFp8A, {}}).is_zero());
  }
}

TEST_CASE("encode examples") {
  CHECK(encode_float(ExactValue::finite(false, 1, 0), kFp8A, 7).bits == 0x38);
  CHECK(encode_float(ExactValue::zero(), kFp8A, 7).bits == 0);

  // Max finite FP8-A is 1.875 * 2^8 = 480; anything above saturates to the
  // max-finite pattern 0b0_1111_111.
  CHECK(decode_float({0x7F, kFp8A, {}}) == ExactValue::finite(false, 15, 5));
  CHECK(encode_float(ExactValue::finite(false, 480, 0), kFp8A, 7).bits ==
        0x7F);
  CHECK(encode_float(ExactValue::finite(false, 481, 0), kFp8A, 7).bits ==
        0x7F);
  CHECK(encode_float(ExactValue::finite(false, 1, 12), kFp8A, 7).bits ==
        0x7F);
  CHECK(encode_float(ExactValue::finite(true, 1, 12), kFp8A, 7).bits == 0xFF);
  CHECK(encode_float(ExactValue::saturated(false), kFp8A, 7).bits == 0x7F);
}

TEST_CASE("float codec round-trip, exhaustive per format") {
  for (const auto& fmt : kSweepFormats) {
    uint32_t patterns = 1u << fmt.width();
    for (uint32_t p = 0; p < patterns; ++p) {
      FloatValue v{p, fmt, {}};
      ExactValue x = decode_float(v);
      uint32_t back = encode_float(x, fmt, fmt.default_bias()).bits;
      if (x.is_zero()) {
        CHECK(back == 0);  // zero patterns re-encode canonically
      } else {
        CHECK(back == p);
      }
    }
  }
}

TEST_CASE("decoded value is monotone in non-negative patterns") {
  for (const auto& fmt : kSweepFormats) {
    uint32_t half = 1u << (fmt.width() - 1);
    double prev = -1.0;
    for (uint32_t p = 0; p < half; ++p) {
      double d = decode_float({p, fmt, {}}).to_double();
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("bias override shifts the decoded value by powers of two") {
  for (const auto& fmt : kSweepFormats) {
    uint32_t patterns = 1u << fmt.width();
    for (int s = -4; s <= 4; ++s) {
      int bias = fmt.default_bias() - s;
      for (uint32_t p = 0; p < patterns; ++p) {
        ExactValue base = decode_float({p, fmt, {}});
        ExactValue shifted = decode_float({p, fmt, bias});
        if (base.is_zero()) {
          CHECK(shifted.is_zero());
        } else {
          CHECK(shifted ==
                base * ExactValue::finite(false, 1, s));
        }
      }
    }
  }
}

TEST_CASE("int codec") {
  CHECK(decode_int(0xF, IntFormat{4, true}) == -1);
  CHECK(decode_int(0xF, IntFormat{4, false}) == 15);

  for (int width : {4, 8}) {
    for (bool sgn : {false, true}) {
      IntFormat fmt{width, sgn};
      for (int64_t v = fmt.min_value(); v <= fmt.max_value(); ++v) {
        CHECK(decode_int(encode_int(v, fmt), fmt) == v);
      }
      CHECK_THROWS_AS(encode_int(fmt.max_value() + 1, fmt),
                      std::out_of_range);
      CHECK_THROWS_AS(encode_int(fmt.min_value() - 1, fmt),
                      std::out_of_range);
    }
  }
}

TEST_CASE("format names") {
  CHECK(parse_float_format("bf16") == kBf16);
  CHECK(parse_float_format("fp8a") == kFp8A);
  CHECK(parse_float_format("fp8b") == kFp8B);
  CHECK(parse_float_format("fp4_3") == kFp8A);
  CHECK(parse_float_format("fp5_2") == kFp8B);
  CHECK(parse_float_format("fp9_3") == std::nullopt);
  CHECK(parse_float_format("fp4_4") == std::nullopt);
  CHECK(format_name(kFp8B) == "fp8b");
  CHECK(format_name(FloatFormat{3, 7}) == "fp3_7");
  CHECK(parse_int_format("uint4") == IntFormat{4, false});
  CHECK(parse_int_format("int9") == std::nullopt);
  CHECK(format_name(IntFormat{8, true}) == "int8");
}
