// Bit-exact model of the all-in-one multiplier: a carry-save multiplier
// restructured into four signed 5b x 5b sub-multipliers with selective
// shift-add fusion, an XOR bundle, a programmable exponent adder bundle, and
// normalizer/rounder bundles, gated per operating mode.
//
// Lane packing conventions (documented here once, used by csm_multiply and
// multiply):
//   - 8b x 8b (Int or Float m=7): a_bits/b_bits hold one operand each.
//   - 4b x 4b Int: four lanes; lane i occupies bits [4i+3 : 4i] of both
//     operands.
//   - 4b x 8b Int (and 8b x 4b): two lanes on the narrow side, bits
//     [4i+3 : 4i]; the wide side is shared by both lanes.
//   - Float m in {2,3}: four lanes of full format words, lane i at
//     [w*i + w-1 : w*i] where w is the format width. Significands entering
//     the CSM are 1.M with the FP8-B 2-bit mantissa left-aligned on the
//     3-bit mantissa datapath (LSB zero).
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "flexmac/formats.hpp"

namespace flexmac {

enum class Datatype { Int, Float };

struct MultMode {
  Datatype datatype = Datatype::Int;
  int a_sig_width = 8;  // significand width incl. hidden bit (Float) or
  int b_sig_width = 8;  // integer operand width (Int); 4 or 8
  bool int_signed = true;             // Int mode only
  FloatFormat float_format{};         // Float mode only
  std::optional<int> bias;            // Float mode; default = format bias

  // 8x8 -> 1 lane, mixed -> 2 lanes, 4x4 -> 4 lanes.
  int lane_count() const {
    if (a_sig_width == 8 && b_sig_width == 8) return 1;
    if (a_sig_width == 4 && b_sig_width == 4) return 4;
    return 2;
  }
  int effective_bias() const {
    return bias ? *bias : float_format.default_bias();
  }
  // Width in bits of the packed operand words (all lanes).
  int a_packed_bits() const {
    if (datatype == Datatype::Float) return float_format.width() * lane_count();
    return a_sig_width == 4 ? 4 * (b_sig_width == 4 ? 4 : 2) : 8;
  }
  int b_packed_bits() const {
    if (datatype == Datatype::Float) return float_format.width() * lane_count();
    return b_sig_width == 4 ? 4 * (a_sig_width == 4 ? 4 : 2) : 8;
  }
  bool valid(std::string* why = nullptr) const;
  bool operator==(const MultMode&) const = default;
};

// Canonical mode names: int8, int4, uint8, uint4, int4x8, int8x4, uint4x8,
// uint8x4, bf16, fp8a, fp8b, fp{e}_{m}.
std::optional<MultMode> parse_mode(std::string_view name);
std::string mode_name(const MultMode& mode);

// Raw output of the restructured CSM before any float post-processing.
struct CsmOutput {
  int lane_count = 0;
  std::array<int32_t, 4> lanes{};  // per-lane raw products
  std::array<int, 4> lane_bits{};  // significant width of each lane word
  bool has_fused_sum = false;      // Int mode only
  int32_t fused_sum = 0;           // selective-adder output
};

struct MultOutput {
  MultMode mode;
  int lane_count = 0;
  std::array<FloatValue, 4> float_lanes{};  // Float mode results
  int64_t int_value = 0;                    // Int mode result (single)
};

// 5-bit two's-complement multiply, built from shift-add partial products with
// a sign-corrected final row (the sub-multiplier primitive of the CSM).
int32_t sub_mult_5x5(int32_t a, int32_t b);

// Composes sub-multiplier results per mode: one shifted-add product (8x8),
// two (mixed) or four (4x4) lane products, plus the fused sum in Int mode.
// Float mode operands are packed unsigned significands (hidden bit included).
CsmOutput csm_multiply(uint32_t a_bits, uint32_t b_bits, const MultMode& mode);

// Returns e_a + e_b - bias on raw biased exponent fields. The result may
// leave the field range; range handling happens after normalize/round.
int exponent_add(int e_a, int e_b, int bias);

int sign_xor(int s_a, int s_b);

enum class LaneKind { Wide, Narrow };

struct NormalizedLane {
  uint32_t sig = 0;   // fixed-point significand, leading one at frac_bits
  int frac_bits = 0;  // fraction bits in sig
  int exponent = 0;   // biased exponent after the normalize shift
  bool zero = false;
};

// Shifts a raw significand product (value in [1,4)) so exactly one integer
// bit remains, incrementing the exponent when the product was >= 2.
NormalizedLane normalize(uint32_t raw_lane, int exponent, LaneKind kind);

struct RoundedLane {
  uint32_t mantissa = 0;  // mantissa field bits (hidden bit removed)
  int exp_increment = 0;  // 1 when rounding carried out of the mantissa
};

// Round-to-nearest-even down to the format's mantissa width.
RoundedLane round_lane(const NormalizedLane& n, const FloatFormat& fmt);

// Full pipeline. Float: sign XOR + exponent add + CSM + normalize + round per
// lane, with exponent overflow saturating to max finite and underflow
// flushing to zero. Int: CSM fused sum only; every other sub-logic is gated
// and the float_format/bias fields are ignored.
MultOutput multiply(uint32_t a_bits, uint32_t b_bits, const MultMode& mode);

// Which sub-logics of the shared bundles a mode activates. The multiplier
// carries one wide and four narrow normalizer/rounder pairs; introspection
// only, results never depend on this.
struct BundleActivity {
  bool csm = false;
  int xors = 0;
  int exponent_adders = 0;
  int normalizers_wide = 0;
  int normalizers_narrow = 0;
  int rounders = 0;
};

BundleActivity mode_activity(const MultMode& mode);

}  // namespace flexmac
