#include "flexmac/multiplier.hpp"

#include <cassert>
#include <stdexcept>

namespace flexmac {

namespace {

// Operand nibble split. The high nibble carries the sign in signed modes and
// enters the sub-multiplier sign-extended; low nibbles are always unsigned.
int32_t high_nibble(uint32_t v, bool is_signed) {
  uint32_t h = (v >> 4) & 0xFu;
  if (is_signed && (h & 0x8u)) return int32_t(h) - 16;
  return int32_t(h);
}

int32_t low_nibble(uint32_t v) { return int32_t(v & 0xFu); }

int32_t nibble_operand(uint32_t v, bool is_signed) {
  uint32_t n = v & 0xFu;
  if (is_signed && (n & 0x8u)) return int32_t(n) - 16;
  return int32_t(n);
}

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

bool MultMode::valid(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if ((a_sig_width != 4 && a_sig_width != 8) ||
      (b_sig_width != 4 && b_sig_width != 8)) {
    return fail("significand widths must be 4 or 8");
  }
  if (datatype == Datatype::Float) {
    if (a_sig_width != b_sig_width) {
      return fail("mixed significand widths are Int-only");
    }
    if (!float_format.valid()) return fail("invalid float format");
    int want = float_format.mantissa_bits == 7 ? 8 : 4;
    if (a_sig_width != want) {
      return fail("significand width does not match the float format");
    }
  }
  return true;
}

std::optional<MultMode> parse_mode(std::string_view name) {
  MultMode m;
  if (auto f = parse_int_format(name)) {
    m.datatype = Datatype::Int;
    m.a_sig_width = m.b_sig_width = f->width;
    m.int_signed = f->is_signed;
    return m;
  }
  auto mixed = [&](std::string_view base, bool sgn) -> std::optional<MultMode> {
    if (base == "4x8") return MultMode{Datatype::Int, 4, 8, sgn, {}, {}};
    if (base == "8x4") return MultMode{Datatype::Int, 8, 4, sgn, {}, {}};
    return std::nullopt;
  };
  if (name.substr(0, 3) == "int") {
    if (auto r = mixed(name.substr(3), true)) return r;
  }
  if (name.substr(0, 4) == "uint") {
    if (auto r = mixed(name.substr(4), false)) return r;
  }
  if (auto f = parse_float_format(name)) {
    m.datatype = Datatype::Float;
    m.float_format = *f;
    m.a_sig_width = m.b_sig_width = (f->mantissa_bits == 7) ? 8 : 4;
    return m;
  }
  return std::nullopt;
}

std::string mode_name(const MultMode& mode) {
  if (mode.datatype == Datatype::Float) return format_name(mode.float_format);
  std::string s = mode.int_signed ? "int" : "uint";
  if (mode.a_sig_width == mode.b_sig_width) {
    return s + std::to_string(mode.a_sig_width);
  }
  return s + std::to_string(mode.a_sig_width) + "x" +
         std::to_string(mode.b_sig_width);
}

int32_t sub_mult_5x5(int32_t a, int32_t b) {
  require(a >= -16 && a <= 15, "sub_mult_5x5: operand a out of 5-bit range");
  require(b >= -16 && b <= 15, "sub_mult_5x5: operand b out of 5-bit range");
  // Shift-add over the multiplier bits; bit 4 is the sign bit and carries
  // weight -16, so its partial product is subtracted.
  uint32_t ub = uint32_t(b) & 0x1Fu;
  int32_t acc = 0;
  for (int i = 0; i < 4; ++i) {
    if ((ub >> i) & 1u) acc += a << i;
  }
  if ((ub >> 4) & 1u) acc -= a << 4;
  return acc;
}

CsmOutput csm_multiply(uint32_t a_bits, uint32_t b_bits,
                       const MultMode& mode) {
  std::string why;
  require(mode.valid(&why), "csm_multiply: invalid mode");
  const bool is_int = mode.datatype == Datatype::Int;
  const bool sgn = is_int && mode.int_signed;

  CsmOutput out;
  out.lane_count = mode.lane_count();
  out.has_fused_sum = is_int;

  if (mode.a_sig_width == 8 && mode.b_sig_width == 8) {
    // One product from four sub-multipliers at shifts {8, 4, 4, 0}.
    require((a_bits >> 8) == 0 && (b_bits >> 8) == 0,
            "csm_multiply: 8b operand wider than 8 bits");
    int32_t ah = high_nibble(a_bits, sgn), al = low_nibble(a_bits);
    int32_t bh = high_nibble(b_bits, sgn), bl = low_nibble(b_bits);
    int32_t p = (sub_mult_5x5(ah, bh) << 8) +
                ((sub_mult_5x5(ah, bl) + sub_mult_5x5(al, bh)) << 4) +
                sub_mult_5x5(al, bl);
    out.lanes[0] = p;
    out.lane_bits[0] = 16;
    out.fused_sum = p;
    return out;
  }

  if (mode.a_sig_width == 4 && mode.b_sig_width == 4) {
    // Four independent lane products.
    require((a_bits >> 16) == 0 && (b_bits >> 16) == 0,
            "csm_multiply: packed 4b operands wider than 16 bits");
    int32_t sum = 0;
    for (int i = 0; i < 4; ++i) {
      int32_t ai = nibble_operand(a_bits >> (4 * i), sgn);
      int32_t bi = nibble_operand(b_bits >> (4 * i), sgn);
      out.lanes[i] = sub_mult_5x5(ai, bi);
      out.lane_bits[i] = 8;
      sum += out.lanes[i];
    }
    out.fused_sum = sum;
    return out;
  }

  // Mixed 4b x 8b: two lanes on the narrow side sharing the wide operand.
  const bool a_narrow = mode.a_sig_width == 4;
  uint32_t narrow = a_narrow ? a_bits : b_bits;
  uint32_t wide = a_narrow ? b_bits : a_bits;
  require((narrow >> 8) == 0, "csm_multiply: packed 4b operand too wide");
  require((wide >> 8) == 0, "csm_multiply: 8b operand too wide");
  int32_t wh = high_nibble(wide, sgn), wl = low_nibble(wide);
  int32_t sum = 0;
  for (int i = 0; i < 2; ++i) {
    int32_t ni = nibble_operand(narrow >> (4 * i), sgn);
    int32_t p = (sub_mult_5x5(ni, wh) << 4) + sub_mult_5x5(ni, wl);
    out.lanes[i] = p;
    out.lane_bits[i] = 12;
    sum += p;
  }
  out.fused_sum = sum;
  return out;
}

int exponent_add(int e_a, int e_b, int bias) { return e_a + e_b - bias; }

int sign_xor(int s_a, int s_b) { return (s_a ^ s_b) & 1; }

NormalizedLane normalize(uint32_t raw_lane, int exponent, LaneKind kind) {
  NormalizedLane n;
  if (raw_lane == 0) {
    n.zero = true;
    return n;
  }
  int frac_in = (kind == LaneKind::Wide) ? 14 : 6;
  n.sig = raw_lane;
  n.exponent = exponent;
  if (raw_lane >> (frac_in + 1)) {  // product in [2,4): point moves one left
    n.frac_bits = frac_in + 1;
    ++n.exponent;
  } else {
    n.frac_bits = frac_in;
  }
  return n;
}

RoundedLane round_lane(const NormalizedLane& n, const FloatFormat& fmt) {
  RoundedLane r;
  if (n.zero) return r;
  int m = fmt.mantissa_bits;
  int drop = n.frac_bits - m;
  assert(drop >= 0);
  uint32_t keep = n.sig >> drop;
  if (drop > 0) {
    uint32_t rem = n.sig & ((1u << drop) - 1u);
    uint32_t half = 1u << (drop - 1);
    if (rem > half || (rem == half && (keep & 1u))) ++keep;
  }
  if (keep >> (m + 1)) {  // 1.11..1 rounded up to 10.0..0
    keep >>= 1;
    r.exp_increment = 1;
  }
  r.mantissa = keep & ((1u << m) - 1u);
  return r;
}

MultOutput multiply(uint32_t a_bits, uint32_t b_bits, const MultMode& mode) {
  std::string why;
  require(mode.valid(&why), "multiply: invalid mode");

  MultOutput out;
  out.mode = mode;
  out.lane_count = mode.lane_count();

  if (mode.datatype == Datatype::Int) {
    // All sub-logics except the CSM are gated.
    out.int_value = csm_multiply(a_bits, b_bits, mode).fused_sum;
    return out;
  }

  const FloatFormat& fmt = mode.float_format;
  const int bias = mode.effective_bias();
  const int m = fmt.mantissa_bits;
  const int w = fmt.width();
  const uint32_t word_mask = (w == 32) ? ~0u : ((1u << w) - 1u);
  const LaneKind kind =
      mode.a_sig_width == 8 ? LaneKind::Wide : LaneKind::Narrow;

  // Unpack lanes, prepend hidden bits, and pack significands for the CSM.
  // The 2-bit mantissa rides the 3-bit datapath with its LSB zero.
  struct Lane {
    int sign = 0;
    int exp_sum = 0;
    bool zero = false;
  };
  std::array<Lane, 4> lanes{};
  uint32_t a_sig = 0, b_sig = 0;
  const int sig_shift = (kind == LaneKind::Wide) ? 8 : 4;
  for (int i = 0; i < out.lane_count; ++i) {
    uint32_t wa = (a_bits >> (w * i)) & word_mask;
    uint32_t wb = (b_bits >> (w * i)) & word_mask;
    uint32_t ea = (wa >> m) & uint32_t(fmt.max_exp_field());
    uint32_t eb = (wb >> m) & uint32_t(fmt.max_exp_field());
    lanes[i].sign = sign_xor(int(wa >> (w - 1)), int(wb >> (w - 1)));
    lanes[i].zero = (ea == 0 || eb == 0);
    lanes[i].exp_sum = exponent_add(int(ea), int(eb), bias);
    uint32_t ma = wa & ((1u << m) - 1u);
    uint32_t mb = wb & ((1u << m) - 1u);
    uint32_t sa = (1u << m) | ma;
    uint32_t sb = (1u << m) | mb;
    if (m == 2) {
      sa <<= 1;
      sb <<= 1;
    }
    a_sig |= sa << (sig_shift * i);
    b_sig |= sb << (sig_shift * i);
  }

  MultMode csm_mode = mode;  // same widths, unsigned significand multiply
  csm_mode.datatype = Datatype::Int;
  csm_mode.int_signed = false;
  CsmOutput csm = csm_multiply(a_sig, b_sig, csm_mode);

  const uint32_t sign_bit = 1u << (w - 1);
  for (int i = 0; i < out.lane_count; ++i) {
    FloatValue& fv = out.float_lanes[i];
    fv.format = fmt;
    if (bias != fmt.default_bias()) fv.bias_override = bias;
    if (lanes[i].zero) {
      fv.bits = 0;  // canonical zero word
      continue;
    }
    NormalizedLane n =
        normalize(uint32_t(csm.lanes[i]), lanes[i].exp_sum, kind);
    RoundedLane r = round_lane(n, fmt);
    int e_final = n.exponent + r.exp_increment;
    if (e_final < 1) {
      fv.bits = 0;  // underflow: flush
    } else if (e_final > fmt.max_exp_field()) {
      fv.bits = fmt.max_finite_bits() | (lanes[i].sign ? sign_bit : 0u);
    } else {
      fv.bits = (lanes[i].sign ? sign_bit : 0u) |
                (uint32_t(e_final) << m) | r.mantissa;
    }
  }
  return out;
}

BundleActivity mode_activity(const MultMode& mode) {
  BundleActivity a;
  a.csm = true;
  if (mode.datatype == Datatype::Int) return a;  // everything else gated
  int lanes = mode.lane_count();
  a.xors = lanes;
  a.exponent_adders = lanes;
  if (lanes == 1) {
    a.normalizers_wide = 1;
  } else {
    a.normalizers_narrow = lanes;
  }
  a.rounders = lanes;
  return a;
}

}  // namespace flexmac
