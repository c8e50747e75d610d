// Independent reference for the multiplier: products are computed in exact
// rational arithmetic (Float) or native wide integers (Int) and then pushed
// through the declared rounding/saturation policy via the codec. Shares no
// code with the CSM/normalize/round pipeline, so sweeping one against the
// other is a meaningful check.
#pragma once

#include "flexmac/multiplier.hpp"

namespace flexmac {

MultOutput reference_multiply(uint32_t a_bits, uint32_t b_bits,
                              const MultMode& mode);

}  // namespace flexmac
