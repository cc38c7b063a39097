#pragma once

#include "mspgw/rational.hpp"

#include <vector>

namespace mspgw {

// Intersection numbers <tau_{d_1} ... tau_{d_n}>_g of psi classes on the
// moduli of curves, by the Witten/Kontsevich KdV recursion in its
// Virasoro (DVV) form; exact, memoized. Requires sum d_i = 3g - 3 + n
// (DimensionMismatch otherwise) and g <= 3 (GenusUnsupported beyond).
Rational psi_integral(int g, std::vector<int> exponents);

}  // namespace mspgw
