#pragma once

#include <span>

namespace opo {

/// Fills out[m] = I_m(x) exp(-x) for m = 0 .. out.size()-1, x >= 0.
/// Power series below x = 20, Hankel asymptotics for orders 0 and 1 above,
/// upward recurrence for higher orders there.
void scaled_bessel_i(double x, std::span<double> out);

/// I_0(x) exp(-x).
double scaled_bessel_i0(double x);

}  // namespace opo
