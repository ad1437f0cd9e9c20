#pragma once

#include <complex>

namespace oceansrc {

using cplx = std::complex<double>;

// First-kind Hankel function of order zero for Re z >= 0, z != 0.
// Real arguments go through J0 + iY0, purely imaginary ones through
// H0(iy) = (2 / (i pi)) K0(y); anything else uses the complex series or the
// large-argument expansion.
cplx hankel_h1_0(cplx z);

// Bessel functions of order zero for complex arguments (entire / principal branch).
cplx bessel_j0(cplx z);
cplx bessel_y0(cplx z);

}  // namespace oceansrc
