#pragma once

#include "svwe/grid.hpp"

// Serial reference implementations. These are deliberately naive (O(N^2) DFT,
// direct-sum convolution) and exist so the fast paths have something exact to
// be tested and benchmarked against. Nothing here is used by the library
// proper.

namespace svwe::reference {

// O(N^2) DFT matching the Grid convention of forward_transform.
SpectralField dft(const Field& f);

// Periodic convolution by direct summation: (a * b)(x) = sum_y a(x-y) b(y) dx^n.
Field convolve_direct(const Field& a, const Field& b);

// Same convolution through the spectral side (pointwise multiplier product).
Field convolve_spectral(const Field& a, const Field& b);

}  // namespace svwe::reference
