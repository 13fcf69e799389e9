#pragma once

#include "svwe/grid.hpp"

namespace svwe {

// Radix-2 transforms between Field and SpectralField under the convention
// documented on Grid. Plans (bit-reversal and twiddle tables) are cached per
// thread, so the free functions are cheap to call repeatedly on the same grid
// and safe to call concurrently.
//
// forward_transform . inverse_transform is the identity to ~1e-15 relative.

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& s);

// In-place variants reusing the caller's output storage (hot paths).
void forward_transform(const Field& f, SpectralField& out);
void inverse_transform(const SpectralField& s, Field& out);

// sqrt(sum f^2 dx^n), asserting agreement with the spectral-side sum
// (1/L^n) sum |fhat|^2 to 1e-10 relative.
double parseval_norm(const Field& f);

// Forces exact Hermitian symmetry by averaging paired coefficients.
// Multiplier application keeps symmetry on its own; this is used after
// injecting transformed real-space data to undo rounding drift.
void enforce_hermitian(SpectralField& s);

namespace detail {
// One complex radix-2 pass over contiguous data, length a power of two.
// inverse applies e^{+2 pi i jk/N} WITHOUT the 1/N factor.
void fft_inplace(cplx* data, int n, bool inverse);
}  // namespace detail

}  // namespace svwe
