#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "svwe/errors.hpp"

namespace svwe {

using cplx = std::complex<double>;

// Periodic lattice on the box [-L/2, L/2)^n, n in {1, 2, 3}, with N points
// per axis (N a power of two). Owns all index <-> coordinate <-> frequency
// bookkeeping used by every other module.
//
// Conventions (cited by the rest of the library):
//   grid point      x_j     = -L/2 + j * dx             j = 0 .. N-1 per axis
//   frequency       xi_k    = 2*pi*k'/L,  k' = k < N/2 ? k : k - N
//   forward         fhat(xi) = sum_x f(x) e^{-i xi.x} dx^n
//   inverse         f(x)     = (1/L^n) sum_k fhat(xi_k) e^{+i xi_k.x}
//   Parseval        sum_x f(x)^2 dx^n = (1/L^n) sum_k |fhat_k|^2
// The forward transform approximates the continuum Fourier integral, so a
// continuum multiplier m(xi) applies to spectral coefficients unchanged.
class Grid {
  public:
    Grid(int dim, double extent, int points_per_axis);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    int points_per_axis() const { return n_; }
    double dx() const { return dx_; }
    double cell_volume() const { return cell_volume_; }
    std::size_t size() const { return size_; }

    // Signed integer mode for a raw index along one axis.
    int signed_mode(int k) const { return k < n_ / 2 ? k : k - n_; }
    // Frequency value for a raw index along one axis.
    double frequency(int k) const { return two_pi_over_L_ * signed_mode(k); }
    // Coordinate of point j along one axis.
    double coordinate(int j) const { return -0.5 * extent_ + j * dx_; }

    // |xi| of the flattened mode index.
    double frequency_magnitude(std::size_t flat) const;
    // |x| of the flattened point index.
    double coordinate_magnitude(std::size_t flat) const;
    // Flattened index from per-axis indices (row-major, axis 0 slowest).
    std::size_t flatten(const int* idx) const;
    void unflatten(std::size_t flat, int* idx) const;

    // Largest |xi| representable along one axis (Nyquist magnitude).
    double max_axis_frequency() const { return two_pi_over_L_ * (n_ / 2); }
    // Largest |xi| on the full lattice (corner mode).
    double max_frequency_magnitude() const;

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && extent_ == other.extent_ && n_ == other.n_;
    }

  private:
    int dim_;
    double extent_;
    int n_;
    double dx_;
    double cell_volume_;
    std::size_t size_;
    double two_pi_over_L_;
};

// Real-space sample array on a Grid.
struct Field {
    Field() = default;
    Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    Grid grid{1, 1.0, 2};
    std::vector<double> values;

    bool all_finite() const;
};

// Fourier coefficients of a Field under the convention documented on Grid.
// When it represents a real field, coefficients obey Hermitian symmetry
// (coefficient at -k equals the conjugate of the one at k).
struct SpectralField {
    SpectralField() = default;
    SpectralField(const Grid& g, cplx fill = {}) : grid(g), coefficients(g.size(), fill) {}

    Grid grid{1, 1.0, 2};
    std::vector<cplx> coefficients;

    // Max |c(-k) - conj(c(k))| over the lattice.
    double hermitian_defect() const;
    // Flattened index of the negated mode.
    std::size_t negated_index(std::size_t flat) const;
};

}  // namespace svwe
