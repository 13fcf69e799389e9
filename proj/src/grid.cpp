#include "svwe/grid.hpp"

#include <cmath>

namespace svwe {

namespace {
bool power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim, double extent, int points_per_axis)
    : dim_(dim), extent_(extent), n_(points_per_axis) {
    if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2, or 3");
    if (!(extent > 0.0)) throw ConfigError("grid extent must be positive");
    if (!power_of_two(points_per_axis))
        throw ConfigError("grid points_per_axis must be a power of two >= 2");
    dx_ = extent_ / n_;
    cell_volume_ = 1.0;
    size_ = 1;
    for (int d = 0; d < dim_; ++d) {
        cell_volume_ *= dx_;
        size_ *= static_cast<std::size_t>(n_);
    }
    two_pi_over_L_ = 2.0 * M_PI / extent_;
}

std::size_t Grid::flatten(const int* idx) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) flat = flat * n_ + static_cast<std::size_t>(idx[d]);
    return flat;
}

void Grid::unflatten(std::size_t flat, int* idx) const {
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % n_);
        flat /= n_;
    }
}

double Grid::frequency_magnitude(std::size_t flat) const {
    int idx[3];
    unflatten(flat, idx);
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) {
        const double f = frequency(idx[d]);
        s += f * f;
    }
    return std::sqrt(s);
}

double Grid::coordinate_magnitude(std::size_t flat) const {
    int idx[3];
    unflatten(flat, idx);
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) {
        const double c = coordinate(idx[d]);
        s += c * c;
    }
    return std::sqrt(s);
}

double Grid::max_frequency_magnitude() const {
    const double axis = max_axis_frequency();
    return axis * std::sqrt(static_cast<double>(dim_));
}

bool Field::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const cplx d = coefficients[negated_index(i)] - std::conj(coefficients[i]);
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

std::size_t SpectralField::negated_index(std::size_t flat) const {
    const int n = grid.points_per_axis();
    int idx[3];
    grid.unflatten(flat, idx);
    int neg[3];
    for (int d = 0; d < grid.dim(); ++d) neg[d] = idx[d] == 0 ? 0 : n - idx[d];
    return grid.flatten(neg);
}

}  // namespace svwe
