#include "svwe/reference.hpp"

#include <cmath>

#include "svwe/fft.hpp"

namespace svwe::reference {

SpectralField dft(const Field& f) {
    const Grid& g = f.grid;
    SpectralField out(g);
    const int n = g.points_per_axis();
    int kidx[3], jidx[3];
    for (std::size_t k = 0; k < g.size(); ++k) {
        g.unflatten(k, kidx);
        cplx acc{};
        for (std::size_t j = 0; j < g.size(); ++j) {
            g.unflatten(j, jidx);
            double phase = 0.0;
            for (int d = 0; d < g.dim(); ++d)
                phase -= g.frequency(kidx[d]) * g.coordinate(jidx[d]);
            acc += f.values[j] * cplx{std::cos(phase), std::sin(phase)};
        }
        out.coefficients[k] = acc * g.cell_volume();
    }
    (void)n;
    return out;
}

Field convolve_direct(const Field& a, const Field& b) {
    const Grid& g = a.grid;
    Field out(g);
    const int n = g.points_per_axis();
    int xi[3], yi[3], di[3];
    for (std::size_t x = 0; x < g.size(); ++x) {
        g.unflatten(x, xi);
        double acc = 0.0;
        for (std::size_t y = 0; y < g.size(); ++y) {
            g.unflatten(y, yi);
            // index of the wrapped coordinate difference; the +n/2 undoes the
            // centered-box labeling (index n/2 sits at coordinate 0)
            for (int d = 0; d < g.dim(); ++d) di[d] = ((xi[d] - yi[d] + n / 2) % n + n) % n;
            acc += a.values[g.flatten(di)] * b.values[y];
        }
        out.values[x] = acc * g.cell_volume();
    }
    return out;
}

Field convolve_spectral(const Field& a, const Field& b) {
    SpectralField sa = forward_transform(a);
    const SpectralField sb = forward_transform(b);
    for (std::size_t i = 0; i < sa.coefficients.size(); ++i) sa.coefficients[i] *= sb.coefficients[i];
    return inverse_transform(sa);
}

}  // namespace svwe::reference
