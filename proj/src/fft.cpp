#include "svwe/fft.hpp"

#include <cmath>
#include <map>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svwe {

namespace {

struct Plan {
    explicit Plan(int n) : n(n), reverse(n), twiddle(n / 2) {
        int bits = 0;
        while ((1 << bits) < n) ++bits;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (1 << b)) r |= 1 << (bits - 1 - b);
            reverse[i] = r;
        }
        for (int j = 0; j < n / 2; ++j) {
            const double a = -2.0 * M_PI * j / n;
            twiddle[j] = {std::cos(a), std::sin(a)};
        }
    }

    void run(cplx* data, bool inverse) const {
        for (int i = 0; i < n; ++i) {
            const int r = reverse[i];
            if (i < r) std::swap(data[i], data[r]);
        }
        // butterflies on raw doubles: std::complex operator* would route
        // through the NaN-correct __muldc3 and dominate the runtime
        double* d = reinterpret_cast<double*>(data);
        const double* tw = reinterpret_cast<const double*>(twiddle.data());
        const double sign = inverse ? -1.0 : 1.0;
        for (int len = 2; len <= n; len <<= 1) {
            const int half = len >> 1;
            const int stride = n / len;
            for (int start = 0; start < n; start += len) {
                double* lo = d + 2 * start;
                double* hi = lo + 2 * half;
                for (int j = 0; j < half; ++j) {
                    const double wr = tw[2 * j * stride];
                    const double wi = sign * tw[2 * j * stride + 1];
                    const double hr = hi[2 * j], hm = hi[2 * j + 1];
                    const double tr = hr * wr - hm * wi;
                    const double ti = hr * wi + hm * wr;
                    hi[2 * j] = lo[2 * j] - tr;
                    hi[2 * j + 1] = lo[2 * j + 1] - ti;
                    lo[2 * j] += tr;
                    lo[2 * j + 1] += ti;
                }
            }
        }
    }

    int n;
    std::vector<int> reverse;
    std::vector<cplx> twiddle;
};

const Plan& plan_for(int n) {
    thread_local std::map<int, Plan> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, Plan(n)).first;
    return it->second;
}

// Applies the per-axis (-1)^k phase that maps the DFT on indices to the
// physical transform on the centered box (see Grid conventions), fused with
// a scalar multiply. The sign is a checkerboard in the index sum.
void apply_alternating_sign_and_scale(cplx* data, const Grid& g, double scale) {
    const int n = g.points_per_axis();
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) data[i] *= (i & 1) ? -scale : scale;
        return;
    }
    if (g.dim() == 2) {
        for (int i = 0; i < n; ++i) {
            cplx* row = data + std::size_t(i) * n;
            for (int j = 0; j < n; ++j) row[j] *= ((i + j) & 1) ? -scale : scale;
        }
        return;
    }
    int idx[3];
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        g.unflatten(flat, idx);
        const int s = idx[0] + idx[1] + idx[2];
        data[flat] *= (s & 1) ? -scale : scale;
    }
}

void transpose_square(std::vector<cplx>& a, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) std::swap(a[std::size_t(i) * n + j], a[std::size_t(j) * n + i]);
}

// DFT along every axis of the row-major multi-array, in place.
void dft_nd(std::vector<cplx>& a, const Grid& g, bool inverse) {
    const int n = g.points_per_axis();
    const Plan& p = plan_for(n);
    if (g.dim() == 1) {
        p.run(a.data(), inverse);
        return;
    }
    if (g.dim() == 2) {
#pragma omp parallel for schedule(static) if (n >= 256)
        for (int row = 0; row < n; ++row) p.run(a.data() + std::size_t(row) * n, inverse);
        transpose_square(a, n);
#pragma omp parallel for schedule(static) if (n >= 256)
        for (int row = 0; row < n; ++row) p.run(a.data() + std::size_t(row) * n, inverse);
        transpose_square(a, n);
        return;
    }
    // dim == 3: generic strided gather per axis; not a hot path.
    const std::size_t size = a.size();
    std::vector<cplx> line(n);
    for (int axis = 0; axis < 3; ++axis) {
        std::size_t stride = 1;
        for (int d = g.dim() - 1; d > axis; --d) stride *= n;
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < size; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int j = 0; j < n; ++j) line[j] = a[base + off + stride * j];
                p.run(line.data(), inverse);
                for (int j = 0; j < n; ++j) a[base + off + stride * j] = line[j];
            }
        }
    }
}

}  // namespace

namespace detail {
void fft_inplace(cplx* data, int n, bool inverse) { plan_for(n).run(data, inverse); }
}  // namespace detail

void forward_transform(const Field& f, SpectralField& out) {
    const Grid& g = f.grid;
    out.grid = g;
    out.coefficients.assign(f.values.begin(), f.values.end());
    dft_nd(out.coefficients, g, /*inverse=*/false);
    apply_alternating_sign_and_scale(out.coefficients.data(), g, g.cell_volume());
}

SpectralField forward_transform(const Field& f) {
    SpectralField out;
    forward_transform(f, out);
    return out;
}

void inverse_transform(const SpectralField& s, Field& out) {
    const Grid& g = s.grid;
    out.grid = g;
    thread_local std::vector<cplx> work;
    work = s.coefficients;
    apply_alternating_sign_and_scale(work.data(), g, 1.0);
    dft_nd(work, g, /*inverse=*/true);
    // (1/L^n) sum_k fhat e^{+i xi x} = IDFT * N^n / L^n; the raw inverse pass
    // above omits 1/N^n, so the net factor is 1/L^n.
    double scale = 1.0;
    for (int d = 0; d < g.dim(); ++d) scale /= g.extent();
    out.values.resize(g.size());
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real() * scale;
}

Field inverse_transform(const SpectralField& s) {
    Field out;
    inverse_transform(s, out);
    return out;
}

double parseval_norm(const Field& f) {
    double real_side = 0.0;
    for (double v : f.values) real_side += v * v;
    real_side *= f.grid.cell_volume();

    const SpectralField s = forward_transform(f);
    double spectral_side = 0.0;
    for (const cplx& c : s.coefficients) spectral_side += std::norm(c);
    double vol = 1.0;
    for (int d = 0; d < f.grid.dim(); ++d) vol *= f.grid.extent();
    spectral_side /= vol;

    const double scale = std::max({real_side, spectral_side, 1e-300});
    if (std::abs(real_side - spectral_side) > 1e-10 * scale)
        throw Error("Parseval identity violated: real side " + std::to_string(real_side) +
                    " vs spectral side " + std::to_string(spectral_side));
    return real_side;
}

void enforce_hermitian(SpectralField& s) {
    for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
        const std::size_t j = s.negated_index(i);
        if (j < i) continue;
        const cplx avg = 0.5 * (s.coefficients[i] + std::conj(s.coefficients[j]));
        s.coefficients[i] = avg;
        s.coefficients[j] = std::conj(avg);
    }
}

}  // namespace svwe
