#include "svwe/stats.hpp"

#include <cmath>
#include <random>

#include "svwe/errors.hpp"

namespace svwe {

double RunningMoments::stderr_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(variance() / count);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("fit_line: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double ybar = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.slope * x[i] + fit.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

SlopeCI bootstrap_loglog_slope(const std::vector<double>& lags,
                               const std::vector<std::vector<double>>& per_replicate,
                               int resamples, std::uint64_t seed) {
    const std::size_t R = per_replicate.size();
    const std::size_t L = lags.size();
    if (R == 0 || L < 2) throw Error("bootstrap_loglog_slope: empty input");

    std::vector<double> logx(L);
    for (std::size_t i = 0; i < L; ++i) logx[i] = std::log(lags[i]);

    auto slope_of = [&](const std::vector<double>& mean_s2) {
        std::vector<double> logy(L);
        for (std::size_t i = 0; i < L; ++i) logy[i] = std::log(mean_s2[i]);
        return fit_line(logx, logy).slope;
    };

    std::vector<double> mean_s2(L, 0.0);
    for (const auto& rep : per_replicate)
        for (std::size_t i = 0; i < L; ++i) mean_s2[i] += rep[i];
    for (double& v : mean_s2) v /= static_cast<double>(R);

    SlopeCI out;
    out.slope = slope_of(mean_s2);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, R - 1);
    std::vector<double> samples(resamples);
    std::vector<double> acc(L);
    for (int b = 0; b < resamples; ++b) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t r = 0; r < R; ++r) {
            const auto& rep = per_replicate[pick(rng)];
            for (std::size_t i = 0; i < L; ++i) acc[i] += rep[i];
        }
        for (double& v : acc) v /= static_cast<double>(R);
        samples[b] = slope_of(acc);
    }
    std::sort(samples.begin(), samples.end());
    const int lo_i = static_cast<int>(0.025 * (resamples - 1));
    const int hi_i = static_cast<int>(0.975 * (resamples - 1));
    out.lo = samples[lo_i];
    out.hi = samples[hi_i];
    return out;
}

}  // namespace svwe
