#pragma once

#include <cstdint>
#include <vector>

namespace svwe {

// Streaming mean / variance / fourth moment.
struct RunningMoments {
    void add(double x) {
        ++count;
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    void merge(const RunningMoments& o) {
        count += o.count;
        sum += o.sum;
        sum2 += o.sum2;
        sum4 += o.sum4;
    }
    double mean() const { return count ? sum / count : 0.0; }
    double raw_second() const { return count ? sum2 / count : 0.0; }
    double raw_fourth() const { return count ? sum4 / count : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        const double m = mean();
        return (sum2 - count * m * m) / (count - 1);
    }
    // standard error of the mean
    double stderr_mean() const;

    std::int64_t count = 0;
    double sum = 0.0;
    double sum2 = 0.0;
    double sum4 = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Bootstrap confidence interval for the slope of log(y-mean) vs log(x) where
// per_replicate[r][i] is replicate r's estimate of y at x[i]. Resamples
// replicates with replacement; returns {lo, hi} at roughly 95% coverage.
struct SlopeCI {
    double slope = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
SlopeCI bootstrap_loglog_slope(const std::vector<double>& lags,
                               const std::vector<std::vector<double>>& per_replicate,
                               int resamples = 200, std::uint64_t seed = 0x5eedu);

}  // namespace svwe
