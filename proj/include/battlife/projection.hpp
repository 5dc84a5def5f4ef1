#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace battlife {

struct EnergySample {
    double t_min = 0;
    double value = 0;
};

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double rms = 0;
    int64_t n_used = 0;
    double sum_abs_dev = 0;
    double sum_sq_dev = 0;
};

/// Least-squares line through remaining-charge samples. The warm-up head is
/// discarded, an exhausted tail (value already at zero) is excluded, and long
/// inputs are decimated to at most max_points before fitting. Requires at
/// least two surviving points with distinct times.
LineFit fit_line(const std::vector<EnergySample>& samples,
                 double discard_head_min = 10.0, std::size_t max_points = 10000);

/// Time at which the fitted line reaches zero. The slope must be negative.
double project_zero(const LineFit& fit);

/// Worst-case slope perturbation when every sample value moves by at most
/// eps: eps * sum|t - tbar| / sum(t - tbar)^2 over the fitted points.
double slope_noise_bound(const LineFit& fit, double eps);

} // namespace battlife
