#include "battlife/projection.hpp"

#include <cmath>

#include "battlife/errors.hpp"

namespace battlife {

namespace {

struct KahanSum {
    double s = 0;
    double c = 0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace

LineFit fit_line(const std::vector<EnergySample>& samples,
                 double discard_head_min, std::size_t max_points) {
    if (max_points < 2) throw ValidationError("max_points must be at least 2");

    std::size_t tail = samples.size();
    while (tail > 0 && samples[tail - 1].value == 0.0) --tail;

    std::vector<const EnergySample*> used;
    used.reserve(tail);
    for (std::size_t i = 0; i < tail; ++i) {
        if (samples[i].t_min >= discard_head_min) used.push_back(&samples[i]);
    }
    if (used.size() > max_points) {
        std::size_t stride = (used.size() + max_points - 1) / max_points;
        std::vector<const EnergySample*> dec;
        dec.reserve(used.size() / stride + 1);
        for (std::size_t i = 0; i < used.size(); i += stride) {
            dec.push_back(used[i]);
        }
        used.swap(dec);
    }
    if (used.size() < 2) {
        throw ValidationError("projection needs at least two samples after "
                              "warm-up");
    }

    KahanSum st, sv;
    for (const auto* s : used) {
        st.add(s->t_min);
        sv.add(s->value);
    }
    double n = static_cast<double>(used.size());
    double tbar = st.s / n;
    double vbar = sv.s / n;

    KahanSum stt, stv, sabs;
    for (const auto* s : used) {
        double dt = s->t_min - tbar;
        stt.add(dt * dt);
        stv.add(dt * (s->value - vbar));
        sabs.add(std::abs(dt));
    }
    if (stt.s <= 0) {
        throw ValidationError("projection needs samples at distinct times");
    }

    LineFit fit;
    fit.slope = stv.s / stt.s;
    fit.intercept = vbar - fit.slope * tbar;
    fit.n_used = static_cast<int64_t>(used.size());
    fit.sum_abs_dev = sabs.s;
    fit.sum_sq_dev = stt.s;

    KahanSum srr;
    for (const auto* s : used) {
        double r = s->value - (fit.intercept + fit.slope * s->t_min);
        srr.add(r * r);
    }
    fit.rms = std::sqrt(srr.s / n);
    return fit;
}

double project_zero(const LineFit& fit) {
    if (!(fit.slope < 0)) {
        throw NumericError("remaining charge shows no downward trend");
    }
    return -fit.intercept / fit.slope;
}

double slope_noise_bound(const LineFit& fit, double eps) {
    if (!(fit.sum_sq_dev > 0)) {
        throw ValidationError("fit carries no time spread");
    }
    return std::abs(eps) * fit.sum_abs_dev / fit.sum_sq_dev;
}

} // namespace battlife
