#include "battlife/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "battlife/errors.hpp"
#include "battlife/units.hpp"
#include "kernels/kernels.hpp"

namespace battlife {

std::vector<LoadSegment> serialize_window(const DutyWindow& w,
                                          const CurrentProfile& p) {
    int32_t cpu_tx = std::min(w.tx_ms, w.cpu_ms);
    int32_t cpu_rx = std::min(w.rx_ms, w.cpu_ms - cpu_tx);
    int32_t cpu_only = w.cpu_ms - cpu_tx - cpu_rx;
    int32_t lpm_tx = w.tx_ms - cpu_tx;
    int32_t lpm_rx = w.rx_ms - cpu_rx;
    int32_t lpm_only = std::max(0, w.lpm_ms - lpm_tx - lpm_rx);

    std::vector<LoadSegment> segs;
    segs.reserve(6);
    auto put = [&](int32_t ms, double i_ma) {
        if (ms > 0) segs.push_back({ms / kMsPerMin, i_ma});
    };
    put(cpu_tx, p.cpu_ma + p.tx_ma);
    put(cpu_rx, p.cpu_ma + p.rx_ma);
    put(cpu_only, p.cpu_ma);
    put(lpm_tx, p.lpm_ma + p.tx_ma);
    put(lpm_rx, p.lpm_ma + p.rx_ma);
    put(lpm_only, p.lpm_ma);
    return segs;
}

PiecewiseLoad make_load(const std::vector<DutyWindow>& windows,
                        const CurrentProfile& p) {
    PiecewiseLoad load;
    load.t_min.push_back(0);
    for (const auto& w : windows) {
        for (const auto& seg : serialize_window(w, p)) {
            load.i_ma.push_back(seg.i_ma);
            load.t_min.push_back(load.t_min.back() + seg.dur_min);
        }
    }
    return load;
}

double exact_A(double L_min, double t_lo_min, double t_hi_min, double beta,
               int m_max) {
    if (m_max < 1) throw ValidationError("exact_A needs m_max >= 1");
    if (!(beta > 0)) throw ValidationError("beta must be positive");
    if (t_lo_min < 0 || t_lo_min > t_hi_min || t_hi_min > L_min) {
        throw ValidationError("exact_A needs 0 <= t_lo <= t_hi <= L");
    }
    double b2 = beta * beta;
    double s = 0;
    for (int m = m_max; m >= 1; --m) {
        double b2m2 = b2 * static_cast<double>(m) * m;
        s += (std::exp(-b2m2 * (L_min - t_hi_min)) -
              std::exp(-b2m2 * (L_min - t_lo_min))) /
             b2m2;
    }
    return s;
}

double exact_sigma(const PiecewiseLoad& load, double L_min, double beta,
                   int m_max) {
    if (m_max < 0) throw ValidationError("m_max must be non-negative");
    if (!(beta > 0)) throw ValidationError("beta must be positive");
    if (L_min < 0) throw ValidationError("L must be non-negative");
    if (load.i_ma.size() + 1 != load.t_min.size()) {
        throw ValidationError("malformed load");
    }
    for (double i : load.i_ma) {
        if (i < 0) throw ValidationError("load current must be non-negative");
    }

    double cum = 0;
    for (std::size_t j = 0; j < load.i_ma.size(); ++j) {
        double lo = std::min(load.t_min[j], L_min);
        double hi = std::min(load.t_min[j + 1], L_min);
        cum += load.i_ma[j] * (hi - lo);
    }

    double b2 = beta * beta;
    double tail = 0;
    for (int m = m_max; m >= 1; --m) {
        double b2m2 = b2 * static_cast<double>(m) * m;
        double um = 0;
        for (std::size_t j = 0; j < load.i_ma.size(); ++j) {
            if (load.t_min[j] >= L_min) break;
            double lo = load.t_min[j];
            double hi = std::min(load.t_min[j + 1], L_min);
            um += load.i_ma[j] * (std::exp(-b2m2 * (L_min - hi)) -
                                  std::exp(-b2m2 * (L_min - lo)));
        }
        tail += um / b2m2;
    }
    return cum + 2.0 * tail;
}

DiffusionTracker::DiffusionTracker(double beta, double delta_min, int m_max)
    : beta_(beta), delta_min_(delta_min), m_max_(m_max) {
    if (!(beta > 0)) throw ValidationError("beta must be positive");
    if (!(delta_min > 0)) throw ValidationError("delta must be positive");
    if (m_max < 0) throw ValidationError("m_max must be non-negative");
    auto n = static_cast<std::size_t>(m_max);
    u_.assign(n, 0.0);
    decay_.resize(n);
    w2_.resize(n);
    acc_.resize(n);
    double b2 = beta * beta;
    for (std::size_t i = 0; i < n; ++i) {
        double m = static_cast<double>(i + 1);
        decay_[i] = std::exp(-b2 * m * m * delta_min);
        w2_[i] = 1.0 / (b2 * m * m);
    }
}

namespace {

void check_segments(const std::vector<LoadSegment>& segments,
                    double delta_min) {
    if (segments.empty()) {
        throw ValidationError("window has no segments");
    }
    double total = 0;
    for (const auto& s : segments) {
        if (s.dur_min < 0) throw ValidationError("negative segment duration");
        if (s.i_ma < 0) throw ValidationError("negative segment current");
        total += s.dur_min;
    }
    if (std::abs(total - delta_min) > 1e-9 * delta_min) {
        throw ValidationError("window segments do not span one window");
    }
}

} // namespace

void DiffusionTracker::push(const std::vector<LoadSegment>& segments) {
    check_segments(segments, delta_min_);
    const auto& k = kernels::ops();
    auto n = static_cast<std::size_t>(m_max_);

    double charge = 0;
    for (const auto& s : segments) charge += s.i_ma * s.dur_min;

    if (n > 0) {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        double b2 = beta_ * beta_;
        double c_first = segments.front().i_ma;
        double c_last = segments.back().i_ma;

        k.pow_m2_axpy(n, acc_.data(), std::exp(-b2 * delta_min_), -c_first);
        double r = 0;
        for (std::size_t j = 0; j + 1 < segments.size(); ++j) {
            r += segments[j].dur_min;
            double coeff = segments[j].i_ma - segments[j + 1].i_ma;
            if (coeff != 0 && segments[j].dur_min > 0) {
                k.pow_m2_axpy(n, acc_.data(), std::exp(-b2 * (delta_min_ - r)),
                              coeff);
            }
        }
        k.update_diffusion(n, u_.data(), decay_.data(), acc_.data(), c_last,
                           w2_.data());
    }

    cum_ += charge;
    ++n_;
}

void DiffusionTracker::push_window(const DutyWindow& w,
                                   const CurrentProfile& p) {
    push(serialize_window(w, p));
}

double DiffusionTracker::sigma_after(const std::vector<LoadSegment>& segments,
                                     double tau_min) const {
    check_segments(segments, delta_min_);
    if (tau_min < 0 || tau_min > delta_min_ * (1 + 1e-12)) {
        throw ValidationError("tau outside the window");
    }

    double cum = cum_;
    double b2 = beta_ * beta_;
    double tail = 0;
    for (int m = m_max_; m >= 1; --m) {
        double b2m2 = b2 * static_cast<double>(m) * m;
        double um = u_[static_cast<std::size_t>(m - 1)] *
                    std::exp(-b2m2 * tau_min);
        double r = 0;
        for (const auto& s : segments) {
            if (r >= tau_min) break;
            double lo = r;
            double hi = std::min(r + s.dur_min, tau_min);
            um += s.i_ma *
                  (std::exp(-b2m2 * (tau_min - hi)) -
                   std::exp(-b2m2 * (tau_min - lo))) /
                  b2m2;
            r += s.dur_min;
        }
        tail += um;
    }

    double r = 0;
    for (const auto& s : segments) {
        if (r >= tau_min) break;
        double hi = std::min(r + s.dur_min, tau_min);
        cum += s.i_ma * (hi - r);
        r += s.dur_min;
    }
    return cum + 2.0 * tail;
}

double DiffusionTracker::sigma() const {
    return cum_ +
           2.0 * kernels::ops().sum(static_cast<std::size_t>(m_max_),
                                    u_.data());
}

std::optional<double> exact_lifetime(
    const std::function<DutyWindow(int64_t)>& window_at,
    const CurrentProfile& p, double alpha_mamin, double beta, int m_max,
    double horizon_min, double tol_min) {
    if (!(alpha_mamin > 0)) throw ValidationError("alpha must be positive");
    if (!(horizon_min > 0)) throw ValidationError("horizon must be positive");
    if (!(tol_min > 0)) throw ValidationError("tolerance must be positive");

    double delta_min = kWindowMs / kMsPerMin;
    DiffusionTracker tr(beta, delta_min, m_max);
    for (int64_t n = 0; static_cast<double>(n) * delta_min <= horizon_min;
         ++n) {
        auto segs = serialize_window(window_at(n), p);
        DiffusionTracker before = tr;
        tr.push(segs);
        if (tr.sigma() >= alpha_mamin) {
            if (before.sigma_after(segs, delta_min) < alpha_mamin) {
                return static_cast<double>(n + 1) * delta_min;
            }
            double lo = 0;
            double hi = delta_min;
            while (hi - lo > tol_min) {
                double mid = 0.5 * (lo + hi);
                if (before.sigma_after(segs, mid) >= alpha_mamin) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return static_cast<double>(n) * delta_min + 0.5 * (lo + hi);
        }
    }
    return std::nullopt;
}

double lambda_ratio(int n, double beta, double delta_min, int m_max) {
    if (n < 1) throw ValidationError("lambda_ratio needs n >= 1");
    double ln = static_cast<double>(n) * delta_min;
    double num = exact_A(ln + delta_min, 0.0, delta_min, beta, m_max);
    double den = exact_A(ln, 0.0, delta_min, beta, m_max);
    return num / den;
}

} // namespace battlife
