#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "battlife/params.hpp"
#include "battlife/workload.hpp"

namespace battlife {

/// One piecewise-constant load segment: current i_ma flowing for dur_min.
struct LoadSegment {
    double dur_min = 0;
    double i_ma = 0;
};

/// Absolute-time piecewise-constant load: segment j spans [t[j], t[j+1]].
struct PiecewiseLoad {
    std::vector<double> t_min;
    std::vector<double> i_ma;

    double total_min() const { return t_min.empty() ? 0.0 : t_min.back(); }
};

/// Canonical segment order for one window. Radio-on time is paired with CPU
/// time first and only the remainder spills into LPM, so the segment charge
/// always equals window_charge exactly.
std::vector<LoadSegment> serialize_window(const DutyWindow& w,
                                          const CurrentProfile& p);

PiecewiseLoad make_load(const std::vector<DutyWindow>& windows,
                        const CurrentProfile& p);

/// Availability integral of a unit current over [t_lo, t_hi] observed at L,
/// by direct mode summation:
///   A = sum_{m=1..m_max} (exp(-b^2 m^2 (L - t_hi)) - exp(-b^2 m^2 (L - t_lo))) / (b^2 m^2)
/// Requires t_lo <= t_hi <= L and m_max >= 1.
double exact_A(double L_min, double t_lo_min, double t_hi_min, double beta,
               int m_max);

/// Apparent charge sigma(L) for a piecewise-constant load, summed in closed
/// form per segment. m_max == 0 switches the diffusion term off, leaving the
/// plain charge integral. Currents must be non-negative; L may extend past
/// the end of the load (the node rests).
double exact_sigma(const PiecewiseLoad& load, double L_min, double beta,
                   int m_max);

/// Incremental window-by-window evaluation of sigma. Maintains one diffusion
/// mode amplitude per m and folds each window's segments in with a single
/// telescoped injection, so a long run costs O(m_max) per window instead of
/// O(m_max * segments_so_far).
class DiffusionTracker {
  public:
    DiffusionTracker(double beta, double delta_min, int m_max);

    void push(const std::vector<LoadSegment>& segments);
    void push_window(const DutyWindow& w, const CurrentProfile& p);

    /// Sigma tau_min into the next window, given its segments, without
    /// advancing the tracker. tau_min may be anywhere in [0, delta].
    double sigma_after(const std::vector<LoadSegment>& segments,
                       double tau_min) const;

    double sigma() const;
    double cum_mamin() const { return cum_; }
    int64_t windows() const { return n_; }
    double time_min() const { return static_cast<double>(n_) * delta_min_; }

  private:
    double beta_ = 1.0;
    double delta_min_ = 0;
    int m_max_ = 0;
    int64_t n_ = 0;
    double cum_ = 0;
    std::vector<double> u_;
    std::vector<double> decay_;
    std::vector<double> w2_;
    std::vector<double> acc_;
};

/// First time sigma reaches alpha for a window-indexed load source, resolved
/// by bisection inside the first window whose boundary value crosses, to
/// within tol_min. Returns nullopt when the node outlives horizon_min.
std::optional<double> exact_lifetime(
    const std::function<DutyWindow(int64_t)>& window_at,
    const CurrentProfile& p, double alpha_mamin, double beta, int m_max,
    double horizon_min, double tol_min = 1.0 / 60.0);

/// Ratio of the observed availability of one fixed window of unit load as the
/// observation point advances by one window: A(L_{n+1}, 0, delta) divided by
/// A(L_n, 0, delta). Climbs toward exp(-beta^2 delta) from below, which is
/// what makes the single shared retention factor a safe upper bound.
double lambda_ratio(int n, double beta, double delta_min, int m_max);

} // namespace battlife
