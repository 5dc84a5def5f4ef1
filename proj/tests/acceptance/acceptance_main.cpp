#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "battlife/errors.hpp"
#include "battlife/estimator.hpp"
#include "battlife/estimator_int.hpp"
#include "battlife/oracle.hpp"
#include "battlife/params.hpp"
#include "battlife/projection.hpp"
#include "battlife/units.hpp"
#include "battlife/workload.hpp"

namespace {

using namespace battlife;

std::string g_cli;

struct Outcome {
    bool pass = false;
    std::vector<std::string> notes;

    void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
        va_list ap;
        va_start(ap, fmt);
        char buf[512];
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        notes.emplace_back(buf);
    }
};

std::string run_cli_capture(const std::string& args) {
    auto tmp = std::filesystem::temp_directory_path() /
               ("battlife_acceptance_" + std::to_string(::getpid()) + ".out");
    std::string cmd = g_cli + " " + args + " > " + tmp.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(tmp, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    if (status != 0) return "";
    return ss.str();
}

double project_days(const std::vector<EnergySample>& samples) {
    LineFit fit = fit_line(samples);
    return project_zero(fit) / 1440.0;
}

std::vector<EnergySample> sample_float_run(RdcKind kind, double rate,
                                           int64_t windows,
                                           int64_t sample_every,
                                           const CurrentProfile& prof,
                                           const DerivedParams& d,
                                           double alpha) {
    RdcGenerator gen(kind, rate);
    ChargeState st;
    std::vector<EnergySample> samples;
    samples.push_back({0.0, remaining_metric(st, alpha)});
    for (int64_t n = 1; n <= windows; ++n) {
        step(st, gen.next(), prof, d);
        if (n % sample_every == 0) {
            samples.push_back({st.time_min(d.delta_min),
                               remaining_metric(st, alpha)});
        }
    }
    return samples;
}

Outcome c1_constant_table() {
    Outcome o;
    std::string out = run_cli_capture("precompute");
    if (out.empty()) {
        o.note("precompute run failed");
        return o;
    }
    const long long want_i[8] = {9869, 1772, 10, 1337, 967, 30, 173, 2886};
    const double want_r[8] = {9.8696044, 1.7724539, 1.0,       1.3377607,
                              0.9672161, 0.03,      0.1732051, 2.8867513};
    bool got_r = false, got_i = false;
    bool ok = true;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("R ", 0) == 0) {
            got_r = true;
            std::istringstream row(line.substr(2));
            for (int k = 0; k < 8; ++k) {
                double v = NAN;
                row >> v;
                if (!(std::abs(v - want_r[k]) <= 1e-3)) {
                    ok = false;
                    o.note("R[%d] = %.6f, want %.7f within 0.001", k, v,
                           want_r[k]);
                }
            }
        } else if (line.rfind("I ", 0) == 0) {
            got_i = true;
            std::istringstream row(line.substr(2));
            for (int k = 0; k < 8; ++k) {
                long long v = -1;
                row >> v;
                if (v != want_i[k]) {
                    ok = false;
                    o.note("I[%d] = %lld, want %lld", k, v, want_i[k]);
                }
            }
        }
    }
    if (!got_r || !got_i) {
        ok = false;
        o.note("missing R or I row in precompute output");
    }
    o.pass = ok;
    return o;
}

Outcome c2_constant_load_lifetime() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    CurrentProfile prof;
    prof.name = "const20";
    prof.cpu_ma = 20.0;
    DutyWindow w{kWindowMs, 0, 0, 0};

    double cum = 0;
    int64_t n = 0;
    while (cum < p.alpha_mamin) {
        validate_window(w);
        cum += window_charge(w, prof) / (1000.0 * kMsPerMin);
        ++n;
    }
    double linear_min = static_cast<double>(n) * d.delta_min;

    auto window_at = [&](int64_t) { return w; };
    auto oracle = exact_lifetime(window_at, prof, p.alpha_mamin, p.beta, 1000,
                                 2700.0);

    bool ok = true;
    if (std::abs(linear_min - 2640.0) > 0.02 * 2640.0) {
        ok = false;
        o.note("linear lifetime %.2f min, want 2640 within 2%%", linear_min);
    }
    if (!oracle) {
        ok = false;
        o.note("oracle found no death before the horizon");
    } else {
        if (!(*oracle < linear_min)) {
            ok = false;
            o.note("oracle lifetime %.2f min is not below linear %.2f",
                   *oracle, linear_min);
        }
        if (std::abs(*oracle - 2640.0) > 0.02 * 2640.0) {
            ok = false;
            o.note("oracle lifetime %.2f min strays past 2%% of 2640",
                   *oracle);
        }
        o.note("linear %.2f min, oracle %.2f min", linear_min, *oracle);
    }
    o.pass = ok;
    return o;
}

Outcome c3_estimator_vs_oracle() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    CurrentProfile sky = sky_profile();

    std::mt19937_64 rng(0x5eed5eedULL);
    auto draw = [&](int32_t bound) {
        return static_cast<int32_t>(rng() % static_cast<uint64_t>(bound + 1));
    };

    double worst_rel = 0;
    int64_t worst_trace = -1, worst_window = -1;
    double worst_alpha_rel = 0;
    int64_t within = 0, total = 0;

    for (int64_t trace = 0; trace < 100; ++trace) {
        ChargeState st;
        DiffusionTracker tracker(p.beta, d.delta_min, 1000);
        for (int64_t w = 0; w < 1000; ++w) {
            DutyWindow win;
            win.cpu_ms = draw(kWindowMs);
            win.lpm_ms = kWindowMs - win.cpu_ms;
            win.tx_ms = draw(300);
            win.rx_ms = draw(700);
            step(st, win, sky, d);
            tracker.push_window(win, sky);
            double exact = tracker.sigma();
            double rel = std::abs(st.sigma() - exact) / exact;
            double arel = std::abs(st.sigma() - exact) / p.alpha_mamin;
            ++total;
            if (rel <= 0.05) ++within;
            if (rel > worst_rel) {
                worst_rel = rel;
                worst_trace = trace;
                worst_window = w;
            }
            if (arel > worst_alpha_rel) worst_alpha_rel = arel;
        }
    }

    o.pass = worst_rel <= 0.05;
    o.note("max window error %.2f%% of sigma (trace %lld, window %lld); "
           "tolerance 5%%",
           100.0 * worst_rel, static_cast<long long>(worst_trace),
           static_cast<long long>(worst_window));
    o.note("%lld of %lld windows within 5%%; max error vs capacity %.4f%%",
           static_cast<long long>(within), static_cast<long long>(total),
           100.0 * worst_alpha_rel);
    if (!o.pass) {
        o.note("the shared retention factor over-holds early diffusion, so "
               "young-run sigma overshoots; the bound stays a safe "
               "overestimate and the capacity-relative error stays small");
    }
    return o;
}

Outcome c4_burst_recovery() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    ScaledConstants sc = to_scaled(d);
    CurrentProfile sky = sky_profile();
    IntProfile isky = to_int_profile(sky);
    int64_t alpha_u = alpha_to_u(p.alpha_mamin);

    auto windows =
        build_scenario("burst_idle", RdcKind::contikimac, 6.0, 5.0, 42);
    ChargeState fs;
    IntChargeState is;
    double linear_cum = 0;

    bool ok = true;
    double prev_f = 0;
    int32_t prev_i = 0;
    double prev_lin = 0;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        step(fs, windows[k], sky, d);
        step_int(is, windows[k], isky, sc);
        linear_cum += window_charge(windows[k], sky) / (1000.0 * kMsPerMin);
        double mf = remaining_metric(fs, p.alpha_mamin);
        int32_t mi = remaining_metric(is, alpha_u);
        double ml = (1.0 - linear_cum / p.alpha_mamin) * kMetricFullScale;
        bool idle_window = k >= 30;
        if (idle_window) {
            if (!(mf > prev_f)) {
                ok = false;
                o.note("float metric stalled at window %zu (%.2f -> %.2f)", k,
                       prev_f, mf);
                break;
            }
            if (!(mi > prev_i)) {
                ok = false;
                o.note("int metric stalled at window %zu (%d -> %d)", k,
                       prev_i, mi);
                break;
            }
            if (!(ml <= prev_lin)) {
                ok = false;
                o.note("linear metric rose at window %zu", k);
                break;
            }
        }
        prev_f = mf;
        prev_i = mi;
        prev_lin = ml;
    }
    if (ok) {
        o.note("metric recovered strictly across all %zu idle windows "
               "(float and int); linear never rose",
               windows.size() - 30);
    }
    o.pass = ok;
    return o;
}

Outcome c5_long_run_agreement() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    ScaledConstants sc = to_scaled(d);
    CurrentProfile sky = sky_profile();
    IntProfile isky = to_int_profile(sky);
    int64_t alpha_u = alpha_to_u(p.alpha_mamin);

    bool ok = true;
    RdcGenerator gen(RdcKind::contikimac, 1.0);
    ChargeState fs;
    IntChargeState is;
    double worst_diff = 0;
    double diff_half = 0, diff_full = 0;
    const int64_t total = 100000;
    for (int64_t n = 1; n <= total; ++n) {
        DutyWindow w = gen.next();
        step(fs, w, sky, d);
        step_int(is, w, isky, sc);
        if (n % 10000 == 0) {
            double diff = remaining_metric(fs, p.alpha_mamin) -
                          static_cast<double>(remaining_metric(is, alpha_u));
            worst_diff = std::max(worst_diff, std::abs(diff));
            if (n == total / 2) diff_half = diff;
            if (n == total) diff_full = diff;
        }
    }
    double tol = 0.0005 * kMetricFullScale;
    if (worst_diff > tol) {
        ok = false;
        o.note("float/int metric gap %.1f exceeds %.1f (0.05%% of scale)",
               worst_diff, tol);
    }
    double drift_per_1e5 = std::abs(diff_full - diff_half) * 2.0;
    if (drift_per_1e5 > 0.0001 * kMetricFullScale) {
        ok = false;
        o.note("drift %.1f per 1e5 windows exceeds %.1f", drift_per_1e5,
               0.0001 * kMetricFullScale);
    }

    IntChargeState deep;
    RdcGenerator gen2(RdcKind::contikimac, 1.0);
    const int64_t days120 = 120LL * 24 * 60 * 30;
    int64_t reached = 0;
    try {
        for (int64_t n = 0; n < days120; ++n) {
            step_int(deep, gen2.next(), isky, sc);
            ++reached;
        }
    } catch (const OverflowError& e) {
        ok = false;
        o.note("overflow after %lld windows: %s",
               static_cast<long long>(reached), e.what());
    }
    int32_t deep_metric = remaining_metric(deep, alpha_u);
    if (reached == days120 && deep_metric <= 0) {
        ok = false;
        o.note("120-day run ended dead (metric %d); expected charge left",
               deep_metric);
    }
    if (ok) {
        o.note("max gap %.1f of %.1f allowed; drift %.2f per 1e5 windows; "
               "120-day run ended at metric %d",
               worst_diff, tol, drift_per_1e5, deep_metric);
    }
    o.pass = ok;
    return o;
}

Outcome c6_truncation_convergence() {
    Outcome o;
    BatteryParams p;
    double shallow = c0_series(p.beta, p.delta_min, 10);
    double deep = c0_series(p.beta, p.delta_min, 10000);
    ScaledConstants sc = to_scaled(precompute(p));
    bool ok = true;
    double rel = std::abs(deep - shallow) / deep;
    if (rel > 0.001) {
        ok = false;
        o.note("c0 depth-10 vs depth-10000 differ by %.5f%%", 100.0 * rel);
    }
    if (sc.lambda != 967) {
        ok = false;
        o.note("scaled retention factor %lld, want 967",
               static_cast<long long>(sc.lambda));
    }
    if (ok) {
        o.note("c0: %.7f at depth 10, %.7f at depth 10000 (%.5f%% apart); "
               "retention factor 967",
               shallow, deep, 100.0 * rel);
    }
    o.pass = ok;
    return o;
}

Outcome c7_discipline_ranking() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    CurrentProfile sky = sky_profile();
    const int64_t windows = 12 * 60 * 30;

    struct Entry {
        RdcKind kind;
        double days;
    };
    std::vector<Entry> entries;
    for (RdcKind kind : {RdcKind::contikimac, RdcKind::xmac, RdcKind::cxmac,
                         RdcKind::sicslowmac}) {
        auto samples = sample_float_run(kind, 1.0, windows, 30, sky, d,
                                        p.alpha_mamin);
        entries.push_back({kind, project_days(samples)});
    }

    bool ok = true;
    for (std::size_t k = 1; k < entries.size(); ++k) {
        if (!(entries[k - 1].days > entries[k].days)) {
            ok = false;
            o.note("%s projects %.2f days, not above %s at %.2f",
                   std::string(rdc_kind_name(entries[k - 1].kind)).c_str(),
                   entries[k - 1].days,
                   std::string(rdc_kind_name(entries[k].kind)).c_str(),
                   entries[k].days);
        }
    }

    double sics_h = entries.back().days * 24.0;
    if (std::abs(sics_h - 44.0) > 4.4) {
        ok = false;
        o.note("always-on radio projects %.2f h, want 44 within 10%%",
               sics_h);
    }

    RdcGenerator gen(RdcKind::contikimac, 1.0);
    int64_t radio_ms = 0, host_ms = 0;
    for (int64_t n = 0; n < 3600; ++n) {
        DutyWindow w = gen.next();
        radio_ms += w.tx_ms + w.rx_ms;
        host_ms += w.cpu_ms + w.lpm_ms;
    }
    double duty = static_cast<double>(radio_ms) / static_cast<double>(host_ms);
    if (!(duty > 0 && duty <= 0.01)) {
        ok = false;
        o.note("contikimac radio duty %.4f%%, want (0, 1%%]", 100.0 * duty);
    }

    if (ok) {
        o.note("projected days: contikimac %.1f, xmac %.1f, cxmac %.1f, "
               "sicslowmac %.2f (%.1f h); contikimac duty %.3f%%",
               entries[0].days, entries[1].days, entries[2].days,
               entries[3].days, sics_h, 100.0 * duty);
    }
    o.pass = ok;
    return o;
}

Outcome c8_rate_sweep() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    CurrentProfile sky = sky_profile();
    const int64_t windows = 12 * 60 * 30;
    const double rates[5] = {60, 20, 12, 2, 1};

    double days[5];
    for (int k = 0; k < 5; ++k) {
        auto samples = sample_float_run(RdcKind::contikimac, rates[k],
                                        windows, 30, sky, d, p.alpha_mamin);
        days[k] = project_days(samples);
    }
    bool ok = true;
    for (int k = 1; k < 5; ++k) {
        if (!(days[k] > days[k - 1])) {
            ok = false;
            o.note("%.0f pkt/min projects %.2f days, not above %.2f at "
                   "%.0f pkt/min",
                   rates[k], days[k], days[k - 1], rates[k - 1]);
        }
    }
    o.note("projected days by rate: 60 -> %.1f, 20 -> %.1f, 12 -> %.1f, "
           "2 -> %.1f, 1 -> %.1f",
           days[0], days[1], days[2], days[3], days[4]);
    o.pass = ok;
    return o;
}

Outcome c9_tangent_identities() {
    Outcome o;
    BatteryParams p;
    DerivedParams d = precompute(p);
    auto f_exact = [&](double nu) {
        return nu / 2.0 - (d.sqrt_pi / d.beta) * std::sqrt(nu) +
               d.pi_sq / (6.0 * d.beta * d.beta);
    };
    bool ok = true;
    double at_a = f_over_beta2(d.a, d);
    double rel = std::abs(at_a - f_exact(d.a)) / f_exact(d.a);
    if (rel > 1e-14) {
        ok = false;
        o.note("tangent value at a off by %.3g relative", rel);
    }
    double at_delta = f_over_beta2(d.delta_min, d);
    double gap = std::abs(at_delta - d.c0);
    if (gap > 1e-3) {
        ok = false;
        o.note("f(delta) = %.7f vs c0 = %.7f, gap %.2e exceeds 1e-3",
               at_delta, d.c0, gap);
    }
    if (ok) {
        o.note("f(a) exact to %.1g relative; f(delta) within %.2e of c0",
               rel, gap);
    }
    o.pass = ok;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    if (g_cli.empty() || !std::filesystem::exists(g_cli)) {
        std::fprintf(stderr,
                     "usage: acceptance <path-to-battlife-binary>\n");
        return 2;
    }

    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"C1 constant table matches the published scales", 1.0,
         c1_constant_table},
        {"C2 constant-load lifetime matches the closed form", 10.0,
         c2_constant_load_lifetime},
        {"C3 float estimator within 5% of the oracle on random traces", 60.0,
         c3_estimator_vs_oracle},
        {"C4 recovery after a burst is strictly monotone", 10.0,
         c4_burst_recovery},
        {"C5 float and int tiers agree over long runs without overflow",
         120.0, c5_long_run_agreement},
        {"C6 truncation depth and retention factor converge", 1.0,
         c6_truncation_convergence},
        {"C7 duty-cycling disciplines rank by listen cost", 120.0,
         c7_discipline_ranking},
        {"C8 projected lifetime grows as traffic thins", 120.0,
         c8_rate_sweep},
        {"C9 tangent approximation identities hold", 1.0,
         c9_tangent_identities},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note("unexpected exception: %s", e.what());
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.note("took %.2f s, budget %.0f s", secs, c.budget_s);
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.name,
                    secs);
        for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
