#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "battlife/config.hpp"
#include "battlife/errors.hpp"
#include "battlife/estimator.hpp"
#include "battlife/estimator_int.hpp"
#include "battlife/oracle.hpp"
#include "battlife/params.hpp"
#include "battlife/projection.hpp"
#include "battlife/report.hpp"
#include "battlife/units.hpp"
#include "battlife/workload.hpp"

namespace battlife::cli {

namespace {

enum class Tier { flt, integer, linear, oracle };

const std::vector<std::string>& tier_names() {
    static const std::vector<std::string> names{"float", "int", "linear",
                                                "oracle"};
    return names;
}

Tier parse_tier(const std::string& name) {
    if (name == "float") return Tier::flt;
    if (name == "int") return Tier::integer;
    if (name == "linear") return Tier::linear;
    if (name == "oracle") return Tier::oracle;
    throw battlife::ValidationError("unknown estimator '" + name +
                                    "' (float, int, linear, oracle)");
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

struct CommonOpts {
    std::string config_path;
    std::string profile = "sky";
    std::string estimator = "float";
    std::string out;
    double alpha_mah = 0;
    bool alpha_set = false;
    int m_max = 0;
    bool m_max_set = false;
    std::int64_t sample_every = 30;
};

struct SimOpts : CommonOpts {
    std::string scenario = "steady";
    std::string rdc = "contikimac";
    std::string role = "sender";
    double rate = 1.0;
    std::string duration = "60";
    std::uint64_t seed = 0;
};

struct CompareOpts : SimOpts {
    std::vector<std::string> tiers{"float", "int"};
};

struct IngestOpts : CommonOpts {
    std::string trace;
};

struct ProjectOpts {
    std::vector<std::string> inputs;
    std::string out;
    std::string discard_head = "10";
};

struct PrecomputeOpts {
    std::string config_path;
    int m_max = 0;
    bool m_max_set = false;
};

battlife::Config make_config(const std::string& config_path, bool alpha_set,
                             double alpha_mah, bool m_max_set, int m_max) {
    battlife::Config cfg = config_path.empty()
                               ? battlife::default_config()
                               : battlife::load_config_file(config_path);
    if (alpha_set) cfg.params.alpha_mamin = battlife::mah_to_mamin(alpha_mah);
    if (m_max_set) cfg.params.m_max = m_max;
    battlife::precompute(cfg.params);
    return cfg;
}

void require_stock_window(const battlife::DerivedParams& d,
                          const std::string& why) {
    auto window_ms = std::llround(d.delta_min * battlife::kMsPerMin);
    if (window_ms != battlife::kWindowMs) {
        throw battlife::ValidationError(
            why + " assumes the stock 2 s window, but the configured window "
                  "is " +
            std::to_string(window_ms) + " ms");
    }
}

int32_t config_window_ms(const battlife::DerivedParams& d) {
    auto window_ms = std::llround(d.delta_min * battlife::kMsPerMin);
    if (window_ms < 1 || window_ms > 3600000) {
        throw battlife::ValidationError("configured window length out of range");
    }
    return static_cast<int32_t>(window_ms);
}

/// One estimator tier advancing over a window stream.
class TierState {
  public:
    TierState(Tier tier, const battlife::Config& cfg,
              const battlife::DerivedParams& d,
              const battlife::CurrentProfile& prof, int oracle_m_max)
        : tier_(tier),
          derived_(d),
          profile_(prof),
          int_profile_(battlife::to_int_profile(prof)),
          scaled_(battlife::to_scaled(d)),
          alpha_(cfg.params.alpha_mamin),
          alpha_u_(battlife::alpha_to_u(cfg.params.alpha_mamin)) {
        if (tier_ == Tier::oracle) {
            tracker_.emplace(d.beta, d.delta_min, oracle_m_max);
        }
    }

    void step_window(const battlife::DutyWindow& w) {
        switch (tier_) {
            case Tier::flt:
                battlife::step(float_state_, w, profile_, derived_);
                break;
            case Tier::integer:
                battlife::step_int(int_state_, w, int_profile_, scaled_);
                break;
            case Tier::linear:
                battlife::validate_window(w, config_window_ms(derived_));
                linear_cum_ +=
                    battlife::window_charge(w, profile_) /
                    (1000.0 * battlife::kMsPerMin);
                break;
            case Tier::oracle:
                tracker_->push_window(w, profile_);
                break;
        }
    }

    double sigma_mamin() const {
        switch (tier_) {
            case Tier::flt: return float_state_.sigma();
            case Tier::integer:
                return static_cast<double>(int_state_.sigma_u()) /
                       (1000.0 * battlife::kMsPerMin);
            case Tier::linear: return linear_cum_;
            case Tier::oracle: return tracker_->sigma();
        }
        return 0;
    }

    double metric() const {
        switch (tier_) {
            case Tier::flt:
                return battlife::remaining_metric(float_state_, alpha_);
            case Tier::integer:
                return battlife::remaining_metric(int_state_, alpha_u_);
            case Tier::linear:
            case Tier::oracle: {
                double frac = (alpha_ - sigma_mamin()) / alpha_;
                return std::clamp(frac, 0.0, 1.0) *
                       battlife::kMetricFullScale;
            }
        }
        return 0;
    }

    bool dead() const {
        if (tier_ == Tier::integer) return int_state_.sigma_u() >= alpha_u_;
        return sigma_mamin() >= alpha_;
    }

  private:
    Tier tier_;
    battlife::DerivedParams derived_;
    battlife::CurrentProfile profile_;
    battlife::IntProfile int_profile_;
    battlife::ScaledConstants scaled_;
    double alpha_;
    std::int64_t alpha_u_;
    battlife::ChargeState float_state_;
    battlife::IntChargeState int_state_;
    double linear_cum_ = 0;
    std::optional<battlife::DiffusionTracker> tracker_;
};

struct RunOutcome {
    battlife::RunReport report;
    std::optional<double> lifetime_min;
};

RunOutcome run_tier(Tier tier, const std::vector<battlife::DutyWindow>& windows,
                    const battlife::Config& cfg,
                    const battlife::DerivedParams& d,
                    const battlife::CurrentProfile& prof, int oracle_m,
                    std::int64_t sample_every) {
    TierState st(tier, cfg, d, prof, oracle_m);
    RunOutcome out;
    auto add_row = [&](double t) {
        battlife::RunReport::Row r;
        r.t_min = t;
        r.sigma_mamin = st.sigma_mamin();
        r.metric = st.metric();
        r.pct = r.metric / battlife::kMetricFullScale * 100.0;
        out.report.rows.push_back(r);
    };
    add_row(0.0);
    auto total = static_cast<std::int64_t>(windows.size());
    for (std::int64_t n = 1; n <= total; ++n) {
        st.step_window(windows[static_cast<std::size_t>(n - 1)]);
        if (!out.lifetime_min && st.dead()) {
            out.lifetime_min = static_cast<double>(n) * d.delta_min;
        }
        if (n % sample_every == 0 || n == total) {
            add_row(static_cast<double>(n) * d.delta_min);
        }
    }
    return out;
}

int resolve_oracle_m(const CommonOpts& o) {
    return o.m_max_set ? o.m_max : 1000;
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        battlife::write_text_atomic(text, out_path);
    }
}

void fill_common_meta(battlife::RunReport& rep, const battlife::Config& cfg,
                      const CommonOpts& o) {
    rep.set_meta("profile", o.profile);
    rep.set_meta("alpha_mAh", fmt_g(cfg.params.alpha_mamin / 60.0));
    rep.set_meta("m_max", std::to_string(o.estimator == "oracle"
                                             ? resolve_oracle_m(o)
                                             : cfg.params.m_max));
    rep.set_meta("sample_every", std::to_string(o.sample_every));
    rep.set_meta("config_hash", battlife::config_hash(cfg));
}

void add_sim_flags(CLI::App* cmd, SimOpts& o) {
    cmd->add_option("--scenario", o.scenario, "workload scenario")
        ->check(CLI::IsMember(battlife::scenario_names()))
        ->capture_default_str();
    cmd->add_option("--rdc", o.rdc, "radio duty-cycling discipline")
        ->check(CLI::IsMember({"contikimac", "xmac", "cxmac", "sicslowmac",
                               "constant", "none"}))
        ->capture_default_str();
    cmd->add_option("--role", o.role, "traffic role of the node")
        ->check(CLI::IsMember({"sender", "forwarder", "sink"}))
        ->capture_default_str();
    cmd->add_option("--rate", o.rate, "application packets per minute")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--duration", o.duration,
                    "run length (90s, 10min, 60h, 2d; bare number is minutes)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "scenario random seed")
        ->capture_default_str();
}

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool with_estimator) {
    cmd->add_option("--config", o.config_path,
                    "config file overriding battery parameters and profiles");
    cmd->add_option("--profile", o.profile, "current profile name")
        ->capture_default_str();
    if (with_estimator) {
        cmd->add_option("--estimator", o.estimator, "estimator tier")
            ->check(CLI::IsMember(tier_names()))
            ->capture_default_str();
    }
    cmd->add_option("--alpha-mAh", o.alpha_mah, "battery capacity in mAh")
        ->check(CLI::PositiveNumber)
        ->each([&o](const std::string&) { o.alpha_set = true; });
    cmd->add_option("--m-max", o.m_max, "diffusion series truncation depth")
        ->check(CLI::PositiveNumber)
        ->each([&o](const std::string&) { o.m_max_set = true; });
    cmd->add_option("--sample-every", o.sample_every,
                    "emit one row every N windows")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", o.out, "output file (default stdout)");
}

void cmd_precompute(const PrecomputeOpts& o) {
    battlife::Config cfg = make_config(o.config_path, false, 0, o.m_max_set,
                                       o.m_max);
    battlife::DerivedParams d = battlife::precompute(cfg.params);
    battlife::ScaledConstants s = battlife::to_scaled(d);

    std::string out;
    out += "# columns: pi_sq sqrt_pi beta c0 lambda a sqrt_a inv_2sqrt_a\n";
    out += "# R real values, I integer twins (beta x10, others x1000)\n";
    out += "R";
    for (double v : {d.pi_sq, d.sqrt_pi, d.beta, d.c0, d.lambda, d.a, d.sqrt_a,
                     d.inv_2sqrt_a}) {
        out += ' ';
        out += battlife::format_fixed(v, 4);
    }
    out += "\nI";
    for (std::int64_t v : {s.pi_sq, s.sqrt_pi, s.beta, s.c0, s.lambda, s.a,
                           s.sqrt_a, s.inv_2sqrt_a}) {
        out += ' ';
        out += std::to_string(v);
    }
    out += '\n';
    std::fwrite(out.data(), 1, out.size(), stdout);
}

void cmd_simulate(const SimOpts& o) {
    battlife::Config cfg = make_config(o.config_path, o.alpha_set, o.alpha_mah,
                                       o.m_max_set, o.m_max);
    battlife::DerivedParams d = battlife::precompute(cfg.params);
    const battlife::CurrentProfile& prof = cfg.profile(o.profile);
    Tier tier = parse_tier(o.estimator);
    double duration_min = battlife::parse_duration_min(o.duration);

    battlife::RunReport rep;
    rep.set_meta("command", "simulate");
    rep.set_meta("scenario", o.scenario);
    rep.set_meta("rdc", o.rdc);
    rep.set_meta("role", o.role);
    rep.set_meta("rate_per_min", fmt_g(o.rate));
    rep.set_meta("duration_min", fmt_g(duration_min));
    rep.set_meta("estimator", o.estimator);
    rep.set_meta("seed", std::to_string(o.seed));
    fill_common_meta(rep, cfg, o);

    if (duration_min > 0) {
        require_stock_window(d, "the generated workload");
        std::vector<battlife::DutyWindow> windows = battlife::build_scenario(
            o.scenario, battlife::parse_rdc_kind(o.rdc), o.rate, duration_min,
            o.seed, battlife::parse_rdc_role(o.role));
        RunOutcome run = run_tier(tier, windows, cfg, d, prof,
                                  resolve_oracle_m(o), o.sample_every);
        rep.rows = std::move(run.report.rows);
        if (run.lifetime_min) {
            rep.set_meta("lifetime_min",
                         battlife::format_fixed(*run.lifetime_min, 4));
        }
    }

    emit_text(battlife::report_to_csv(rep), o.out);
}

void cmd_compare(const CompareOpts& o) {
    battlife::Config cfg = make_config(o.config_path, o.alpha_set, o.alpha_mah,
                                       o.m_max_set, o.m_max);
    battlife::DerivedParams d = battlife::precompute(cfg.params);
    const battlife::CurrentProfile& prof = cfg.profile(o.profile);
    Tier tier_a = parse_tier(o.tiers.at(0));
    Tier tier_b = parse_tier(o.tiers.at(1));
    double duration_min = battlife::parse_duration_min(o.duration);

    std::string out;
    auto meta = [&](const std::string& k, const std::string& v) {
        out += "# ";
        out += k;
        out += '=';
        out += v;
        out += '\n';
    };
    meta("command", "compare");
    meta("scenario", o.scenario);
    meta("rdc", o.rdc);
    meta("role", o.role);
    meta("rate_per_min", fmt_g(o.rate));
    meta("duration_min", fmt_g(duration_min));
    meta("estimator_a", o.tiers.at(0));
    meta("estimator_b", o.tiers.at(1));
    meta("seed", std::to_string(o.seed));
    meta("profile", o.profile);
    meta("alpha_mAh", fmt_g(cfg.params.alpha_mamin / 60.0));
    bool any_oracle = tier_a == Tier::oracle || tier_b == Tier::oracle;
    meta("m_max", std::to_string(any_oracle ? resolve_oracle_m(o)
                                            : cfg.params.m_max));
    meta("sample_every", std::to_string(o.sample_every));
    meta("config_hash", battlife::config_hash(cfg));
    out += "t_min,sigma_a_mAmin,metric_a,sigma_b_mAmin,metric_b,metric_diff\n";

    if (duration_min > 0) {
        require_stock_window(d, "the generated workload");
        std::vector<battlife::DutyWindow> windows = battlife::build_scenario(
            o.scenario, battlife::parse_rdc_kind(o.rdc), o.rate, duration_min,
            o.seed, battlife::parse_rdc_role(o.role));
        int oracle_m = resolve_oracle_m(o);
        TierState a(tier_a, cfg, d, prof, oracle_m);
        TierState b(tier_b, cfg, d, prof, oracle_m);
        auto add_row = [&](double t) {
            double ma = a.metric();
            double mb = b.metric();
            out += battlife::format_fixed(t, 4);
            out += ',';
            out += battlife::format_fixed(a.sigma_mamin(), 4);
            out += ',';
            out += battlife::format_fixed(ma, 4);
            out += ',';
            out += battlife::format_fixed(b.sigma_mamin(), 4);
            out += ',';
            out += battlife::format_fixed(mb, 4);
            out += ',';
            out += battlife::format_fixed(ma - mb, 4);
            out += '\n';
        };
        add_row(0.0);
        auto total = static_cast<std::int64_t>(windows.size());
        for (std::int64_t n = 1; n <= total; ++n) {
            const auto& w = windows[static_cast<std::size_t>(n - 1)];
            a.step_window(w);
            b.step_window(w);
            if (n % o.sample_every == 0 || n == total) {
                add_row(static_cast<double>(n) * d.delta_min);
            }
        }
    }

    emit_text(out, o.out);
}

void cmd_ingest(const IngestOpts& o) {
    battlife::Config cfg = make_config(o.config_path, o.alpha_set, o.alpha_mah,
                                       o.m_max_set, o.m_max);
    battlife::DerivedParams d = battlife::precompute(cfg.params);
    const battlife::CurrentProfile& prof = cfg.profile(o.profile);
    Tier tier = parse_tier(o.estimator);
    int32_t window_ms = config_window_ms(d);
    if (tier == Tier::integer) {
        require_stock_window(d, "the integer estimator");
    }

    std::vector<battlife::DutyWindow> windows =
        battlife::load_trace_file(o.trace, window_ms);
    if (tier == Tier::oracle) {
        for (const auto& w : windows) {
            if (w.cpu_ms + w.lpm_ms != window_ms) {
                throw battlife::ValidationError(
                    "the oracle tier needs windows whose CPU+LPM time equals "
                    "the window length exactly");
            }
        }
    }

    battlife::RunReport rep;
    rep.set_meta("command", "ingest");
    rep.set_meta("trace", o.trace);
    rep.set_meta("estimator", o.estimator);
    fill_common_meta(rep, cfg, o);

    RunOutcome run = run_tier(tier, windows, cfg, d, prof, resolve_oracle_m(o),
                              o.sample_every);
    rep.rows = std::move(run.report.rows);
    if (run.lifetime_min) {
        rep.set_meta("lifetime_min",
                     battlife::format_fixed(*run.lifetime_min, 4));
    }
    emit_text(battlife::report_to_csv(rep), o.out);
}

void cmd_project(const ProjectOpts& o) {
    double discard_head = battlife::parse_duration_min(o.discard_head);
    std::string out = "scenario,slope_per_day,projected_days,rms\n";
    for (const auto& path : o.inputs) {
        battlife::RunReport rep = battlife::read_report_csv(path);
        std::vector<battlife::EnergySample> samples;
        samples.reserve(rep.rows.size());
        for (const auto& row : rep.rows) {
            samples.push_back({row.t_min, row.metric});
        }
        battlife::LineFit fit = battlife::fit_line(samples, discard_head);
        double zero_min = battlife::project_zero(fit);

        std::string name;
        if (const std::string* s = rep.find_meta("scenario")) {
            name = *s;
            if (const std::string* r = rep.find_meta("rdc")) {
                name += '/';
                name += *r;
            }
        } else if (const std::string* t = rep.find_meta("trace")) {
            name = stem_of(*t);
        } else {
            name = stem_of(path);
        }
        out += name;
        out += ',';
        out += battlife::format_fixed(fit.slope * 1440.0, 4);
        out += ',';
        out += battlife::format_fixed(zero_min / 1440.0, 4);
        out += ',';
        out += battlife::format_fixed(fit.rms, 4);
        out += '\n';
    }
    emit_text(out, o.out);
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"battery lifetime estimation for duty-cycled sensor nodes"};
    app.name("battlife");
    app.require_subcommand(1);

    PrecomputeOpts pre;
    auto* pre_cmd = app.add_subcommand(
        "precompute", "print the derived model constants and their integer twins");
    pre_cmd->add_option("--config", pre.config_path, "config file");
    pre_cmd->add_option("--m-max", pre.m_max, "diffusion series truncation depth")
        ->check(CLI::PositiveNumber)
        ->each([&pre](const std::string&) { pre.m_max_set = true; });
    pre_cmd->callback([&pre] { cmd_precompute(pre); });

    SimOpts sim;
    auto* sim_cmd = app.add_subcommand(
        "simulate", "run one estimator over a generated workload");
    add_sim_flags(sim_cmd, sim);
    add_common_flags(sim_cmd, sim, true);
    sim_cmd->callback([&sim] { cmd_simulate(sim); });

    CompareOpts cmp;
    auto* cmp_cmd = app.add_subcommand(
        "compare", "run two estimator tiers over the same workload");
    add_sim_flags(cmp_cmd, cmp);
    add_common_flags(cmp_cmd, cmp, false);
    cmp_cmd->add_option("--tiers", cmp.tiers, "two estimator tiers, comma separated")
        ->delimiter(',')
        ->expected(2)
        ->check(CLI::IsMember(tier_names()));
    cmp_cmd->callback([&cmp] { cmd_compare(cmp); });

    IngestOpts ing;
    auto* ing_cmd = app.add_subcommand(
        "ingest", "run an estimator over a recorded activity trace");
    ing_cmd->add_option("--trace", ing.trace, "trace CSV file")->required();
    add_common_flags(ing_cmd, ing, true);
    ing_cmd->callback([&ing] { cmd_ingest(ing); });

    ProjectOpts prj;
    auto* prj_cmd = app.add_subcommand(
        "project", "fit remaining charge over time and project the zero crossing");
    prj_cmd->add_option("--in", prj.inputs, "simulation report CSV (repeatable)")
        ->required();
    prj_cmd->add_option("--discard-head", prj.discard_head,
                        "warm-up to drop before fitting")
        ->capture_default_str();
    prj_cmd->add_option("--out", prj.out, "output file (default stdout)");
    prj_cmd->callback([&prj] { cmd_project(prj); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const battlife::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << '\n';
        return 3;
    } catch (const battlife::NumericError& e) {
        std::cerr << "numeric fault: " << e.what() << '\n';
        return 3;
    } catch (const battlife::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace battlife::cli
