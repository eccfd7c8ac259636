#pragma once
// Subcommand pipelines shared by the CLI and the tests. Each pipeline writes
// its artifacts into the output directory, merges them into run_manifest.json,
// and returns a small summary. Errors are thrown; the CLI maps them to exit
// codes (2 validation, 3 every-cell-singular).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermo/bec.hpp"
#include "thermo/estimation.hpp"
#include "thermo/io/config.hpp"
#include "thermo/io/csv.hpp"
#include "thermo/io/manifest.hpp"
#include "thermo/metrology.hpp"
#include "thermo/thermal.hpp"

namespace thermo {

struct PipelineResult {
    std::vector<std::string> outputs;
    int rows_total = 0;
    int rows_failed = 0;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + dir);
}

inline void finish_manifest(const RunConfig& cfg, const std::string& out_dir,
                            std::uint64_t master_seed, const PipelineResult& result,
                            const std::string& started) {
    RunManifest m;
    m.config_path = cfg.source_path;
    m.config_digest = fnv1a64_hex(read_file_bytes(cfg.source_path));
    m.master_seed = master_seed;
    m.started = started;
    m.finished = utc_timestamp();
    for (const std::string& name : result.outputs)
        m.add_output(name, join_path(out_dir, name));
    m.merge_and_write(join_path(out_dir, "run_manifest.json"));
}

inline const char* mode_name(FormulaMode m) {
    return m == FormulaMode::closed_form ? "closed_form" : "diagonalization";
}

}  // namespace detail

// --- phases: thermal phase curves over the temperature grid ---------------

inline PipelineResult run_phases(const RunConfig& cfg, const std::string& out_dir,
                                 std::optional<std::uint64_t> seed_override = {}) {
    detail::ensure_dir(out_dir);
    const std::string started = utc_timestamp();
    PipelineResult res;

    CsvWriter csv(detail::join_path(out_dir, "phases.csv"));
    csv.comment("thermal phases over the temperature grid");
    csv.comment("units: t_nk in nK, phases in rad; frequencies configured in ordinary Hz");
    csv.comment("gamma_d_shift_rad is the branch-minus dynamical phase with each level's");
    csv.comment("g = 0 zero point removed; approx_ratio = gamma_g_approx / gamma_d_approx");
    csv.comment(std::string("formula_mode: ") + detail::mode_name(cfg.mode));
    csv.columns({"t_nk", "gamma_g_exact_rad", "gamma_g_approx_rad", "gamma_d_shift_rad",
                 "gamma_d_approx_rad", "gamma_d_raw_rad", "Gamma_D_rad", "approx_ratio",
                 "singular"});

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double T : cfg.thermal.grid_K) {
        ++res.rows_total;
        const double t_nk = T * 1e9;
        try {
            const ThermalField f = thermal_field(cfg.system.omega_a, T, cfg.thermal.tail_tol);
            const double gg = mixed_geometric_phase(f, cfg.system, Branch::minus);
            const double gga = approx_geometric_phase(f.ratio_F, cfg.system);
            const double gds = dynamical_phase_shift(f, cfg.system, Branch::minus, cfg.mode);
            const double gda = approx_dynamical_phase(f.ratio_F, cfg.system);
            const double gdr = mixed_dynamical_phase(f, cfg.system, Branch::minus, cfg.mode);
            const double big = ramsey_relative_phase(f, cfg.system, cfg.mode);
            csv.row({t_nk, gg, gga, gds, gda, gdr, big, gga / gda, 0.0});
        } catch (const SingularityError&) {
            ++res.rows_failed;
            csv.row({t_nk, nan, nan, nan, nan, nan, nan, nan, 1.0});
        }
    }
    if (res.rows_failed == res.rows_total)
        throw SingularityError("phases: every grid row failed");

    csv.close();
    res.outputs.push_back("phases.csv");
    detail::finish_manifest(cfg, out_dir, seed_override.value_or(cfg.sim.seed), res, started);
    return res;
}

// --- surface: relative phase over the (g, delta) grid ---------------------

inline PipelineResult run_surface(const RunConfig& cfg, const std::string& out_dir,
                                  std::optional<std::uint64_t> seed_override = {}) {
    if (cfg.surface.g_grid_hz.empty() || cfg.surface.delta_grid_hz.empty())
        throw ValidationError("surface: config needs a [surface] section with g and delta grids");
    detail::ensure_dir(out_dir);
    const std::string started = utc_timestamp();
    PipelineResult res;

    const double T = cfg.surface.temperature_K;
    CsvWriter csv(detail::join_path(out_dir, "gamma_surface.csv"));
    csv.comment("Ramsey relative phase Gamma_D over the (g, delta) grid");
    csv.comment("t_nk = " + std::to_string(T * 1e9) + "; phases in rad");
    csv.comment("Gamma_D_shift_rad removes the g = 0 zero point; it depends on (g, delta)");
    csv.comment("only through g/delta at fixed mode frequency and temperature");
    csv.comment("validity_flag = 1 when an approximation margin exceeds its threshold");
    csv.comment(std::string("formula_mode: ") + detail::mode_name(cfg.mode));
    csv.columns({"g_hz", "delta_hz", "Gamma_D_rad", "Gamma_D_shift_rad", "rwa_margin",
                 "adiabatic_margin", "validity_flag"});

    for (double g_hz : cfg.surface.g_grid_hz) {
        for (double d_hz : cfg.surface.delta_grid_hz) {
            ++res.rows_total;
            const SystemParams p =
                SystemParams::from_detuning(cfg.system.omega_a, angular(g_hz), angular(d_hz));
            const ThermalField f = thermal_field(p.omega_a, T, cfg.thermal.tail_tol);
            const double raw = ramsey_relative_phase(f, p, cfg.mode);
            const double shift = dynamical_phase_shift(f, p, Branch::plus, cfg.mode) -
                                 dynamical_phase_shift(f, p, Branch::minus, cfg.mode);
            const ValidityReport v = validity_report(p, T, cycle_time(p));
            const bool ok = v.rwa_ok && v.adiabatic_ok;
            csv.row({g_hz, d_hz, raw, shift, v.rwa_margin, v.adiabatic_margin, ok ? 0.0 : 1.0});
        }
    }

    csv.close();
    res.outputs.push_back("gamma_surface.csv");
    detail::finish_manifest(cfg, out_dir, seed_override.value_or(cfg.sim.seed), res, started);
    return res;
}

// --- precision: theoretical bounds plus the Monte-Carlo sweep -------------

inline PipelineResult run_precision(const RunConfig& cfg, const std::string& out_dir,
                                    std::optional<std::uint64_t> seed_override = {}) {
    detail::ensure_dir(out_dir);
    const std::string started = utc_timestamp();
    const std::uint64_t master_seed = seed_override.value_or(cfg.sim.seed);
    PipelineResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    {
        CsvWriter csv(detail::join_path(out_dir, "bounds.csv"));
        csv.comment("theoretical relative temperature errors delta_T / T per scheme");
        csv.comment("ramsey/mz columns use the analytic derivative of the exact thermal sums;");
        csv.comment("*_closed_* columns are the closed-form bounds (dyn sandwich, geo lower)");
        csv.comment("geo_closed_valid = 1 when exp(F) > 2, the validity edge of the printed form");
        csv.comment(std::string("formula_mode: ") + detail::mode_name(cfg.mode));
        csv.columns({"t_nk", "m", "ramsey_rel", "mz_dyn_rel", "mz_geo_rel", "dyn_closed_lower_rel",
                     "dyn_closed_upper_rel", "geo_closed_lower_rel", "geo_closed_valid"});
        for (double T : cfg.thermal.grid_K) {
            for (std::int64_t M : cfg.metrology.m_list) {
                const PrecisionReport ram =
                    scheme_precision(Scheme::ramsey_dynamical, T, cfg.system, M, cfg.mode,
                                     cfg.thermal.tail_tol);
                const PrecisionReport mzd =
                    scheme_precision(Scheme::mz_dynamical, T, cfg.system, M, cfg.mode,
                                     cfg.thermal.tail_tol);
                double geo = nan;
                try {
                    geo = scheme_precision(Scheme::mz_geometric, T, cfg.system, M, cfg.mode,
                                           cfg.thermal.tail_tol)
                              .relative_error;
                } catch (const SingularityError&) {
                }
                const SandwichBounds sw = dynamical_mz_bounds(T, cfg.system, M);
                const GeometricBound gb = geometric_mz_bound(T, cfg.system, M);
                csv.row({T * 1e9, static_cast<double>(M), ram.relative_error, mzd.relative_error,
                         geo, sw.lower / T, sw.upper / T, gb.delta_T / T,
                         gb.in_validity ? 1.0 : 0.0});
            }
        }
        res.outputs.push_back("bounds.csv");
    }

    {
        MeasurementModel model;
        model.params = cfg.system;
        model.visibility = cfg.sim.visibility;
        model.mode = cfg.mode;
        model.tail_tol = cfg.thermal.tail_tol;

        SweepOptions opt;
        opt.trials = cfg.sim.trials;
        opt.master_seed = master_seed;
        opt.window_lo = cfg.sim.window_lo_K;
        opt.window_hi = cfg.sim.window_hi_K;
        opt.fixed_control_phase = cfg.sim.control_phase;

        const std::vector<SweepCell> table =
            precision_sweep(cfg.thermal.grid_K, model, cfg.metrology.m_list, opt);

        CsvWriter csv(detail::join_path(out_dir, "simulation.csv"));
        csv.comment("Monte-Carlo maximum-likelihood estimation vs the Cramer-Rao prediction");
        csv.comment("master_seed = " + std::to_string(master_seed) +
                    ", trials = " + std::to_string(cfg.sim.trials));
        csv.comment("empirical_rel_error = std(T_hat)/T over trials; theory_rel_error = CR bound");
        csv.columns({"t_nk", "m", "p_true", "empirical_rel_error", "theory_rel_error",
                     "mean_t_hat_nk", "trials", "failed", "flagged"});
        int flagged = 0;
        for (const SweepCell& c : table) {
            if (c.flagged) ++flagged;
            csv.row({c.T_true * 1e9, static_cast<double>(c.M), c.p_true, c.empirical_rel_error,
                     c.theory_rel_error, c.mean_T_hat * 1e9, static_cast<double>(c.trials),
                     static_cast<double>(c.failed), c.flagged ? 1.0 : 0.0});
        }
        res.rows_total = static_cast<int>(table.size());
        res.rows_failed = flagged;
        res.outputs.push_back("simulation.csv");
    }

    {
        std::ofstream gp(detail::join_path(out_dir, "plot_precision.gp"));
        gp << "# gnuplot stub: relative temperature error vs temperature\n"
           << "set datafile separator ','\n"
           << "set logscale y\n"
           << "set xlabel 'T (nK)'\n"
           << "set ylabel 'delta T / T'\n"
           << "plot 'simulation.csv' using 1:($2==" << cfg.metrology.m_list.back()
           << "?$4:1/0) with points title 'empirical', \\\n"
           << "     'simulation.csv' using 1:($2==" << cfg.metrology.m_list.back()
           << "?$5:1/0) with lines title 'theory'\n";
        res.outputs.push_back("plot_precision.gp");
    }

    detail::finish_manifest(cfg, out_dir, master_seed, res, started);
    return res;
}

// --- bec: laboratory-parameter mapping report ------------------------------

inline PipelineResult run_bec(const RunConfig& cfg, const std::string& out_dir,
                              std::optional<std::uint64_t> seed_override = {}) {
    if (!cfg.bec) throw ValidationError("bec: config has no [bec] section");
    detail::ensure_dir(out_dir);
    const std::string started = utc_timestamp();
    PipelineResult res;
    const BecSection& b = *cfg.bec;

    const AngularFrequency omega_a = phonon_frequency(b.cond.length_L, b.cond.speed_c);
    const double k = default_wavenumber(b.cond.length_L);
    const AngularFrequency g_signed = dot_coupling(b.cond, k);
    const AngularFrequency g_eff{std::fabs(g_signed.rad_per_s)};
    const std::int64_t budget =
        probe_budget(b.cond.length_L, b.cond.dot_spacing, b.cond.healing_length);

    const SystemParams p = SystemParams::from_detuning(omega_a, g_eff, cfg.system.delta);
    const std::vector<double>& grid = cfg.thermal.grid_K;
    const double T_ref = grid[(grid.size() - 1) / 2];
    const ValidityReport v = validity_report(p, T_ref, cycle_time(p));

    nlohmann::json j;
    j["phonon_mode"] = {{"omega_a_hz", ordinary_hz(omega_a)},
                        {"wavenumber_per_m", k},
                        {"length_m", b.cond.length_L},
                        {"sound_speed_m_per_s", b.cond.speed_c}};
    j["coupling"] = {{"g_hz_signed", ordinary_hz(g_signed)},
                     {"g_hz", ordinary_hz(g_eff)},
                     {"configured_system_g_hz", ordinary_hz(cfg.system.g)},
                     {"volume_m3", b.cond.volume_V},
                     {"volume_defaulted_to_L3", b.volume_defaulted},
                     {"g_bb", b.cond.g_bb},
                     {"g_ab", b.cond.g_ab}};
    j["probe_budget"] = budget;
    j["validity"] = {{"reference_temperature_nk", T_ref * 1e9},
                     {"rwa_margin_g", v.rwa_margin_g},
                     {"rwa_margin_delta", v.rwa_margin_delta},
                     {"rwa_margin", v.rwa_margin},
                     {"rwa_ok", v.rwa_ok},
                     {"adiabatic_margin", v.adiabatic_margin},
                     {"adiabatic_ok", v.adiabatic_ok},
                     {"transition_rate_rad_per_s", v.transition_rate},
                     {"printed_rhs_rad_per_s", v.printed_rhs},
                     {"lhs_times_t", v.lhs_times_t},
                     {"rhs_times_t", v.rhs_times_t},
                     {"thermal_mean_n", v.thermal_mean_n},
                     {"threshold_rwa", v.thresholds.rwa},
                     {"threshold_adiabatic", v.thresholds.adiabatic}};
    j["unruh"] = nlohmann::json::array();
    for (double a : b.accelerations) {
        const double tu = unruh_temperature(a, b.cond.speed_c);
        j["unruh"].push_back({{"acceleration_m_per_s2", a}, {"T_U_K", tu}, {"T_U_nk", tu * 1e9}});
    }
    std::vector<std::string> notes;
    if (g_eff.rad_per_s == 0.0)
        notes.push_back("g_ab equals g_bb: coupling is zero and the fringe carries no "
                        "temperature information");
    if (b.volume_defaulted) notes.push_back("condensate volume defaulted to L^3");
    if (b.cond.g_aa)
        notes.push_back("g_aa recorded as an assumption input; it enters no formula");
    j["notes"] = notes;
    res.notes = notes;

    {
        std::ofstream out(detail::join_path(out_dir, "bec_report.json"));
        out << j.dump(2) << "\n";
        res.outputs.push_back("bec_report.json");
    }
    {
        std::ofstream out(detail::join_path(out_dir, "bec_report.txt"));
        char buf[160];
        out << "condensate-to-model mapping\n";
        std::snprintf(buf, sizeof buf, "  omega_a = %.6g Hz (angular %.6g rad/s)\n",
                      ordinary_hz(omega_a), omega_a.rad_per_s);
        out << buf;
        std::snprintf(buf, sizeof buf, "  g       = %.6g Hz (signed %.6g Hz)\n",
                      ordinary_hz(g_eff), ordinary_hz(g_signed));
        out << buf;
        std::snprintf(buf, sizeof buf, "  delta   = %.6g Hz (from [system])\n",
                      ordinary_hz(cfg.system.delta));
        out << buf;
        std::snprintf(buf, sizeof buf, "  probe budget = %lld\n",
                      static_cast<long long>(budget));
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "  rwa margin = %.4g (ok=%d)  adiabatic margin = %.4g (ok=%d)\n",
                      v.rwa_margin, v.rwa_ok ? 1 : 0, v.adiabatic_margin, v.adiabatic_ok ? 1 : 0);
        out << buf;
        for (double a : b.accelerations) {
            std::snprintf(buf, sizeof buf, "  T_U(%.4g m/s^2) = %.6g nK\n", a,
                          unruh_temperature(a, b.cond.speed_c) * 1e9);
            out << buf;
        }
        for (const std::string& n : notes) out << "  note: " << n << "\n";
        res.outputs.push_back("bec_report.txt");
    }

    detail::finish_manifest(cfg, out_dir, seed_override.value_or(cfg.sim.seed), res, started);
    return res;
}

// --- verify: re-read artifacts and re-check row-level invariants -----------

struct VerifySummary {
    int checks = 0;
    int failures = 0;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok) ++failures;
        lines.push_back(std::string(ok ? "[ok]   " : "[FAIL] ") + what);
    }
};

inline VerifySummary run_verify(const RunConfig& cfg, const std::string& out_dir) {
    VerifySummary s;
    const std::string manifest_path = detail::join_path(out_dir, "run_manifest.json");
    if (!std::filesystem::exists(manifest_path))
        throw ValidationError("verify: no run_manifest.json in " + out_dir);
    const RunManifest manifest = RunManifest::load(manifest_path);

    s.check(manifest.config_digest == fnv1a64_hex(read_file_bytes(cfg.source_path)),
            "config digest matches the manifest");
    for (const auto& [name, digest] : manifest.outputs) {
        const std::string path = detail::join_path(out_dir, name);
        if (!std::filesystem::exists(path)) {
            s.check(false, name + " exists");
            continue;
        }
        s.check(file_digest_hex(path) == digest, name + " digest matches the manifest");
    }

    const double g_over_delta = cfg.system.g.rad_per_s / cfg.system.delta.rad_per_s;

    if (manifest.outputs.count("phases.csv")) {
        const CsvTable t = read_csv(detail::join_path(out_dir, "phases.csv"));
        const int cg = t.column_index("gamma_g_exact_rad");
        const int cs = t.column_index("gamma_d_shift_rad");
        const int cr = t.column_index("approx_ratio");
        const int cx = t.column_index("singular");
        bool hierarchy = true, ratio = true, wrapped = true;
        for (const auto& row : t.rows) {
            if (row[static_cast<std::size_t>(cx)] != 0.0) continue;
            const double gg = row[static_cast<std::size_t>(cg)];
            hierarchy = hierarchy && gg < row[static_cast<std::size_t>(cs)];
            ratio = ratio && std::fabs(row[static_cast<std::size_t>(cr)] -
                                       1.0 / (4.0 * constants::pi)) <= 1e-12;
            wrapped = wrapped && gg > -constants::pi && gg <= constants::pi;
        }
        s.check(hierarchy, "phases.csv: geometric phase below zero-point-removed dynamical phase");
        s.check(ratio, "phases.csv: approximation ratio equals 1/(4 pi) within 1e-12");
        s.check(wrapped, "phases.csv: geometric phases lie in (-pi, pi]");
    }

    if (manifest.outputs.count("gamma_surface.csv")) {
        const CsvTable t = read_csv(detail::join_path(out_dir, "gamma_surface.csv"));
        const int cf = t.column_index("validity_flag");
        const int cs = t.column_index("Gamma_D_shift_rad");
        bool flags = true, sign = true;
        for (const auto& row : t.rows) {
            const double fl = row[static_cast<std::size_t>(cf)];
            flags = flags && (fl == 0.0 || fl == 1.0);
            sign = sign && row[static_cast<std::size_t>(cs)] <= 1e-12;
        }
        s.check(flags, "gamma_surface.csv: validity flags are 0/1");
        s.check(sign, "gamma_surface.csv: zero-point-removed relative phase is non-positive");
    }

    if (manifest.outputs.count("bounds.csv")) {
        const CsvTable t = read_csv(detail::join_path(out_dir, "bounds.csv"));
        const int cram = t.column_index("ramsey_rel");
        const int cmzd = t.column_index("mz_dyn_rel");
        const int cmzg = t.column_index("mz_geo_rel");
        const int clo = t.column_index("dyn_closed_lower_rel");
        const int cup = t.column_index("dyn_closed_upper_rel");
        bool factor2 = true, sandwich = true, ordering = true, halves = true;
        for (const auto& row : t.rows) {
            const double lo = row[static_cast<std::size_t>(clo)];
            const double up = row[static_cast<std::size_t>(cup)];
            const double mzd = row[static_cast<std::size_t>(cmzd)];
            const double ram = row[static_cast<std::size_t>(cram)];
            const double mzg = row[static_cast<std::size_t>(cmzg)];
            factor2 = factor2 && std::fabs(up - 2.0 * lo) <= 1e-15 * up;
            halves = halves && std::fabs(2.0 * ram - mzd) <= 1e-14 * mzd;
            if (g_over_delta <= 0.1) sandwich = sandwich && lo <= ram && ram <= up;
            if (std::isfinite(mzg)) ordering = ordering && mzd < mzg;
        }
        s.check(factor2, "bounds.csv: closed-form sandwich has upper = 2 x lower");
        s.check(halves, "bounds.csv: Ramsey error is half the Mach-Zehnder dynamical error");
        s.check(sandwich,
                "bounds.csv: exact relative-phase error lies inside the closed-form sandwich");
        s.check(ordering, "bounds.csv: dynamical scheme beats geometric scheme");
    }

    if (manifest.outputs.count("simulation.csv")) {
        const CsvTable t = read_csv(detail::join_path(out_dir, "simulation.csv"));
        const int cp = t.column_index("p_true");
        const int ce = t.column_index("empirical_rel_error");
        const int ct = t.column_index("trials");
        const int cfails = t.column_index("failed");
        bool probs = true, errs = true, counts = true;
        for (const auto& row : t.rows) {
            const double p = row[static_cast<std::size_t>(cp)];
            probs = probs && p >= 0.0 && p <= 1.0;
            const double e = row[static_cast<std::size_t>(ce)];
            errs = errs && (!std::isfinite(e) || e >= 0.0);
            counts = counts && row[static_cast<std::size_t>(cfails)] <=
                                   row[static_cast<std::size_t>(ct)];
        }
        s.check(probs, "simulation.csv: fringe probabilities lie in [0, 1]");
        s.check(errs, "simulation.csv: empirical errors are non-negative");
        s.check(counts, "simulation.csv: failure counts do not exceed trials");
    }

    return s;
}

}  // namespace thermo
