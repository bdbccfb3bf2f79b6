#include "clipcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "clipcs/fourier.hpp"

namespace clipcs {

namespace {

using SteadyClock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(0..n-1) on a small worker pool. Work items write to disjoint
/// slots, so scheduling cannot affect results.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    const int count = std::min(workers, n);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double seconds_since(SteadyClock::time_point t0) {
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

double papr_reduction_db_of(const TrialScene& scene) {
    const double peak = scene.x.values.cwiseAbs2().maxCoeff();
    return 10.0 * std::log10(peak / (scene.gamma_abs * scene.gamma_abs));
}

TrialRecord run_trial_method(const TrialScene& scene, const QamModem& modem,
                             Method method, const RecoveryOptions& ropts,
                             double gamma, std::uint64_t trial) {
    const auto t0 = SteadyClock::now();
    const RecoveryEstimate est = run_method(method, scene, ropts);
    const double secs = seconds_since(t0);

    TrialRecord rec;
    rec.seed = trial;
    rec.gamma = gamma;
    rec.method = method;
    rec.ser = ser(decode_labels(scene, modem, est.c_hat), scene.data_labels);
    rec.nmse = nmse(scene.clip.c, est.c_hat);
    rec.papr_reduction_db = papr_reduction_db_of(scene);
    rec.residual_clip_var = residual_clip_var(scene, est.c_hat);
    rec.wall_time = secs;
    return rec;
}

void maybe_write_outputs(const ExperimentSpec& spec, const std::string& csv,
                         const std::string& command) {
    if (spec.output_path.empty()) return;
    write_text_file(spec.output_path, csv);
    write_text_file(spec.output_path + ".json", spec_to_json(spec, command));
}

} // namespace

void ExperimentSpec::validate() const {
    cfg.validate();
    if (gamma_grid.empty())
        throw std::invalid_argument("experiment: gamma_grid must be nonempty");
    for (double g : gamma_grid)
        if (g <= 0.0)
            throw std::invalid_argument("experiment: gamma values must be positive");
    if (methods.empty())
        throw std::invalid_argument("experiment: methods must be nonempty");
    if (n_trials < 1)
        throw std::invalid_argument("experiment: n_trials must be >= 1");
    if (scheme == ClipScheme::kDigitalMagnitude && !zeta)
        throw std::invalid_argument("experiment: digital clipping needs zeta");
    if (zeta && *zeta <= 0.0)
        throw std::invalid_argument("experiment: zeta must be positive");
}

SweepResult run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const QamModem modem(spec.cfg.qam_order);
    const int workers = resolve_workers(spec.n_workers);

    SweepResult result;
    std::string csv =
        "gamma,method,trials,ser,ser_ci95,nmse,papr_red_db_mean,resid_var,"
        "wall_ms_median\n";

    for (double gamma : spec.gamma_grid) {
        const RecoveryOptions ropts = default_recovery_options(
            spec.cfg, gamma, spec.scheme, spec.zeta, spec.lambda_kappa);
        std::vector<std::vector<TrialRecord>> records(
            spec.methods.size(), std::vector<TrialRecord>(spec.n_trials));

        parallel_for(spec.n_trials, workers, [&](int t) {
            const TrialScene scene =
                make_scene(spec.cfg, modem, gamma, spec.scheme, spec.zeta,
                           static_cast<std::uint64_t>(t));
            for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
                records[mi][t] = run_trial_method(scene, modem, spec.methods[mi],
                                                  ropts, gamma, t);
        });

        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
            const SweepCell cell =
                aggregate_trials(gamma, spec.methods[mi], records[mi]);
            result.cells.push_back(cell);
            csv += fmt(cell.gamma);
            csv += ',';
            csv += method_name(cell.method);
            csv += ',' + std::to_string(cell.trials);
            csv += ',' + fmt(cell.ser_mean);
            csv += ',' + fmt(cell.ser_ci95);
            csv += ',' + fmt(cell.nmse_mean);
            csv += ',' + fmt(cell.papr_red_db_mean);
            csv += ',' + fmt(cell.resid_var_mean);
            csv += ',' + fmt(cell.wall_ms_median);
            csv += '\n';
        }
    }
    result.csv_text = csv;
    maybe_write_outputs(spec, csv, "sweep");
    return result;
}

ZetaSweepResult run_nmse_zeta(const ExperimentSpec& spec,
                              const std::vector<double>& zeta_grid,
                              double gamma_mult) {
    if (zeta_grid.empty())
        throw std::invalid_argument("nmse-zeta: zeta grid must be nonempty");
    ExperimentSpec local = spec;
    local.scheme = ClipScheme::kDigitalMagnitude;
    local.zeta = zeta_grid.front();
    local.gamma_grid = {gamma_mult};
    local.validate();

    const QamModem modem(local.cfg.qam_order);
    const int workers = resolve_workers(local.n_workers);

    ZetaSweepResult result;
    std::string csv = "zeta,method,trials,nmse_mean,nmse_ci95\n";

    for (double zeta : zeta_grid) {
        const RecoveryOptions ropts = default_recovery_options(
            local.cfg, gamma_mult, local.scheme, zeta, local.lambda_kappa);
        std::vector<std::vector<double>> nmses(
            local.methods.size(), std::vector<double>(local.n_trials, -1.0));

        parallel_for(local.n_trials, workers, [&](int t) {
            const TrialScene scene =
                make_scene(local.cfg, modem, gamma_mult, local.scheme, zeta,
                           static_cast<std::uint64_t>(t));
            for (std::size_t mi = 0; mi < local.methods.size(); ++mi) {
                const RecoveryEstimate est =
                    run_method(local.methods[mi], scene, ropts);
                nmses[mi][t] = nmse(scene.clip.c, est.c_hat);
            }
        });

        for (std::size_t mi = 0; mi < local.methods.size(); ++mi) {
            double sum = 0.0, sq = 0.0;
            int n = 0;
            for (double v : nmses[mi]) {
                if (std::isfinite(v) && v >= 0.0) {
                    sum += v;
                    sq += v * v;
                    ++n;
                }
            }
            ZetaRow row;
            row.zeta = zeta;
            row.method = local.methods[mi];
            row.trials = n;
            row.nmse_mean = n > 0 ? sum / n : std::nan("");
            const double var = n > 1 ? std::max(0.0, sq / n - row.nmse_mean *
                                                              row.nmse_mean)
                                     : 0.0;
            row.nmse_ci95 = n > 1 ? 1.96 * std::sqrt(var / (n - 1)) : 0.0;
            result.rows.push_back(row);
            csv += fmt(row.zeta);
            csv += ',';
            csv += method_name(row.method);
            csv += ',' + std::to_string(row.trials);
            csv += ',' + fmt(row.nmse_mean);
            csv += ',' + fmt(row.nmse_ci95);
            csv += '\n';
        }
    }
    result.csv_text = csv;
    maybe_write_outputs(local, csv, "nmse-zeta");
    return result;
}

InclusionResult run_inclusion(const ExperimentSpec& spec,
                              const std::vector<double>& beta_fractions) {
    spec.validate();
    if (beta_fractions.empty())
        throw std::invalid_argument("inclusion: beta fractions must be nonempty");

    InclusionResult result;
    std::string csv = "gamma,beta_fraction,trials,inclusion_prob\n";
    for (double gamma : spec.gamma_grid) {
        for (double frac : beta_fractions) {
            InclusionRow row;
            row.gamma = gamma;
            row.beta_fraction = frac;
            row.trials = spec.n_trials;
            row.probability =
                inclusion_probability(spec.cfg, gamma, frac, spec.n_trials);
            result.rows.push_back(row);
            csv += fmt(row.gamma);
            csv += ',' + fmt(row.beta_fraction);
            csv += ',' + std::to_string(row.trials);
            csv += ',' + fmt(row.probability);
            csv += '\n';
        }
    }
    result.csv_text = csv;
    maybe_write_outputs(spec, csv, "inclusion");
    return result;
}

PaprResult run_papr_ccdf(const ExperimentSpec& spec) {
    spec.validate();
    const QamModem modem(spec.cfg.qam_order);
    const int workers = resolve_workers(spec.n_workers);

    PaprResult result;
    std::string csv = "gamma,reduction_db,ccdf\n";
    for (double gamma : spec.gamma_grid) {
        std::vector<TrialRecord> records(spec.n_trials);
        parallel_for(spec.n_trials, workers, [&](int t) {
            const TrialScene scene =
                make_scene(spec.cfg, modem, gamma, spec.scheme, spec.zeta,
                           static_cast<std::uint64_t>(t));
            records[t].papr_reduction_db = papr_reduction_db_of(scene);
        });

        const CcdfTable table = papr_reduction_ccdf(records);
        double mean = 0.0;
        for (const auto& r : records) mean += r.papr_reduction_db;
        mean /= static_cast<double>(records.size());
        result.mean_by_gamma.emplace_back(gamma, mean);

        for (std::size_t i = 0; i < table.value.size(); ++i) {
            result.rows.push_back({gamma, table.value[i], table.ccdf[i]});
            csv += fmt(gamma);
            csv += ',' + fmt(table.value[i]);
            csv += ',' + fmt(table.ccdf[i]);
            csv += '\n';
        }
    }
    result.csv_text = csv;
    maybe_write_outputs(spec, csv, "papr-ccdf");
    return result;
}

namespace {

CapacityRow capacity_row(const ExperimentSpec& spec, const QamModem& modem,
                         double gamma, Method method, int workers) {
    // Tone-reserving system: residual clip distortion on the data tones
    // after cancellation.
    const RecoveryOptions ropts = default_recovery_options(
        spec.cfg, gamma, spec.scheme, spec.zeta, spec.lambda_kappa);
    std::vector<double> resid(spec.n_trials, 0.0), gain(spec.n_trials, 0.0);
    parallel_for(spec.n_trials, workers, [&](int t) {
        const TrialScene scene =
            make_scene(spec.cfg, modem, gamma, spec.scheme, spec.zeta,
                       static_cast<std::uint64_t>(t));
        const RecoveryEstimate est = run_method(method, scene, ropts);
        resid[t] = residual_clip_var(scene, est.c_hat);
        gain[t] = scene.channel.freq_response.cwiseAbs2().mean();
    });

    // All-tones system: same clip level, no reservation, no estimation.
    OfdmConfig cfg1 = spec.cfg;
    cfg1.n_measurement_tones = 0;
    std::vector<double> clip_var(spec.n_trials, 0.0);
    parallel_for(spec.n_trials, workers, [&](int t) {
        const TrialScene scene =
            make_scene(cfg1, modem, gamma, spec.scheme, spec.zeta,
                       static_cast<std::uint64_t>(t));
        clip_var[t] = scene.clip.c.squaredNorm() /
                      static_cast<double>(cfg1.n_subcarriers);
    });

    CapacitySummary summary;
    summary.n_tones = spec.cfg.n_subcarriers;
    summary.n_reserved = spec.cfg.n_measurement_tones;
    summary.signal_var = 1.0;
    summary.noise_var_s1 = cfg1.noise_var();
    summary.noise_var_s2 = spec.cfg.noise_var();
    double g = 0.0, r = 0.0, c = 0.0;
    for (int t = 0; t < spec.n_trials; ++t) {
        g += gain[t];
        r += resid[t];
        c += clip_var[t];
    }
    summary.gain = g / spec.n_trials;
    summary.resid_var = r / spec.n_trials;
    summary.clip_var_full = c / spec.n_trials;

    CapacityRow row;
    row.gamma = gamma;
    row.snr_db = spec.cfg.snr_db;
    row.method = method;
    row.trials = spec.n_trials;
    row.c1_per_tone = capacity_c1(summary);
    row.c2_per_tone = capacity_c2(summary);
    row.clip_var_full = summary.clip_var_full;
    row.resid_var = summary.resid_var;
    row.condition_holds = capacity_condition(summary);
    return row;
}

std::string capacity_csv(const std::vector<CapacityRow>& rows) {
    std::string csv =
        "gamma,snr_db,method,trials,c1_per_tone,c2_per_tone,clip_var_full,"
        "resid_var,condition_holds\n";
    for (const auto& row : rows) {
        csv += fmt(row.gamma);
        csv += ',' + fmt(row.snr_db);
        csv += ',';
        csv += method_name(row.method);
        csv += ',' + std::to_string(row.trials);
        csv += ',' + fmt(row.c1_per_tone);
        csv += ',' + fmt(row.c2_per_tone);
        csv += ',' + fmt(row.clip_var_full);
        csv += ',' + fmt(row.resid_var);
        csv += ',';
        csv += row.condition_holds ? '1' : '0';
        csv += '\n';
    }
    return csv;
}

} // namespace

CapacityResult run_capacity_gamma(const ExperimentSpec& spec) {
    spec.validate();
    const QamModem modem(spec.cfg.qam_order);
    const int workers = resolve_workers(spec.n_workers);
    const Method method = spec.methods.front();

    CapacityResult result;
    for (double gamma : spec.gamma_grid)
        result.rows.push_back(capacity_row(spec, modem, gamma, method, workers));
    result.csv_text = capacity_csv(result.rows);
    maybe_write_outputs(spec, result.csv_text, "capacity");
    return result;
}

CapacityResult run_capacity_snr(const ExperimentSpec& spec,
                                const std::vector<double>& snr_grid_db,
                                double gamma_mult) {
    if (snr_grid_db.empty())
        throw std::invalid_argument("capacity: snr grid must be nonempty");
    const QamModem modem(spec.cfg.qam_order);
    const int workers = resolve_workers(spec.n_workers);
    const Method method = spec.methods.front();

    CapacityResult result;
    for (double snr : snr_grid_db) {
        ExperimentSpec local = spec;
        local.cfg.snr_db = snr;
        local.validate();
        result.rows.push_back(
            capacity_row(local, modem, gamma_mult, method, workers));
    }
    result.csv_text = capacity_csv(result.rows);
    maybe_write_outputs(spec, result.csv_text, "capacity-snr");
    return result;
}

TimingResult run_timing(const ExperimentSpec& spec) {
    spec.validate();
    const QamModem modem(spec.cfg.qam_order);
    const double gamma = spec.gamma_grid.front();
    const RecoveryOptions ropts = default_recovery_options(
        spec.cfg, gamma, spec.scheme, spec.zeta, spec.lambda_kappa);

    // Timing runs stay on one worker so samples do not contend.
    std::vector<std::vector<double>> samples(spec.methods.size());
    for (auto& s : samples) s.reserve(spec.n_trials);
    for (int t = 0; t < spec.n_trials; ++t) {
        const TrialScene scene =
            make_scene(spec.cfg, modem, gamma, spec.scheme, spec.zeta,
                       static_cast<std::uint64_t>(t));
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
            const auto t0 = SteadyClock::now();
            const RecoveryEstimate est =
                run_method(spec.methods[mi], scene, ropts);
            (void)est;
            samples[mi].push_back(seconds_since(t0));
        }
    }

    double global_max = 0.0;
    for (const auto& s : samples)
        for (double v : s) global_max = std::max(global_max, v);
    if (global_max <= 0.0) global_max = 1.0;

    TimingResult result;
    std::string csv = "method,norm_time,ccdf\n";
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        std::vector<double> norm = samples[mi];
        for (double& v : norm) v /= global_max;
        std::vector<double> sorted = norm;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        const double median = sorted.size() % 2 == 1
                                  ? sorted[mid]
                                  : 0.5 * (sorted[mid - 1] + sorted[mid]);
        result.median_by_method.emplace_back(spec.methods[mi], median);

        const CcdfTable table = empirical_ccdf(std::move(norm));
        for (std::size_t i = 0; i < table.value.size(); ++i) {
            result.rows.push_back(
                {spec.methods[mi], table.value[i], table.ccdf[i]});
            csv += method_name(spec.methods[mi]);
            csv += ',' + fmt(table.value[i]);
            csv += ',' + fmt(table.ccdf[i]);
            csv += '\n';
        }
    }
    result.csv_text = csv;
    maybe_write_outputs(spec, csv, "timing");
    return result;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string spec_to_json(const ExperimentSpec& spec, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["cfg"] = {{"n_subcarriers", spec.cfg.n_subcarriers},
                {"n_measurement_tones", spec.cfg.n_measurement_tones},
                {"qam_order", spec.cfg.qam_order},
                {"channel_taps", spec.cfg.channel_taps},
                {"snr_db", spec.cfg.snr_db},
                {"seed", spec.cfg.seed}};
    j["gamma_grid"] = spec.gamma_grid;
    std::vector<std::string> names;
    for (Method m : spec.methods) names.emplace_back(method_name(m));
    j["methods"] = names;
    j["n_trials"] = spec.n_trials;
    j["scheme"] =
        spec.scheme == ClipScheme::kPeakSuppression ? "ps" : "dmc";
    if (spec.zeta) j["zeta"] = *spec.zeta;
    j["lambda_kappa"] = spec.lambda_kappa;
    j["output_path"] = spec.output_path;
    return j.dump(2) + "\n";
}

ExperimentSpec spec_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentSpec spec;
    if (j.contains("cfg")) {
        const auto& c = j["cfg"];
        spec.cfg.n_subcarriers = c.value("n_subcarriers", spec.cfg.n_subcarriers);
        spec.cfg.n_measurement_tones =
            c.value("n_measurement_tones", spec.cfg.n_measurement_tones);
        spec.cfg.qam_order = c.value("qam_order", spec.cfg.qam_order);
        spec.cfg.channel_taps = c.value("channel_taps", spec.cfg.channel_taps);
        spec.cfg.snr_db = c.value("snr_db", spec.cfg.snr_db);
        spec.cfg.seed = c.value("seed", spec.cfg.seed);
    }
    if (j.contains("gamma_grid"))
        spec.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
    if (j.contains("methods")) {
        spec.methods.clear();
        for (const auto& name : j["methods"]) {
            const auto m = method_from_name(name.get<std::string>());
            if (!m)
                throw std::invalid_argument("unknown method: " +
                                            name.get<std::string>());
            spec.methods.push_back(*m);
        }
    }
    spec.n_trials = j.value("n_trials", spec.n_trials);
    if (j.contains("scheme")) {
        const std::string s = j["scheme"].get<std::string>();
        if (s == "ps")
            spec.scheme = ClipScheme::kPeakSuppression;
        else if (s == "dmc")
            spec.scheme = ClipScheme::kDigitalMagnitude;
        else
            throw std::invalid_argument("unknown scheme: " + s);
    }
    if (j.contains("zeta")) spec.zeta = j["zeta"].get<double>();
    spec.lambda_kappa = j.value("lambda_kappa", spec.lambda_kappa);
    spec.output_path = j.value("output_path", spec.output_path);
    spec.n_workers = j.value("n_workers", spec.n_workers);
    return spec;
}

} // namespace clipcs
