#pragma once

// Serialization and file emission for experiment results.
//
// JSON carries the complete result (ensemble and sweep results round-trip
// losslessly); the CSVs are flat views of the same data for plotting and
// spreadsheets; the SVGs are quick-look plots.  Every emitted file embeds the
// config hash and master seed, so outputs are traceable and two runs of the
// same config produce byte-identical files.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "sqa/experiments.hpp"
#include "sqa/output.hpp"

namespace sqa {

namespace detail {

inline Json json_number_array(const std::vector<double>& values) {
    Json array = Json::array();
    for (const double v : values) array.push_back(json_number(v));
    return array;
}

inline std::vector<double> number_array_or_nan(const Json& j) {
    std::vector<double> out;
    for (const auto& element : j)
        out.push_back(number_or(element, std::numeric_limits<double>::quiet_NaN()));
    return out;
}

inline std::string provenance_line(const std::string& hash, std::uint64_t seed) {
    return "config_hash=" + hash + " seed=" + std::to_string(seed);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ising ensemble JSON

inline Json to_json(const IsingEnsembleResult& result) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = to_string(result.config.kind);
    j["config"] = to_json(result.config);
    j["config_hash"] = result.hash;
    j["seed"] = result.config.seed;
    Json records = Json::array();
    for (const auto& record : result.records) {
        Json r;
        r["child_seed"] = record.child_seed;
        r["guess_correct"] = record.guess_correct;
        r["guess"] = record.guess;
        Json per_theta = Json::array();
        for (const auto& tr : record.per_theta) {
            Json t;
            t["theta_units"] = tr.theta_units;
            t["min_gap"] = tr.min_gap;
            t["min_gap_s"] = tr.min_gap_s;
            t["divergent"] = tr.divergent;
            t["t_ad_total"] = detail::json_number(tr.t_ad_total);
            t["p_final"] = tr.p_final;
            t["improvement"] = detail::json_number_array(tr.improvement);
            per_theta.push_back(std::move(t));
        }
        r["per_theta"] = std::move(per_theta);
        r["r_delta"] = detail::json_number_array(record.r_delta);
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);

    Json aggregates;
    aggregates["correct_count"] = result.correct_count;
    Json gap_stats = Json::array();
    for (const auto& agg : result.r_delta) {
        Json a;
        a["theta_units"] = agg.theta_units;
        a["count"] = agg.count;
        a["mean"] = detail::json_number(agg.mean);
        a["stderr"] = detail::json_number(agg.stderr_mean);
        a["median"] = detail::json_number(agg.median);
        a["outlier_seeds"] = agg.outlier_seeds;
        a["trimmed_count"] = agg.trimmed_count;
        a["trimmed_mean"] = detail::json_number(agg.trimmed_mean);
        a["trimmed_stderr"] = detail::json_number(agg.trimmed_stderr);
        a["trimmed_median"] = detail::json_number(agg.trimmed_median);
        gap_stats.push_back(std::move(a));
    }
    aggregates["r_delta"] = std::move(gap_stats);
    Json p_stats = Json::array();
    for (const auto& agg : result.p_aggregates) {
        Json a;
        a["theta_units"] = agg.theta_units;
        a["t_total"] = agg.t_total;
        a["count"] = agg.count;
        a["mean_p"] = detail::json_number(agg.mean_p);
        a["stderr_p"] = detail::json_number(agg.stderr_p);
        a["ratio_vs_direct"] = detail::json_number(agg.ratio_vs_direct);
        p_stats.push_back(std::move(a));
    }
    aggregates["probability"] = std::move(p_stats);
    j["aggregates"] = std::move(aggregates);
    return j;
}

inline IsingEnsembleResult ising_ensemble_from_json(const Json& j) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    IsingEnsembleResult result;
    result.config = config_from_json(detail::require_field(j, "config"));
    result.hash = detail::require_field(j, "config_hash").get<std::string>();
    for (const auto& r : detail::require_field(j, "records")) {
        IsingInstanceRecord record;
        record.child_seed = detail::require_field(r, "child_seed").get<std::uint64_t>();
        record.guess_correct = detail::require_field(r, "guess_correct").get<bool>();
        record.guess = detail::require_field(r, "guess").get<std::vector<int>>();
        for (const auto& t : detail::require_field(r, "per_theta")) {
            ThetaGapRecord tr;
            tr.theta_units = detail::require_field(t, "theta_units").get<double>();
            tr.min_gap = detail::require_field(t, "min_gap").get<double>();
            tr.min_gap_s = detail::require_field(t, "min_gap_s").get<double>();
            tr.divergent = detail::require_field(t, "divergent").get<bool>();
            tr.t_ad_total = detail::number_or(detail::require_field(t, "t_ad_total"),
                                              std::numeric_limits<double>::infinity());
            tr.p_final = detail::require_field(t, "p_final").get<std::vector<double>>();
            tr.improvement = detail::number_array_or_nan(detail::require_field(t, "improvement"));
            record.per_theta.push_back(std::move(tr));
        }
        record.r_delta = detail::number_array_or_nan(detail::require_field(r, "r_delta"));
        result.records.push_back(std::move(record));
    }
    const Json& aggregates = detail::require_field(j, "aggregates");
    result.correct_count = detail::require_field(aggregates, "correct_count").get<int>();
    for (const auto& a : detail::require_field(aggregates, "r_delta")) {
        RDeltaAggregate agg;
        agg.theta_units = detail::require_field(a, "theta_units").get<double>();
        agg.count = detail::require_field(a, "count").get<int>();
        agg.mean = detail::number_or(detail::require_field(a, "mean"), nan);
        agg.stderr_mean = detail::number_or(detail::require_field(a, "stderr"), nan);
        agg.median = detail::number_or(detail::require_field(a, "median"), nan);
        agg.outlier_seeds =
            detail::require_field(a, "outlier_seeds").get<std::vector<std::uint64_t>>();
        agg.trimmed_count = detail::require_field(a, "trimmed_count").get<int>();
        agg.trimmed_mean = detail::number_or(detail::require_field(a, "trimmed_mean"), nan);
        agg.trimmed_stderr = detail::number_or(detail::require_field(a, "trimmed_stderr"), nan);
        agg.trimmed_median = detail::number_or(detail::require_field(a, "trimmed_median"), nan);
        result.r_delta.push_back(std::move(agg));
    }
    for (const auto& a : detail::require_field(aggregates, "probability")) {
        ProbabilityAggregate agg;
        agg.theta_units = detail::require_field(a, "theta_units").get<double>();
        agg.t_total = detail::require_field(a, "t_total").get<double>();
        agg.count = detail::require_field(a, "count").get<int>();
        agg.mean_p = detail::number_or(detail::require_field(a, "mean_p"), nan);
        agg.stderr_p = detail::number_or(detail::require_field(a, "stderr_p"), nan);
        agg.ratio_vs_direct = detail::number_or(detail::require_field(a, "ratio_vs_direct"), nan);
        result.p_aggregates.push_back(std::move(agg));
    }
    return result;
}

// ---------------------------------------------------------------------------
// SAT sweep JSON

inline Json to_json(const SatSweepResult& result) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = to_string(result.config.kind);
    j["config"] = to_json(result.config);
    j["config_hash"] = result.hash;
    j["seed"] = result.config.seed;
    Json records = Json::array();
    for (const auto& record : result.records) {
        Json r;
        r["child_seed"] = record.child_seed;
        r["solution"] = record.solution;
        r["support"] = record.support;
        Json ps = Json::array(), rs = Json::array();
        for (const auto& row : record.p_final) ps.push_back(row);
        for (const auto& row : record.improvement) rs.push_back(detail::json_number_array(row));
        r["p_final"] = std::move(ps);
        r["improvement"] = std::move(rs);
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    Json curves = Json::array();
    for (const auto& curve : result.curves) {
        Json c;
        c["n_errors"] = curve.n_errors;
        c["mean_p"] = detail::json_number_array(curve.mean_p);
        c["stderr_p"] = detail::json_number_array(curve.stderr_p);
        c["mean_r"] = detail::json_number_array(curve.mean_r);
        c["stderr_r"] = detail::json_number_array(curve.stderr_r);
        curves.push_back(std::move(c));
    }
    j["curves"] = std::move(curves);
    return j;
}

inline SatSweepResult sat_sweep_from_json(const Json& j) {
    SatSweepResult result;
    result.config = config_from_json(detail::require_field(j, "config"));
    result.hash = detail::require_field(j, "config_hash").get<std::string>();
    for (const auto& r : detail::require_field(j, "records")) {
        SatInstanceRecord record;
        record.child_seed = detail::require_field(r, "child_seed").get<std::uint64_t>();
        record.solution = detail::require_field(r, "solution").get<std::uint64_t>();
        record.support = detail::require_field(r, "support").get<std::vector<int>>();
        for (const auto& row : detail::require_field(r, "p_final"))
            record.p_final.push_back(row.get<std::vector<double>>());
        for (const auto& row : detail::require_field(r, "improvement"))
            record.improvement.push_back(detail::number_array_or_nan(row));
        result.records.push_back(std::move(record));
    }
    for (const auto& c : detail::require_field(j, "curves")) {
        SweepCurve curve;
        curve.n_errors = detail::require_field(c, "n_errors").get<int>();
        curve.mean_p = detail::number_array_or_nan(detail::require_field(c, "mean_p"));
        curve.stderr_p = detail::number_array_or_nan(detail::require_field(c, "stderr_p"));
        curve.mean_r = detail::number_array_or_nan(detail::require_field(c, "mean_r"));
        curve.stderr_r = detail::number_array_or_nan(detail::require_field(c, "stderr_r"));
        result.curves.push_back(std::move(curve));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Perturbative sweep JSON

inline Json to_json(const PertSweepResult& result) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = to_string(result.config.kind);
    j["config"] = to_json(result.config);
    j["config_hash"] = result.hash;
    j["seed"] = result.config.seed;
    j["stats"] = Json{{"mean_J", result.stats.mean_J},
                      {"sigma_J", result.stats.sigma_J},
                      {"mean_h", result.stats.mean_h},
                      {"sigma_h", result.stats.sigma_h}};
    const auto points_json = [](const std::vector<PertSweepPoint>& points) {
        Json array = Json::array();
        for (const auto& point : points)
            array.push_back(Json{{"lg", point.lg},
                                 {"n_errors", point.n_errors},
                                 {"theta_units", point.theta_units},
                                 {"mean_p", point.mean_p},
                                 {"stderr_p", point.stderr_p}});
        return array;
    };
    j["guess_size_points"] = points_json(result.guess_size_points);
    j["correctness_points"] = points_json(result.correctness_points);
    return j;
}

inline PertSweepResult pert_sweep_from_json(const Json& j) {
    PertSweepResult result;
    result.config = config_from_json(detail::require_field(j, "config"));
    result.hash = detail::require_field(j, "config_hash").get<std::string>();
    const Json& stats = detail::require_field(j, "stats");
    result.stats.mean_J = detail::require_field(stats, "mean_J").get<double>();
    result.stats.sigma_J = detail::require_field(stats, "sigma_J").get<double>();
    result.stats.mean_h = detail::require_field(stats, "mean_h").get<double>();
    result.stats.sigma_h = detail::require_field(stats, "sigma_h").get<double>();
    const auto parse_points = [](const Json& array) {
        std::vector<PertSweepPoint> points;
        for (const auto& p : array) {
            PertSweepPoint point;
            point.lg = detail::require_field(p, "lg").get<int>();
            point.n_errors = detail::require_field(p, "n_errors").get<int>();
            point.theta_units = detail::require_field(p, "theta_units").get<double>();
            point.mean_p = detail::require_field(p, "mean_p").get<double>();
            point.stderr_p = detail::require_field(p, "stderr_p").get<double>();
            points.push_back(point);
        }
        return points;
    };
    result.guess_size_points = parse_points(detail::require_field(j, "guess_size_points"));
    result.correctness_points = parse_points(detail::require_field(j, "correctness_points"));
    return result;
}

// ---------------------------------------------------------------------------
// Instance report JSON (summary; the curves live in the CSVs)

inline Json report_summary_json(const InstanceReport& report) {
    Json j;
    j["format_version"] = 1;
    j["kind"] = to_string(report.config.kind);
    j["config"] = to_json(report.config);
    j["config_hash"] = report.hash;
    j["seed"] = report.config.seed;
    j["instance"] = to_json(report.instance);
    j["guess"] = report.guess;
    j["guess_correct"] = report.guess_correct;
    Json blocks = Json::array();
    for (const auto& block : report.blocks) {
        Json b;
        b["theta_units"] = block.theta_units;
        b["min_gap"] = block.min_gap;
        b["min_gap_s"] = block.min_gap_s;
        b["refined_min_gap"] = detail::json_number(block.refined_min_gap);
        b["refined_min_gap_s"] = detail::json_number(block.refined_min_gap_s);
        b["divergent"] = block.divergent;
        b["t_ad_total"] = detail::json_number(block.t_ad_total);
        Json evolutions = Json::array();
        for (const auto& evolution : block.evolutions)
            evolutions.push_back(Json{{"t_total", evolution.total_time},
                                      {"p_final", evolution.p_final}});
        b["evolutions"] = std::move(evolutions);
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

// ---------------------------------------------------------------------------
// File emission

inline std::vector<std::filesystem::path> emit_outputs(const IsingEnsembleResult& result) {
    const auto& cfg = result.config;
    const std::filesystem::path dir = cfg.out_dir;
    const std::string provenance = detail::provenance_line(result.hash, cfg.seed);
    std::vector<std::filesystem::path> written;

    if (cfg.write_json) {
        const auto path = dir / "ising_ensemble.json";
        write_text_file(path, to_json(result).dump(2) + "\n");
        written.push_back(path);
    }
    if (cfg.write_csv) {
        Table records;
        records.header = {"instance",  "child_seed", "guess_correct", "theta_units", "min_gap",
                          "min_gap_s", "divergent",  "t_ad_total",    "r_delta"};
        for (const double t : cfg.t_totals) {
            records.header.push_back("p_final_t" + format_label(t));
            records.header.push_back("improvement_t" + format_label(t));
        }
        for (std::size_t i = 0; i < result.records.size(); ++i) {
            const auto& record = result.records[i];
            for (std::size_t a = 0; a < record.per_theta.size(); ++a) {
                const auto& tr = record.per_theta[a];
                std::vector<std::string> row = {std::to_string(i),
                                                std::to_string(record.child_seed),
                                                record.guess_correct ? "1" : "0",
                                                format_double(tr.theta_units),
                                                format_double(tr.min_gap),
                                                format_double(tr.min_gap_s),
                                                tr.divergent ? "1" : "0",
                                                format_double(tr.t_ad_total),
                                                format_double(record.r_delta[a])};
                for (std::size_t t = 0; t < cfg.t_totals.size(); ++t) {
                    row.push_back(format_double(tr.p_final[t]));
                    row.push_back(format_double(tr.improvement[t]));
                }
                records.rows.push_back(std::move(row));
            }
        }
        const auto records_path = dir / "ising_ensemble_records.csv";
        write_csv(records_path, records, provenance);
        written.push_back(records_path);

        Table gap_stats;
        gap_stats.header = {"theta_units",   "count",        "mean_r_delta",
                            "stderr_r_delta", "median_r_delta", "n_outliers",
                            "trimmed_count", "trimmed_mean", "trimmed_stderr",
                            "trimmed_median"};
        for (const auto& agg : result.r_delta)
            gap_stats.rows.push_back({format_double(agg.theta_units), std::to_string(agg.count),
                                      format_double(agg.mean), format_double(agg.stderr_mean),
                                      format_double(agg.median),
                                      std::to_string(agg.outlier_seeds.size()),
                                      std::to_string(agg.trimmed_count),
                                      format_double(agg.trimmed_mean),
                                      format_double(agg.trimmed_stderr),
                                      format_double(agg.trimmed_median)});
        const auto gap_path = dir / "ising_ensemble_gap_stats.csv";
        write_csv(gap_path, gap_stats, provenance);
        written.push_back(gap_path);

        Table p_stats;
        p_stats.header = {"theta_units", "t_total",  "count",
                          "mean_p",      "stderr_p", "ratio_vs_direct"};
        for (const auto& agg : result.p_aggregates)
            p_stats.rows.push_back({format_double(agg.theta_units), format_double(agg.t_total),
                                    std::to_string(agg.count), format_double(agg.mean_p),
                                    format_double(agg.stderr_p),
                                    format_double(agg.ratio_vs_direct)});
        const auto p_path = dir / "ising_ensemble_probability_stats.csv";
        write_csv(p_path, p_stats, provenance);
        written.push_back(p_path);
    }
    if (cfg.write_svg && !cfg.t_totals.empty()) {
        LinePlot plot;
        plot.title = "Mean success probability, correctly guessed subset";
        plot.x_label = "anneal duration T";
        plot.y_label = "mean final ground-state probability";
        for (const double units : cfg.theta_units) {
            PlotSeries series;
            series.name = "theta = " + format_label(units) + " Omega";
            for (const auto& agg : result.p_aggregates)
                if (agg.theta_units == units) {
                    series.x.push_back(agg.t_total);
                    series.y.push_back(agg.mean_p);
                }
            plot.series.push_back(std::move(series));
        }
        const auto path = dir / "ising_ensemble_probability.svg";
        write_svg_plot(path, plot, provenance);
        written.push_back(path);
    }
    return written;
}

inline std::vector<std::filesystem::path> emit_outputs(const InstanceReport& report) {
    const auto& cfg = report.config;
    const std::filesystem::path dir = cfg.out_dir;
    const std::string provenance = detail::provenance_line(report.hash, cfg.seed);
    std::vector<std::filesystem::path> written;

    if (cfg.write_json) {
        const auto path = dir / "report.json";
        write_text_file(path, report_summary_json(report).dump(2) + "\n");
        written.push_back(path);
    }
    if (cfg.write_csv) {
        for (const auto& block : report.blocks) {
            const std::string suffix = "theta_" + format_label(block.theta_units);

            Table spectrum;
            spectrum.header = {"s"};
            for (Eigen::Index k = 0; k < block.trace.levels.cols(); ++k)
                spectrum.header.push_back("lambda_" + std::to_string(k));
            spectrum.header.push_back("gap");
            spectrum.header.push_back("t_ad");
            for (Eigen::Index row = 0; row < block.trace.s_grid.size(); ++row) {
                std::vector<std::string> cells = {format_double(block.trace.s_grid(row))};
                for (Eigen::Index k = 0; k < block.trace.levels.cols(); ++k)
                    cells.push_back(format_double(block.trace.levels(row, k)));
                cells.push_back(format_double(block.trace.gap(row)));
                cells.push_back(format_double(block.profile.t_ad(row)));
                spectrum.rows.push_back(std::move(cells));
            }
            const auto spectrum_path = dir / ("spectrum_" + suffix + ".csv");
            write_csv(spectrum_path, spectrum, provenance);
            written.push_back(spectrum_path);

            if (!block.divergent) {
                Table schedule;
                schedule.header = {"s", "t_of_s", "t_over_total"};
                for (Eigen::Index row = 0; row < block.profile.s_grid.size(); ++row)
                    schedule.rows.push_back(
                        {format_double(block.profile.s_grid(row)),
                         format_double(block.profile.t_of_s(row)),
                         format_double(block.profile.t_of_s(row) / block.profile.t_total)});
                const auto schedule_path = dir / ("schedule_" + suffix + ".csv");
                write_csv(schedule_path, schedule, provenance);
                written.push_back(schedule_path);
            }

            for (std::size_t t = 0; t < block.evolutions.size(); ++t) {
                const auto& evolution = block.evolutions[t];
                Table trace;
                trace.header = {"s", "final_gs_probability", "instantaneous_overlap"};
                for (Eigen::Index row = 0; row < evolution.s_grid.size(); ++row)
                    trace.rows.push_back(
                        {format_double(evolution.s_grid(row)),
                         format_double(evolution.final_gs_probability_trace(row)),
                         format_double(evolution.instantaneous_gs_overlap(row))});
                const auto path =
                    dir / ("evolution_" + suffix + "_t" + format_label(cfg.t_totals[t]) + ".csv");
                write_csv(path, trace, provenance);
                written.push_back(path);
            }
        }
    }
    if (cfg.write_svg) {
        LinePlot gap_plot;
        gap_plot.title = "Spectral gap along the anneal";
        gap_plot.x_label = "s";
        gap_plot.y_label = "gap";
        for (const auto& block : report.blocks) {
            PlotSeries series;
            series.name = "theta = " + format_label(block.theta_units) + " Omega";
            for (Eigen::Index row = 0; row < block.trace.s_grid.size(); ++row) {
                series.x.push_back(block.trace.s_grid(row));
                series.y.push_back(block.trace.gap(row));
            }
            gap_plot.series.push_back(std::move(series));
        }
        const auto gap_path = dir / "spectrum.svg";
        write_svg_plot(gap_path, gap_plot, provenance);
        written.push_back(gap_path);

        LinePlot schedule_plot;
        schedule_plot.title = "Optimal schedules, normalized";
        schedule_plot.x_label = "t / T";
        schedule_plot.y_label = "s";
        for (const auto& block : report.blocks) {
            if (block.divergent) continue;
            PlotSeries series;
            series.name = "theta = " + format_label(block.theta_units) + " Omega";
            for (Eigen::Index row = 0; row < block.profile.s_grid.size(); ++row) {
                series.x.push_back(block.profile.t_of_s(row) / block.profile.t_total);
                series.y.push_back(block.profile.s_grid(row));
            }
            schedule_plot.series.push_back(std::move(series));
        }
        if (!schedule_plot.series.empty()) {
            const auto schedule_path = dir / "schedule.svg";
            write_svg_plot(schedule_path, schedule_plot, provenance);
            written.push_back(schedule_path);
        }

        if (!cfg.t_totals.empty()) {
            LinePlot evolution_plot;
            evolution_plot.title = "Final ground-state probability, T = " +
                                   format_label(cfg.t_totals.front());
            evolution_plot.x_label = "s";
            evolution_plot.y_label = "probability";
            for (const auto& block : report.blocks) {
                const auto& evolution = block.evolutions.front();
                PlotSeries series;
                series.name = "theta = " + format_label(block.theta_units) + " Omega";
                for (Eigen::Index row = 0; row < evolution.s_grid.size(); ++row) {
                    series.x.push_back(evolution.s_grid(row));
                    series.y.push_back(evolution.final_gs_probability_trace(row));
                }
                evolution_plot.series.push_back(std::move(series));
            }
            const auto evolution_path = dir / "evolution.svg";
            write_svg_plot(evolution_path, evolution_plot, provenance);
            written.push_back(evolution_path);
        }
    }
    return written;
}

inline std::vector<std::filesystem::path> emit_outputs(const SatSweepResult& result) {
    const auto& cfg = result.config;
    const std::filesystem::path dir = cfg.out_dir;
    const std::string provenance = detail::provenance_line(result.hash, cfg.seed);
    std::vector<std::filesystem::path> written;

    if (cfg.write_json) {
        const auto path = dir / "sat_sweep.json";
        write_text_file(path, to_json(result).dump(2) + "\n");
        written.push_back(path);
    }
    if (cfg.write_csv) {
        Table curves;
        curves.header = {"n_errors", "theta_units", "mean_p", "stderr_p", "mean_r", "stderr_r"};
        for (const auto& curve : result.curves)
            for (std::size_t a = 0; a < cfg.theta_units.size(); ++a)
                curves.rows.push_back({std::to_string(curve.n_errors),
                                       format_double(cfg.theta_units[a]),
                                       format_double(curve.mean_p[a]),
                                       format_double(curve.stderr_p[a]),
                                       format_double(curve.mean_r[a]),
                                       format_double(curve.stderr_r[a])});
        const auto curves_path = dir / "sat_sweep_curves.csv";
        write_csv(curves_path, curves, provenance);
        written.push_back(curves_path);

        Table records;
        records.header = {"instance", "child_seed", "solution",  "support",
                          "n_errors", "theta_units", "p_final",  "improvement"};
        for (std::size_t i = 0; i < result.records.size(); ++i) {
            const auto& record = result.records[i];
            std::string support;
            for (std::size_t k = 0; k < record.support.size(); ++k) {
                if (k) support += ';';
                support += std::to_string(record.support[k]);
            }
            for (std::size_t e = 0; e < record.p_final.size(); ++e)
                for (std::size_t a = 0; a < cfg.theta_units.size(); ++a)
                    records.rows.push_back({std::to_string(i), std::to_string(record.child_seed),
                                            std::to_string(record.solution), support,
                                            std::to_string(e),
                                            format_double(cfg.theta_units[a]),
                                            format_double(record.p_final[e][a]),
                                            format_double(record.improvement[e][a])});
        }
        const auto records_path = dir / "sat_sweep_records.csv";
        write_csv(records_path, records, provenance);
        written.push_back(records_path);
    }
    if (cfg.write_svg) {
        LinePlot plot;
        plot.title = "Mean improvement vs steering angle";
        plot.x_label = "theta / Omega";
        plot.y_label = "mean improvement R";
        for (const auto& curve : result.curves) {
            PlotSeries series;
            series.name = std::to_string(curve.n_errors) + " errors";
            series.x = cfg.theta_units;
            series.y = curve.mean_r;
            plot.series.push_back(std::move(series));
        }
        const auto path = dir / "sat_sweep_improvement.svg";
        write_svg_plot(path, plot, provenance);
        written.push_back(path);
    }
    return written;
}

inline std::vector<std::filesystem::path> emit_outputs(const PertSweepResult& result) {
    const auto& cfg = result.config;
    const std::filesystem::path dir = cfg.out_dir;
    const std::string provenance = detail::provenance_line(result.hash, cfg.seed);
    std::vector<std::filesystem::path> written;

    if (cfg.write_json) {
        const auto path = dir / "pert_sweep.json";
        write_text_file(path, to_json(result).dump(2) + "\n");
        written.push_back(path);
    }
    if (cfg.write_csv) {
        Table guess_size;
        guess_size.header = {"lg", "n_errors", "theta_units", "mean_p", "stderr_p"};
        for (const auto& point : result.guess_size_points)
            guess_size.rows.push_back({std::to_string(point.lg), std::to_string(point.n_errors),
                                       format_double(point.theta_units),
                                       format_double(point.mean_p),
                                       format_double(point.stderr_p)});
        const auto guess_size_path = dir / "pert_sweep_guess_size.csv";
        write_csv(guess_size_path, guess_size, provenance);
        written.push_back(guess_size_path);

        Table correctness;
        correctness.header = {"n_correct", "n_errors", "theta_units", "mean_p", "stderr_p"};
        for (const auto& point : result.correctness_points)
            correctness.rows.push_back({std::to_string(point.lg - point.n_errors),
                                        std::to_string(point.n_errors),
                                        format_double(point.theta_units),
                                        format_double(point.mean_p),
                                        format_double(point.stderr_p)});
        const auto correctness_path = dir / "pert_sweep_correctness.csv";
        write_csv(correctness_path, correctness, provenance);
        written.push_back(correctness_path);
    }
    if (cfg.write_svg) {
        LinePlot guess_plot;
        guess_plot.title = "Target overlap vs guess size, fully correct";
        guess_plot.x_label = "guess size";
        guess_plot.y_label = "mean overlap";
        guess_plot.log_y = true;
        for (const double units : cfg.theta_units) {
            PlotSeries series;
            series.name = "theta = " + format_label(units) + " Omega";
            for (const auto& point : result.guess_size_points)
                if (point.theta_units == units && point.n_errors == 0) {
                    series.x.push_back(point.lg);
                    series.y.push_back(point.mean_p);
                }
            guess_plot.series.push_back(std::move(series));
        }
        const auto guess_path = dir / "pert_sweep_guess_size.svg";
        write_svg_plot(guess_path, guess_plot, provenance);
        written.push_back(guess_path);

        LinePlot correctness_plot;
        correctness_plot.title = "Target overlap vs correct assignments, guess size " +
                                 std::to_string(cfg.lg);
        correctness_plot.x_label = "correct assignments";
        correctness_plot.y_label = "mean overlap";
        correctness_plot.log_y = true;
        for (const double units : cfg.theta_units) {
            PlotSeries series;
            series.name = "theta = " + format_label(units) + " Omega";
            for (const auto& point : result.correctness_points)
                if (point.theta_units == units) {
                    series.x.push_back(point.lg - point.n_errors);
                    series.y.push_back(point.mean_p);
                }
            correctness_plot.series.push_back(std::move(series));
        }
        const auto correctness_path = dir / "pert_sweep_correctness.svg";
        write_svg_plot(correctness_path, correctness_plot, provenance);
        written.push_back(correctness_path);
    }
    return written;
}

}  // namespace sqa
