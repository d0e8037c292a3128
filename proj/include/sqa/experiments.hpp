#pragma once

// Reproducible experiment drivers on top of the core library.
//
// Every experiment is described by an ExperimentConfig.  All randomness flows
// from the config's master seed through derive_seed, so a given config always
// produces the same numbers, and the emitted files embed the seed plus a hash
// of the full config so any output can be traced back to the run that made
// it.  Aggregate statistics are pure functions of the per-instance records
// and can be recomputed from a deserialized result.
//
// Four experiment kinds:
//   ising-ensemble   gap widening and success-probability lift over a random
//                    Ising ensemble, heuristic guesses, correct subset only
//   instance-report  one instance in full detail: low spectrum, schedules,
//                    and evolution traces per steering angle
//   sat-sweep        improvement vs steering angle on uniquely satisfiable
//                    3-SAT instances with partially wrong guesses
//   pert-sweep       analytic early-anneal overlap across guess size and
//                    guess correctness at large system size

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqa/anneal.hpp"
#include "sqa/dynamics.hpp"
#include "sqa/errors.hpp"
#include "sqa/models.hpp"
#include "sqa/output.hpp"
#include "sqa/perturbation.hpp"
#include "sqa/rng.hpp"
#include "sqa/steering.hpp"

namespace sqa {

// ---------------------------------------------------------------------------
// Configuration

enum class ExperimentKind { IsingEnsemble, InstanceReport, SatSweep, PertSweep };

inline std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::IsingEnsemble: return "ising-ensemble";
        case ExperimentKind::InstanceReport: return "instance-report";
        case ExperimentKind::SatSweep: return "sat-sweep";
        case ExperimentKind::PertSweep: return "pert-sweep";
    }
    throw ConfigError("to_string: unknown experiment kind");
}

inline ExperimentKind kind_from_string(const std::string& name) {
    if (name == "ising-ensemble") return ExperimentKind::IsingEnsemble;
    if (name == "instance-report") return ExperimentKind::InstanceReport;
    if (name == "sat-sweep") return ExperimentKind::SatSweep;
    if (name == "pert-sweep") return ExperimentKind::PertSweep;
    throw ConfigError("unknown experiment kind: '" + name + "'");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::IsingEnsemble;

    // Instance family.
    int n = 8;
    double h_mean = 0.01;  // Ising field bias
    double w = 0.05;       // Ising field jitter half-width
    double j_scale = 1.0;  // Ising coupling scale

    // Guess shape.
    int lg = 3;          // guess support size
    int max_errors = 3;  // sat-sweep: guesses carry 0..max_errors wrong entries

    // Steering angles in Omega units and anneal durations.
    std::vector<double> theta_units{0.0, 1.0};
    std::vector<double> t_totals;
    double ds = 0.01;
    // Sub-grid gap refinement (instance reports only). Off by default so that
    // every statistic stays grid-resolved and reproducible; enable to detect
    // near-crossings whose splitting is narrower than the grid.
    bool refine_min_gap = false;

    int ensemble_size = 100;
    std::uint64_t seed = 1;

    // pert-sweep only.
    double s_star = 0.3;  // early-anneal operating point
    int draws = 20;       // field-sum draws averaged per grid point
    int lg_max = 10;      // guess-size grid runs over 0..lg_max

    // Output.
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;
    bool write_svg = true;
};

inline Json to_json(const ExperimentConfig& cfg) {
    Json j;
    j["kind"] = to_string(cfg.kind);
    j["n"] = cfg.n;
    j["h_mean"] = cfg.h_mean;
    j["w"] = cfg.w;
    j["j_scale"] = cfg.j_scale;
    j["lg"] = cfg.lg;
    j["max_errors"] = cfg.max_errors;
    j["theta_units"] = cfg.theta_units;
    j["t_totals"] = cfg.t_totals;
    j["ds"] = cfg.ds;
    j["refine_min_gap"] = cfg.refine_min_gap;
    j["ensemble_size"] = cfg.ensemble_size;
    j["seed"] = cfg.seed;
    j["s_star"] = cfg.s_star;
    j["draws"] = cfg.draws;
    j["lg_max"] = cfg.lg_max;
    j["out_dir"] = cfg.out_dir;
    j["write_csv"] = cfg.write_csv;
    j["write_json"] = cfg.write_json;
    j["write_svg"] = cfg.write_svg;
    return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    cfg.kind = kind_from_string(detail::require_field(j, "kind").get<std::string>());
    cfg.n = detail::require_field(j, "n").get<int>();
    cfg.h_mean = detail::require_field(j, "h_mean").get<double>();
    cfg.w = detail::require_field(j, "w").get<double>();
    cfg.j_scale = detail::require_field(j, "j_scale").get<double>();
    cfg.lg = detail::require_field(j, "lg").get<int>();
    cfg.max_errors = detail::require_field(j, "max_errors").get<int>();
    cfg.theta_units = detail::require_field(j, "theta_units").get<std::vector<double>>();
    cfg.t_totals = detail::require_field(j, "t_totals").get<std::vector<double>>();
    cfg.ds = detail::require_field(j, "ds").get<double>();
    cfg.refine_min_gap = detail::require_field(j, "refine_min_gap").get<bool>();
    cfg.ensemble_size = detail::require_field(j, "ensemble_size").get<int>();
    cfg.seed = detail::require_field(j, "seed").get<std::uint64_t>();
    cfg.s_star = detail::require_field(j, "s_star").get<double>();
    cfg.draws = detail::require_field(j, "draws").get<int>();
    cfg.lg_max = detail::require_field(j, "lg_max").get<int>();
    cfg.out_dir = detail::require_field(j, "out_dir").get<std::string>();
    cfg.write_csv = detail::require_field(j, "write_csv").get<bool>();
    cfg.write_json = detail::require_field(j, "write_json").get<bool>();
    cfg.write_svg = detail::require_field(j, "write_svg").get<bool>();
    return cfg;
}

// FNV-1a over the canonical JSON form: any change to any field changes the
// hash, and equal configs always hash alike.
inline std::string config_hash(const ExperimentConfig& cfg) {
    const std::string canonical = to_json(cfg).dump();
    std::uint64_t hash = 1469598103934665603ULL;
    for (const unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n < 1) throw ConfigError("config: need at least one site");
    if (cfg.lg < 0 || cfg.lg > cfg.n) throw ConfigError("config: guess size must lie in [0, n]");
    if (cfg.theta_units.empty()) throw ConfigError("config: need at least one steering angle");
    if (cfg.ensemble_size < 1) throw ConfigError("config: ensemble size must be positive");
    if (cfg.out_dir.empty()) throw ConfigError("config: output directory must be set");
    detail::grid_steps(cfg.ds);  // throws unless ds divides [0, 1] evenly
    for (const double t : cfg.t_totals)
        if (!(t > 0.0)) throw ConfigError("config: anneal durations must be positive");
    switch (cfg.kind) {
        case ExperimentKind::IsingEnsemble:
            break;
        case ExperimentKind::InstanceReport:
            if (cfg.t_totals.empty()) throw ConfigError("config: instance report needs anneal durations");
            break;
        case ExperimentKind::SatSweep:
            if (cfg.n < 3 || cfg.n > 24) throw ConfigError("config: sat sweep needs 3 <= n <= 24");
            if (cfg.max_errors < 0 || cfg.max_errors > cfg.lg)
                throw ConfigError("config: error count must lie in [0, guess size]");
            if (cfg.t_totals.empty()) throw ConfigError("config: sat sweep needs an anneal duration");
            if (std::find(cfg.theta_units.begin(), cfg.theta_units.end(), 0.0) == cfg.theta_units.end())
                throw ConfigError("config: sat sweep needs the unsteered angle 0 as baseline");
            break;
        case ExperimentKind::PertSweep:
            if (cfg.s_star < 0.0 || cfg.s_star >= 1.0)
                throw ConfigError("config: operating point must lie in [0, 1)");
            if (cfg.draws < 1) throw ConfigError("config: need at least one draw per point");
            if (cfg.lg_max < 0 || cfg.lg_max > cfg.n)
                throw ConfigError("config: guess-size grid must lie in [0, n]");
            break;
    }
}

// The default sweep grid for angle scans: 0 to 0.7 Omega in steps of 0.05.
inline std::vector<double> default_theta_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 14; ++i) grid.push_back(0.05 * i);
    return grid;
}

namespace detail {

// Serialization helpers: JSON has no inf/nan, so non-finite values are
// written as null and restored from context (a divergence flag, or nan).
inline Json json_number(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

inline double number_or(const Json& j, double fallback) {
    if (j.is_null()) return fallback;
    return j.get<double>();
}

inline double mean_of(const std::vector<double>& values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (const double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

// Standard error of the mean; zero for a single sample.
inline double stderr_of(const std::vector<double>& values) {
    const auto count = values.size();
    if (count == 0) return std::numeric_limits<double>::quiet_NaN();
    if (count == 1) return 0.0;
    const double mean = mean_of(values);
    double acc = 0.0;
    for (const double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(count - 1) / static_cast<double>(count));
}

inline double median_of(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ising ensemble

struct ThetaGapRecord {
    double theta_units = 0.0;
    double min_gap = 0.0;
    double min_gap_s = 0.0;
    bool divergent = false;
    double t_ad_total = 0.0;          // infinite when divergent
    std::vector<double> p_final;      // aligned with config.t_totals
    std::vector<double> improvement;  // P lift over the unsteered run, per duration
};

struct IsingInstanceRecord {
    std::uint64_t child_seed = 0;
    bool guess_correct = false;
    std::vector<int> guess;                  // psi entries, -1/0/+1
    std::vector<ThetaGapRecord> per_theta;   // aligned with config.theta_units
    std::vector<double> r_delta;             // gap lift per angle; nan where undefined
};

struct RDeltaAggregate {
    double theta_units = 0.0;
    int count = 0;  // correct instances with a defined ratio
    double mean = 0.0, stderr_mean = 0.0, median = 0.0;
    std::vector<std::uint64_t> outlier_seeds;  // ratio above 10x the median
    int trimmed_count = 0;
    double trimmed_mean = 0.0, trimmed_stderr = 0.0, trimmed_median = 0.0;
};

struct ProbabilityAggregate {
    double theta_units = 0.0;
    double t_total = 0.0;
    int count = 0;  // correct instances
    double mean_p = 0.0, stderr_p = 0.0;
    double ratio_vs_direct = 0.0;  // mean over mean at angle 0, same duration
};

struct IsingEnsembleResult {
    ExperimentConfig config;
    std::string hash;
    std::vector<IsingInstanceRecord> records;
    // Aggregates, recomputable from the records:
    int correct_count = 0;
    std::vector<RDeltaAggregate> r_delta;           // one per nonzero angle
    std::vector<ProbabilityAggregate> p_aggregates; // one per (angle, duration)
};

// Recompute every aggregate from the per-instance records.  Statistics use
// the correctly-guessed subset only.  An instance is an outlier at a given
// angle when its gap lift exceeds ten times the subset median; trimmed
// statistics drop the outliers.  A single-instance subset is never trimmed.
inline void compute_ising_aggregates(IsingEnsembleResult& result) {
    const auto& cfg = result.config;
    result.correct_count = 0;
    for (const auto& record : result.records)
        if (record.guess_correct) ++result.correct_count;

    result.r_delta.clear();
    for (std::size_t a = 0; a < cfg.theta_units.size(); ++a) {
        if (cfg.theta_units[a] == 0.0) continue;
        RDeltaAggregate agg;
        agg.theta_units = cfg.theta_units[a];
        std::vector<double> values;
        std::vector<std::uint64_t> seeds;
        for (const auto& record : result.records) {
            if (!record.guess_correct) continue;
            const double r = record.r_delta[a];
            if (!std::isfinite(r)) continue;
            values.push_back(r);
            seeds.push_back(record.child_seed);
        }
        agg.count = static_cast<int>(values.size());
        agg.mean = detail::mean_of(values);
        agg.stderr_mean = detail::stderr_of(values);
        agg.median = detail::median_of(values);
        std::vector<double> kept;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values.size() > 1 && values[i] > 10.0 * agg.median)
                agg.outlier_seeds.push_back(seeds[i]);
            else
                kept.push_back(values[i]);
        }
        agg.trimmed_count = static_cast<int>(kept.size());
        agg.trimmed_mean = detail::mean_of(kept);
        agg.trimmed_stderr = detail::stderr_of(kept);
        agg.trimmed_median = detail::median_of(kept);
        result.r_delta.push_back(std::move(agg));
    }

    result.p_aggregates.clear();
    // Mean success probability per (angle, duration) over the correct subset,
    // and the lift of that mean over the unsteered mean at the same duration.
    std::vector<double> direct_mean(cfg.t_totals.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t a = 0; a < cfg.theta_units.size(); ++a) {
        if (cfg.theta_units[a] != 0.0) continue;
        for (std::size_t t = 0; t < cfg.t_totals.size(); ++t) {
            std::vector<double> values;
            for (const auto& record : result.records)
                if (record.guess_correct) values.push_back(record.per_theta[a].p_final[t]);
            direct_mean[t] = detail::mean_of(values);
        }
        break;
    }
    for (std::size_t a = 0; a < cfg.theta_units.size(); ++a) {
        for (std::size_t t = 0; t < cfg.t_totals.size(); ++t) {
            ProbabilityAggregate agg;
            agg.theta_units = cfg.theta_units[a];
            agg.t_total = cfg.t_totals[t];
            std::vector<double> values;
            for (const auto& record : result.records)
                if (record.guess_correct) values.push_back(record.per_theta[a].p_final[t]);
            agg.count = static_cast<int>(values.size());
            agg.mean_p = detail::mean_of(values);
            agg.stderr_p = detail::stderr_of(values);
            agg.ratio_vs_direct = direct_mean[t] > 0.0 ? agg.mean_p / direct_mean[t]
                                                       : std::numeric_limits<double>::quiet_NaN();
            result.p_aggregates.push_back(std::move(agg));
        }
    }
}

inline IsingEnsembleResult run_ising_ensemble(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ExperimentKind::IsingEnsemble)
        throw ConfigError("run_ising_ensemble: config kind mismatch");
    const IsingParams params{.n = cfg.n, .h_mean = cfg.h_mean, .w = cfg.w, .j_scale = cfg.j_scale};

    IsingEnsembleResult result;
    result.config = cfg;
    result.hash = config_hash(cfg);

    // Index of the unsteered angle, if present: baseline for both lifts.
    std::optional<std::size_t> direct_index;
    for (std::size_t a = 0; a < cfg.theta_units.size(); ++a)
        if (cfg.theta_units[a] == 0.0) {
            direct_index = a;
            break;
        }

    for (int i = 0; i < cfg.ensemble_size; ++i) {
        IsingInstanceRecord record;
        record.child_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        const IsingInstance inst = gen_ising(params, record.child_seed);
        const DiagonalHamiltonian ham = ising_hamiltonian(inst);
        const GuessVector guess = highest_field_guess(inst, cfg.lg);
        record.guess_correct = guess_matches_ground_state(guess, ham);
        record.guess.assign(guess.values().data(), guess.values().data() + guess.size());

        std::vector<SpectrumTrace> traces;
        for (const double units : cfg.theta_units) {
            const RealVector theta =
                theta_vector(guess, SteeringAngle::from_omega_units(units, cfg.n));
            const AnnealPath path(theta, ham);
            SpectrumTrace trace = spectrum_trace(path, 2, cfg.ds);
            const MinGap gap = min_gap(trace);
            ThetaGapRecord tr;
            tr.theta_units = units;
            tr.min_gap = gap.value;
            tr.min_gap_s = gap.s;
            const ScheduleProfile profile = adiabatic_time_profile(path, trace);
            tr.divergent = profile.divergent;
            tr.t_ad_total = profile.divergent ? std::numeric_limits<double>::infinity()
                                              : total_adiabatic_time(profile);
            for (const double t_total : cfg.t_totals)
                tr.p_final.push_back(evolve(path, t_total, cfg.ds).p_final);
            record.per_theta.push_back(std::move(tr));
            traces.push_back(std::move(trace));
        }

        // Lifts against the unsteered run of the same instance (nan when no
        // unsteered angle is in the config, or the baseline itself diverges).
        record.r_delta.assign(cfg.theta_units.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t a = 0; a < cfg.theta_units.size(); ++a) {
            auto& tr = record.per_theta[a];
            tr.improvement.assign(cfg.t_totals.size(), std::numeric_limits<double>::quiet_NaN());
            if (!direct_index) continue;
            const auto& direct = record.per_theta[*direct_index];
            for (std::size_t t = 0; t < cfg.t_totals.size(); ++t)
                if (direct.p_final[t] > 0.0)
                    tr.improvement[t] =
                        probability_improvement_ratio(tr.p_final[t], direct.p_final[t]);
            if (a == *direct_index) continue;
            try {
                record.r_delta[a] = gap_improvement_ratio(traces[a], traces[*direct_index]);
            } catch (const DivergenceError&) {
                // ratio undefined; stays nan
            }
        }
        result.records.push_back(std::move(record));
    }
    compute_ising_aggregates(result);
    return result;
}

// Fraction of instances whose heuristic guess agrees with the true ground
// state, over a seeded ensemble.
struct HeuristicAccuracy {
    int correct = 0;
    int total = 0;
    double fraction = 0.0;
};

inline HeuristicAccuracy heuristic_accuracy(const IsingParams& params, int support_size,
                                            int count, std::uint64_t master_seed) {
    if (count < 1) throw ConfigError("heuristic_accuracy: need at least one instance");
    HeuristicAccuracy acc;
    acc.total = count;
    for (int i = 0; i < count; ++i) {
        const IsingInstance inst =
            gen_ising(params, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
        const GuessVector guess = highest_field_guess(inst, support_size);
        if (guess_matches_ground_state(guess, ising_hamiltonian(inst))) ++acc.correct;
    }
    acc.fraction = static_cast<double>(acc.correct) / static_cast<double>(count);
    return acc;
}

// ---------------------------------------------------------------------------
// Instance report

struct ReportThetaBlock {
    double theta_units = 0.0;
    SpectrumTrace trace;  // four lowest levels
    double min_gap = 0.0;
    double min_gap_s = 0.0;
    // Sub-grid refinement results; NaN unless config.refine_min_gap is set.
    double refined_min_gap = std::numeric_limits<double>::quiet_NaN();
    double refined_min_gap_s = std::numeric_limits<double>::quiet_NaN();
    bool divergent = false;
    double t_ad_total = 0.0;  // infinite when divergent
    // Adiabatic-time profile; t_of_s is filled (schedule inverted) only when
    // the block is not divergent.
    ScheduleProfile profile;
    std::vector<EvolutionResult> evolutions;  // aligned with config.t_totals
};

struct InstanceReport {
    ExperimentConfig config;
    std::string hash;
    IsingInstance instance;
    std::vector<int> guess;
    bool guess_correct = false;
    std::vector<ReportThetaBlock> blocks;  // aligned with config.theta_units
};

inline InstanceReport run_instance_report(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ExperimentKind::InstanceReport)
        throw ConfigError("run_instance_report: config kind mismatch");
    const IsingParams params{.n = cfg.n, .h_mean = cfg.h_mean, .w = cfg.w, .j_scale = cfg.j_scale};

    InstanceReport report;
    report.config = cfg;
    report.hash = config_hash(cfg);
    report.instance = gen_ising(params, cfg.seed);
    const DiagonalHamiltonian ham = ising_hamiltonian(report.instance);
    const GuessVector guess = highest_field_guess(report.instance, cfg.lg);
    report.guess.assign(guess.values().data(), guess.values().data() + guess.size());
    report.guess_correct = guess_matches_ground_state(guess, ham);

    const int levels = static_cast<int>(std::min<Eigen::Index>(4, ham.dim()));
    for (const double units : cfg.theta_units) {
        ReportThetaBlock block;
        block.theta_units = units;
        const RealVector theta = theta_vector(guess, SteeringAngle::from_omega_units(units, cfg.n));
        const AnnealPath path(theta, ham);
        block.trace = spectrum_trace(path, levels, cfg.ds);
        const MinGap gap = min_gap(block.trace);
        block.min_gap = gap.value;
        block.min_gap_s = gap.s;
        block.profile = adiabatic_time_profile(path, block.trace);
        block.divergent = block.profile.divergent;
        if (cfg.refine_min_gap) {
            const MinGap refined = min_gap_refined(path, block.trace);
            block.refined_min_gap = refined.value;
            block.refined_min_gap_s = refined.s;
            // A refined gap below threshold means the grid stepped over a
            // true (or numerically true) crossing: the adiabatic time
            // integral diverges even though every grid point looks finite.
            if (refined.value < kGapDivergenceThreshold) block.divergent = true;
        }
        if (block.divergent) {
            block.t_ad_total = std::numeric_limits<double>::infinity();
        } else {
            block.profile = optimal_schedule(block.profile);
            block.t_ad_total = block.profile.t_total;
        }
        EvolveOptions opts;
        opts.record_instantaneous = true;
        for (const double t_total : cfg.t_totals)
            block.evolutions.push_back(evolve(path, t_total, cfg.ds, opts));
        report.blocks.push_back(std::move(block));
    }
    return report;
}

// ---------------------------------------------------------------------------
// SAT sweep

struct SatInstanceRecord {
    std::uint64_t child_seed = 0;
    std::uint64_t solution = 0;  // the unique satisfying assignment
    std::vector<int> support;    // guessed sites, in selection order
    // Outer index: error count 0..max_errors.  Inner: angle grid.
    std::vector<std::vector<double>> p_final;
    std::vector<std::vector<double>> improvement;
};

struct SweepCurve {
    int n_errors = 0;
    std::vector<double> mean_p, stderr_p;  // per angle
    std::vector<double> mean_r, stderr_r;
};

struct SatSweepResult {
    ExperimentConfig config;
    std::string hash;
    std::vector<SatInstanceRecord> records;
    std::vector<SweepCurve> curves;  // recomputable from the records
};

inline void compute_sat_aggregates(SatSweepResult& result) {
    const auto& cfg = result.config;
    result.curves.clear();
    for (int e = 0; e <= cfg.max_errors; ++e) {
        SweepCurve curve;
        curve.n_errors = e;
        for (std::size_t a = 0; a < cfg.theta_units.size(); ++a) {
            std::vector<double> ps, rs;
            for (const auto& record : result.records) {
                ps.push_back(record.p_final[static_cast<std::size_t>(e)][a]);
                rs.push_back(record.improvement[static_cast<std::size_t>(e)][a]);
            }
            curve.mean_p.push_back(detail::mean_of(ps));
            curve.stderr_p.push_back(detail::stderr_of(ps));
            curve.mean_r.push_back(detail::mean_of(rs));
            curve.stderr_r.push_back(detail::stderr_of(rs));
        }
        result.curves.push_back(std::move(curve));
    }
}

// Sweep the steering angle on uniquely satisfiable 3-SAT instances.  Each
// instance gets a random guess support of lg sites; guesses take the true
// solution's orientations there, with the first e selected sites flipped for
// the e-error variant.  Improvement is measured against the unsteered run of
// the same instance and error count.
inline SatSweepResult run_sat_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ExperimentKind::SatSweep)
        throw ConfigError("run_sat_sweep: config kind mismatch");

    SatSweepResult result;
    result.config = cfg;
    result.hash = config_hash(cfg);
    const double t_total = cfg.t_totals.front();
    std::size_t direct_index = 0;
    for (std::size_t a = 0; a < cfg.theta_units.size(); ++a)
        if (cfg.theta_units[a] == 0.0) {
            direct_index = a;
            break;
        }

    for (int i = 0; i < cfg.ensemble_size; ++i) {
        SatInstanceRecord record;
        record.child_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        const SatInstance inst = gen_unique_3sat(cfg.n, record.child_seed);
        const DiagonalHamiltonian ham = sat_hamiltonian(inst);
        record.solution = sat_solution(inst);
        const Eigen::VectorXi target = spins_of_basis(record.solution, cfg.n);
        Rng support_rng(derive_seed(record.child_seed, 1));
        record.support = support_rng.sample_without_replacement(cfg.n, cfg.lg);

        for (int e = 0; e <= cfg.max_errors; ++e) {
            const std::vector<int> error_sites(record.support.begin(), record.support.begin() + e);
            const GuessVector guess = guess_from_pattern(target, record.support, error_sites);
            std::vector<double> ps;
            for (const double units : cfg.theta_units) {
                const RealVector theta =
                    theta_vector(guess, SteeringAngle::from_omega_units(units, cfg.n));
                ps.push_back(evolve(AnnealPath(theta, ham), t_total, cfg.ds).p_final);
            }
            std::vector<double> rs(ps.size(), std::numeric_limits<double>::quiet_NaN());
            if (ps[direct_index] > 0.0)
                for (std::size_t a = 0; a < ps.size(); ++a)
                    rs[a] = probability_improvement_ratio(ps[a], ps[direct_index]);
            record.p_final.push_back(std::move(ps));
            record.improvement.push_back(std::move(rs));
        }
        result.records.push_back(std::move(record));
    }
    compute_sat_aggregates(result);
    return result;
}

// ---------------------------------------------------------------------------
// Perturbative sweep

struct PertSweepPoint {
    int lg = 0;
    int n_errors = 0;
    double theta_units = 0.0;
    double mean_p = 0.0;
    double stderr_p = 0.0;
};

struct PertSweepResult {
    ExperimentConfig config;
    std::string hash;
    GaussianSumStats stats;
    // Overlap vs guess size at 0 and 1 errors, and vs correctness at lg fixed.
    std::vector<PertSweepPoint> guess_size_points;
    std::vector<PertSweepPoint> correctness_points;
};

namespace detail {

// Mean and standard error of the analytic target overlap over seeded draws of
// the field sums and the target pattern.  Draw d uses the derived seed pair
// (2d, 2d+1) off the master seed, so every grid point sees the same draws:
// curves differ only through the guess, not through sampling noise.
inline PertSweepPoint pert_sweep_point(const ExperimentConfig& cfg, const GaussianSumStats& stats,
                                       int lg, int n_errors, double theta_units) {
    const double magnitude = SteeringAngle::from_omega_units(theta_units, cfg.n).radians;
    std::vector<double> values;
    for (int d = 0; d < cfg.draws; ++d) {
        const auto [sum_h, sum_J] =
            clt_sample_sums(stats, derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(d)));
        Rng pattern_rng(derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(d) + 1));
        std::vector<int> target(static_cast<std::size_t>(cfg.n));
        for (auto& s : target) s = pattern_rng.uniform() < 0.5 ? 1 : -1;
        RealVector theta = RealVector::Zero(cfg.n);
        for (int i = 0; i < lg; ++i) {
            const int sign = i < n_errors ? -target[static_cast<std::size_t>(i)]
                                          : target[static_cast<std::size_t>(i)];
            theta(i) = magnitude * sign;
        }
        PerturbationParams p;
        p.n = cfg.n;
        p.s_star = cfg.s_star;
        p.sum_h = sum_h;
        p.sum_J = sum_J;
        values.push_back(target_overlap(ExcitationBasisSpec{cfg.n, theta, 4},
                                        perturbative_coefficients(p), target));
    }
    PertSweepPoint point;
    point.lg = lg;
    point.n_errors = n_errors;
    point.theta_units = theta_units;
    point.mean_p = mean_of(values);
    point.stderr_p = stderr_of(values);
    return point;
}

}  // namespace detail

inline PertSweepResult run_pert_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ExperimentKind::PertSweep)
        throw ConfigError("run_pert_sweep: config kind mismatch");

    PertSweepResult result;
    result.config = cfg;
    result.hash = config_hash(cfg);
    result.stats = GaussianSumStats{};

    // Overlap vs guess size, fully correct and with a single error.
    for (int lg = 0; lg <= cfg.lg_max; ++lg)
        for (const int errors : {0, 1}) {
            if (errors > lg) continue;
            for (const double units : cfg.theta_units)
                result.guess_size_points.push_back(
                    detail::pert_sweep_point(cfg, result.stats, lg, errors, units));
        }

    // Overlap vs number of correct assignments at fixed guess size.
    for (int correct = 0; correct <= cfg.lg; ++correct)
        for (const double units : cfg.theta_units)
            result.correctness_points.push_back(
                detail::pert_sweep_point(cfg, result.stats, cfg.lg, cfg.lg - correct, units));
    return result;
}

}  // namespace sqa
