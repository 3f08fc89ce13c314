// harness.hpp
// Monte Carlo engine and machine-readable reporting. Every empirical metric
// is emitted next to its analytic counterpart and a 3-sigma binomial bound;
// trial i draws its randomness from (master_seed, i) only, so a run is a pure
// function of (config, seed) regardless of worker count. Wall-clock time is
// kept out of the serialized record for the same reason.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpqlab/adversary.hpp"
#include "qpqlab/baselines.hpp"
#include "qpqlab/interrogation.hpp"
#include "qpqlab/parallel.hpp"
#include "qpqlab/protocol.hpp"

namespace qpqlab::harness {

enum class t_policy_kind { fixed, uniform_subset, optimal };

struct t_policy {
    t_policy_kind kind = t_policy_kind::uniform_subset;
    std::size_t fixed_t = 0;

    static t_policy fixed(std::size_t t) { return {t_policy_kind::fixed, t}; }
    static t_policy uniform_subset() { return {t_policy_kind::uniform_subset, 0}; }
    static t_policy optimal() { return {t_policy_kind::optimal, 0}; }
};

enum class scenario_kind { honest, confirmation, full_attack };
enum class concealment_kind { uniform, optimal, outcome_state };
enum class output_format { csv, json };

inline output_format parse_format(const std::string& name) {
    if (name == "csv") return output_format::csv;
    if (name == "json") return output_format::json;
    throw std::invalid_argument("format must be csv or json, got '" + name + "'");
}

struct experiment_config {
    std::string command;
    std::size_t n = 0;
    t_policy tpol;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    scenario_kind scenario = scenario_kind::honest;
    concealment_kind concealment = concealment_kind::optimal;
    unsigned workers = 1;
    bool strict = false;

    void validate() const {
        if (n < 2) throw std::invalid_argument("config: n must be >= 2");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (tpol.kind == t_policy_kind::fixed && (tpol.fixed_t < 1 || tpol.fixed_t > n - 1)) {
            throw std::invalid_argument("config: t must be in [1, N-1]");
        }
    }

    std::size_t resolved_t() const {
        return tpol.kind == t_policy_kind::optimal ? optimal_t_int(n) : tpol.fixed_t;
    }
};

struct metric_row {
    std::string metric;
    long long t = -1;            // -1 = not tied to a fixed t
    std::size_t trials = 0;      // 0 = analytic-only row
    double analytic = 0.0;
    double empirical = 0.0;
    bool has_empirical = false;
    double three_sigma = 0.0;
    bool exact = false;          // gated by tolerance instead of 3 sigma
    bool pass = true;
    std::string note;
};

struct run_record {
    experiment_config config;
    std::vector<metric_row> rows;
    double wall_seconds = 0.0;   // console-only; never serialized

    bool all_pass() const {
        for (const auto& r : rows) {
            if (!r.pass) return false;
        }
        return true;
    }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

namespace detail {

inline double exact_tolerance(bool strict) { return strict ? 1e-9 : 1e-6; }

inline metric_row sampled_metric(std::string name, std::size_t trials, std::size_t hits,
                                 double analytic, long long t = -1) {
    metric_row row;
    row.metric = std::move(name);
    row.t = t;
    row.trials = trials;
    row.analytic = analytic;
    row.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    row.has_empirical = true;
    row.three_sigma = three_sigma_bound(analytic, trials);
    row.pass = std::abs(row.empirical - analytic) <= row.three_sigma + 1e-12;
    return row;
}

inline metric_row exact_metric(std::string name, double analytic, double empirical,
                               bool strict, long long t = -1) {
    metric_row row;
    row.metric = std::move(name);
    row.t = t;
    row.analytic = analytic;
    row.empirical = empirical;
    row.has_empirical = true;
    row.exact = true;
    row.pass = std::abs(empirical - analytic) <= exact_tolerance(strict);
    return row;
}

inline metric_row analytic_only(std::string name, double analytic, long long t = -1,
                                std::string note = {}) {
    metric_row row;
    row.metric = std::move(name);
    row.t = t;
    row.analytic = analytic;
    row.note = std::move(note);
    return row;
}

inline query_spec sample_query(const experiment_config& cfg, random_stream& rng) {
    switch (cfg.tpol.kind) {
        case t_policy_kind::fixed:
            return sample_query_fixed_t(cfg.n, cfg.tpol.fixed_t, rng);
        case t_policy_kind::optimal:
            return sample_query_fixed_t(cfg.n, optimal_t_int(cfg.n), rng);
        case t_policy_kind::uniform_subset:
        default:
            return sample_query_uniform_subset(cfg.n, rng);
    }
}

inline concealment_policy make_policy(const experiment_config& cfg) {
    switch (cfg.concealment) {
        case concealment_kind::uniform: return concealment::always_uniform();
        case concealment_kind::outcome_state: return concealment::outcome_state();
        case concealment_kind::optimal:
        default: return concealment::optimal(cfg.n);
    }
}

// Expected detection probability of the configured full attack: 1/2 weight on
// the confirmed branch (never detected for optimal/outcome concealment) and
// the T-distribution average of the per-t probability otherwise.
inline double analytic_detection(const experiment_config& cfg) {
    const std::size_t n = cfg.n;
    const bool fixed = cfg.tpol.kind != t_policy_kind::uniform_subset;
    const double t = static_cast<double>(fixed ? cfg.resolved_t() : 0);
    switch (cfg.concealment) {
        case concealment_kind::uniform:
            return fixed ? 1.0 - (t + 1.0) / static_cast<double>(n)
                         : 1.0 - (mean_rhetoric_count(n) + 1.0) / static_cast<double>(n);
        case concealment_kind::outcome_state:
            return fixed ? 0.5 * (1.0 - 1.0 / t)
                         : 0.5 * (1.0 - mean_inverse_rhetoric_count(n));
        case concealment_kind::optimal:
        default: {
            const param_fake opt = optimal_fake(n, 0);
            return fixed ? 0.5 * detection_prob_param(cfg.resolved_t(), opt.a, opt.b)
                         : 0.5 * expected_detection_over_subsets(n, opt.a, opt.b);
        }
    }
}

} // namespace detail

// Runs the configured scenario and aggregates its metrics in trial order.
inline run_record run_trials(const experiment_config& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    run_record record;
    record.config = cfg;
    const long long row_t =
        cfg.tpol.kind == t_policy_kind::uniform_subset ? -1
                                                       : static_cast<long long>(cfg.resolved_t());

    switch (cfg.scenario) {
        case scenario_kind::honest: {
            struct trial {
                bool wrong_answer = false;
                bool detected = false;
                double other_prob = 0.0;
            };
            auto trials = run_indexed<trial>(cfg.trials, cfg.workers, [&](std::size_t i) {
                auto rng = random_stream::for_trial(cfg.master_seed, i);
                auto table = database_table::random(cfg.n, rng);
                auto q = detail::sample_query(cfg, rng);
                auto [result, log] = run_honest(table, q, rng);
                auto finals = expected_finals(q, cfg.n);
                const state_vector basis[2] = {finals.first, finals.second};
                const double other = discrimination_probabilities(log.final_query, basis).back();
                return trial{result.answer != table.bit(q.j()), result.detected_cheat, other};
            });
            std::size_t wrong = 0, detected = 0;
            double worst_other = 0.0;
            for (const auto& t : trials) {
                wrong += t.wrong_answer ? 1 : 0;
                detected += t.detected ? 1 : 0;
                worst_other = std::max(worst_other, t.other_prob);
            }
            auto wrong_row = detail::exact_metric(
                "answer_error_rate", 0.0,
                static_cast<double>(wrong) / static_cast<double>(cfg.trials), cfg.strict, row_t);
            wrong_row.trials = cfg.trials;
            auto det_row = detail::exact_metric(
                "detection_rate", 0.0,
                static_cast<double>(detected) / static_cast<double>(cfg.trials), cfg.strict, row_t);
            det_row.trials = cfg.trials;
            auto other_row =
                detail::exact_metric("max_other_probability", 0.0, worst_other, cfg.strict, row_t);
            other_row.trials = cfg.trials;
            record.rows = {wrong_row, det_row, other_row};
            break;
        }
        case scenario_kind::confirmation: {
            struct trial {
                bool hit_j = false;
                bool confirm_correct = false;
                bool in_support = false;
            };
            auto trials = run_indexed<trial>(cfg.trials, cfg.workers, [&](std::size_t i) {
                auto rng = random_stream::for_trial(cfg.master_seed, i);
                auto table = database_table::random(cfg.n, rng);
                auto q = detail::sample_query(cfg, rng);
                auto report = confirmation_attack(table, q, rng);
                const bool hit = report.measured_k == q.j();
                const bool support =
                    hit || std::binary_search(q.rhetoric().begin(), q.rhetoric().end(),
                                              report.measured_k);
                return trial{hit, report.confirmed_j.value_or(!hit) == hit, support};
            });
            std::size_t hits = 0, correct = 0, supported = 0;
            for (const auto& t : trials) {
                hits += t.hit_j ? 1 : 0;
                correct += t.confirm_correct ? 1 : 0;
                supported += t.in_support ? 1 : 0;
            }
            auto correct_row = detail::exact_metric(
                "confirmation_matches_truth_rate", 1.0,
                static_cast<double>(correct) / static_cast<double>(cfg.trials), cfg.strict, row_t);
            correct_row.trials = cfg.trials;
            auto support_row = detail::exact_metric(
                "outcome_in_support_rate", 1.0,
                static_cast<double>(supported) / static_cast<double>(cfg.trials), cfg.strict,
                row_t);
            support_row.trials = cfg.trials;
            record.rows = {detail::sampled_metric("measured_j_rate", cfg.trials, hits, 0.5, row_t),
                           correct_row, support_row};
            break;
        }
        case scenario_kind::full_attack: {
            struct trial {
                bool detected = false;
                bool confirmed = false;
            };
            const auto policy = detail::make_policy(cfg);
            auto trials = run_indexed<trial>(cfg.trials, cfg.workers, [&](std::size_t i) {
                auto rng = random_stream::for_trial(cfg.master_seed, i);
                auto table = database_table::random(cfg.n, rng);
                auto q = detail::sample_query(cfg, rng);
                auto report = full_attack(table, q, policy, rng);
                return trial{report.detected, report.confirmed_j.value_or(false)};
            });
            std::size_t detected = 0, confirmed = 0;
            for (const auto& t : trials) {
                detected += t.detected ? 1 : 0;
                confirmed += t.confirmed ? 1 : 0;
            }
            record.rows = {detail::sampled_metric("detection_rate", cfg.trials, detected,
                                                  detail::analytic_detection(cfg), row_t),
                           detail::sampled_metric("confirmed_j_rate", cfg.trials, confirmed, 0.5,
                                                  row_t)};
            break;
        }
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

// One row per rhetoric count t: closed-form pbar_t next to a Monte Carlo
// estimate of the same conditional detection probability (database measured
// some k != j, fake parameter alpha uniform on [0, pi/2]). The analytic
// argmax row is marked in the note column.
inline run_record sweep_t(std::size_t n, std::size_t trials_per_t, std::uint64_t master_seed,
                          unsigned workers = 1, std::size_t stride = 1) {
    if (n < 2) throw std::invalid_argument("sweep_t: n must be >= 2");
    if (trials_per_t < 1) throw std::invalid_argument("sweep_t: trials must be >= 1");
    if (stride < 1) stride = 1;
    const auto start = std::chrono::steady_clock::now();

    run_record record;
    record.config.command = "sweep-t";
    record.config.n = n;
    record.config.trials = trials_per_t;
    record.config.master_seed = master_seed;
    record.config.workers = workers;

    std::vector<std::size_t> ts;
    for (std::size_t t = 1; t <= n - 1; t += stride) ts.push_back(t);

    std::size_t argmax_pos = 0;
    double best = -1.0;
    for (std::size_t pos = 0; pos < ts.size(); ++pos) {
        const double analytic = expected_detection_over_alpha(n, static_cast<double>(ts[pos]));
        if (analytic > best) {
            best = analytic;
            argmax_pos = pos;
        }
    }

    using std::numbers::pi;
    for (std::size_t pos = 0; pos < ts.size(); ++pos) {
        const std::size_t t = ts[pos];
        auto detections = run_indexed<std::uint8_t>(
            trials_per_t, workers, [&, t, pos](std::size_t i) -> std::uint8_t {
                auto rng = random_stream::for_trial(master_seed, pos * trials_per_t + i);
                auto q = sample_query_fixed_t(n, t, rng);
                // conditioned on an outcome k != j, k is uniform over T
                const std::size_t k = q.rhetoric()[rng.next_index(t)];
                const double alpha = rng.next_double() * pi / 2.0;
                const param_fake fake{std::cos(alpha),
                                      std::sin(alpha) / std::sqrt(static_cast<double>(n - 1)), k};
                auto finals = expected_finals(q, n);
                const state_vector basis[2] = {finals.first, finals.second};
                auto outcome = discriminate(fake_query_state(fake, n), basis, rng);
                return outcome.is_other() ? 1 : 0;
            });
        std::size_t hits = 0;
        for (auto d : detections) hits += d;
        auto row = detail::sampled_metric("pbar_t", trials_per_t, hits,
                                          expected_detection_over_alpha(n, static_cast<double>(t)),
                                          static_cast<long long>(t));
        if (pos == argmax_pos) row.note = "argmax";
        record.rows.push_back(std::move(row));
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

// ---------------------------------------------------------------------------
// Serialization. CSV column order is fixed (see README); JSON mirrors the
// rows one-to-one.
// ---------------------------------------------------------------------------

inline const char* csv_header() {
    return "command,metric,n,t,trials,seed,analytic,empirical,three_sigma,pass,note";
}

inline std::string to_csv(const run_record& record) {
    std::string out = csv_header();
    out += '\n';
    for (const auto& row : record.rows) {
        out += record.config.command;
        out += ',';
        out += row.metric;
        out += ',';
        out += std::to_string(record.config.n);
        out += ',';
        if (row.t >= 0) out += std::to_string(row.t);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += std::to_string(record.config.master_seed);
        out += ',';
        out += format_double(row.analytic);
        out += ',';
        if (row.has_empirical) out += format_double(row.empirical);
        out += ',';
        out += format_double(row.three_sigma);
        out += ',';
        out += row.pass ? "true" : "false";
        out += ',';
        out += row.note;
        out += '\n';
    }
    return out;
}

inline std::string to_json(const run_record& record) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : record.rows) {
        nlohmann::json r{{"metric", row.metric},
                         {"trials", row.trials},
                         {"analytic", row.analytic},
                         {"three_sigma", row.three_sigma},
                         {"pass", row.pass},
                         {"note", row.note}};
        if (row.t >= 0) r["t"] = row.t;
        if (row.has_empirical) r["empirical"] = row.empirical;
        rows.push_back(std::move(r));
    }
    nlohmann::json doc{{"command", record.config.command},
                       {"n", record.config.n},
                       {"trials", record.config.trials},
                       {"seed", record.config.master_seed},
                       {"rows", std::move(rows)}};
    return doc.dump(2) + "\n";
}

inline const char* table1_csv_header() {
    return "protocol,cheat_sensitive,identified_rate,detection_rate,leakage_bits";
}

inline std::string table1_to_csv(const std::vector<comparison_row>& rows) {
    std::string out = table1_csv_header();
    out += '\n';
    for (const auto& row : rows) {
        out += row.protocol;
        out += ',';
        out += row.cheat_sensitive ? "yes" : "no";
        out += ',';
        out += format_double(row.identified_rate);
        out += ',';
        out += format_double(row.detection_rate);
        out += ',';
        out += format_double(row.leakage_bits);
        out += '\n';
    }
    return out;
}

inline std::string table1_to_json(const std::vector<comparison_row>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        arr.push_back({{"protocol", row.protocol},
                       {"cheat_sensitive", row.cheat_sensitive},
                       {"identified_rate", row.identified_rate},
                       {"detection_rate", row.detection_rate},
                       {"leakage_bits", row.leakage_bits}});
    }
    return nlohmann::json{{"command", "table1"}, {"rows", std::move(arr)}}.dump(2) + "\n";
}

// QPQLAB_BRUTE_CAP overrides the interrogation brute-force cap.
inline std::size_t resolve_brute_cap() {
    if (const char* env = std::getenv("QPQLAB_BRUTE_CAP")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && value >= 2) {
            return static_cast<std::size_t>(value);
        }
        throw std::invalid_argument("QPQLAB_BRUTE_CAP must be an integer >= 2");
    }
    return default_brute_cap;
}

} // namespace qpqlab::harness
