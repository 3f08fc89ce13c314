// cli.hpp
// Command-line front end. Exit codes: 0 = all metrics pass, 1 = some
// empirical metric fell outside its gate, 2 = usage error.

#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpqlab/harness.hpp"

namespace qpqlab::cli {

namespace detail {

struct common_options {
    std::size_t n = 0;
    long long t = -1;
    std::string t_policy = "uniform";
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool strict = false;
    std::string out_path;
    std::string format = "csv";
};

inline void add_common(CLI::App* cmd, common_options& opt, bool wants_t) {
    cmd->add_option("--n", opt.n, "database size N")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    if (wants_t) {
        cmd->add_option("--t", opt.t, "fixed rhetoric-query count (implies --t-policy fixed)");
        cmd->add_option("--t-policy", opt.t_policy, "fixed | uniform | optimal")
            ->check(CLI::IsMember({"fixed", "uniform", "optimal"}));
    }
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", opt.strict, "tighten exact-value gates to 1e-9");
    cmd->add_option("--out", opt.out_path, "write the record to this file");
    cmd->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

inline harness::t_policy resolve_t_policy(const common_options& opt) {
    if (opt.t >= 0) {
        if (opt.t_policy == "optimal") {
            throw std::invalid_argument("--t conflicts with --t-policy optimal");
        }
        return harness::t_policy::fixed(static_cast<std::size_t>(opt.t));
    }
    if (opt.t_policy == "fixed") {
        throw std::invalid_argument("--t-policy fixed requires --t");
    }
    if (opt.t_policy == "optimal") return harness::t_policy::optimal();
    return harness::t_policy::uniform_subset();
}

inline int emit_record(const harness::run_record& record, const common_options& opt,
                       std::ostream& out) {
    const std::string body = harness::parse_format(opt.format) == harness::output_format::json
                                 ? harness::to_json(record)
                                 : harness::to_csv(record);
    if (!opt.out_path.empty()) {
        std::ofstream file(opt.out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + opt.out_path);
        file << body;
    } else {
        out << body;
    }
    return record.all_pass() ? 0 : 1;
}

inline void print_summary(const harness::run_record& record, std::ostream& out) {
    for (const auto& row : record.rows) {
        out << record.config.command << " " << row.metric;
        if (row.t >= 0) out << " (t=" << row.t << ")";
        out << ": analytic=" << harness::format_double(row.analytic);
        if (row.has_empirical) out << " empirical=" << harness::format_double(row.empirical);
        if (row.trials > 0 && !row.exact) {
            out << " 3sigma=" << harness::format_double(row.three_sigma);
        }
        out << (row.pass ? " [pass]" : " [FAIL]");
        if (!row.note.empty()) out << " <" << row.note << ">";
        out << "\n";
    }
    out << "# wall " << harness::format_double(record.wall_seconds) << " s\n";
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analytics and Monte Carlo harness for O(log N) quantum "
                 "private-query protocols"};
    app.require_subcommand(1);

    detail::common_options honest_opt, attack_opt, sweep_opt, fake_opt, inter_opt, base_opt,
        table_opt;

    auto* honest = app.add_subcommand("honest", "honest protocol runs");
    detail::add_common(honest, honest_opt, true);

    auto* attack = app.add_subcommand("attack", "computational-basis measurement attack");
    detail::add_common(attack, attack_opt, true);
    std::string strategy = "full", concealment = "optimal";
    attack->add_option("--strategy", strategy, "confirmation | full")
        ->check(CLI::IsMember({"confirmation", "full"}));
    attack->add_option("--concealment", concealment, "uniform | optimal | outcome")
        ->check(CLI::IsMember({"uniform", "optimal", "outcome"}));

    auto* sweep = app.add_subcommand("sweep-t", "detection probability across rhetoric counts");
    detail::add_common(sweep, sweep_opt, false);
    std::size_t stride = 1;
    sweep->add_option("--stride", stride, "step between sampled t values")
        ->check(CLI::PositiveNumber);

    auto* fake = app.add_subcommand("optimal-fake", "minimum-detection fake analytics");
    detail::add_common(fake, fake_opt, false);

    auto* inter = app.add_subcommand("interrogate", "quantum-interrogation data-privacy estimate");
    detail::add_common(inter, inter_opt, false);
    std::string initial = "psi0";
    std::size_t inter_j = 0;
    std::size_t cap = 0;
    inter->add_option("--initial", initial, "psi0 | qpq | uniform")
        ->check(CLI::IsMember({"psi0", "qpq", "uniform"}));
    inter->add_option("--j", inter_j, "true query index");
    inter->add_option("--cap", cap, "brute-force qubit cap (default: QPQLAB_BRUTE_CAP or 14)");

    auto* base = app.add_subcommand("baseline", "prior-protocol attack statistics");
    detail::add_common(base, base_opt, false);
    std::string protocol;
    base->add_option("--protocol", protocol, "qpq | phase")
        ->required()
        ->check(CLI::IsMember({"qpq", "phase"}));

    auto* table = app.add_subcommand("table1", "protocol comparison table");
    detail::add_common(table, table_opt, false);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qpqlab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (honest->parsed()) {
            harness::experiment_config cfg;
            cfg.command = "honest";
            cfg.n = honest_opt.n;
            cfg.tpol = detail::resolve_t_policy(honest_opt);
            cfg.trials = honest_opt.trials;
            cfg.master_seed = honest_opt.seed;
            cfg.scenario = harness::scenario_kind::honest;
            cfg.workers = honest_opt.workers;
            cfg.strict = honest_opt.strict;
            auto record = harness::run_trials(cfg);
            detail::print_summary(record, out);
            return detail::emit_record(record, honest_opt, out);
        }
        if (attack->parsed()) {
            harness::experiment_config cfg;
            cfg.command = "attack";
            cfg.n = attack_opt.n;
            cfg.tpol = detail::resolve_t_policy(attack_opt);
            cfg.trials = attack_opt.trials;
            cfg.master_seed = attack_opt.seed;
            cfg.scenario = (strategy == "confirmation") ? harness::scenario_kind::confirmation
                                                        : harness::scenario_kind::full_attack;
            cfg.concealment = (concealment == "uniform")
                                  ? harness::concealment_kind::uniform
                                  : (concealment == "outcome")
                                        ? harness::concealment_kind::outcome_state
                                        : harness::concealment_kind::optimal;
            cfg.workers = attack_opt.workers;
            cfg.strict = attack_opt.strict;
            auto record = harness::run_trials(cfg);
            detail::print_summary(record, out);
            return detail::emit_record(record, attack_opt, out);
        }
        if (sweep->parsed()) {
            auto record = harness::sweep_t(sweep_opt.n, sweep_opt.trials, sweep_opt.seed,
                                           sweep_opt.workers, stride);
            out << "sweep-t n=" << sweep_opt.n
                << ": optimal t (real) = " << harness::format_double(optimal_t(sweep_opt.n))
                << ", integer argmax of pbar_t = " << optimal_t_int(sweep_opt.n) << "\n";
            return detail::emit_record(record, sweep_opt, out);
        }
        if (fake->parsed()) {
            const std::size_t n = fake_opt.n;
            const param_fake opt_ab = optimal_fake(n, 0);
            const double exact = expected_detection_over_subsets(n, opt_ab.a, opt_ab.b);
            const double approx = 0.5 - 1.0 / (static_cast<double>(n) + 3.0);
            harness::run_record record;
            record.config.command = "optimal-fake";
            record.config.n = n;
            record.config.master_seed = fake_opt.seed;
            record.rows = {
                harness::detail::analytic_only("a_opt", opt_ab.a, -1, "2/sqrt(N+3)"),
                harness::detail::analytic_only("b_opt", opt_ab.b, -1, "1/sqrt(N+3)"),
                harness::detail::analytic_only("pbar_exact_over_subsets", exact),
                harness::detail::analytic_only("pbar_approx_minimum", approx, -1, "1/2 - 1/(N+3)"),
                harness::detail::analytic_only("overall_detection", 0.5 * exact, -1,
                                               "confirmed branch never detected"),
                harness::detail::analytic_only("t_star_real", optimal_t(n)),
                harness::detail::analytic_only("t_star_int",
                                               static_cast<double>(optimal_t_int(n))),
                harness::detail::analytic_only("p_maxi", p_maxi(n)),
            };
            detail::print_summary(record, out);
            return detail::emit_record(record, fake_opt, out);
        }
        if (inter->parsed()) {
            if (cap == 0) cap = harness::resolve_brute_cap();
            interrogation_spec spec;
            spec.n = inter_opt.n;
            spec.j = inter_j;
            spec.initial = (initial == "qpq") ? interrogation_initial::qpq_state
                           : (initial == "uniform") ? interrogation_initial::uniform_superposition
                                                    : interrogation_initial::psi_prime0;
            const double nn = static_cast<double>(spec.n);
            const bool has_analytic = spec.initial != interrogation_initial::uniform_superposition;
            if (!has_analytic && spec.n > cap) {
                throw std::invalid_argument(
                    "interrogate: the uniform initial state has no analytic path and N="
                    + std::to_string(spec.n) + " exceeds the brute-force cap "
                    + std::to_string(cap));
            }
            const double reference = has_analytic
                                         ? expected_zeros_analytic(spec).expected_zeros
                                         : nn / 2.0 + std::sqrt(nn) / 2.0;

            harness::run_record record;
            record.config.command = "interrogate";
            record.config.n = spec.n;
            record.config.master_seed = inter_opt.seed;
            harness::metric_row row;
            row.metric = std::string("expected_zeros_") + initial;
            row.analytic = reference;
            row.exact = true;
            row.note = has_analytic ? "analytic binomial sum" : "reference N/2+sqrt(N)/2";
            if (spec.n <= cap) {
                row.empirical = interrogate_bruteforce(spec, cap).expected_zeros;
                row.has_empirical = true;
                row.pass = std::abs(row.empirical - row.analytic) <=
                           (inter_opt.strict ? 1e-9 : 1e-6);
            }
            record.rows = {row};
            out << "interrogate " << initial << " n=" << spec.n << ": expected zeros = "
                << harness::format_double(row.has_empirical ? row.empirical : row.analytic)
                << "\n";
            detail::print_summary(record, out);
            return detail::emit_record(record, inter_opt, out);
        }
        if (base->parsed()) {
            const std::size_t n = base_opt.n;
            const std::size_t trials = base_opt.trials;
            const baseline_kind kind =
                protocol == "qpq" ? baseline_kind::qpq : baseline_kind::phase_encoded;
            struct tally {
                bool identified = false;
                bool detected = false;
            };
            auto outcomes = run_indexed<tally>(trials, base_opt.workers, [&](std::size_t i) {
                auto rng = random_stream::for_trial(base_opt.seed, i);
                auto bits = database_table::random(n, rng).bits();
                bits[0] = 0;
                database_table fixed{std::move(bits)};
                const std::size_t j = 1 + rng.next_index(n - 1);
                auto report = (kind == baseline_kind::qpq) ? qpq_attack(fixed, j, rng)
                                                           : phase_encoded_attack(fixed, j, rng);
                return tally{report.identified_j, report.detected};
            });
            std::size_t identified = 0, detected = 0;
            for (const auto& o : outcomes) {
                identified += o.identified ? 1 : 0;
                detected += o.detected ? 1 : 0;
            }
            harness::run_record record;
            record.config.command = "baseline";
            record.config.n = n;
            record.config.trials = trials;
            record.config.master_seed = base_opt.seed;
            if (kind == baseline_kind::qpq) {
                auto id_row = harness::detail::exact_metric(
                    "identified_j_rate", 1.0,
                    static_cast<double>(identified) / static_cast<double>(trials),
                    base_opt.strict);
                id_row.trials = trials;
                record.rows = {id_row,
                               harness::detail::sampled_metric("detection_rate", trials, detected,
                                                               0.5)};
            } else {
                auto det_row = harness::detail::exact_metric(
                    "detection_rate", 0.0,
                    static_cast<double>(detected) / static_cast<double>(trials), base_opt.strict);
                det_row.trials = trials;
                record.rows = {harness::detail::sampled_metric("identified_j_rate", trials,
                                                               identified, 0.5),
                               det_row};
            }
            detail::print_summary(record, out);
            return detail::emit_record(record, base_opt, out);
        }
        if (table->parsed()) {
            auto rows = comparison_table(table_opt.n, table_opt.trials, table_opt.seed,
                                         table_opt.workers);
            const std::string body = (table_opt.format == "json")
                                         ? harness::table1_to_json(rows)
                                         : harness::table1_to_csv(rows);
            if (!table_opt.out_path.empty()) {
                std::ofstream file(table_opt.out_path, std::ios::binary);
                if (!file) {
                    throw std::runtime_error("cannot open output file: " + table_opt.out_path);
                }
                file << body;
                out << harness::table1_to_csv(rows);
            } else {
                out << body;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace qpqlab::cli
