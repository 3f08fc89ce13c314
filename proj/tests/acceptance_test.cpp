// Acceptance suite: one test per criterion, each printing a pass/fail line.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qpqlab/cli.hpp"
#include "qpqlab/qpqlab.hpp"

using namespace qpqlab;

namespace {

struct criterion_banner {
    int number;
    const char* summary;
    ~criterion_banner() {
        std::printf("[criterion %2d] %s: %s\n", number,
                    ::testing::Test::HasFailure() ? "FAIL" : "PASS", summary);
        std::fflush(stdout);
    }
};

cplx gaussian(random_stream& rng) {
    const double u1 = 1.0 - rng.next_double();
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return cplx{r * std::cos(2.0 * std::numbers::pi * u2),
                r * std::sin(2.0 * std::numbers::pi * u2)};
}

} // namespace

TEST(Acceptance, Criterion01_HonestCorrectness) {
    criterion_banner banner{1, "1000 random honest runs always return A_j, never detect"};
    const auto started = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < 1000; ++i) {
        auto rng = random_stream::for_trial(101, i);
        const std::size_t n = 2 + rng.next_index(63);
        auto table = database_table::random(n, rng);
        auto q = sample_query_uniform_subset(n, rng);
        auto [result, log] = run_honest(table, q, rng);
        ASSERT_EQ(result.answer, table.bit(q.j()));
        ASSERT_FALSE(result.detected_cheat);
        auto finals = expected_finals(q, n);
        const state_vector basis[2] = {finals.first, finals.second};
        ASSERT_LE(discrimination_probabilities(log.final_query, basis).back(), 1e-12);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    EXPECT_LT(elapsed.count(), 5.0);
}

TEST(Acceptance, Criterion02_UniformFakeConcealment) {
    criterion_banner banner{2, "uniform fake: 0 on basic form, 1-(t+1)/N on randomized"};
    const auto started = std::chrono::steady_clock::now();
    for (std::size_t n = 2; n <= 64; ++n) {
        for (std::size_t j = 0; j < n; ++j) {
            ASSERT_LE(std::abs(detection_probability(uniform_fake{}, query_spec::basic(j, n), n)),
                      1e-12);
        }
    }
    random_stream rng(202);
    for (std::size_t n = 2; n <= 64; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            const std::size_t t = 1 + rng.next_index(n - 1);
            auto q = sample_query_fixed_t(n, t, rng);
            const double want = 1.0 - static_cast<double>(t + 1) / static_cast<double>(n);
            ASSERT_NEAR(detection_probability(uniform_fake{}, q, n), want, 1e-12);
        }
    }
    // Monte Carlo at N=10, t=4: expect 0.5 within 3 sigma at 1e5 trials
    harness::experiment_config cfg;
    cfg.command = "attack";
    cfg.n = 10;
    cfg.tpol = harness::t_policy::fixed(4);
    cfg.trials = 100000;
    cfg.master_seed = 2020;
    cfg.scenario = harness::scenario_kind::full_attack;
    cfg.concealment = harness::concealment_kind::uniform;
    cfg.workers = 4;
    auto record = harness::run_trials(cfg);
    ASSERT_EQ(record.rows[0].metric, "detection_rate");
    EXPECT_NEAR(record.rows[0].analytic, 0.5, 1e-12);
    EXPECT_NEAR(record.rows[0].empirical, 0.5, record.rows[0].three_sigma);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    EXPECT_LT(elapsed.count(), 10.0);
}

TEST(Acceptance, Criterion03_ClosedFormDualPath) {
    criterion_banner banner{3, "amplitude route equals p_{t,a,b} closed form to 1e-12"};
    random_stream rng(303);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + rng.next_index(127);
        const std::size_t t = 1 + rng.next_index(n - 1);
        auto q = sample_query_fixed_t(n, t, rng);
        const std::size_t k = q.rhetoric()[rng.next_index(t)];
        const double a = rng.next_double();
        const double b = std::sqrt((1.0 - a * a) / static_cast<double>(n - 1));
        ASSERT_NEAR(detection_probability(param_fake{a, b, k}, q, n),
                    detection_prob_param(t, a, b), 1e-12)
            << "n=" << n << " t=" << t << " a=" << a;
    }
}

TEST(Acceptance, Criterion04_CheatSensitivitySearch) {
    criterion_banner banner{4, "10^4 random fakes all detectable unless equality-structured"};
    random_stream rng(404);
    std::size_t undetectable_without_structure = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 3 + rng.next_index(8);       // N in [3, 10]
        const std::size_t t = 1 + rng.next_index(n - 2);   // t < N-1
        auto q = sample_query_fixed_t(n, t, rng);

        std::vector<cplx> alpha(n);
        for (auto& x : alpha) x = gaussian(rng);
        double norm = 0.0;
        for (const auto& x : alpha) norm += std::norm(x);
        const double inv = 1.0 / std::sqrt(norm);
        for (auto& x : alpha) x *= inv;

        const double p = detection_probability(general_fake{alpha}, q, n);
        if (p <= 1e-9) {
            // must exhibit the exact structure that evades detection
            bool structured = true;
            const cplx reference = alpha[q.rhetoric().front()];
            for (std::size_t i = 0; i < n && structured; ++i) {
                if (i == q.j()) continue;
                const bool in_t =
                    std::binary_search(q.rhetoric().begin(), q.rhetoric().end(), i);
                if (in_t) {
                    structured = std::abs(alpha[i] - reference) <= 1e-9;
                } else {
                    structured = std::abs(alpha[i]) <= 1e-9;
                }
            }
            if (!structured) ++undetectable_without_structure;
        }
    }
    EXPECT_EQ(undetectable_without_structure, 0u);
}

TEST(Acceptance, Criterion05_OptimalFake) {
    criterion_banner banner{5, "optimal fake: exact average, grid argmin, 1/4 overall detection"};
    for (std::size_t n : {64u, 101u, 128u, 256u}) {
        auto fake = optimal_fake(n, 0);
        EXPECT_NEAR(expected_detection_over_subsets(n, fake.a, fake.b),
                    0.5 - 1.0 / (static_cast<double>(n) + 3.0), 0.02)
            << "n=" << n;
    }
    for (std::size_t n : {64u, 101u}) {
        const double step = 0.005;
        double best_a = 0.0, best_value = 1e9;
        for (double a = step; a < 1.0; a += step) {
            const double b = std::sqrt((1.0 - a * a) / static_cast<double>(n - 1));
            const double value = expected_detection_over_subsets(n, a, b);
            if (value < best_value) {
                best_value = value;
                best_a = a;
            }
        }
        EXPECT_NEAR(best_a, 2.0 / std::sqrt(static_cast<double>(n) + 3.0), step) << "n=" << n;
    }
    // full attack with the optimal policy at N=101, uniform random nonempty T
    const std::size_t n = 101, trials = 100000;
    auto detections = run_indexed<std::uint8_t>(trials, 4, [&](std::size_t i) -> std::uint8_t {
        auto rng = random_stream::for_trial(505, i);
        auto table = database_table::random(n, rng);
        auto q = sample_query_uniform_subset(n, rng);
        return full_attack(table, q, concealment::optimal(n), rng).detected ? 1 : 0;
    });
    std::size_t detected = 0;
    for (auto d : detections) detected += d;
    EXPECT_NEAR(static_cast<double>(detected) / trials, 0.25, 0.03);
}

TEST(Acceptance, Criterion06_FakeParameterAverage) {
    criterion_banner banner{6, "pbar_t closed form vs quadrature; integer argmax near t*"};
    random_stream rng(606);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.next_index(1999);
        const std::size_t t = 1 + rng.next_index(n - 1);
        ASSERT_NEAR(expected_detection_over_alpha(n, static_cast<double>(t)),
                    expected_detection_over_alpha_quadrature(n, static_cast<double>(t)), 1e-6)
            << "n=" << n << " t=" << t;
    }
    using std::numbers::pi;
    for (std::size_t n : {16u, 101u, 1024u}) {
        std::size_t argmax = 1;
        double best = -1.0;
        for (std::size_t t = 1; t <= n - 1; ++t) {
            const double v = expected_detection_over_alpha(n, static_cast<double>(t));
            if (v > best) {
                best = v;
                argmax = t;
            }
        }
        const double tstar = std::sqrt(static_cast<double>(n)
                                       - 4.0 / pi * std::sqrt(static_cast<double>(n - 1)));
        const auto rounded = static_cast<std::size_t>(std::lround(tstar));
        EXPECT_LE(argmax > rounded ? argmax - rounded : rounded - argmax, 1u) << "n=" << n;
    }
}

TEST(Acceptance, Criterion07_PeakDetection) {
    criterion_banner banner{7, "p_maxi = pbar_{t*}/2; value 0.4237 at N=101; limit 1/2"};
    for (std::size_t n : {2u, 16u, 101u, 1024u, 123456u}) {
        EXPECT_NEAR(p_maxi(n), 0.5 * expected_detection_over_alpha(n, optimal_t(n)), 1e-9)
            << "n=" << n;
    }
    // independent recomputation at N=101: quadrature + argmax over a fine grid
    double best = -1.0;
    for (double t = 8.0; t <= 11.0; t += 1e-3) {
        best = std::max(best, expected_detection_over_alpha_quadrature(101, t));
    }
    EXPECT_NEAR(0.5 * best, p_maxi(101), 1e-6);
    EXPECT_NEAR(p_maxi(101), 0.4237, 1e-4);
    EXPECT_GT(p_maxi(1000000), 0.49);
    EXPECT_LT(p_maxi(1000000), 0.5);
}

TEST(Acceptance, Criterion08_RecoveryProbability) {
    criterion_banner banner{8, "recovery probability by closed form and enumeration"};
    EXPECT_NEAR(recovery_probability(4), 1.0 / 14.0 + 1.0 / 24.0, 1e-12);
    EXPECT_NEAR(recovery_probability_enumerated(4), 1.0 / 14.0 + 1.0 / 24.0, 1e-12);
    for (std::size_t n = 2; n <= 12; ++n) {
        EXPECT_NEAR(recovery_probability_enumerated(n), recovery_probability(n), 1e-12)
            << "n=" << n;
    }
}

TEST(Acceptance, Criterion09_QuantumInterrogation) {
    criterion_banner banner{9, "interrogation: N/2 and N/2+1/2 rules, identities, uniform ref"};
    const auto started = std::chrono::steady_clock::now();
    for (std::size_t n = 2; n <= 12; ++n) {
        interrogation_spec psi0{interrogation_initial::psi_prime0, n, n / 3, {}};
        const double brute = interrogate_bruteforce(psi0).expected_zeros;
        EXPECT_NEAR(brute, static_cast<double>(n) / 2.0, 1e-9) << "n=" << n;
        psi0.j = 0;
        EXPECT_NEAR(expected_zeros_analytic(psi0).expected_zeros, brute, 1e-9) << "n=" << n;

        interrogation_spec qpq{interrogation_initial::qpq_state, n, n - 1, {}};
        const double brute_qpq = interrogate_bruteforce(qpq).expected_zeros;
        EXPECT_NEAR(brute_qpq, static_cast<double>(n) / 2.0 + 0.5, 1e-9) << "n=" << n;
        qpq.j = 0;
        EXPECT_NEAR(expected_zeros_analytic(qpq).expected_zeros, brute_qpq, 1e-9) << "n=" << n;
    }
    for (std::size_t n : {100u, 537u, 1000u}) {
        interrogation_spec psi0{interrogation_initial::psi_prime0, n, 0, {}};
        EXPECT_NEAR(expected_zeros_analytic(psi0).expected_zeros, static_cast<double>(n) / 2.0,
                    1e-9)
            << "n=" << n;
        interrogation_spec qpq{interrogation_initial::qpq_state, n, 0, {}};
        EXPECT_NEAR(expected_zeros_analytic(qpq).expected_zeros,
                    static_cast<double>(n) / 2.0 + 0.5, 1e-9)
            << "n=" << n;
    }
    for (std::size_t n = 2; n <= 64; ++n) {
        EXPECT_TRUE(verify_binomial_identities(n).all_hold) << "n=" << n;
    }
    for (std::size_t n : {4u, 9u}) {
        interrogation_spec uniform{interrogation_initial::uniform_superposition, n, 0, {}};
        EXPECT_NEAR(interrogate_bruteforce(uniform).expected_zeros,
                    static_cast<double>(n) / 2.0 + std::sqrt(static_cast<double>(n)) / 2.0, 0.05)
            << "n=" << n;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    EXPECT_LT(elapsed.count(), 30.0);
}

TEST(Acceptance, Criterion10_InitialStateOverlap) {
    criterion_banner banner{10, "basic initial-state overlap = 1/sqrt(N-1) + (N-2)/(2(N-1))"};
    for (std::size_t n = 3; n <= 64; ++n) {
        const double want = 1.0 / std::sqrt(static_cast<double>(n - 1))
                            + static_cast<double>(n - 2) / (2.0 * static_cast<double>(n - 1));
        for (std::size_t j1 = 0; j1 < n; ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
                auto a = prepare_initial(query_spec::basic(j1, n), n);
                auto b = prepare_initial(query_spec::basic(j2, n), n);
                const cplx overlap = inner_product(a, b);
                ASSERT_NEAR(overlap.real(), want, 1e-12) << "n=" << n;
                ASSERT_NEAR(overlap.imag(), 0.0, 1e-12);
            }
        }
    }
}

TEST(Acceptance, Criterion11_Baselines) {
    criterion_banner banner{11, "QPQ and phase-encoded attack rows, comparison table shape"};
    const std::size_t n = 64, trials = 100000;
    std::size_t qpq_identified = 0, qpq_detected = 0;
    std::size_t phase_identified = 0, phase_detected = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        auto rng = random_stream::for_trial(1111, i);
        auto bits = database_table::random(n, rng).bits();
        bits[0] = 0;
        database_table table{std::move(bits)};

        auto qpq = qpq_attack(table, 1 + rng.next_index(n - 1), rng);
        qpq_identified += qpq.identified_j ? 1 : 0;
        qpq_detected += qpq.detected ? 1 : 0;

        auto phase = phase_encoded_attack(table, 1 + rng.next_index(n - 1), rng);
        phase_identified += phase.identified_j ? 1 : 0;
        phase_detected += phase.detected ? 1 : 0;
    }
    EXPECT_EQ(qpq_identified, trials);  // exact 1.0
    EXPECT_NEAR(static_cast<double>(qpq_detected) / trials, 0.5, three_sigma_bound(0.5, trials));
    EXPECT_EQ(phase_detected, 0u);      // exactly never detected
    EXPECT_NEAR(static_cast<double>(phase_identified) / trials, 0.5,
                three_sigma_bound(0.5, trials));

    auto rows = comparison_table(32, 20000, 1212, 4);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_TRUE(rows[0].cheat_sensitive);    // qpq
    EXPECT_FALSE(rows[1].cheat_sensitive);   // phase-encoded
    EXPECT_FALSE(rows[2].cheat_sensitive);   // ours, basic form
    EXPECT_TRUE(rows[3].cheat_sensitive);    // ours, randomized form
    EXPECT_NEAR(rows[0].leakage_bits, std::log2(32.0), 1e-12);
    EXPECT_GT(rows[0].leakage_bits, rows[2].leakage_bits);
    EXPECT_NEAR(rows[2].leakage_bits, 0.5 * std::log2(32.0), 0.55);
}

TEST(Acceptance, Criterion12_QueryLeakage) {
    criterion_banner banner{12, "mutual information matches log2 N - log2(N-1)/2 exactly"};
    for (std::size_t n : {2u, 4u, 17u, 64u, 256u}) {
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(query_leakage_bits(n, true), std::log2(nn) - 0.5 * std::log2(nn - 1.0), 1e-9)
            << "n=" << n;
    }
    const double info = query_leakage_bits(256, true);
    EXPECT_LE(std::abs(info - 4.0) / 4.0, 0.005);
}

TEST(Acceptance, Criterion13_CliDeterminism) {
    criterion_banner banner{13, "same seed, different worker counts: byte-identical CSV"};
    auto run_to_file = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        return qpqlab::cli::run(args, out, err);
    };
    auto slurp = [](const char* path) {
        std::ifstream file(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << file.rdbuf();
        return buffer.str();
    };

    ASSERT_EQ(run_to_file({"attack", "--n", "10", "--t", "4", "--concealment", "uniform",
                           "--trials", "20000", "--seed", "7", "--workers", "1", "--out",
                           "acc13_w1.csv"}),
              0);
    ASSERT_EQ(run_to_file({"attack", "--n", "10", "--t", "4", "--concealment", "uniform",
                           "--trials", "20000", "--seed", "7", "--workers", "8", "--out",
                           "acc13_w8.csv"}),
              0);
    const auto attack1 = slurp("acc13_w1.csv");
    EXPECT_FALSE(attack1.empty());
    EXPECT_EQ(attack1, slurp("acc13_w8.csv"));

    ASSERT_EQ(run_to_file({"sweep-t", "--n", "8", "--trials", "2000", "--seed", "11", "--workers",
                           "1", "--out", "acc13_s1.csv"}),
              0);
    ASSERT_EQ(run_to_file({"sweep-t", "--n", "8", "--trials", "2000", "--seed", "11", "--workers",
                           "5", "--out", "acc13_s5.csv"}),
              0);
    const auto sweep1 = slurp("acc13_s1.csv");
    EXPECT_FALSE(sweep1.empty());
    EXPECT_EQ(sweep1, slurp("acc13_s5.csv"));

    for (const char* path : {"acc13_w1.csv", "acc13_w8.csv", "acc13_s1.csv", "acc13_s5.csv"}) {
        std::remove(path);
    }
}
