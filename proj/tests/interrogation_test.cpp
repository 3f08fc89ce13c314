#include "qpqlab/interrogation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qpqlab/rng.hpp"

using namespace qpqlab;

TEST(WalshHadamard, SelfInverse) {
    random_stream rng(61);
    for (std::size_t n : {1u, 3u, 6u, 10u}) {
        const std::size_t dim = std::size_t{1} << n;
        std::vector<cplx> amps(dim);
        for (auto& a : amps) a = cplx{rng.next_double() - 0.5, rng.next_double() - 0.5};
        auto s = state_vector::normalized(std::move(amps));
        auto round_trip = walsh_hadamard(walsh_hadamard(s));
        EXPECT_NEAR(std::norm(inner_product(s, round_trip)), 1.0, 1e-9) << "n=" << n;
        EXPECT_TRUE(walsh_hadamard(s).is_normalized());
    }
    std::vector<cplx> bad(3, cplx{1.0, 0.0});
    EXPECT_THROW(walsh_hadamard_inplace(bad), std::invalid_argument);
}

TEST(BruteForce, ProtocolInitialStateScoresLikeRandomGuessing) {
    for (std::size_t n = 2; n <= 12; ++n) {
        interrogation_spec spec{interrogation_initial::psi_prime0, n, n / 2, {}};
        auto result = interrogate_bruteforce(spec);
        EXPECT_EQ(result.method, zeros_method::brute_force);
        EXPECT_NEAR(result.expected_zeros, static_cast<double>(n) / 2.0, 1e-9) << "n=" << n;
    }
}

TEST(BruteForce, QpqInitialStateGainsHalfABit) {
    for (std::size_t n = 2; n <= 12; ++n) {
        interrogation_spec spec{interrogation_initial::qpq_state, n, n - 1, {}};
        EXPECT_NEAR(interrogate_bruteforce(spec).expected_zeros,
                    static_cast<double>(n) / 2.0 + 0.5, 1e-9)
            << "n=" << n;
    }
}

TEST(BruteForce, UniformSuperpositionReference) {
    for (std::size_t n : {4u, 9u}) {
        interrogation_spec spec{interrogation_initial::uniform_superposition, n, 0, {}};
        const double want = static_cast<double>(n) / 2.0 + std::sqrt(static_cast<double>(n)) / 2.0;
        EXPECT_NEAR(interrogate_bruteforce(spec).expected_zeros, want, 0.05) << "n=" << n;
    }
}

TEST(BruteForce, CapIsEnforced) {
    interrogation_spec spec{interrogation_initial::psi_prime0, 15, 0, {}};
    EXPECT_THROW(interrogate_bruteforce(spec), std::invalid_argument);
    EXPECT_THROW(interrogate_bruteforce(spec, 14), std::invalid_argument);
    spec.n = 15;
    EXPECT_NO_THROW(interrogate_bruteforce(spec, 15));
}

TEST(BruteForce, NonzeroDatabaseCountsMatches) {
    // the estimate grades against the true string, not against zeros
    interrogation_spec spec{interrogation_initial::psi_prime0, 8, 2,
                            {1, 0, 1, 1, 0, 0, 1, 0}};
    EXPECT_NEAR(interrogate_bruteforce(spec).expected_zeros, 4.0, 1e-9);

    interrogation_spec qpq{interrogation_initial::qpq_state, 6, 3, {0, 1, 1, 0, 1, 0}};
    EXPECT_NEAR(interrogate_bruteforce(qpq).expected_zeros, 3.5, 1e-9);
}

TEST(Analytic, MatchesBruteForceWhereBothApply) {
    for (std::size_t n = 2; n <= 12; ++n) {
        for (auto initial : {interrogation_initial::psi_prime0, interrogation_initial::qpq_state}) {
            interrogation_spec spec{initial, n, 0, {}};
            EXPECT_NEAR(expected_zeros_analytic(spec).expected_zeros,
                        interrogate_bruteforce(spec).expected_zeros, 1e-9)
                << "n=" << n;
        }
    }
}

TEST(Analytic, ExtendsToLargeN) {
    for (std::size_t n : {50u, 200u, 537u, 1000u}) {
        interrogation_spec psi0{interrogation_initial::psi_prime0, n, 0, {}};
        EXPECT_NEAR(expected_zeros_analytic(psi0).expected_zeros, static_cast<double>(n) / 2.0,
                    1e-9)
            << "n=" << n;
        interrogation_spec qpq{interrogation_initial::qpq_state, n, 0, {}};
        EXPECT_NEAR(expected_zeros_analytic(qpq).expected_zeros,
                    static_cast<double>(n) / 2.0 + 0.5, 1e-9)
            << "n=" << n;
    }
}

TEST(Analytic, RejectsUnsupportedInputs) {
    interrogation_spec uniform{interrogation_initial::uniform_superposition, 8, 0, {}};
    EXPECT_THROW(expected_zeros_analytic(uniform), std::invalid_argument);
    interrogation_spec nonzero{interrogation_initial::psi_prime0, 4, 0, {0, 1, 0, 0}};
    EXPECT_THROW(expected_zeros_analytic(nonzero), std::invalid_argument);
}

TEST(Analytic, NeverBeatsRandomGuessing) {
    // the protocol initial state estimates exactly N/2 bits, no more than
    // a random guess
    for (std::size_t n = 2; n <= 12; ++n) {
        interrogation_spec spec{interrogation_initial::psi_prime0, n, 0, {}};
        EXPECT_LE(interrogate_bruteforce(spec).expected_zeros,
                  static_cast<double>(n) / 2.0 + 1e-9);
    }
}

TEST(Identities, HandCheckedSmallCase) {
    // N=4: sum t C(3,t-1) = 1 + 6 + 9 + 4 = 20 = 5 * 2^2
    auto report = verify_binomial_identities(4);
    EXPECT_TRUE(report.all_hold);
    // lhs column carries the scaled value 4 * 20 = 80 = 5 * 2^4
    EXPECT_EQ(report.checks[0].lhs, "80");
    EXPECT_EQ(report.checks[0].rhs, "80");
}

TEST(Identities, HoldExactlyUpTo64) {
    for (std::size_t n = 2; n <= 64; ++n) {
        auto report = verify_binomial_identities(n);
        EXPECT_TRUE(report.all_hold) << "n=" << n;
        for (const auto& check : report.checks) {
            EXPECT_TRUE(check.holds) << "n=" << n << " " << check.name;
            EXPECT_EQ(check.lhs, check.rhs) << "n=" << n << " " << check.name;
        }
    }
    EXPECT_THROW(verify_binomial_identities(65), std::invalid_argument);
    EXPECT_THROW(verify_binomial_identities(1), std::invalid_argument);
}

TEST(Interrogation, OutputDistributionNormalized) {
    for (std::size_t n : {3u, 7u, 11u}) {
        interrogation_spec spec{interrogation_initial::psi_prime0, n, 1, {}};
        auto amps = std::vector<cplx>((std::size_t{1} << n), cplx{0.0, 0.0});
        const double half = 1.0 / std::sqrt(2.0);
        const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(n - 1));
        for (std::size_t i = 0; i < n; ++i) {
            amps[std::size_t{1} << i] = cplx{(i == spec.j) ? half : w, 0.0};
        }
        walsh_hadamard_inplace(amps);
        double total = 0.0;
        for (const auto& a : amps) total += std::norm(a);
        EXPECT_NEAR(total, 1.0, 1e-9) << "n=" << n;
    }
}
