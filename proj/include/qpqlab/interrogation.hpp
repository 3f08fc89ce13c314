// interrogation.hpp
// Quantum-interrogation estimate of how many database bits one oracle call
// can leak: phase oracle, then H^(x)N, then read the expected number of
// correctly guessed bits off the output distribution. Brute force on the full
// 2^N-dimensional space for small N, binomial-sum evaluation for any N.
//
// Register convention: basis label y in [0, 2^N) is the bit string with bit i
// of y being position i of the string; the one-hot string for index i is the
// label 1 << i.

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qpqlab/state_vector.hpp"

namespace qpqlab {

enum class interrogation_initial {
    psi_prime0,            // (|x_j> + sum_{j'!=j} |x_j'>/sqrt(N-1)) / sqrt(2)
    qpq_state,             // (|0...0> + |x_j>) / sqrt(2)
    uniform_superposition, // |0...0>/sqrt(2) + sum_i |x_i>/sqrt(2N)
};

struct interrogation_spec {
    interrogation_initial initial = interrogation_initial::psi_prime0;
    std::size_t n = 2;
    std::size_t j = 0;                  // ignored by uniform_superposition
    std::vector<std::uint8_t> database; // empty = all zeros
};

inline constexpr std::size_t default_brute_cap = 14;

enum class zeros_method { brute_force, analytic };

struct zeros_result {
    double expected_zeros = 0.0;  // expected number of correctly estimated bits
    zeros_method method = zeros_method::brute_force;
};

// Normalized H^(x)n on a dim 2^n amplitude vector, in place.
inline void walsh_hadamard_inplace(std::vector<cplx>& amps) {
    const std::size_t dim = amps.size();
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("walsh_hadamard: dimension must be a power of two");
    }
    for (std::size_t h = 1; h < dim; h <<= 1) {
        for (std::size_t base = 0; base < dim; base += 2 * h) {
            for (std::size_t i = base; i < base + h; ++i) {
                const cplx x = amps[i];
                const cplx y = amps[i + h];
                amps[i] = x + y;
                amps[i + h] = x - y;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& a : amps) a *= scale;
}

inline state_vector walsh_hadamard(const state_vector& s) {
    std::vector<cplx> amps(s.amplitudes());
    walsh_hadamard_inplace(amps);
    return state_vector(std::move(amps));
}

namespace detail {

inline void validate_interrogation(const interrogation_spec& spec) {
    if (spec.n < 2) throw std::invalid_argument("interrogation: N must be >= 2");
    if (spec.initial != interrogation_initial::uniform_superposition && spec.j >= spec.n) {
        throw std::out_of_range("interrogation: j out of range");
    }
    if (!spec.database.empty() && spec.database.size() != spec.n) {
        throw std::invalid_argument("interrogation: database length must equal N");
    }
}

inline std::vector<cplx> interrogation_initial_state(const interrogation_spec& spec) {
    const std::size_t dim = std::size_t{1} << spec.n;
    std::vector<cplx> amps(dim, cplx{0.0, 0.0});
    const double half = 1.0 / std::sqrt(2.0);
    switch (spec.initial) {
        case interrogation_initial::psi_prime0: {
            const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(spec.n - 1));
            for (std::size_t i = 0; i < spec.n; ++i) {
                amps[std::size_t{1} << i] = cplx{(i == spec.j) ? half : w, 0.0};
            }
            break;
        }
        case interrogation_initial::qpq_state:
            amps[0] = cplx{half, 0.0};
            amps[std::size_t{1} << spec.j] = cplx{half, 0.0};
            break;
        case interrogation_initial::uniform_superposition: {
            const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(spec.n));
            amps[0] = cplx{half, 0.0};
            for (std::size_t i = 0; i < spec.n; ++i) {
                amps[std::size_t{1} << i] = cplx{w, 0.0};
            }
            break;
        }
    }
    return amps;
}

} // namespace detail

// Full-space evaluation: oracle phases (-1)^(x . A), H^(x)N, then the
// expectation of matches(y, A) over the output distribution (zeros(y) when A
// is all zero). N is capped because the state has 2^N amplitudes.
inline zeros_result interrogate_bruteforce(const interrogation_spec& spec,
                                           std::size_t cap = default_brute_cap) {
    detail::validate_interrogation(spec);
    if (spec.n > cap) {
        throw std::invalid_argument("interrogate_bruteforce: N=" + std::to_string(spec.n)
                                    + " exceeds the brute-force cap " + std::to_string(cap));
    }

    std::uint64_t database_mask = 0;
    for (std::size_t i = 0; i < spec.database.size(); ++i) {
        if (spec.database[i]) database_mask |= std::uint64_t{1} << i;
    }

    auto amps = detail::interrogation_initial_state(spec);
    if (database_mask != 0) {
        for (std::size_t x = 0; x < amps.size(); ++x) {
            if (std::popcount(x & database_mask) & 1) amps[x] = -amps[x];
        }
    }
    walsh_hadamard_inplace(amps);

    double expected = 0.0;
    for (std::size_t y = 0; y < amps.size(); ++y) {
        const double p = std::norm(amps[y]);
        if (p == 0.0) continue;
        const auto matches = spec.n - std::popcount(y ^ database_mask);
        expected += p * static_cast<double>(matches);
    }
    return zeros_result{expected, zeros_method::brute_force};
}

// Binomial-sum evaluation of the same expectation for the two protocol
// initial states, with the all-zero database. Splitting the output strings by
// the bit at position j, the coefficient of a string with t zeros is a_t
// (bit 0) or b_t (bit 1):
//   a_t = (1/sqrt(2) - (N+1)/sqrt(2(N-1)) + sqrt(2) t/sqrt(N-1)) / sqrt(2^N)
//   b_t = (-1/sqrt(2) - sqrt(N-1)/sqrt(2) + sqrt(2) t/sqrt(N-1)) / sqrt(2^N)
// and the expectation is sum_t t [C(N-1,t-1) a_t^2 + C(N-1,t) b_t^2].
// Weights are carried in log space and accumulated with compensated
// summation, which keeps the result stable out to N ~ 10^3.
inline zeros_result expected_zeros_analytic(const interrogation_spec& spec) {
    detail::validate_interrogation(spec);
    if (spec.initial == interrogation_initial::uniform_superposition) {
        throw std::invalid_argument("expected_zeros_analytic: unsupported initial state");
    }
    for (auto b : spec.database) {
        if (b != 0) {
            throw std::invalid_argument("expected_zeros_analytic: database must be all zeros");
        }
    }

    const double n = static_cast<double>(spec.n);
    const double log2v = std::log(2.0);
    auto log_choose = [](double m, double k) {
        return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
    };

    double sum = 0.0, compensation = 0.0;
    auto accumulate = [&](double term) {
        const double y = term - compensation;
        const double next = sum + y;
        compensation = (next - sum) - y;
        sum = next;
    };

    for (std::size_t ti = 1; ti <= spec.n; ++ti) {
        const double t = static_cast<double>(ti);
        double a_sq_scaled, b_sq_scaled;  // a_t^2 * 2^N and b_t^2 * 2^N
        if (spec.initial == interrogation_initial::psi_prime0) {
            const double root = std::sqrt(n - 1.0);
            const double a = 1.0 / std::sqrt(2.0) - (n + 1.0) / std::sqrt(2.0 * (n - 1.0))
                             + std::sqrt(2.0) * t / root;
            const double b = -1.0 / std::sqrt(2.0) - root / std::sqrt(2.0)
                             + std::sqrt(2.0) * t / root;
            a_sq_scaled = a * a;
            b_sq_scaled = b * b;
        } else {  // qpq_state: all weight on strings with bit j clear, coefficient sqrt(2)
            a_sq_scaled = 2.0;
            b_sq_scaled = 0.0;
        }
        accumulate(t * std::exp(log_choose(n - 1.0, t - 1.0) - n * log2v) * a_sq_scaled);
        if (ti <= spec.n - 1 && b_sq_scaled != 0.0) {
            accumulate(t * std::exp(log_choose(n - 1.0, t) - n * log2v) * b_sq_scaled);
        }
    }
    return zeros_result{sum, zeros_method::analytic};
}

// ---------------------------------------------------------------------------
// The six power-sum identities the analytic route rests on, checked in exact
// integer arithmetic. Both sides fit in 128 bits for N <= 64 (the largest
// value is (N+1)(N^2+5N-2) 2^N ~ 2^83); fractional powers of two at small N
// are avoided by scaling both sides up to a common 2^N factor.
// ---------------------------------------------------------------------------

struct identity_check {
    std::string name;
    std::string lhs;
    std::string rhs;
    bool holds = false;
};

struct binomial_identity_report {
    std::array<identity_check, 6> checks;
    bool all_hold = false;
};

namespace detail {

using uint128 = unsigned __int128;

inline std::string to_string_u128(uint128 v) {
    if (v == 0) return "0";
    std::string digits;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return std::string(digits.rbegin(), digits.rend());
}

} // namespace detail

inline binomial_identity_report verify_binomial_identities(std::size_t n) {
    if (n < 2 || n > 64) {
        throw std::invalid_argument("verify_binomial_identities: N must be in [2, 64]");
    }
    using detail::uint128;

    // Pascal row C(n-1, 0..n-1)
    std::vector<uint128> choose(n, 0);
    choose[0] = 1;
    for (std::size_t row = 1; row <= n - 1; ++row) {
        for (std::size_t k = row; k > 0; --k) choose[k] += choose[k - 1];
    }

    uint128 s1 = 0, s3 = 0, s5 = 0;  // sums over t of t^m C(n-1, t-1), t = 1..n
    uint128 s2 = 0, s4 = 0, s6 = 0;  // sums over t of t^m C(n-1, t),   t = 0..n-1
    for (uint128 t = 1; t <= n; ++t) {
        const uint128 c = choose[static_cast<std::size_t>(t) - 1];
        s1 += t * c;
        s3 += t * t * c;
        s5 += t * t * t * c;
    }
    for (uint128 t = 0; t <= n - 1; ++t) {
        const uint128 c = choose[static_cast<std::size_t>(t)];
        s2 += t * c;
        s4 += t * t * c;
        s6 += t * t * t * c;
    }

    const uint128 nn = n;
    const uint128 pow2n = uint128{1} << n;
    struct scaled {
        const char* name;
        uint128 lhs_scaled;   // lhs * scale, scale chosen so rhs * scale = coeff * 2^n
        uint128 rhs_scaled;
    };
    const scaled rows[6] = {
        {"sum t C(N-1,t-1)   = (N+1) 2^(N-2)", 4 * s1, (nn + 1) * pow2n},
        {"sum t C(N-1,t)     = (N-1) 2^(N-2)", 4 * s2, (nn - 1) * pow2n},
        {"sum t^2 C(N-1,t-1) = N(N+3) 2^(N-3)", 8 * s3, nn * (nn + 3) * pow2n},
        {"sum t^2 C(N-1,t)   = N(N-1) 2^(N-3)", 8 * s4, nn * (nn - 1) * pow2n},
        {"sum t^3 C(N-1,t-1) = (N+1)(N^2+5N-2) 2^(N-4)", 16 * s5,
         (nn + 1) * (nn * nn + 5 * nn - 2) * pow2n},
        {"sum t^3 C(N-1,t)   = (N-1)^2 (N+2) 2^(N-4)", 16 * s6,
         (nn - 1) * (nn - 1) * (nn + 2) * pow2n},
    };

    binomial_identity_report report;
    report.all_hold = true;
    for (std::size_t i = 0; i < 6; ++i) {
        const bool holds = rows[i].lhs_scaled == rows[i].rhs_scaled;
        report.checks[i] = identity_check{rows[i].name,
                                          detail::to_string_u128(rows[i].lhs_scaled),
                                          detail::to_string_u128(rows[i].rhs_scaled),
                                          holds};
        report.all_hold = report.all_hold && holds;
    }
    return report;
}

} // namespace qpqlab
