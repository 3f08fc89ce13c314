// adversary.hpp
// Dishonest-database strategies against both protocol forms, and the exact
// detection / leakage analytics they give rise to. Every closed form here has
// an independent cross-check: the amplitude route for the per-(t,a,b)
// detection probability, quadrature for the fake-parameter average, and
// exhaustive enumeration for the recovery probability and the leakage.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "qpqlab/protocol.hpp"
#include "qpqlab/state_vector.hpp"

namespace qpqlab {

// ---------------------------------------------------------------------------
// Fake states the database can return instead of an honest protocol state.
// ---------------------------------------------------------------------------

struct uniform_fake {};                                  // sum_i |i>/sqrt(N)
struct outcome_state_fake { std::size_t k; };            // |k>
struct confirmation_probe_fake { std::size_t k, l; };    // (|k>|1> + |l>|0>)/sqrt(2)
struct param_fake { double a, b; std::size_t k; };       // a|k> + b sum_{k'!=k} |k'>
struct general_fake { std::vector<cplx> alpha; };        // sum_i alpha_i |i>

using fake_state = std::variant<uniform_fake, outcome_state_fake, confirmation_probe_fake,
                                param_fake, general_fake>;

// Materialize a fake as a query-register state. The confirmation probe lives
// on the composite register and is rejected here; see probe_state.
inline state_vector fake_query_state(const fake_state& fake, std::size_t n) {
    if (n < 2) throw std::invalid_argument("fake_query_state: N must be >= 2");
    return std::visit(
        [n](const auto& f) -> state_vector {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, uniform_fake>) {
                const double w = 1.0 / std::sqrt(static_cast<double>(n));
                return state_vector(std::vector<cplx>(n, cplx{w, 0.0}));
            } else if constexpr (std::is_same_v<T, outcome_state_fake>) {
                return state_vector::basis(n, f.k);
            } else if constexpr (std::is_same_v<T, param_fake>) {
                if (f.k >= n) throw std::out_of_range("param_fake: k out of range");
                const double residue = f.a * f.a + static_cast<double>(n - 1) * f.b * f.b;
                if (std::abs(residue - 1.0) > norm_epsilon) {
                    throw std::invalid_argument("param_fake: a^2 + (N-1) b^2 must equal 1");
                }
                std::vector<cplx> amps(n, cplx{f.b, 0.0});
                amps[f.k] = cplx{f.a, 0.0};
                return state_vector(std::move(amps));
            } else if constexpr (std::is_same_v<T, general_fake>) {
                if (f.alpha.size() != n) {
                    throw std::invalid_argument("general_fake: amplitude count must equal N");
                }
                state_vector s{std::vector<cplx>(f.alpha)};
                if (!s.is_normalized()) {
                    throw std::invalid_argument("general_fake: amplitudes are not normalized");
                }
                return s;
            } else {
                throw std::invalid_argument(
                    "fake_query_state: confirmation probe lives on the query (x) answer register");
            }
        },
        fake);
}

// The round-one probe (|k>|1> + |l>|0>)/sqrt(2) on the composite register.
inline state_vector probe_state(const confirmation_probe_fake& f, std::size_t n) {
    if (f.k >= n || f.l >= n) throw std::out_of_range("probe_state: index out of range");
    if (f.k == f.l) throw std::invalid_argument("probe_state: k and l must differ");
    std::vector<cplx> amps(2 * n, cplx{0.0, 0.0});
    amps[2 * f.k + 1] = cplx{1.0 / std::sqrt(2.0), 0.0};
    amps[2 * f.l] = cplx{1.0 / std::sqrt(2.0), 0.0};
    return state_vector(std::move(amps));
}

// ---------------------------------------------------------------------------
// Detection probabilities.
// ---------------------------------------------------------------------------

namespace detail {

inline double clamp_probability(double p) {
    if (p < 0.0 && p > -1e-12) return 0.0;
    if (p > 1.0 && p < 1.0 + 1e-12) return 1.0;
    return p;
}

} // namespace detail

// p = 1 - |<phi|psi'3+>|^2 - |<phi|psi'3->|^2, straight from amplitudes.
inline double detection_probability(const fake_state& fake, const query_spec& q, std::size_t n) {
    q.validate_for(n);
    state_vector phi = fake_query_state(fake, n);
    auto finals = expected_finals(q, n);
    double p = 1.0 - std::norm(inner_product(finals.first, phi))
                   - std::norm(inner_product(finals.second, phi));
    return detail::clamp_probability(p);
}

namespace detail {

// Closed form for the a|k> + b sum|k'> fake with k in T, |T| = t. Valid for
// real (non-integer) t as well; the integral average over fake parameters
// uses that extension.
inline double detection_prob_param_real(double t, double a, double b) {
    return 1.0 - 2.0 * a * b + b * b - b * b * t - (a * a + b * b - 2.0 * a * b) / t;
}

} // namespace detail

// p_{t,a,b} = 1 - 2ab + b^2 - b^2 t - (a^2 + b^2 - 2ab)/t.
inline double detection_prob_param(std::size_t t, double a, double b) {
    if (t == 0) throw std::invalid_argument("detection_prob_param: t must be >= 1");
    return detail::detection_prob_param_real(static_cast<double>(t), a, b);
}

// p_{t,alpha}: the same quantity under a = cos(alpha), b = sin(alpha)/sqrt(N-1).
inline double detection_prob_alpha(std::size_t n, double t, double alpha) {
    if (n < 2) throw std::invalid_argument("detection_prob_alpha: N must be >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("detection_prob_alpha: t must be positive");
    const double a = std::cos(alpha);
    const double b = std::sin(alpha) / std::sqrt(static_cast<double>(n - 1));
    return detail::detection_prob_param_real(t, a, b);
}

// ---------------------------------------------------------------------------
// Attack simulations.
// ---------------------------------------------------------------------------

struct attack_report {
    std::size_t measured_k = 0;
    std::optional<bool> confirmed_j;  // set iff the confirmation probe was used
    bool detected = false;
    int user_answer = answer_result::unknown;
};

struct detection_stats {
    std::size_t trials = 0;
    std::size_t detections = 0;
    double p_hat = 0.0;
    double analytic_p = 0.0;
    double three_sigma = 0.0;
};

inline double three_sigma_bound(double p, std::size_t trials) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

inline detection_stats make_detection_stats(std::size_t trials, std::size_t detections,
                                            double analytic_p) {
    return detection_stats{trials, detections,
                           static_cast<double>(detections) / static_cast<double>(trials),
                           analytic_p, three_sigma_bound(analytic_p, trials)};
}

// Computational-basis measurement on |psi'_0>, then the probe round: the
// database sends (|k>|1> + |l>|0>)/sqrt(2), the honest user applies the
// controlled xor, and the database discriminates the two (orthogonal)
// possible returns. confirmed_j is therefore exact.
inline attack_report confirmation_attack(const database_table& table, const query_spec& q,
                                         random_stream& rng) {
    const std::size_t n = table.size();
    q.validate_for(n);

    auto measured = measure_computational(prepare_initial(q, n), rng);
    const std::size_t k = measured.index;
    std::size_t l = rng.next_index(n - 1);
    if (l >= k) ++l;

    state_vector returned = controlled_xor(probe_state({k, l}, n), q.j());

    std::vector<cplx> flipped(2 * n, cplx{0.0, 0.0});
    flipped[2 * k + 1] = cplx{-1.0 / std::sqrt(2.0), 0.0};
    flipped[2 * l] = cplx{1.0 / std::sqrt(2.0), 0.0};
    const state_vector basis[2] = {state_vector(std::move(flipped)), probe_state({k, l}, n)};
    auto outcome = discriminate(returned, basis, rng);

    attack_report report;
    report.measured_k = k;
    report.confirmed_j = (outcome.index == 0);
    return report;
}

// Maps (measured k, confirmed?) to the state returned for concealment.
using concealment_policy = std::function<fake_state(std::size_t k, bool confirmed_j)>;

// Confirmation attack followed by the concealment round; the user runs the
// final discriminating measurement on whatever the policy returns.
inline attack_report full_attack(const database_table& table, const query_spec& q,
                                 const concealment_policy& policy, random_stream& rng) {
    const std::size_t n = table.size();
    attack_report report = confirmation_attack(table, q, rng);

    state_vector fake = fake_query_state(policy(report.measured_k, *report.confirmed_j), n);
    auto finals = expected_finals(q, n);
    const state_vector basis[2] = {finals.first, finals.second};
    auto outcome = discriminate(fake, basis, rng);

    if (outcome.is_other()) {
        report.detected = true;
    } else {
        report.user_answer = static_cast<int>(outcome.index);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Closed-form analytics: optimal fakes, detection averages, recovery, leakage.
// ---------------------------------------------------------------------------

// The minimizing fake parameters: a = 2/sqrt(N+3), b = 1/sqrt(N+3).
inline param_fake optimal_fake(std::size_t n, std::size_t k) {
    if (n < 2) throw std::invalid_argument("optimal_fake: N must be >= 2");
    if (k >= n) throw std::out_of_range("optimal_fake: k out of range");
    const double root = std::sqrt(static_cast<double>(n) + 3.0);
    return param_fake{2.0 / root, 1.0 / root, k};
}

namespace concealment {

inline concealment_policy always_uniform() {
    return [](std::size_t, bool) -> fake_state { return uniform_fake{}; };
}

inline concealment_policy outcome_state() {
    return [](std::size_t k, bool) -> fake_state { return outcome_state_fake{k}; };
}

// |j> when the probe confirmed k = j, else the minimizing fake around k.
inline concealment_policy optimal(std::size_t n) {
    return [n](std::size_t k, bool confirmed) -> fake_state {
        if (confirmed) return outcome_state_fake{k};
        return optimal_fake(n, k);
    };
}

// Fake-parameter ignorance model: |j> when confirmed, otherwise a real-valued
// fake with alpha drawn uniformly from [0, pi/2]. The policy draws from the
// given stream, so construct one per trial.
inline concealment_policy random_alpha(std::size_t n, random_stream& rng) {
    return [n, &rng](std::size_t k, bool confirmed) -> fake_state {
        if (confirmed) return outcome_state_fake{k};
        const double alpha = rng.next_double() * std::numbers::pi / 2.0;
        return param_fake{std::cos(alpha),
                          std::sin(alpha) / std::sqrt(static_cast<double>(n - 1)), k};
    };
}

} // namespace concealment

namespace detail {

// log of C(n-1, t) via lgamma; fine for the normalized weights below.
inline double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1))
           - std::lgamma(static_cast<double>(n - k + 1));
}

// log(2^(n-1) - 1), overflow-free.
inline double log_nonempty_subsets(std::size_t n) {
    const double log2v = std::log(2.0);
    return static_cast<double>(n - 1) * log2v
           + std::log1p(-std::exp(-static_cast<double>(n - 1) * log2v));
}

// Average of f(t) over T uniform on the 2^(N-1)-1 nonempty rhetoric sets,
// i.e. sum_t C(N-1,t) f(t) / (2^(N-1)-1) with log-space weights.
template <typename F>
double subset_average(std::size_t n, F&& f) {
    const double log_total = log_nonempty_subsets(n);
    double acc = 0.0;
    for (std::size_t t = 1; t <= n - 1; ++t) {
        acc += std::exp(log_choose(n - 1, t) - log_total) * f(t);
    }
    return acc;
}

inline void require_param_pair(std::size_t n, double a, double b) {
    if (n < 2) throw std::invalid_argument("expected detection: N must be >= 2");
    if (std::abs(a * a + static_cast<double>(n - 1) * b * b - 1.0) > norm_epsilon) {
        throw std::invalid_argument("expected detection: a^2 + (N-1) b^2 must equal 1");
    }
}

} // namespace detail

// Exact pbar_{a,b} = sum_t C(N-1,t) p_{t,a,b} / (2^(N-1)-1). No approximation.
inline double expected_detection_over_subsets(std::size_t n, double a, double b) {
    detail::require_param_pair(n, a, b);
    return detail::subset_average(n, [&](std::size_t t) {
        return detection_prob_param(t, a, b);
    });
}

// Binomial-bound approximation of the same average:
// 1/2 + (a-2b)^2/2 - b^2 - 4 (a-b)^2 / N. Reported next to the exact sum;
// the gap shrinks with N.
inline double expected_detection_over_subsets_approx(std::size_t n, double a, double b) {
    detail::require_param_pair(n, a, b);
    const double d = a - 2.0 * b;
    const double e = a - b;
    return 0.5 + 0.5 * d * d - b * b - e * e * 4.0 / static_cast<double>(n);
}

// E[t] over uniform nonempty rhetoric sets: (N-1) 2^(N-2) / (2^(N-1)-1).
inline double mean_rhetoric_count(std::size_t n) {
    if (n < 2) throw std::invalid_argument("mean_rhetoric_count: N must be >= 2");
    const double tiny = std::ldexp(1.0, -static_cast<int>(n - 1));
    return static_cast<double>(n - 1) / (2.0 * (1.0 - tiny));
}

// E[1/t] over the same distribution (exact finite sum).
inline double mean_inverse_rhetoric_count(std::size_t n) {
    if (n < 2) throw std::invalid_argument("mean_inverse_rhetoric_count: N must be >= 2");
    return detail::subset_average(n, [](std::size_t t) {
        return 1.0 / static_cast<double>(t);
    });
}

// pbar_t: the average of p_{t,alpha} over alpha uniform on [0, pi/2],
// in closed form. Accepts real t in (0, N-1] so the optimum t* can be
// evaluated directly; integer sweeps use t = 1..N-1.
inline double expected_detection_over_alpha(std::size_t n, double t) {
    if (n < 2) throw std::invalid_argument("expected_detection_over_alpha: N must be >= 2");
    if (!(t > 0.0) || t > static_cast<double>(n - 1)) {
        throw std::invalid_argument("expected_detection_over_alpha: t out of range");
    }
    using std::numbers::pi;
    const double m = static_cast<double>(n - 1);
    const double head = (2.0 * static_cast<double>(n) - 1.0) * pi / (4.0 * m) - 1.0 / std::sqrt(m);
    const double inv_coeff = static_cast<double>(n) * pi / (4.0 * m) - 1.0 / std::sqrt(m);
    const double lin_coeff = pi / (4.0 * m);
    return (2.0 / pi) * (head - inv_coeff / t - lin_coeff * t);
}

// Composite-Simpson companion for the same average; shares only p_{t,alpha}
// with the closed form, not the integration.
inline double expected_detection_over_alpha_quadrature(std::size_t n, double t,
                                                       std::size_t intervals = 2048) {
    if (n < 2) throw std::invalid_argument("expected_detection_over_alpha_quadrature: N must be >= 2");
    if (!(t > 0.0) || t > static_cast<double>(n - 1)) {
        throw std::invalid_argument("expected_detection_over_alpha_quadrature: t out of range");
    }
    using std::numbers::pi;
    if (intervals % 2 != 0) ++intervals;
    const double h = (pi / 2.0) / static_cast<double>(intervals);
    double acc = detection_prob_alpha(n, t, 0.0) + detection_prob_alpha(n, t, pi / 2.0);
    for (std::size_t i = 1; i < intervals; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * detection_prob_alpha(n, t, h * static_cast<double>(i));
    }
    return (2.0 / pi) * (h / 3.0) * acc;
}

// t* = sqrt(N - (4/pi) sqrt(N-1)), the rhetoric-query count maximizing pbar_t.
inline double optimal_t(std::size_t n) {
    if (n < 2) throw std::invalid_argument("optimal_t: N must be >= 2");
    using std::numbers::pi;
    return std::sqrt(static_cast<double>(n)
                     - (4.0 / pi) * std::sqrt(static_cast<double>(n - 1)));
}

// Integer t*, clamped to [1, N-1]; floor/ceil tie broken by comparing pbar_t.
inline std::size_t optimal_t_int(std::size_t n) {
    const double target = optimal_t(n);
    const double maxi = static_cast<double>(n - 1);
    auto clamp = [&](double v) {
        return static_cast<std::size_t>(std::min(std::max(v, 1.0), maxi));
    };
    const std::size_t lo = clamp(std::floor(target));
    const std::size_t hi = clamp(std::ceil(target));
    if (lo == hi) return lo;
    const double p_lo = expected_detection_over_alpha(n, static_cast<double>(lo));
    const double p_hi = expected_detection_over_alpha(n, static_cast<double>(hi));
    return p_hi > p_lo ? hi : lo;
}

// Peak detection probability for the computational-basis
// attack: 1/2 - 1/(pi sqrt(N-1)) - (2 t* - 1)/(4 (N-1)). Equals pbar_{t*}/2.
inline double p_maxi(std::size_t n) {
    if (n < 2) throw std::invalid_argument("p_maxi: N must be >= 2");
    using std::numbers::pi;
    const double m = static_cast<double>(n - 1);
    const double tstar = optimal_t(n);
    return 0.5 - 1.0 / (pi * std::sqrt(m)) - (2.0 * tstar - 1.0) / (4.0 * m);
}

// q = 1/(2 (2^(N-1)-1)) + 1/((N-1) 2^(N-1)): the chance the database guesses
// |psi'_0> back after a computational-basis outcome.
inline double recovery_probability(std::size_t n) {
    if (n < 2) throw std::invalid_argument("recovery_probability: N must be >= 2");
    const double inv = std::ldexp(1.0, -static_cast<int>(n - 1));  // 2^-(N-1)
    return inv / (2.0 * (1.0 - inv)) + inv / static_cast<double>(n - 1);
}

// Exhaustive companion: enumerate every (j, T) pair and every measurement
// branch, count the consistent candidate states explicitly, and average the
// uniform-guess success probability. Small N only.
inline double recovery_probability_enumerated(std::size_t n) {
    if (n < 2) throw std::invalid_argument("recovery_probability_enumerated: N must be >= 2");
    if (n > 16) {
        throw std::invalid_argument("recovery_probability_enumerated: enumeration is for N <= 16");
    }
    const std::uint32_t full = (1u << n) - 1u;

    // candidate counts per measured k, by brute enumeration of (j', T') pairs
    std::vector<double> with_j(n, 0.0);     // #{(j',T') : j' = k}
    std::vector<double> with_probe(n, 0.0); // #{(j',T') : j' != k, k in T'}
    for (std::size_t jp = 0; jp < n; ++jp) {
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            if ((mask >> jp) & 1u) continue;
            with_j[jp] += 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != jp && ((mask >> k) & 1u)) with_probe[k] += 1.0;
            }
        }
    }

    const double pair_weight = 1.0 / (static_cast<double>(n) * with_j[0]);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            if ((mask >> j) & 1u) continue;
            const int t = std::popcount(mask);
            double success = 0.5 / with_j[j];
            for (std::size_t k = 0; k < n; ++k) {
                if ((mask >> k) & 1u) {
                    success += (0.5 / static_cast<double>(t)) / with_probe[k];
                }
            }
            total += pair_weight * success;
        }
    }
    return total;
}

// Exact mutual information (bits) between the uniform query j and what a
// computational-basis attack on the basic form observes: the outcome k alone,
// or the pair (k, k == j) once the probe round resolved the confirmation.
// Computed by enumerating the joint distribution, not from a closed form.
inline double query_leakage_bits(std::size_t n, bool with_confirmation) {
    if (n < 2) throw std::invalid_argument("query_leakage_bits: N must be >= 2");
    const double pj = 1.0 / static_cast<double>(n);
    const double p_hit = 0.5;
    const double p_miss = 1.0 / (2.0 * static_cast<double>(n - 1));

    // observation id: k for plain measurement, k + n*confirmed with the probe
    const std::size_t obs_count = with_confirmation ? 2 * n : n;
    std::vector<double> marginal(obs_count, 0.0);
    std::vector<std::vector<double>> joint(n, std::vector<double>(obs_count, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double pk = (k == j) ? p_hit : p_miss;
            std::size_t obs = k;
            if (with_confirmation && k == j) obs += n;
            joint[j][obs] += pj * pk;
            marginal[obs] += pj * pk;
        }
    }
    double info = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t obs = 0; obs < obs_count; ++obs) {
            const double p = joint[j][obs];
            if (p > 0.0) info += p * std::log2(p / (pj * marginal[obs]));
        }
    }
    return info;
}

} // namespace qpqlab
