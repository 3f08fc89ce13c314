// state_vector.hpp
// Dense complex state vectors over a labeled basis, Born-rule sampling and
// discrimination against an orthonormal set. This is the carrier type for
// every protocol state in the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpqlab/rng.hpp"

namespace qpqlab {

using cplx = std::complex<double>;

inline constexpr double norm_epsilon = 1e-9;  // unit-norm tolerance
inline constexpr double orth_epsilon = 1e-9;  // orthonormality tolerance

class state_vector {
public:
    explicit state_vector(std::vector<cplx> amps) : amps_(std::move(amps)) {
        if (amps_.empty()) {
            throw std::invalid_argument("state_vector: dimension must be >= 1");
        }
    }

    static state_vector basis(std::size_t dim, std::size_t index) {
        if (index >= dim) {
            throw std::out_of_range("state_vector::basis: index out of range");
        }
        std::vector<cplx> amps(dim, cplx{0.0, 0.0});
        amps[index] = cplx{1.0, 0.0};
        return state_vector(std::move(amps));
    }

    // Scales the given amplitudes to unit norm.
    static state_vector normalized(std::vector<cplx> amps) {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        if (s <= 0.0) {
            throw std::invalid_argument("state_vector::normalized: zero vector");
        }
        double inv = 1.0 / std::sqrt(s);
        for (auto& a : amps) a *= inv;
        return state_vector(std::move(amps));
    }

    std::size_t dim() const { return amps_.size(); }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    bool is_normalized(double eps = norm_epsilon) const {
        return std::abs(norm() - 1.0) <= eps;
    }

private:
    std::vector<cplx> amps_;
};

// <a|b> with conjugation on a.
inline cplx inner_product(const state_vector& a, const state_vector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner_product: dimension mismatch ("
                                    + std::to_string(a.dim()) + " vs "
                                    + std::to_string(b.dim()) + ")");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline std::vector<double> born_distribution(const state_vector& s) {
    std::vector<double> p(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) p[i] = std::norm(s[i]);
    return p;
}

struct measurement_outcome {
    static constexpr std::size_t other = std::numeric_limits<std::size_t>::max();

    std::size_t index;       // basis index, or `other`
    state_vector collapsed;  // post-measurement state
    double probability;      // Born probability of the reported index

    bool is_other() const { return index == other; }
};

namespace detail {

inline void require_normalized(const state_vector& s, const char* who) {
    if (!s.is_normalized()) {
        throw std::invalid_argument(std::string(who) + ": state is not normalized");
    }
}

// Sample an index from a (sub)probability vector; the tail beyond the listed
// entries belongs to the caller.
inline std::size_t sample_cdf(const std::vector<double>& p, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return p.size();  // rounding tail
}

} // namespace detail

// Projective measurement in the computational basis.
inline measurement_outcome measure_computational(const state_vector& s, random_stream& rng) {
    detail::require_normalized(s, "measure_computational");
    auto p = born_distribution(s);
    std::size_t idx = detail::sample_cdf(p, rng.next_double());
    if (idx >= s.dim()) idx = s.dim() - 1;  // u landed in the rounding tail
    return measurement_outcome{idx, state_vector::basis(s.dim(), idx), p[idx]};
}

namespace detail {

inline void require_orthonormal(std::span<const state_vector> basis, std::size_t dim) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].dim() != dim) {
            throw std::invalid_argument("discriminate: basis dimension mismatch");
        }
        for (std::size_t k = i; k < basis.size(); ++k) {
            const double want = (i == k) ? 1.0 : 0.0;
            if (std::abs(inner_product(basis[i], basis[k]) - want) > orth_epsilon) {
                throw std::invalid_argument("discriminate: basis set is not orthonormal");
            }
        }
    }
}

} // namespace detail

// Exact outcome probabilities of discriminating `s` against an orthonormal
// set: one entry per basis vector plus a trailing entry for "none of them".
inline std::vector<double> discrimination_probabilities(const state_vector& s,
                                                        std::span<const state_vector> basis) {
    detail::require_normalized(s, "discrimination_probabilities");
    detail::require_orthonormal(basis, s.dim());
    std::vector<double> p;
    p.reserve(basis.size() + 1);
    double covered = 0.0;
    for (const auto& b : basis) {
        double pk = std::norm(inner_product(b, s));
        p.push_back(pk);
        covered += pk;
    }
    p.push_back(covered < 1.0 ? 1.0 - covered : 0.0);
    return p;
}

// Sampled discrimination. Outcome `other` collapses onto the normalized
// projection of `s` onto the orthogonal complement of the basis set.
inline measurement_outcome discriminate(const state_vector& s,
                                        std::span<const state_vector> basis,
                                        random_stream& rng) {
    auto p = discrimination_probabilities(s, basis);
    std::size_t idx = detail::sample_cdf(p, rng.next_double());
    if (idx > basis.size()) idx = basis.size();
    if (idx < basis.size()) {
        return measurement_outcome{idx, basis[idx], p[idx]};
    }
    // residual = s - sum_k <b_k|s> b_k
    std::vector<cplx> residual(s.amplitudes());
    for (const auto& b : basis) {
        cplx c = inner_product(b, s);
        for (std::size_t i = 0; i < residual.size(); ++i) {
            residual[i] -= c * b[i];
        }
    }
    return measurement_outcome{measurement_outcome::other,
                               state_vector::normalized(std::move(residual)),
                               p[basis.size()]};
}

} // namespace qpqlab
