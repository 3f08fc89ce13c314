// protocol.hpp
// The honest two-round private-query protocol, in its basic form (every index
// other than the true query is a rhetoric query) and its randomized form (the
// user picks a secret nonempty rhetoric set T).
//
// Register conventions: the query register has one basis label per database
// index, 0..N-1. The query (x) answer composite uses index = query*2 + bit.
// The controlled-xor ancilla (|0>-|1>)/sqrt(2) is never stored: it factors out
// of the protocol as a pure phase kickback, so the operation is a conditional
// phase flip on |j>|1>. Transcript accounting still counts the qubits the
// wire protocol transmits.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qpqlab/state_vector.hpp"

namespace qpqlab {

class database_table {
public:
    explicit database_table(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        if (bits_.size() < 2) {
            throw std::invalid_argument("database_table: need at least 2 items");
        }
        for (auto b : bits_) {
            if (b > 1) throw std::invalid_argument("database_table: items must be bits");
        }
    }

    static database_table random(std::size_t n, random_stream& rng) {
        std::vector<std::uint8_t> bits(n);
        for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
        return database_table(std::move(bits));
    }

    std::size_t size() const { return bits_.size(); }
    int bit(std::size_t i) const { return bits_.at(i); }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
    std::vector<std::uint8_t> bits_;
};

enum class query_mode { basic, randomized };

// True query j plus the rhetoric set T (sorted, unique, j not in T).
class query_spec {
public:
    static query_spec basic(std::size_t j, std::size_t n) {
        if (n < 2) throw std::invalid_argument("query_spec: N must be >= 2");
        if (j >= n) throw std::out_of_range("query_spec: j out of range");
        std::vector<std::size_t> t;
        t.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) t.push_back(i);
        }
        return query_spec(j, std::move(t), query_mode::basic);
    }

    static query_spec randomized(std::size_t j, std::vector<std::size_t> rhetoric) {
        std::sort(rhetoric.begin(), rhetoric.end());
        if (rhetoric.empty()) {
            throw std::invalid_argument("query_spec: rhetoric set must be nonempty");
        }
        if (std::adjacent_find(rhetoric.begin(), rhetoric.end()) != rhetoric.end()) {
            throw std::invalid_argument("query_spec: duplicate rhetoric index");
        }
        if (std::binary_search(rhetoric.begin(), rhetoric.end(), j)) {
            throw std::invalid_argument("query_spec: j must not be a rhetoric query");
        }
        return query_spec(j, std::move(rhetoric), query_mode::randomized);
    }

    std::size_t j() const { return j_; }
    const std::vector<std::size_t>& rhetoric() const { return rhetoric_; }
    std::size_t t() const { return rhetoric_.size(); }
    query_mode mode() const { return mode_; }

    void validate_for(std::size_t n) const {
        if (n < 2) throw std::invalid_argument("query_spec: N must be >= 2");
        if (j_ >= n || rhetoric_.back() >= n) {
            throw std::out_of_range("query_spec: index out of range for N");
        }
        if (mode_ == query_mode::basic && rhetoric_.size() != n - 1) {
            throw std::invalid_argument("query_spec: basic mode requires t = N-1");
        }
    }

private:
    query_spec(std::size_t j, std::vector<std::size_t> rhetoric, query_mode mode)
        : j_(j), rhetoric_(std::move(rhetoric)), mode_(mode) {}

    std::size_t j_;
    std::vector<std::size_t> rhetoric_;
    query_mode mode_;
};

// Uniform sample over all 2^(N-1)-1 nonempty rhetoric sets (rejection on the
// empty mask), with j drawn uniformly.
inline query_spec sample_query_uniform_subset(std::size_t n, random_stream& rng) {
    std::size_t j = rng.next_index(n);
    std::vector<std::size_t> rhetoric;
    do {
        rhetoric.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j && rng.next_bit()) rhetoric.push_back(i);
        }
    } while (rhetoric.empty());
    return query_spec::randomized(j, std::move(rhetoric));
}

// Uniform sample over size-t rhetoric sets (partial Fisher-Yates), j uniform.
inline query_spec sample_query_fixed_t(std::size_t n, std::size_t t, random_stream& rng) {
    if (t < 1 || t > n - 1) {
        throw std::invalid_argument("sample_query_fixed_t: t must be in [1, N-1]");
    }
    std::size_t j = rng.next_index(n);
    std::vector<std::size_t> pool;
    pool.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != j) pool.push_back(i);
    }
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t pick = i + rng.next_index(pool.size() - i);
        std::swap(pool[i], pool[pick]);
    }
    pool.resize(t);
    return query_spec::randomized(j, std::move(pool));
}

// |psi'_0>: amplitude 1/sqrt(2) on j and 1/sqrt(2t) on each rhetoric index.
// Basic mode (t = N-1) reproduces |psi_0>.
inline state_vector prepare_initial(const query_spec& q, std::size_t n) {
    q.validate_for(n);
    std::vector<cplx> amps(n, cplx{0.0, 0.0});
    amps[q.j()] = cplx{1.0 / std::sqrt(2.0), 0.0};
    const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(q.t()));
    for (std::size_t x : q.rhetoric()) amps[x] = cplx{w, 0.0};
    return state_vector(std::move(amps));
}

// |psi> -> |psi>|0>: lift a query-register state onto the composite register.
inline state_vector attach_answer_register(const state_vector& query_state) {
    std::vector<cplx> amps(2 * query_state.dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < query_state.dim(); ++i) {
        amps[2 * i] = query_state[i];
    }
    return state_vector(std::move(amps));
}

// Data-retrieving oracle |i>|b> -> |i>|b xor A_i>. Self-inverse.
inline state_vector oracle_retrieve(const state_vector& s, const database_table& table) {
    if (s.dim() != 2 * table.size()) {
        throw std::invalid_argument("oracle_retrieve: state must live on the query (x) answer register");
    }
    std::vector<cplx> amps(s.amplitudes());
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table.bit(i) == 1) std::swap(amps[2 * i], amps[2 * i + 1]);
    }
    return state_vector(std::move(amps));
}

// Controlled addition mod 2 with the (|0>-|1>)/sqrt(2) ancilla, reduced to its
// phase kickback: the |j>|1> component picks up a minus sign.
inline state_vector controlled_xor(const state_vector& s, std::size_t j) {
    if (s.dim() % 2 != 0 || j >= s.dim() / 2) {
        throw std::invalid_argument("controlled_xor: invalid target index");
    }
    std::vector<cplx> amps(s.amplitudes());
    amps[2 * j + 1] = -amps[2 * j + 1];
    return state_vector(std::move(amps));
}

// The orthonormal pair (|psi'3+>, |psi'3->) the user discriminates against.
inline std::pair<state_vector, state_vector> expected_finals(const query_spec& q, std::size_t n) {
    q.validate_for(n);
    std::vector<cplx> plus(n, cplx{0.0, 0.0});
    const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(q.t()));
    for (std::size_t x : q.rhetoric()) plus[x] = cplx{w, 0.0};
    std::vector<cplx> minus(plus);
    plus[q.j()] = cplx{1.0 / std::sqrt(2.0), 0.0};
    minus[q.j()] = cplx{-1.0 / std::sqrt(2.0), 0.0};
    return {state_vector(std::move(plus)), state_vector(std::move(minus))};
}

// Checks the answer register returned to |0> everywhere, then drops it.
inline state_vector detach_answer_register(const state_vector& s) {
    if (s.dim() % 2 != 0) {
        throw std::invalid_argument("detach_answer_register: odd dimension");
    }
    double leak = 0.0;
    std::vector<cplx> amps(s.dim() / 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] = s[2 * i];
        leak += std::norm(s[2 * i + 1]);
    }
    if (leak > norm_epsilon) {
        throw std::logic_error("detach_answer_register: answer register is not |0>");
    }
    return state_vector(std::move(amps));
}

inline int query_register_qubits(std::size_t n) {
    return static_cast<int>(std::bit_width(n - 1));  // ceil(log2 N) for N >= 2
}

struct transmission {
    bool user_to_database;
    int query_qubits;
    int answer_qubits;
};

// Wire log of one protocol run plus the four protocol states.
struct transcript {
    std::vector<transmission> transmissions;
    state_vector initial;              // |psi'_0>, query register
    state_vector after_first_oracle;   // |Psi_1>, composite
    state_vector after_controlled_xor; // |Psi_2>, composite
    state_vector final_query;          // |psi_3>, query register

    int total_qubits() const {
        int total = 0;
        for (const auto& tx : transmissions) total += tx.query_qubits + tx.answer_qubits;
        return total;
    }
};

struct answer_result {
    static constexpr int unknown = -1;

    int answer;          // 0, 1, or `unknown`
    bool detected_cheat;
};

// Full honest execution: prepare -> oracle -> controlled-xor -> oracle
// (uncompute) -> discriminate against the expected finals. The user always
// recovers A_j; the "cheating" outcome has probability exactly zero.
inline std::pair<answer_result, transcript> run_honest(const database_table& table,
                                                       const query_spec& q,
                                                       random_stream& rng) {
    const std::size_t n = table.size();
    q.validate_for(n);

    state_vector psi0 = prepare_initial(q, n);
    state_vector psi1 = oracle_retrieve(attach_answer_register(psi0), table);
    state_vector psi2 = controlled_xor(psi1, q.j());
    state_vector psi3 = detach_answer_register(oracle_retrieve(psi2, table));

    auto finals = expected_finals(q, n);
    const state_vector basis[2] = {finals.first, finals.second};
    auto outcome = discriminate(psi3, basis, rng);

    answer_result result{answer_result::unknown, false};
    if (outcome.is_other()) {
        result.detected_cheat = true;
    } else {
        result.answer = static_cast<int>(outcome.index);
    }

    const int qq = query_register_qubits(n);
    transcript log{
        {{true, qq, 0}, {false, qq, 1}, {true, qq, 1}, {false, qq, 0}},
        std::move(psi0), std::move(psi1), std::move(psi2), std::move(psi3)};
    return {result, std::move(log)};
}

} // namespace qpqlab
