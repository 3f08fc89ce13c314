// Walks one honest protocol run and prints the four protocol states.

#include <cstdio>

#include "qpqlab/protocol.hpp"

using namespace qpqlab;

static void print_state(const char* label, const state_vector& s) {
    std::printf("%s:", label);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::printf(" %+.4f", s[i].real());
    }
    std::printf("\n");
}

int main() {
    random_stream rng(42);
    database_table table({1, 0, 1, 1, 0});
    auto q = query_spec::randomized(/*j=*/2, /*rhetoric=*/{0, 4});

    auto [result, log] = run_honest(table, q, rng);

    print_state("psi'_0  (query)", log.initial);
    print_state("Psi_1   (query x answer)", log.after_first_oracle);
    print_state("Psi_2   (query x answer)", log.after_controlled_xor);
    print_state("psi_3   (query)", log.final_query);

    std::printf("answer A_j = %d (table says %d), cheat detected = %s\n", result.answer,
                table.bit(q.j()), result.detected_cheat ? "yes" : "no");
    std::printf("qubits on the wire: %d\n", log.total_qubits());
    return 0;
}
