// Prints the detection landscape a cheating database faces: per-t detection
// of the optimal fake, the subset-averaged expectation, and the user's best
// rhetoric count.

#include <cstdio>

#include "qpqlab/adversary.hpp"

using namespace qpqlab;

int main() {
    const std::size_t n = 101;
    const param_fake fake = optimal_fake(n, 0);

    std::printf("N = %zu, optimal fake a = %.6f, b = %.6f\n", n, fake.a, fake.b);
    std::printf("subset-averaged detection (exact)  = %.6f\n",
                expected_detection_over_subsets(n, fake.a, fake.b));
    std::printf("approximate closed-form minimum    = %.6f\n",
                0.5 - 1.0 / (static_cast<double>(n) + 3.0));

    std::printf("\n t    p_{t,a*,b*}    pbar_t (avg over fakes)\n");
    for (std::size_t t = 1; t <= 15; ++t) {
        std::printf("%3zu    %.6f       %.6f\n", t, detection_prob_param(t, fake.a, fake.b),
                    expected_detection_over_alpha(n, static_cast<double>(t)));
    }

    std::printf("\noptimal rhetoric count t* = %.4f (integer sweep: %zu)\n", optimal_t(n),
                optimal_t_int(n));
    std::printf("maximum detection p_maxi  = %.6f\n", p_maxi(n));
    return 0;
}
