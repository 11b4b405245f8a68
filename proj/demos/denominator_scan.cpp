// Denominator profiling and bound fitting on constructed series: one series
// with a fixed denominator, one with systematic p-power growth.

#include <iostream>

#include "asdforge/asdcheck.hpp"
#include "asdforge/denomscan.hpp"
#include "asdforge/newform.hpp"

using namespace asdforge;

int main() {
    const long N = 48;

    QExp fixed_den(2, 1, 1, N);
    QExp growing(2, 1, 1, N);
    mpz_class power = 1;
    for (long n = 1; n <= N; ++n) {
        fixed_den.set_coeff(n, Rat(2 * n + 1, 6));
        if (n % 2 == 0) power *= 3;
        growing.set_coeff(n, Rat(mpz_class(n), power));  // denominator 3^(n/2)
    }

    for (const auto& [name, f] : {std::pair<const char*, const QExp&>{"fixed", fixed_den},
                                  std::pair<const char*, const QExp&>{"growing", growing}}) {
        DenomReport r = denominator_profile(f, N);
        std::cout << name << ": " << (r.bounded ? "bounded_up_to_N" : "growth_detected") << ", c = "
                  << r.c_candidate.get_str();
        if (!r.bounded) {
            std::cout << ", witnesses at p = " << r.growth_prime << ":";
            for (long n : r.growth_witnesses.at(r.growth_prime)) std::cout << " " << n;
        }
        std::cout << "\n";
    }

    auto cleared = clear_denominators(fixed_den, 6);
    std::cout << "clearing the fixed series by 6: " << (cleared.integral ? "integral" : "still fractional")
              << "\n";

    QExp delta = delta_oracle(200);
    BoundFit fit = selberg_fit(delta, 200);
    std::cout << "extremal |tau(n)| / n^(29/5) over n <= 200 attained at n = " << fit.argmax
              << " with |tau| = " << fit.max_abs.str() << "\n";

    ThresholdResult t = threshold_Pm(Rat(2), 1, 2, 0);
    std::cout << "P(m=1) for C = 2 at weight 2: " << t.P << "\n";
    return 0;
}
