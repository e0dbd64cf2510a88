// Compare the predicted proportion of survivors with a handful of simulated
// equilibria, for a few interaction strengths.

#include <cstdio>

#include "randlv/equilibrium.hpp"
#include "randlv/heuristics.hpp"

int main() {
  constexpr int n = 300;
  constexpr int trials = 5;
  for (double alpha : {1.5, 2.0, 3.0}) {
    const auto theory = randlv::solve_heuristic_system(alpha, 0.0);
    double p_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto b = randlv::sample_interaction_matrix(n, alpha, 0.0, randlv::EntryDist::gaussian, 42u ^ t);
      p_sum += randlv::survivor_stats(randlv::compute_equilibrium(b)).p_hat;
    }
    std::printf("alpha = %.2f  p* = %.4f  mean p_hat = %.4f\n", alpha, theory.p_star, p_sum / trials);
  }
}
