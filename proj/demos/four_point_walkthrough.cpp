// Solves max-sum and max-min dispersion on a four-point instance with both
// search spaces and both backends, printing the GAS trace of each run.

#include <cstdio>
#include <iostream>

#include "gasdicke/gasdicke.hpp"

using namespace gasd;

namespace {

template <class Obj>
void run_and_print(const char* label, const Obj& f, const SearchSpace& space, Backend b) {
  GasConfig cfg;
  cfg.backend = b;
  cfg.seed = 3;
  cfg.target_value = brute_force_minimum(f, space).value;
  const GasResult r = run_gas(f, space, cfg);
  std::printf("%-22s %-8s %-14s best=%s value=%g qd=%llu cd=%llu\n", label, backend_name(b), space.describe().c_str(),
              to_bitstring(r.best, space.n()).c_str(), r.best_value, static_cast<unsigned long long>(r.counters.qd),
              static_cast<unsigned long long>(r.counters.cd));
}

}  // namespace

int main() {
  const auto D = DistanceMatrix::from_upper_triangular(4, {2, 7, 9, 6, 7, 5});
  // With k = 2 the default penalty weight C(k,2) max d is too small (a triple
  // beats every pair), so the penalized runs use the larger weight 100.
  // Uncompressed max-min coefficients span seven orders of magnitude here, too
  // many for a small register, so the max-min runs use the rank-compressed form.
  const auto c = rank_compress(D, 1e-5, 3);
  for (Backend b : {Backend::Analytic, Backend::GateLevel}) {
    run_and_print("max-sum k=2", max_sum_formulation(D, 2, false), SearchSpace::dicke(4, 2), b);
    run_and_print("max-sum k=2 penalized", max_sum_formulation(D, 2, true, 100.0), SearchSpace::hadamard(4), b);
    run_and_print("max-min k=3", max_min_formulation(c.compressed, 3, false, c.lambda1), SearchSpace::dicke(4, 3), b);
  }

  std::printf("\nrank compression (delta = 1e-5): r_max=%d lambda1=%.6f\n", c.r_max, c.lambda1);
  for (auto [d, r] : c.ranks) std::printf("  %g -> rank %d\n", d, r);
  const auto exact = exact_max_min(D, 3);
  std::printf("exact max-min optimum d_min=%g, %zu optimal subsets\n", exact.best_value, exact.optima.size());

  std::printf("\nGAS trace of a penalized max-sum run stopped after 8 failures (analytic backend):\n");
  GasConfig cfg;
  cfg.seed = 8;
  cfg.max_quantum_queries = 0;
  cfg.max_consecutive_failures = 8;
  write_trace_csv(run_gas(max_sum_formulation(D, 2, true, 100.0), SearchSpace::hadamard(4), cfg).trace, std::cout);
}
