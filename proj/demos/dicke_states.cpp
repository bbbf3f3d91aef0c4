// Prints Dicke-state preparation sizes and a few amplitudes.

#include <cmath>
#include <cstdio>

#include "gasdicke/gasdicke.hpp"

using namespace gasd;

int main() {
  std::printf("%4s %4s %8s %8s %8s %8s\n", "n", "k", "gates", "CX", "CCR", "CR");
  for (int n : {4, 8, 12, 16}) {
    for (int k : {1, 2, 4}) {
      if (k > n) continue;
      const GateCensus g = census(build_dicke_prep({n, k}));
      std::printf("%4d %4d %8zu %8zu %8zu %8zu\n", n, k, g.total(), g["CX"], g["CCR"], g["CR"]);
    }
  }
  const StateVector s = run(build_dicke_prep({4, 2}));
  std::printf("\n|D(4,2)> amplitudes:\n");
  for (std::uint64_t i = 0; i < s.dimension(); ++i) {
    if (std::abs(s[i]) > 1e-12) std::printf("  %s  %+.6f\n", to_bitstring(i, 4).c_str(), s[i].real());
  }
}
