// Certify the standard conditions for a Gevrey weight sequence and show the
// failure of non-quasianalyticity for the factorial sequence.

#include <iostream>

#include "roumieu/weights.hpp"

int main() {
  using namespace roumieu;
  const auto gevrey = WeightSequence::gevrey(2.0, 256);
  for (auto c : {Condition::M1, Condition::M2, Condition::M2prime, Condition::M3, Condition::M3prime}) {
    const auto r = check_condition(gevrey, c);
    std::cout << to_string(c) << ": " << (r.holds_on_prefix ? "holds" : "fails");
    if (r.witness_constants) std::cout << " (A = " << r.witness_constants->A << ", H = " << r.witness_constants->H << ")";
    std::cout << "\n";
  }
  const auto r = check_condition(WeightSequence::factorial(256), Condition::M3prime);
  std::cout << "factorial M3': " << (r.holds_on_prefix ? "holds" : "fails");
  if (r.first_violation && r.partial_sum)
    std::cout << ", partial sum " << *r.partial_sum << " at p = " << (*r.first_violation)[0];
  std::cout << "\n";
}
