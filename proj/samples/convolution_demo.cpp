// Convolve a derivative of a Dirac delta with a bump density through several
// approximate units and compare the sequential modes.

#include <iostream>

#include "roumieu/ultradist.hpp"

int main() {
  using namespace roumieu;
  const auto S = Ultradistribution::delta({0.2}, {1}, Complex(0.0, 1.0));
  const auto T = Ultradistribution::density(SmoothFunction::atom({-0.2}, {0.8}));
  const auto phi = SmoothFunction::atom({0.2}, {1.0});
  const auto sched = ApproximateUnit::linear_schedule(20);
  const std::vector<NamedUnit> units{{"plateau", ApproximateUnit::plateau(1, sched)},
                                     {"dilation", ApproximateUnit::dilation(1, sched)}};
  const auto r = convolve(S, T, phi, units);
  for (const auto& run : r.runs)
    std::cout << to_string(run.mode) << " / " << run.unit << ": "
              << (run.diag.limit ? std::to_string(run.diag.limit->real()) : std::string("no limit")) << "\n";
  std::cout << "cross-mode spread " << r.cross_mode_spread << "\n";
  if (r.agreed_value) std::cout << "<S * T, phi> = " << *r.agreed_value << "\n";
}
