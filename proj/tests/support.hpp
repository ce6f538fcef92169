#pragma once

#include <cmath>
#include <vector>

#include "warpharm/warp.hpp"

namespace warpharm::test_support {

// Samples w on a grid geometric near 0 and uniform beyond 1.
inline WarpingFunction tabulate(const WarpingFunction& w, double r_max, double h,
                                GrowthClass growth = GrowthClass::unknown()) {
  std::vector<double> r, p, d, dd;
  for (double x = 1e-4; x < 1.0; x *= 1.05) r.push_back(x);
  for (double x = 1.0; x <= r_max + 1e-12; x += h) r.push_back(x);
  for (double x : r) {
    const WarpValues v = w.eval(x);
    p.push_back(v.phi);
    d.push_back(v.dphi);
    dd.push_back(v.ddphi);
  }
  return WarpingFunction::tabulated(r, p, d, dd, growth);
}

}  // namespace warpharm::test_support
