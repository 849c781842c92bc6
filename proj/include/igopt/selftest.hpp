#ifndef IGOPT_SELFTEST_HPP
#define IGOPT_SELFTEST_HPP

#include <string>
#include <vector>

namespace igopt {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant suite: weight-sum identities, K = 0 reductions, compact-GA
// equivalence on a small instance, and a mixture-estimator unbiasedness smoke
// test. Intended to finish well under a minute.
std::vector<SelfTestCheck> run_selftest();

}  // namespace igopt

#endif
