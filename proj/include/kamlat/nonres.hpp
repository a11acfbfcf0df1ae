#ifndef KAMLAT_NONRES_HPP
#define KAMLAT_NONRES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "kamlat/multi_index.hpp"
#include "kamlat/window.hpp"

namespace kamlat::nonres {

struct DiophantineParams {
  double gamma = 0.1;  // in (0, 1)
  double mu = 2.0;     // > 1 (boundary values accepted for testing)

  void validate() const;
};

/// Enumeration budget for the finite truncation of the nonresonance check.
struct IndexBudget {
  int max_l1 = 3;            // |l|_1 <= max_l1
  int per_site_cap = 3;      // |l_j| <= per_site_cap
  uint64_t count_cap = 50'000'000;  // guard on the enumerated set size
};

/// gamma * prod_j 1 / (1 + |l_j|^mu <j>^mu); factors for absent sites are 1.
double bourgain_bound(const MultiIndex& l, const DiophantineParams& params);

struct Holds {
  double worst_margin = 0.0;   // min over enumerated l of |omega.l| - bound
  MultiIndex argmin;           // where the margin is attained
  uint64_t enumerated = 0;
  IndexBudget budget;
};
struct Violated {
  MultiIndex l;
  double inner_product = 0.0;  // |omega . l|
  double bound = 0.0;
};
using Verdict = std::variant<Holds, Violated>;

inline bool holds(const Verdict& v) { return std::holds_alternative<Holds>(v); }

/// Checks the product-form lower bound on |omega . l| over all nonzero l
/// within the budget (one representative per {l, -l} pair), enumerated in
/// (|l|_1, entries) lexicographic order.
Verdict check_diophantine(const FrequencyVector& omega, const DiophantineParams& params,
                          const IndexBudget& budget);

/// Rejection-samples omega uniform in [1,2]^window until the check holds.
FrequencyVector sample_frequency(const SiteWindow& window, const DiophantineParams& params,
                                 const IndexBudget& budget, uint64_t seed,
                                 int retry_cap = 1000, int* attempts_out = nullptr);

struct MeasureEstimate {
  double fraction = 0.0;
  double ci95 = 0.0;
  int samples = 0;
};

/// Monte-Carlo fraction of uniform [1,2]^window frequencies violating the
/// condition within the budget, with a binomial 95% half-width. Sampling is
/// indexed per draw, so the result is independent of the thread count.
MeasureEstimate estimate_resonant_measure(const SiteWindow& window,
                                          const DiophantineParams& params,
                                          const IndexBudget& budget, int samples,
                                          uint64_t seed, int threads = 1);

/// Visits all admissible nonzero multi-indices in canonical order (used by the
/// check and exposed for the enumeration-oracle tests). The callback returns
/// false to stop early. Returns the number visited.
uint64_t enumerate_indices(const SiteWindow& window, const IndexBudget& budget,
                           bool canonical_sign_only,
                           const std::function<bool(const MultiIndex&)>& visit);

}  // namespace kamlat::nonres

#endif
