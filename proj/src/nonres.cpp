#include "kamlat/nonres.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "kamlat/errors.hpp"
#include "kamlat/rng.hpp"

namespace kamlat::nonres {

void DiophantineParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw Error(ErrorKind::Config, "DiophantineParams: gamma must be in (0,1)");
  if (!(mu >= 1.0)) throw Error(ErrorKind::Config, "DiophantineParams: mu must be >= 1");
}

double bourgain_bound(const MultiIndex& l, const DiophantineParams& params) {
  if (l.zero()) throw Error(ErrorKind::ZeroIndex, "bourgain_bound: zero multi-index");
  double prod = params.gamma;
  for (const auto& [site, v] : l.entries()) {
    const double lj = std::fabs(static_cast<double>(v));
    const double js = SiteWindow::bracket(site);
    prod /= 1.0 + std::pow(lj, params.mu) * std::pow(js, params.mu);
  }
  return prod;
}

namespace {

// Depth-first enumeration over sites in window order. Entries are produced
// sorted by site, so each emitted index is already in canonical storage form,
// and the visit order is lexicographic in (|l|_1 handled by the caller loop,
// entries).
bool enumerate_rec(const SiteWindow& w, const IndexBudget& budget, int site, int remaining,
                   std::vector<MultiIndex::Entry>& stack, bool canonical_only,
                   uint64_t& count, const std::function<bool(const MultiIndex&)>& visit) {
  if (site > w.n_max) {
    if (remaining != 0) return true;  // exact |l|_1 target not met on this branch
    if (stack.empty()) return true;
    if (canonical_only && stack.front().second < 0) return true;
    if (++count > budget.count_cap)
      throw Error(ErrorKind::BudgetOverflow, "check_diophantine: enumeration count cap exceeded");
    return visit(MultiIndex(stack));
  }
  const int cap = std::min(budget.per_site_cap, remaining);
  for (int v = -cap; v <= cap; ++v) {
    if (v != 0) stack.push_back({site, v});
    bool keep = enumerate_rec(w, budget, site + 1, remaining - std::abs(v), stack,
                              canonical_only, count, visit);
    if (v != 0) stack.pop_back();
    if (!keep) return false;
  }
  return true;
}

}  // namespace

uint64_t enumerate_indices(const SiteWindow& window, const IndexBudget& budget,
                           bool canonical_sign_only,
                           const std::function<bool(const MultiIndex&)>& visit) {
  uint64_t count = 0;
  std::vector<MultiIndex::Entry> stack;
  for (int order = 1; order <= budget.max_l1; ++order) {
    if (!enumerate_rec(window, budget, -window.n_max, order, stack, canonical_sign_only,
                       count, visit))
      break;
  }
  return count;
}

Verdict check_diophantine(const FrequencyVector& omega, const DiophantineParams& params,
                          const IndexBudget& budget) {
  params.validate();
  Holds h;
  h.budget = budget;
  h.worst_margin = std::numeric_limits<double>::infinity();
  std::optional<Violated> bad;

  h.enumerated = enumerate_indices(
      omega.window, budget, /*canonical_sign_only=*/true, [&](const MultiIndex& l) {
        double dot = 0.0;
        for (const auto& [site, v] : l.entries()) dot += v * omega.at(site);
        const double bound = bourgain_bound(l, params);
        const double margin = std::fabs(dot) - bound;
        if (margin <= 0.0) {
          bad = Violated{l, std::fabs(dot), bound};
          return false;  // first violation in canonical order is the witness
        }
        if (margin < h.worst_margin) {
          h.worst_margin = margin;
          h.argmin = l;
        }
        return true;
      });

  if (bad) return *bad;
  return h;
}

FrequencyVector sample_frequency(const SiteWindow& window, const DiophantineParams& params,
                                 const IndexBudget& budget, uint64_t seed, int retry_cap,
                                 int* attempts_out) {
  params.validate();
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    FrequencyVector omega(window);
    for (int i = 0; i < window.size(); ++i) {
      const uint64_t counter =
          static_cast<uint64_t>(attempt) * static_cast<uint64_t>(window.size()) +
          static_cast<uint64_t>(i);
      omega.values[static_cast<size_t>(i)] =
          rng::uniform(seed, rng::kStreamFrequencySample, counter, 1.0, 2.0);
    }
    if (holds(check_diophantine(omega, params, budget))) {
      if (attempts_out) *attempts_out = attempt + 1;
      return omega;
    }
  }
  throw Error(ErrorKind::ExhaustedRetries, "sample_frequency: retry cap exhausted");
}

MeasureEstimate estimate_resonant_measure(const SiteWindow& window,
                                          const DiophantineParams& params,
                                          const IndexBudget& budget, int samples,
                                          uint64_t seed, int threads) {
  if (samples < 100)
    throw Error(ErrorKind::Config, "estimate_resonant_measure: samples must be >= 100");
  // gamma = 0 would be rejected by validate(); it is allowed here and counts
  // only exact resonances.
  if (params.gamma < 0.0 || params.gamma >= 1.0 || params.mu < 1.0)
    throw Error(ErrorKind::Config, "estimate_resonant_measure: bad params");

  std::vector<uint8_t> violated(static_cast<size_t>(samples), 0);
  auto worker = [&](int begin, int end) {
    for (int s = begin; s < end; ++s) {
      FrequencyVector omega(window);
      for (int i = 0; i < window.size(); ++i) {
        const uint64_t counter =
            static_cast<uint64_t>(s) * static_cast<uint64_t>(window.size()) +
            static_cast<uint64_t>(i);
        omega.values[static_cast<size_t>(i)] =
            rng::uniform(seed, rng::kStreamMeasure, counter, 1.0, 2.0);
      }
      bool bad = false;
      enumerate_indices(window, budget, true, [&](const MultiIndex& l) {
        double dot = 0.0;
        for (const auto& [site, v] : l.entries()) dot += v * omega.at(site);
        double bound = params.gamma <= 0.0 ? 0.0 : bourgain_bound(l, params);
        if (std::fabs(dot) <= bound) {
          bad = true;
          return false;
        }
        return true;
      });
      violated[static_cast<size_t>(s)] = bad ? 1 : 0;
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk;
      const int e = std::min(samples, b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  int hits = 0;
  for (uint8_t v : violated) hits += v;
  MeasureEstimate est;
  est.samples = samples;
  est.fraction = static_cast<double>(hits) / samples;
  est.ci95 = 1.96 * std::sqrt(est.fraction * (1.0 - est.fraction) / samples);
  return est;
}

}  // namespace kamlat::nonres
