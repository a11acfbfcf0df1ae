#ifndef KAMLAT_MULTI_INDEX_HPP
#define KAMLAT_MULTI_INDEX_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kamlat/window.hpp"

namespace kamlat {

/// Finite-support integer vector over lattice sites, stored as a sorted
/// sequence of (site, value) pairs with nonzero values.
class MultiIndex {
 public:
  using Entry = std::pair<int, int>;  // (site, value), value != 0

  MultiIndex() = default;

  explicit MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) {
    normalize();
  }

  static MultiIndex unit(int site, int value = 1) {
    MultiIndex m;
    if (value != 0) m.entries_.push_back({site, value});
    return m;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool zero() const { return entries_.empty(); }
  size_t support_size() const { return entries_.size(); }

  int value_at(int site) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), site,
                               [](const Entry& e, int s) { return e.first < s; });
    return (it != entries_.end() && it->first == site) ? it->second : 0;
  }

  // |l|_1
  int order() const {
    int s = 0;
    for (const auto& [site, v] : entries_) s += std::abs(v);
    return s;
  }

  int max_site_abs_value() const {
    int m = 0;
    for (const auto& [site, v] : entries_) m = std::max(m, std::abs(v));
    return m;
  }

  // |l|_eta := sum <j>^eta |l_j|  (always >= |l|_1)
  double eta_weight(const SiteWindow& w) const {
    double s = 0.0;
    for (const auto& [site, v] : entries_) s += w.weight(site) * std::abs(v);
    return s;
  }

  bool in_window(const SiteWindow& w) const {
    return entries_.empty() ||
           (entries_.front().first >= -w.n_max && entries_.back().first <= w.n_max);
  }

  MultiIndex negated() const {
    MultiIndex m;
    m.entries_.reserve(entries_.size());
    for (const auto& [site, v] : entries_) m.entries_.push_back({site, -v});
    return m;
  }

  // Entrywise sum, used by coefficient convolution.
  MultiIndex plus(const MultiIndex& o) const {
    MultiIndex r;
    r.entries_.reserve(entries_.size() + o.entries_.size());
    auto a = entries_.begin(), b = o.entries_.begin();
    while (a != entries_.end() || b != o.entries_.end()) {
      if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        r.entries_.push_back(*a++);
      } else if (a == entries_.end() || b->first < a->first) {
        r.entries_.push_back(*b++);
      } else {
        int v = a->second + b->second;
        if (v != 0) r.entries_.push_back({a->first, v});
        ++a;
        ++b;
      }
    }
    return r;
  }

  // The first nonzero component is positive; used to pick one representative
  // of each {l, -l} pair.
  bool canonical_sign() const {
    return entries_.empty() || entries_.front().second > 0;
  }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  void normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i - 1].first == entries_[i].first)
        throw std::invalid_argument("MultiIndex: duplicate site");
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
  }

  std::vector<Entry> entries_;
};

}  // namespace kamlat

#endif
