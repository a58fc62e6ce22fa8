#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "cmvsub/error.hpp"

namespace cmvsub {

template <class T>
struct Arc {
  T lo;
  T hi;
};

/**
 * Finite union of half-open arcs [lo, hi) on a circle of circumference
 * `period`, parameterized by [0, period). Arcs are kept sorted, disjoint and
 * non-adjacent; an arc through 0 is stored as two pieces.
 *
 * T only needs ordering, +, - and construction from int, so the same code
 * serves double angles and exact Real phases.
 */
template <class T>
class ArcSet {
 public:
  explicit ArcSet(T period) : period_(std::move(period)) {}

  static ArcSet full(T period) {
    ArcSet s(period);
    s.arcs_.push_back({T(0), s.period_});
    return s;
  }

  const T& period() const { return period_; }
  const std::vector<Arc<T>>& arcs() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }
  bool empty() const { return arcs_.empty(); }

  // Inserts [lo, hi) with 0 <= lo <= hi <= period.
  void insert(T lo, T hi) {
    if (lo < T(0) || hi > period_ || hi < lo) throw InvalidArgument("arc endpoints outside [0, period]");
    if (lo == hi) return;
    arcs_.push_back({std::move(lo), std::move(hi)});
    normalize();
  }

  // Inserts the arc starting at `lo` of the given length, wrapping past the
  // period when needed. lo may be any value; it is reduced into [0, period).
  void insert_wrapped(T lo, T length) {
    if (length < T(0)) throw InvalidArgument("negative arc length");
    if (!(length < period_)) {
      arcs_.assign(1, {T(0), period_});
      return;
    }
    while (lo < T(0)) lo = lo + period_;
    while (!(lo < period_)) lo = lo - period_;
    T hi = lo + length;
    if (hi > period_) {
      arcs_.push_back({lo, period_});
      arcs_.push_back({T(0), hi - period_});
    } else {
      arcs_.push_back({lo, hi});
    }
    normalize();
  }

  // Bulk variant of insert_wrapped with a single normalization.
  void insert_wrapped_many(const std::vector<std::pair<T, T>>& starts_and_lengths) {
    for (const auto& [lo0, length] : starts_and_lengths) {
      if (!(length < period_)) {
        arcs_.assign(1, {T(0), period_});
        return;
      }
      T lo = lo0;
      while (lo < T(0)) lo = lo + period_;
      while (!(lo < period_)) lo = lo - period_;
      T hi = lo + length;
      if (hi > period_) {
        arcs_.push_back({lo, period_});
        arcs_.push_back({T(0), hi - period_});
      } else {
        arcs_.push_back({lo, hi});
      }
    }
    normalize();
  }

  bool contains(const T& x) const {
    auto it = std::upper_bound(arcs_.begin(), arcs_.end(), x, [](const T& v, const Arc<T>& a) { return v < a.lo; });
    if (it == arcs_.begin()) return false;
    --it;
    return !(x < it->lo) && x < it->hi;
  }

  T measure() const {
    T total(0);
    for (const auto& a : arcs_) total = total + (a.hi - a.lo);
    return total;
  }

  ArcSet complement() const {
    ArcSet out(period_);
    T cursor(0);
    for (const auto& a : arcs_) {
      if (cursor < a.lo) out.arcs_.push_back({cursor, a.lo});
      cursor = a.hi;
    }
    if (cursor < period_) out.arcs_.push_back({cursor, period_});
    return out;
  }

  ArcSet intersect(const ArcSet& other) const {
    ArcSet out(period_);
    std::size_t i = 0, j = 0;
    while (i < arcs_.size() && j < other.arcs_.size()) {
      const auto& x = arcs_[i];
      const auto& y = other.arcs_[j];
      const T& lo = x.lo < y.lo ? y.lo : x.lo;
      const T& hi = x.hi < y.hi ? x.hi : y.hi;
      if (lo < hi) out.arcs_.push_back({lo, hi});
      if (x.hi < y.hi) ++i;
      else ++j;
    }
    out.normalize();
    return out;
  }

  ArcSet unite(const ArcSet& other) const {
    ArcSet out = *this;
    out.arcs_.insert(out.arcs_.end(), other.arcs_.begin(), other.arcs_.end());
    out.normalize();
    return out;
  }

 private:
  T period_;
  std::vector<Arc<T>> arcs_;

  void normalize() {
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc<T>& x, const Arc<T>& y) { return x.lo < y.lo; });
    std::vector<Arc<T>> merged;
    merged.reserve(arcs_.size());
    for (auto& a : arcs_) {
      if (!(a.lo < a.hi)) continue;
      if (!merged.empty() && !(merged.back().hi < a.lo)) {
        if (merged.back().hi < a.hi) merged.back().hi = a.hi;
      } else {
        merged.push_back(a);
      }
    }
    arcs_ = std::move(merged);
  }
};

}  // namespace cmvsub
