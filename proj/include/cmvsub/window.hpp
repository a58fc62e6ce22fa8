#pragma once

#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "cmvsub/error.hpp"

namespace cmvsub {

/// Finite window of a two-sided sequence: values for indices first()..last().
template <class T>
class IndexedWindow {
 public:
  IndexedWindow() = default;
  IndexedWindow(long first, std::vector<T> values) : first_(first), values_(std::move(values)) {}

  template <class Generator>
  static IndexedWindow generate(long first, long last, Generator&& gen) {
    std::vector<T> values;
    values.reserve(last >= first ? static_cast<std::size_t>(last - first + 1) : 0);
    for (long n = first; n <= last; ++n) values.push_back(gen(n));
    return IndexedWindow(first, std::move(values));
  }

  long first() const { return first_; }
  long last() const { return first_ + static_cast<long>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  bool covers(long lo, long hi) const { return lo >= first() && hi <= last(); }

  const T& operator()(long n) const {
    if (n < first() || n > last())
      throw InvalidArgument("index " + std::to_string(n) + " outside window [" +
                            std::to_string(first()) + ", " + std::to_string(last()) + "]");
    return values_[static_cast<std::size_t>(n - first_)];
  }

  const std::vector<T>& values() const { return values_; }

  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::vector<U> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(f(v));
    return IndexedWindow<U>(first_, std::move(out));
  }

 private:
  long first_ = 0;
  std::vector<T> values_;
};

namespace detail {
inline void require_even_block(long n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("block length must be even and >= 2, got " + std::to_string(n));
}
}  // namespace detail

/// First j in 1..n with s(j) != s(j+n), or nullopt if s(j) = s(j+n) on 1..n.
template <class T>
std::optional<long> two_block_violation(const IndexedWindow<T>& s, long n) {
  detail::require_even_block(n);
  if (!s.covers(1, 2 * n)) throw InvalidArgument("window does not cover 1..2n");
  for (long j = 1; j <= n; ++j)
    if (!(s(j) == s(j + n))) return j;
  return std::nullopt;
}

/// First j in 1..n breaking s(j-n) = s(j) = s(j+n), or nullopt.
template <class T>
std::optional<long> three_block_violation(const IndexedWindow<T>& s, long n) {
  detail::require_even_block(n);
  if (!s.covers(1 - n, 2 * n)) throw InvalidArgument("window does not cover (1-n)..2n");
  for (long j = 1; j <= n; ++j)
    if (!(s(j - n) == s(j)) || !(s(j) == s(j + n))) return j;
  return std::nullopt;
}

template <class T>
bool check_two_block(const IndexedWindow<T>& s, long n) {
  return !two_block_violation(s, n).has_value();
}

template <class T>
bool check_three_block(const IndexedWindow<T>& s, long n) {
  return !three_block_violation(s, n).has_value();
}

}  // namespace cmvsub
