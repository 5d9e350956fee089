#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace iim {

/// Position of an entity in a DependencySystem. Entities are stored in
/// ascending name order, so comparing indices compares names.
using EntityIndex = std::uint32_t;

/// Fixed-width bitset over the entities of one system.
class EntitySet {
 public:
  EntitySet() = default;
  explicit EntitySet(std::size_t universe_size)
      : size_(universe_size), words_((universe_size + 63) / 64, 0) {}

  std::size_t universe_size() const noexcept { return size_; }

  bool test(EntityIndex i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(EntityIndex i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(EntityIndex i) noexcept {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }
  bool full() const noexcept { return count() == size_; }

  void fill() noexcept {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  EntitySet& operator|=(const EntitySet& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  EntitySet& operator&=(const EntitySet& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  /// Removes every member of `other`.
  EntitySet& subtract(const EntitySet& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
  }

  friend EntitySet operator|(EntitySet a, const EntitySet& b) { return a |= b; }
  friend EntitySet operator&(EntitySet a, const EntitySet& b) { return a &= b; }

  bool is_subset_of(const EntitySet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }
  bool intersects(const EntitySet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        fn(static_cast<EntityIndex>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  /// Members in ascending order.
  std::vector<EntityIndex> indices() const {
    std::vector<EntityIndex> out;
    out.reserve(count());
    for_each([&](EntityIndex i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const EntitySet&, const EntitySet&) = default;

 private:
  void check_same(const EntitySet& other) const {
    if (other.size_ != size_)
      throw std::invalid_argument("entity sets over different universes");
  }
  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace iim
