#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace invexp {

/// Dense 0-based element id of a finite semigroup.
using Elem = std::uint32_t;

/// Subset of {0, ..., width-1}. Equality and ordering are structural, so two
/// sets compare equal iff they have the same width and the same members.
class ElemSet {
 public:
  ElemSet() = default;
  explicit ElemSet(std::size_t width) : bits_(width) {}
  ElemSet(std::size_t width, std::initializer_list<Elem> members);

  static ElemSet from_members(std::size_t width, const std::vector<Elem>& members);

  std::size_t width() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  /// Throws std::out_of_range for ids outside the width.
  bool contains(Elem a) const;
  void insert(Elem a);
  void erase(Elem a);

  /// Members in ascending order.
  std::vector<Elem> members() const;

  bool is_subset_of(const ElemSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const ElemSet& other) const { return bits_.intersects(other.bits_); }

  ElemSet& operator|=(const ElemSet& other);
  ElemSet& operator&=(const ElemSet& other);
  friend ElemSet operator|(ElemSet a, const ElemSet& b) { return a |= b; }
  friend ElemSet operator&(ElemSet a, const ElemSet& b) { return a &= b; }

  friend bool operator==(const ElemSet& a, const ElemSet& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const ElemSet& a, const ElemSet& b) { return !(a == b); }
  /// Lexicographic on the ascending member lists.
  friend bool operator<(const ElemSet& a, const ElemSet& b);

  std::size_t hash() const;

 private:
  boost::dynamic_bitset<std::uint64_t> bits_;
};

}  // namespace invexp

template <>
struct std::hash<invexp::ElemSet> {
  std::size_t operator()(const invexp::ElemSet& s) const { return s.hash(); }
};
