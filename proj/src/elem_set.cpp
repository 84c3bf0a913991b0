#include "invexp/elem_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace invexp {

ElemSet::ElemSet(std::size_t width, std::initializer_list<Elem> members) : bits_(width) {
  for (Elem a : members) insert(a);
}

ElemSet ElemSet::from_members(std::size_t width, const std::vector<Elem>& members) {
  ElemSet out(width);
  for (Elem a : members) out.insert(a);
  return out;
}

bool ElemSet::contains(Elem a) const {
  if (a >= bits_.size()) throw std::out_of_range("element id " + std::to_string(a) + " out of range");
  return bits_.test(a);
}

void ElemSet::insert(Elem a) {
  if (a >= bits_.size()) throw std::out_of_range("element id " + std::to_string(a) + " out of range");
  bits_.set(a);
}

void ElemSet::erase(Elem a) {
  if (a >= bits_.size()) throw std::out_of_range("element id " + std::to_string(a) + " out of range");
  bits_.reset(a);
}

std::vector<Elem> ElemSet::members() const {
  std::vector<Elem> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != decltype(bits_)::npos; i = bits_.find_next(i)) {
    out.push_back(static_cast<Elem>(i));
  }
  return out;
}

ElemSet& ElemSet::operator|=(const ElemSet& other) {
  bits_ |= other.bits_;
  return *this;
}

ElemSet& ElemSet::operator&=(const ElemSet& other) {
  bits_ &= other.bits_;
  return *this;
}

bool operator<(const ElemSet& a, const ElemSet& b) {
  const auto ma = a.members();
  const auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

std::size_t ElemSet::hash() const {
  std::vector<std::uint64_t> blocks;
  boost::to_block_range(bits_, std::back_inserter(blocks));
  std::size_t h = bits_.size();
  for (auto w : blocks) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace invexp
