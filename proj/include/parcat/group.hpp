#pragma once

#include "parcat/core.hpp"

namespace parcat {

/// A finite group by element list and total multiplication table; the group
/// axioms are verified by enumeration on construction.
struct FinGroup {
  std::vector<std::string> elements;
  std::vector<std::vector<Idx>> mul;  // mul[a][b] = a*b
  Idx unit = kNone;
  std::vector<Idx> inv;

  std::size_t order() const { return elements.size(); }
  Idx times(Idx a, Idx b) const { return mul[a][b]; }
  Idx element_index(std::string_view name) const;

  static FinGroup from_table(std::vector<std::string> elements,
                             std::vector<std::vector<Idx>> mul);

  /// All subgroups as sorted element-index lists, ordered by (size, lexicographic).
  std::vector<std::vector<Idx>> subgroups() const;

  bool subgroup_contains(const std::vector<Idx>& h, Idx g) const;
};

FinGroup cyclic_group(int n);     // elements r0..r{n-1}
FinGroup symmetric_group(int n);  // permutations of {0..n-1}, one-line names

}  // namespace parcat
