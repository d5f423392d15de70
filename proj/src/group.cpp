#include "parcat/group.hpp"

#include <algorithm>
#include <set>

namespace parcat {

Idx FinGroup::element_index(std::string_view name) const {
  for (Idx i = 0; i < elements.size(); ++i)
    if (elements[i] == name) return i;
  return kNone;
}

FinGroup FinGroup::from_table(std::vector<std::string> elements,
                              std::vector<std::vector<Idx>> mul) {
  FinGroup g;
  g.elements = std::move(elements);
  g.mul = std::move(mul);
  const std::size_t n = g.elements.size();
  if (n == 0) fail(Errc::invalid_input, "a group needs at least the unit element");
  if (g.mul.size() != n) fail(Errc::invalid_input, "multiplication table has wrong height");
  for (const auto& row : g.mul) {
    if (row.size() != n) fail(Errc::invalid_input, "multiplication table has wrong width");
    for (Idx v : row)
      if (v >= n) fail(Errc::invalid_input, "multiplication table entry out of range");
  }
  // associativity
  for (Idx a = 0; a < n; ++a)
    for (Idx b = 0; b < n; ++b)
      for (Idx c = 0; c < n; ++c)
        if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
          fail(Errc::validation_error, "group multiplication not associative at (" +
                                           g.elements[a] + ", " + g.elements[b] + ", " +
                                           g.elements[c] + ")");
  // unit
  for (Idx e = 0; e < n && g.unit == kNone; ++e) {
    bool ok = true;
    for (Idx a = 0; a < n && ok; ++a) ok = g.mul[e][a] == a && g.mul[a][e] == a;
    if (ok) g.unit = e;
  }
  if (g.unit == kNone) fail(Errc::validation_error, "group has no unit element");
  // inverses
  g.inv.assign(n, kNone);
  for (Idx a = 0; a < n; ++a) {
    for (Idx b = 0; b < n; ++b) {
      if (g.mul[a][b] == g.unit && g.mul[b][a] == g.unit) {
        g.inv[a] = b;
        break;
      }
    }
    if (g.inv[a] == kNone)
      fail(Errc::validation_error, "element '" + g.elements[a] + "' has no inverse");
  }
  return g;
}

bool FinGroup::subgroup_contains(const std::vector<Idx>& h, Idx g) const {
  return std::binary_search(h.begin(), h.end(), g);
}

std::vector<std::vector<Idx>> FinGroup::subgroups() const {
  // Generated-subgroup closure, breadth-first over generator extensions.
  std::set<std::vector<Idx>> found;
  auto close = [&](std::vector<Idx> gens) {
    std::set<Idx> h{unit};
    std::vector<Idx> frontier(h.begin(), h.end());
    for (Idx g : gens) frontier.push_back(g), h.insert(g);
    while (!frontier.empty()) {
      std::vector<Idx> next;
      for (Idx a : frontier) {
        for (Idx b : h) {
          for (Idx c : {mul[a][b], mul[b][a], inv[a]}) {
            if (h.insert(c).second) next.push_back(c);
          }
        }
      }
      frontier = std::move(next);
    }
    return std::vector<Idx>(h.begin(), h.end());
  };
  std::vector<std::vector<Idx>> queue{close({})};
  found.insert(queue[0]);
  while (!queue.empty()) {
    auto h = queue.back();
    queue.pop_back();
    for (Idx g = 0; g < order(); ++g) {
      if (subgroup_contains(h, g)) continue;
      auto gens = h;
      gens.push_back(g);
      auto bigger = close(gens);
      if (found.insert(bigger).second) queue.push_back(bigger);
    }
  }
  std::vector<std::vector<Idx>> r(found.begin(), found.end());
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return r;
}

FinGroup cyclic_group(int n) {
  if (n < 1) fail(Errc::invalid_input, "cyclic group order must be positive");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("r" + std::to_string(i));
  std::vector<std::vector<Idx>> mul(n, std::vector<Idx>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mul[a][b] = static_cast<Idx>((a + b) % n);
  return FinGroup::from_table(std::move(names), std::move(mul));
}

FinGroup symmetric_group(int n) {
  if (n < 1 || n > 5) fail(Errc::invalid_input, "symmetric group supported for n in [1, 5]");
  std::vector<std::vector<Idx>> perms;
  std::vector<Idx> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(perms.begin(), perms.end());

  auto name = [&](const std::vector<Idx>& q) {
    std::string s = "p";
    for (Idx v : q) s += static_cast<char>('0' + v);
    return s;
  };
  std::vector<std::string> names;
  for (const auto& q : perms) names.push_back(name(q));
  const std::size_t m = perms.size();
  std::vector<std::vector<Idx>> mul(m, std::vector<Idx>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      // (a*b)(x) = a(b(x))
      std::vector<Idx> comp(n);
      for (int x = 0; x < n; ++x) comp[x] = perms[a][perms[b][x]];
      mul[a][b] = static_cast<Idx>(
          std::lower_bound(perms.begin(), perms.end(), comp) - perms.begin());
    }
  }
  return FinGroup::from_table(std::move(names), std::move(mul));
}

}  // namespace parcat
