#pragma once

#include "parcat/core.hpp"

namespace parcat::detail {

// Backtracking enumeration of slot families in canonical order. The checker
// is called after each assignment with the partial family (kNone where
// unassigned) and the just-filled slot; it must accept exactly the
// assignments consistent so far.
inline std::vector<std::vector<Idx>> enumerate_families(
    std::size_t nslots, const std::function<std::vector<Idx>(std::size_t)>& candidates,
    const std::function<bool(const std::vector<Idx>&, std::size_t)>& check, std::size_t budget) {
  std::vector<std::vector<Idx>> out;
  std::vector<Idx> fam(nslots, kNone);
  std::size_t used = 0;
  std::function<void(std::size_t)> place = [&](std::size_t s) {
    if (s == nslots) {
      out.push_back(fam);
      return;
    }
    for (Idx cand : candidates(s)) {
      if (++used > budget)
        fail(Errc::size_budget_exceeded, "family enumeration budget exceeded");
      fam[s] = cand;
      if (!check || check(fam, s)) place(s + 1);
      fam[s] = kNone;
    }
  };
  place(0);
  return out;
}

}  // namespace parcat::detail
