#include "parcat/funcat.hpp"

#include <algorithm>

namespace parcat {

namespace {

struct BudgetCounter {
  std::size_t used = 0;
  std::size_t limit;
  void tick() {
    if (++used > limit)
      fail(Errc::size_budget_exceeded,
           "enumeration budget of " + std::to_string(limit) + " partial assignments exceeded");
  }
};

// Branching plan over the non-identity morphisms of a category: morphisms
// whose composite factorization is already determined are forced, the rest
// branch. Identities are always forced from the object assignment.
struct MorPlan {
  struct Step {
    Idx mor;
    Idx via_g = kNone, via_f = kNone;  // forced as via_g ∘ via_f when set
  };
  std::vector<Step> steps;
  // triples (g, f) with all of g, f, gf assigned once `mor` is placed; used
  // for incremental consistency checks. Indexed per step.
  std::vector<std::vector<std::array<Idx, 3>>> checks;
};

MorPlan make_plan(const FinCat& s) {
  MorPlan plan;
  const std::size_t m = s.morphism_count();
  std::vector<char> assigned(m, 0);
  std::vector<Idx> place(m, kNone);  // step index per morphism
  for (Idx i = 0; i < m; ++i)
    if (s.is_identity(i)) assigned[i] = 1;

  auto try_force = [&](Idx mi, MorPlan::Step& st) {
    for (Idx f = 0; f < m; ++f) {
      if (!assigned[f] || s.is_identity(f)) continue;
      for (Idx g : s.out(s.dst(f))) {
        if (!assigned[g] || s.is_identity(g)) continue;
        if (s.compose(g, f) == mi) {
          st.via_g = g;
          st.via_f = f;
          return true;
        }
      }
    }
    return false;
  };

  std::size_t remaining = 0;
  for (Idx i = 0; i < m; ++i)
    if (!assigned[i]) ++remaining;
  while (remaining > 0) {
    bool progressed = false;
    for (Idx i = 0; i < m && !progressed; ++i) {
      if (assigned[i]) continue;
      MorPlan::Step st{i, kNone, kNone};
      if (try_force(i, st)) {
        plan.steps.push_back(st);
        assigned[i] = 1;
        place[i] = static_cast<Idx>(plan.steps.size() - 1);
        --remaining;
        progressed = true;
      }
    }
    if (progressed) continue;
    for (Idx i = 0; i < m; ++i) {
      if (!assigned[i]) {
        plan.steps.push_back({i, kNone, kNone});
        assigned[i] = 1;
        place[i] = static_cast<Idx>(plan.steps.size() - 1);
        --remaining;
        break;
      }
    }
  }

  // Attach each composable triple to the step at which it becomes fully
  // assigned (identities count as step -1 and need no check: units hold by
  // construction in both source and target).
  plan.checks.resize(plan.steps.size());
  auto step_of = [&](Idx mi) -> int {
    return s.is_identity(mi) ? -1 : static_cast<int>(place[mi]);
  };
  for (Idx f = 0; f < m; ++f) {
    for (Idx g : s.out(s.dst(f))) {
      const Idx gf = s.compose(g, f);
      const int last = std::max({step_of(f), step_of(g), step_of(gf)});
      if (last >= 0) plan.checks[last].push_back({g, f, gf});
    }
  }
  return plan;
}

}  // namespace

std::vector<Functor> enumerate_functors(CatPtr src, CatPtr dst, const EnumConstraints& k,
                                        std::size_t budget) {
  const FinCat& s = *src;
  const FinCat& d = *dst;
  std::vector<Functor> out;
  BudgetCounter bc{0, budget};

  if (s.object_count() == 0) {
    out.push_back(Functor{src, dst, {}, {}});
    return out;
  }
  if (d.object_count() == 0) return out;

  const MorPlan plan = make_plan(s);
  std::vector<Idx> omap(s.object_count(), kNone);
  std::vector<Idx> mmap(s.morphism_count(), kNone);

  // Hom-cardinality prune between already-assigned objects.
  auto obj_compatible = [&](Idx o, Idx cand) {
    for (Idx p = 0; p < o; ++p) {
      if (!s.hom(p, o).empty() && d.hom(omap[p], cand).empty()) return false;
      if (!s.hom(o, p).empty() && d.hom(cand, omap[p]).empty()) return false;
    }
    if (!s.hom(o, o).empty() && d.hom(cand, cand).empty()) return false;
    return true;
  };

  auto mor_candidate_ok = [&](Idx mi, Idx cand) {
    return !k.mor_ok || k.mor_ok(mi, cand);
  };

  std::function<void(std::size_t)> place_mor = [&](std::size_t step) {
    if (step == plan.steps.size()) {
      Functor f{src, dst, omap, mmap};
      out.push_back(std::move(f));
      return;
    }
    const auto& st = plan.steps[step];
    const Idx mi = st.mor;
    auto run_checks = [&]() {
      for (const auto& t : plan.checks[step]) {
        if (d.compose(mmap[t[0]], mmap[t[1]]) != mmap[t[2]]) return false;
      }
      return true;
    };
    if (st.via_g != kNone) {
      bc.tick();
      const Idx forced = d.compose(mmap[st.via_g], mmap[st.via_f]);
      if (!mor_candidate_ok(mi, forced)) return;
      mmap[mi] = forced;
      if (run_checks()) place_mor(step + 1);
      mmap[mi] = kNone;
      return;
    }
    for (Idx cand : d.hom(omap[s.src(mi)], omap[s.dst(mi)])) {
      bc.tick();
      if (!mor_candidate_ok(mi, cand)) continue;
      mmap[mi] = cand;
      if (run_checks()) place_mor(step + 1);
      mmap[mi] = kNone;
    }
  };

  std::function<void(Idx)> place_obj = [&](Idx o) {
    if (o == s.object_count()) {
      for (Idx i = 0; i < s.morphism_count(); ++i)
        if (s.is_identity(i)) mmap[i] = d.identity(omap[s.src(i)]);
      place_mor(0);
      return;
    }
    for (Idx cand = 0; cand < d.object_count(); ++cand) {
      bc.tick();
      if (k.obj_ok && !k.obj_ok(o, cand)) continue;
      if (!obj_compatible(o, cand)) continue;
      omap[o] = cand;
      place_obj(o + 1);
      omap[o] = kNone;
    }
  };
  place_obj(0);

  std::sort(out.begin(), out.end(), [](const Functor& a, const Functor& b) {
    if (a.obj_map != b.obj_map) return a.obj_map < b.obj_map;
    return a.mor_map < b.mor_map;
  });
  return out;
}

std::vector<std::vector<Idx>> enumerate_nat_components(
    const Functor& f, const Functor& g, const std::function<bool(Idx, Idx)>& comp_ok,
    std::size_t budget) {
  const FinCat& s = *f.source;
  const FinCat& d = *f.target;
  std::vector<std::vector<Idx>> out;
  BudgetCounter bc{0, budget};

  std::vector<Idx> comp(s.object_count(), kNone);
  // naturality checks that become complete once object `o` is assigned
  std::vector<std::vector<Idx>> checks(s.object_count());
  for (Idx m = 0; m < s.morphism_count(); ++m)
    checks[std::max(s.src(m), s.dst(m))].push_back(m);

  std::function<void(Idx)> place = [&](Idx o) {
    if (o == s.object_count()) {
      out.push_back(comp);
      return;
    }
    for (Idx cand : d.hom(f.obj_map[o], g.obj_map[o])) {
      bc.tick();
      if (comp_ok && !comp_ok(o, cand)) continue;
      comp[o] = cand;
      bool ok = true;
      for (Idx m : checks[o]) {
        if (d.compose(comp[s.dst(m)], f.mor_map[m]) != d.compose(g.mor_map[m], comp[s.src(m)])) {
          ok = false;
          break;
        }
      }
      if (ok) place(o + 1);
      comp[o] = kNone;
    }
  };
  place(0);
  return out;  // lexicographic by construction
}

Idx EnumeratedFunCat::object_of(const std::vector<Idx>& obj_map,
                                const std::vector<Idx>& mor_map) const {
  std::string key;
  key.reserve((obj_map.size() + mor_map.size()) * 4);
  for (Idx o : obj_map) key += std::to_string(o) + ",";
  key += ";";
  for (Idx m : mor_map) key += std::to_string(m) + ",";
  auto it = obj_lookup.find(key);
  return it == obj_lookup.end() ? kNone : it->second;
}

Idx EnumeratedFunCat::morphism_of(Idx src_fun, Idx dst_fun,
                                  const std::vector<Idx>& components) const {
  std::string key = std::to_string(src_fun) + ">" + std::to_string(dst_fun) + ":";
  for (Idx c : components) key += std::to_string(c) + ",";
  auto it = mor_lookup.find(key);
  return it == mor_lookup.end() ? kNone : it->second;
}

NatTrans EnumeratedFunCat::nat_trans(Idx mor) const {
  const auto& m = morphisms[mor];
  return NatTrans{objects[m.src_fun], objects[m.dst_fun], m.components};
}

EnumeratedFunCat assemble_fun_cat(CatPtr c, CatPtr d, std::vector<Functor> objects,
                                  const std::function<bool(Idx, Idx)>& comp_ok,
                                  std::size_t budget) {
  EnumeratedFunCat r;
  std::sort(objects.begin(), objects.end(), [](const Functor& a, const Functor& b) {
    if (a.obj_map != b.obj_map) return a.obj_map < b.obj_map;
    return a.mor_map < b.mor_map;
  });
  r.objects = std::move(objects);

  const std::size_t nf = r.objects.size();
  for (Idx i = 0; i < nf; ++i) {
    std::string key;
    for (Idx o : r.objects[i].obj_map) key += std::to_string(o) + ",";
    key += ";";
    for (Idx m : r.objects[i].mor_map) key += std::to_string(m) + ",";
    r.obj_lookup.emplace(std::move(key), i);
  }

  CatBuilder b;
  const std::size_t width_hint_obj = nf;
  for (Idx i = 0; i < nf; ++i) b.add_object("F" + pad_index(i, width_hint_obj));

  // Enumerate transformations pairwise; collect first so morphism ids can be
  // zero-padded to a stable width.
  std::vector<EnumeratedFunCat::Mor> mors;
  for (Idx i = 0; i < nf; ++i) {
    for (Idx j = 0; j < nf; ++j) {
      for (auto& comps : enumerate_nat_components(r.objects[i], r.objects[j], comp_ok, budget))
        mors.push_back({i, j, std::move(comps)});
    }
  }
  const std::size_t nm = mors.size();
  r.morphisms = std::move(mors);
  for (Idx t = 0; t < nm; ++t) {
    std::string key =
        std::to_string(r.morphisms[t].src_fun) + ">" + std::to_string(r.morphisms[t].dst_fun) + ":";
    for (Idx x : r.morphisms[t].components) key += std::to_string(x) + ",";
    r.mor_lookup.emplace(std::move(key), t);
  }
  for (Idx t = 0; t < nm; ++t) {
    b.add_morphism("t" + pad_index(t, nm), "F" + pad_index(r.morphisms[t].src_fun, width_hint_obj),
                   "F" + pad_index(r.morphisms[t].dst_fun, width_hint_obj));
  }
  for (Idx i = 0; i < nf; ++i) {
    const auto idn = identity_nat(r.objects[i]);
    const Idx t = r.morphism_of(i, i, idn.components);
    if (t == kNone) fail(Errc::validation_error, "identity transformation missing from enumeration");
    b.set_identity("F" + pad_index(i, width_hint_obj), "t" + pad_index(t, nm));
  }

  CatSkeleton sk = std::move(b).freeze();
  // "F000..." and "t000..." sort in insertion order, so indices line up.

  const FinCat& dd = *d;
  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat&, Idx g, Idx f) {
        const auto& gm = r.morphisms[g];
        const auto& fm = r.morphisms[f];
        std::vector<Idx> comp(fm.components.size());
        for (std::size_t o = 0; o < comp.size(); ++o)
          comp[o] = dd.compose(gm.components[o], fm.components[o]);
        return r.morphism_of(fm.src_fun, gm.dst_fun, comp);
      }));
  r.cat = cat;
  (void)c;
  return r;
}

EnumeratedFunCat functor_category(CatPtr c, CatPtr d, std::size_t budget) {
  auto objects = enumerate_functors(c, d, {}, budget);
  return assemble_fun_cat(c, d, std::move(objects), nullptr, budget);
}

}  // namespace parcat
