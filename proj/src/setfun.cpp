#include "parcat/setfun.hpp"

namespace parcat {

void SetFunctor::validate() const {
  const FinCat& c = *cat;
  if (size.size() != c.object_count() || act.size() != c.morphism_count())
    fail(Errc::validation_error, "set functor tables have the wrong size");
  for (Idx m = 0; m < c.morphism_count(); ++m) {
    if (act[m].size() != size[c.src(m)])
      fail(Errc::validation_error, "set functor table at '" + c.morphism_id(m) + "' has wrong domain");
    for (Idx v : act[m])
      if (v >= size[c.dst(m)])
        fail(Errc::validation_error, "set functor value out of range at '" + c.morphism_id(m) + "'");
  }
  for (Idx o = 0; o < c.object_count(); ++o) {
    const auto& idm = act[c.identity(o)];
    for (Idx i = 0; i < idm.size(); ++i)
      if (idm[i] != i) fail(Errc::validation_error, "set functor breaks an identity");
  }
  for (Idx f = 0; f < c.morphism_count(); ++f) {
    for (Idx g : c.out(c.dst(f))) {
      const Idx gf = c.compose(g, f);
      for (Idx x = 0; x < size[c.src(f)]; ++x)
        if (act[gf][x] != act[g][act[f][x]])
          fail(Errc::validation_error, "set functor breaks composition on (" + c.morphism_id(g) +
                                           ", " + c.morphism_id(f) + ")");
    }
  }
}

SetFunctor terminal_set_functor(CatPtr cat) {
  SetFunctor f;
  f.size.assign(cat->object_count(), 1);
  f.act.assign(cat->morphism_count(), std::vector<Idx>{0});
  f.cat = std::move(cat);
  return f;
}

SetFunctor product_set_functor(const SetFunctor& a, const SetFunctor& b) {
  if (!a.cat->equals(*b.cat)) fail(Errc::target_mismatch, "set functor product over different bases");
  SetFunctor f;
  f.cat = a.cat;
  const FinCat& c = *a.cat;
  f.size.resize(c.object_count());
  for (Idx o = 0; o < c.object_count(); ++o) f.size[o] = a.size[o] * b.size[o];
  f.act.resize(c.morphism_count());
  for (Idx m = 0; m < c.morphism_count(); ++m) {
    f.act[m].resize(f.size[c.src(m)]);
    for (Idx x = 0; x < a.size[c.src(m)]; ++x)
      for (Idx y = 0; y < b.size[c.src(m)]; ++y)
        f.act[m][x * b.size[c.src(m)] + y] = a.act[m][x] * b.size[c.dst(m)] + b.act[m][y];
  }
  return f;
}

SetFunctor corepresentable_set_functor(CatPtr cat, Idx v) {
  SetFunctor f;
  f.cat = cat;
  const FinCat& c = *cat;
  f.size.resize(c.object_count());
  // element k of F(W) = k-th morphism of hom(v, W) in canonical order
  for (Idx w = 0; w < c.object_count(); ++w) f.size[w] = static_cast<Idx>(c.hom(v, w).size());
  f.act.resize(c.morphism_count());
  for (Idx m = 0; m < c.morphism_count(); ++m) {
    auto from = c.hom(v, c.src(m));
    auto to = c.hom(v, c.dst(m));
    f.act[m].resize(from.size());
    for (Idx k = 0; k < from.size(); ++k) {
      const Idx comp = c.compose(m, from[k]);
      f.act[m][k] = static_cast<Idx>(std::find(to.begin(), to.end(), comp) - to.begin());
    }
  }
  return f;
}

std::vector<std::vector<std::vector<Idx>>> enumerate_set_nat_trans(const SetFunctor& p,
                                                                   const SetFunctor& q,
                                                                   std::size_t budget) {
  const FinCat& c = *p.cat;
  std::vector<std::vector<std::vector<Idx>>> out;
  std::vector<std::vector<Idx>> alpha(c.object_count());
  for (Idx o = 0; o < c.object_count(); ++o) alpha[o].assign(p.size[o], kNone);

  // Flat list of element slots in canonical order, with propagation.
  struct Slot {
    Idx obj, elt;
  };
  std::vector<Slot> slots;
  for (Idx o = 0; o < c.object_count(); ++o)
    for (Idx e = 0; e < p.size[o]; ++e) slots.push_back({o, e});

  std::size_t used = 0;
  auto tick = [&] {
    if (++used > budget)
      fail(Errc::size_budget_exceeded, "natural transformation enumeration budget exceeded");
  };

  // Check every naturality constraint touching an assigned slot; propagate
  // forced values. Returns false on contradiction; records assignments made
  // into `trail`.
  std::function<bool(Idx, Idx, std::vector<std::pair<Idx, Idx>>&)> assign =
      [&](Idx obj, Idx elt, std::vector<std::pair<Idx, Idx>>& trail) -> bool {
    std::vector<std::pair<Idx, Idx>> queue{{obj, elt}};
    while (!queue.empty()) {
      auto [o, e] = queue.back();
      queue.pop_back();
      for (Idx m : c.out(o)) {
        const Idx o2 = c.dst(m);
        const Idx e2 = p.act[m][e];
        const Idx want = q.act[m][alpha[o][e]];
        if (alpha[o2][e2] == kNone) {
          alpha[o2][e2] = want;
          trail.emplace_back(o2, e2);
          queue.emplace_back(o2, e2);
        } else if (alpha[o2][e2] != want) {
          return false;
        }
      }
      for (Idx m : c.in(o)) {
        // constraints from already-assigned sources
        const Idx o1 = c.src(m);
        for (Idx e1 = 0; e1 < p.size[o1]; ++e1) {
          if (p.act[m][e1] != e || alpha[o1][e1] == kNone) continue;
          if (q.act[m][alpha[o1][e1]] != alpha[o][e]) return false;
        }
      }
    }
    return true;
  };

  std::function<void(std::size_t)> place = [&](std::size_t s) {
    while (s < slots.size() && alpha[slots[s].obj][slots[s].elt] != kNone) ++s;
    if (s == slots.size()) {
      out.push_back(alpha);
      return;
    }
    const auto [o, e] = slots[s];
    for (Idx cand = 0; cand < q.size[o]; ++cand) {
      tick();
      std::vector<std::pair<Idx, Idx>> trail;
      alpha[o][e] = cand;
      trail.emplace_back(o, e);
      if (assign(o, e, trail)) place(s + 1);
      for (auto [ro, re] : trail) alpha[ro][re] = kNone;
    }
  };
  place(0);
  return out;
}

Idx ElementsCat::object_of(Idx base_obj, Idx elt) const {
  auto it = lookup.find((static_cast<std::uint64_t>(base_obj) << 32) | elt);
  return it == lookup.end() ? kNone : it->second;
}

ElementsCat category_of_elements(const SetFunctor& f) {
  const FinCat& s = *f.cat;
  ElementsCat r;
  CatBuilder b;
  auto oid = [&](Idx o, Idx e) { return "(" + s.object_id(o) + "#" + std::to_string(e) + ")"; };
  for (Idx o = 0; o < s.object_count(); ++o)
    for (Idx e = 0; e < f.size[o]; ++e) b.add_object(oid(o, e));
  auto mid = [&](Idx m, Idx e) { return "[" + s.morphism_id(m) + "]" + oid(s.src(m), e); };
  for (Idx m = 0; m < s.morphism_count(); ++m)
    for (Idx e = 0; e < f.size[s.src(m)]; ++e)
      b.add_morphism(mid(m, e), oid(s.src(m), e), oid(s.dst(m), f.act[m][e]));
  for (Idx o = 0; o < s.object_count(); ++o)
    for (Idx e = 0; e < f.size[o]; ++e) b.set_identity(oid(o, e), mid(s.identity(o), e));

  CatSkeleton sk = std::move(b).freeze();
  r.obj_elt.resize(sk.object_count());
  for (Idx o = 0; o < s.object_count(); ++o)
    for (Idx e = 0; e < f.size[o]; ++e) {
      const Idx i = sk.object_index(oid(o, e));
      r.obj_elt[i] = {o, e};
      r.lookup.emplace((static_cast<std::uint64_t>(o) << 32) | e, i);
    }
  std::vector<std::pair<Idx, Idx>> mor_data(sk.morphism_count());  // (base mor, src element)
  for (Idx m = 0; m < s.morphism_count(); ++m)
    for (Idx e = 0; e < f.size[s.src(m)]; ++e)
      mor_data[sk.morphism_index(mid(m, e))] = {m, e};

  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx g, Idx mf) {
        const auto [bm1, e1] = mor_data[mf];
        const auto [bm2, e2] = mor_data[g];
        (void)e2;
        return cc.morphism_index(mid(s.compose(bm2, bm1), e1));
      }));

  Functor proj{cat, f.cat, {}, {}};
  for (auto [o, e] : r.obj_elt) {
    proj.obj_map.push_back(o);
    (void)e;
  }
  for (Idx i = 0; i < cat->morphism_count(); ++i) proj.mor_map.push_back(mor_data[i].first);
  r.tcat = make_tcat(std::move(proj));
  return r;
}

}  // namespace parcat
