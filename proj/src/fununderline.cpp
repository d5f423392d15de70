#include "parcat/paramcat.hpp"

#include "family_enum.hpp"

namespace parcat {

namespace {

std::string fam_key(Idx base_mor, Idx src_obj, Idx dst_obj, const std::vector<Idx>& family) {
  std::string k = std::to_string(base_mor) + ";" + std::to_string(src_obj) + ">" +
                  std::to_string(dst_obj) + ":";
  for (Idx c : family) k += std::to_string(c) + ",";
  return k;
}

std::string fun_key(Idx base_obj, const Functor& f) {
  std::string k = std::to_string(base_obj) + ";";
  for (Idx o : f.obj_map) k += std::to_string(o) + ",";
  k += ";";
  for (Idx m : f.mor_map) k += std::to_string(m) + ",";
  return k;
}

}  // namespace

Idx FunUnderline::object_of(Idx base_obj, const Functor& h) const {
  auto it = obj_lookup.find(fun_key(base_obj, h));
  return it == obj_lookup.end() ? kNone : it->second;
}

Idx FunUnderline::morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor,
                              const std::vector<Idx>& family) const {
  auto it = mor_lookup.find(fam_key(base_mor, src_obj, dst_obj, family));
  return it == mor_lookup.end() ? kNone : it->second;
}

FunUnderline fun_underline(const TCat& c, const TCat& d, std::size_t budget) {
  if (!c.base->equals(*d.base))
    fail(Errc::target_mismatch, "internal hom of T-categories over different bases");
  FunUnderline r;
  r.c = c;
  r.d = d;
  const FinCat& s = *c.base;
  const FinCat& dtot = *d.total;

  // Slices {V}♭ ↓ ♮C with marked edges the cocartesian second components.
  for (Idx v = 0; v < s.object_count(); ++v) {
    auto inc = object_inclusion(c.base, v);
    r.slices.push_back(
        lax_pullback(inc.include, c.structure, EdgeMarking::Sharp(),
                     EdgeMarking::Given(std::vector<char>(c.is_cocart.begin(), c.is_cocart.end()))));
  }

  // Objects over V: functors slice_V -> total(d), strictly over the base,
  // carrying marked edges to cocartesian edges.
  struct ObjRec {
    Idx base;
    Functor fun;
  };
  std::vector<ObjRec> objs;
  for (Idx v = 0; v < s.object_count(); ++v) {
    const auto& sl = r.slices[v];
    EnumConstraints k;
    k.obj_ok = [&](Idx o, Idx cand) { return d.base_of_obj(cand) == sl.to_base.obj_map[o]; };
    k.mor_ok = [&](Idx m, Idx cand) {
      if (d.base_of_mor(cand) != sl.to_base.mor_map[m]) return false;
      return sl.marked[m] == 0 || d.is_cocart[cand];
    };
    for (auto& f : enumerate_functors(sl.cat, d.total, k, budget))
      objs.push_back({v, std::move(f)});
  }

  // Restriction along f: V -> W.
  r.restrict_along.resize(s.morphism_count());
  for (Idx f = 0; f < s.morphism_count(); ++f) {
    const auto& from = r.slices[s.dst(f)];
    const auto& to = r.slices[s.src(f)];
    Functor res{from.cat, to.cat, {}, {}};
    res.obj_map.resize(from.cat->object_count());
    for (Idx o = 0; o < from.cat->object_count(); ++o) {
      const auto& [pt, y, e] = from.obj_data[o];
      (void)pt;
      res.obj_map[o] = to.object_of(0, y, s.compose(e, f));
    }
    res.mor_map.resize(from.cat->morphism_count());
    for (Idx m = 0; m < from.cat->morphism_count(); ++m) {
      const Idx nn = from.mor_data[m].second;
      Idx found = kNone;
      for (Idx cand : to.cat->hom(res.obj_map[from.cat->src(m)], res.obj_map[from.cat->dst(m)])) {
        if (to.mor_data[cand].second == nn) {
          found = cand;
          break;
        }
      }
      if (found == kNone) fail(Errc::validation_error, "slice restriction misses a morphism");
      res.mor_map[m] = found;
    }
    res.validate();
    r.restrict_along[f] = std::move(res);
  }

  // Morphisms over f: vertical natural families indexed by the target slice.
  struct MorRec {
    Idx base, src_fun, dst_fun;
    std::vector<Idx> family;
  };
  std::vector<MorRec> mors;
  for (Idx so = 0; so < objs.size(); ++so) {
    for (Idx to2 = 0; to2 < objs.size(); ++to2) {
      for (Idx f : s.hom(objs[so].base, objs[to2].base)) {
        const auto& slt = r.slices[objs[to2].base];
        const Functor& res = r.restrict_along[f];
        const Functor& hs = objs[so].fun;
        const Functor& ht = objs[to2].fun;
        auto candidates = [&](std::size_t slot) {
          std::vector<Idx> cands;
          const Idx from = hs.obj_map[res.obj_map[slot]];
          const Idx to3 = ht.obj_map[slot];
          const Idx idb = s.identity(d.base_of_obj(to3));
          for (Idx cand : dtot.hom(from, to3))
            if (d.base_of_mor(cand) == idb) cands.push_back(cand);
          return cands;
        };
        auto check = [&](const std::vector<Idx>& fam, std::size_t slot) {
          for (Idx fm = 0; fm < slt.cat->morphism_count(); ++fm) {
            const Idx a = slt.cat->src(fm), bb = slt.cat->dst(fm);
            if ((a != slot && bb != slot) || fam[a] == kNone || fam[bb] == kNone) continue;
            if (dtot.compose(fam[bb], hs.mor_map[res.mor_map[fm]]) !=
                dtot.compose(ht.mor_map[fm], fam[a]))
              return false;
          }
          return true;
        };
        for (auto& fam :
             detail::enumerate_families(slt.cat->object_count(), candidates, check, budget))
          mors.push_back({f, static_cast<Idx>(so), static_cast<Idx>(to2), std::move(fam)});
      }
    }
  }

  CatBuilder b;
  for (Idx x = 0; x < objs.size(); ++x) b.add_object("H" + pad_index(x, objs.size()));
  for (Idx t2 = 0; t2 < mors.size(); ++t2)
    b.add_morphism("t" + pad_index(t2, mors.size()),
                   "H" + pad_index(mors[t2].src_fun, objs.size()),
                   "H" + pad_index(mors[t2].dst_fun, objs.size()));

  r.obj_base.resize(objs.size());
  r.obj_fun.resize(objs.size());
  for (Idx x = 0; x < objs.size(); ++x) {
    r.obj_base[x] = objs[x].base;
    r.obj_fun[x] = objs[x].fun;
    r.obj_lookup.emplace(fun_key(objs[x].base, objs[x].fun), x);
  }
  r.mor_base.resize(mors.size());
  r.mor_family.resize(mors.size());
  for (Idx t2 = 0; t2 < mors.size(); ++t2) {
    r.mor_base[t2] = mors[t2].base;
    r.mor_family[t2] = mors[t2].family;
    r.mor_lookup.emplace(
        fam_key(mors[t2].base, mors[t2].src_fun, mors[t2].dst_fun, mors[t2].family), t2);
  }

  for (Idx x = 0; x < objs.size(); ++x) {
    const auto& slt = r.slices[objs[x].base];
    std::vector<Idx> fam;
    for (Idx o = 0; o < slt.cat->object_count(); ++o)
      fam.push_back(dtot.identity(objs[x].fun.obj_map[o]));
    const Idx found = r.morphism_of(x, x, s.identity(objs[x].base), fam);
    if (found == kNone) fail(Errc::validation_error, "identity family missing from internal hom");
    b.set_identity("H" + pad_index(x, objs.size()), "t" + pad_index(found, mors.size()));
  }

  CatSkeleton sk = std::move(b).freeze();
  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx m2, Idx m1) {
        const Idx f1 = r.mor_base[m1], f2 = r.mor_base[m2];
        const Idx comp_base = s.compose(f2, f1);
        const auto& slu = r.slices[r.obj_base[cc.dst(m2)]];
        std::vector<Idx> fam(slu.cat->object_count());
        for (Idx o = 0; o < slu.cat->object_count(); ++o)
          fam[o] = dtot.compose(r.mor_family[m2][o],
                                r.mor_family[m1][r.restrict_along[f2].obj_map[o]]);
        return r.morphism_of(cc.src(m1), cc.dst(m2), comp_base, fam);
      }));

  Functor st{cat, c.base, {}, {}};
  for (Idx x = 0; x < cat->object_count(); ++x) st.obj_map.push_back(r.obj_base[x]);
  for (Idx m = 0; m < cat->morphism_count(); ++m) st.mor_map.push_back(r.mor_base[m]);
  r.tcat = make_tcat(std::move(st));
  return r;
}

// ---------------------------------------------------------------------------
// Currying

namespace {

// Shared evaluation plumbing: turns data over pairs into functions of the
// product slice, evaluating the inner internal hom at identity arrows.
struct CurryEval {
  const FunUnderline* inner;
  const TCatProduct* cd;
  const TCat* c;
  const TCat* d;
  const TCat* e;

  Idx inner_id_slice_obj(Idx p, Idx z) const {
    return inner->slices[p].object_of(0, z, c->base->identity(p));
  }

  // K(n_d cross): the image in total(e) of the inner slice morphism
  // (z, id) -> (z', nu) with second component n_d.
  Idx inner_cross_image(const Functor& k, Idx p, Idx z, Idx z2, Idx nu, Idx nd) const {
    const auto& sl = inner->slices[p];
    const Idx from = inner_id_slice_obj(p, z);
    const Idx to = sl.object_of(0, z2, nu);
    for (Idx cand : sl.cat->hom(from, to))
      if (sl.mor_data[cand].second == nd) return k.mor_map[cand];
    fail(Errc::validation_error, "inner slice cross morphism missing");
  }
};

}  // namespace

CurryComparison curry_compare(const TCat& c, const TCat& d, const TCat& e, std::size_t budget) {
  CurryComparison r;
  r.inner = fun_underline(d, e, budget);
  r.lhs = fun_underline(c, r.inner.tcat, budget);
  r.cd = product_tcat(c, d);
  r.rhs = fun_underline(r.cd.tcat, e, budget);

  const FinCat& s = *c.base;
  const FinCat& etot = *e.total;
  CurryEval ev{&r.inner, &r.cd, &c, &d, &e};

  // objects: H over V becomes the functor on the product slice
  auto translate_obj = [&](Idx h) -> Idx {
    const Idx v = r.lhs.obj_base[h];
    const Functor& hfun = r.lhs.obj_fun[h];
    const auto& psl = r.rhs.slices[v];   // {V} ↓ (C×D)
    const auto& csl = r.lhs.slices[v];   // {V} ↓ C
    Functor out{psl.cat, e.total, {}, {}};
    out.obj_map.resize(psl.cat->object_count());
    for (Idx o = 0; o < psl.cat->object_count(); ++o) {
      const auto& [pt, w, ee] = psl.obj_data[o];
      (void)pt;
      const auto [y, z] = r.cd.pairs.obj_pair[w];
      const Idx k = hfun.obj_map[csl.object_of(0, y, ee)];
      out.obj_map[o] = r.inner.obj_fun[k].obj_map[ev.inner_id_slice_obj(c.base_of_obj(y), z)];
    }
    out.mor_map.resize(psl.cat->morphism_count());
    for (Idx m = 0; m < psl.cat->morphism_count(); ++m) {
      const Idx nn = psl.mor_data[m].second;
      const auto [nc, nd] = r.cd.pairs.mor_pair[nn];
      const Idx nu = c.base_of_mor(nc);
      const auto& src_triple = psl.obj_data[psl.cat->src(m)];
      const auto& dst_triple = psl.obj_data[psl.cat->dst(m)];
      const auto [y, z] = r.cd.pairs.obj_pair[src_triple[1]];
      const auto [y2, z2] = r.cd.pairs.obj_pair[dst_triple[1]];
      // H applied to the slice morphism with second component nc
      const Idx so = csl.object_of(0, y, src_triple[2]);
      const Idx to2 = csl.object_of(0, y2, dst_triple[2]);
      Idx cmor = kNone;
      for (Idx cand : csl.cat->hom(so, to2))
        if (csl.mor_data[cand].second == nc) {
          cmor = cand;
          break;
        }
      if (cmor == kNone) fail(Errc::validation_error, "product slice morphism has no C part");
      const Idx ehat = hfun.mor_map[cmor];  // inner edge over nu
      const Idx k = hfun.obj_map[so];
      const Idx py2 = c.base_of_obj(y2);
      const Idx hcomp = r.inner.mor_family[ehat][ev.inner_id_slice_obj(py2, z2)];
      const Idx cross =
          ev.inner_cross_image(r.inner.obj_fun[k], c.base_of_obj(y), z, z2, nu, nd);
      out.mor_map[m] = etot.compose(hcomp, cross);
    }
    out.validate();
    const Idx target = r.rhs.object_of(v, out);
    if (target == kNone) fail(Errc::validation_error, "curried functor missing from the target");
    return target;
  };

  Functor cmp{r.lhs.tcat.total, r.rhs.tcat.total, {}, {}};
  cmp.obj_map.resize(r.lhs.tcat.total->object_count());
  for (Idx h = 0; h < cmp.obj_map.size(); ++h) cmp.obj_map[h] = translate_obj(h);
  cmp.mor_map.resize(r.lhs.tcat.total->morphism_count());
  for (Idx a = 0; a < cmp.mor_map.size(); ++a) {
    const Idx f = r.lhs.mor_base[a];
    const Idx wv = s.dst(f);
    const auto& pslw = r.rhs.slices[wv];
    const auto& cslw = r.lhs.slices[wv];
    std::vector<Idx> fam(pslw.cat->object_count());
    for (Idx o = 0; o < pslw.cat->object_count(); ++o) {
      const auto& [pt, w, ee] = pslw.obj_data[o];
      (void)pt;
      const auto [y, z] = r.cd.pairs.obj_pair[w];
      const Idx alpha_inner =
          r.lhs.mor_family[a][cslw.object_of(0, y, ee)];  // vertical inner edge
      fam[o] = r.inner.mor_family[alpha_inner][ev.inner_id_slice_obj(c.base_of_obj(y), z)];
    }
    const Idx src_obj = r.lhs.tcat.total->src(a);
    const Idx dst_obj = r.lhs.tcat.total->dst(a);
    const Idx target = r.rhs.morphism_of(cmp.obj_map[src_obj], cmp.obj_map[dst_obj], f, fam);
    if (target == kNone)
      fail(Errc::validation_error, "curried transformation missing from the target");
    cmp.mor_map[a] = target;
  }
  cmp.validate();
  TFunctor tcmp{r.lhs.tcat, r.rhs.tcat, std::move(cmp)};
  tcmp.validate();
  r.comparison = std::move(tcmp);
  r.fiberwise = t_equivalence_report(r.comparison);

  // Global statement on T-functor categories.
  r.global_lhs = fun_T(c, r.inner.tcat, budget);
  r.global_rhs = fun_T(r.cd.tcat, e, budget);
  Functor gc{r.global_lhs.cat, r.global_rhs.cat, {}, {}};
  gc.obj_map.resize(r.global_lhs.objects.size());
  for (Idx i = 0; i < gc.obj_map.size(); ++i) {
    const Functor& psi = r.global_lhs.objects[i];
    Functor out{r.cd.tcat.total, e.total, {}, {}};
    out.obj_map.resize(r.cd.tcat.total->object_count());
    for (Idx w = 0; w < out.obj_map.size(); ++w) {
      const auto [y, z] = r.cd.pairs.obj_pair[w];
      const Idx k = psi.obj_map[y];
      out.obj_map[w] = r.inner.obj_fun[k].obj_map[ev.inner_id_slice_obj(c.base_of_obj(y), z)];
    }
    out.mor_map.resize(r.cd.tcat.total->morphism_count());
    for (Idx m = 0; m < out.mor_map.size(); ++m) {
      const auto [nc, nd] = r.cd.pairs.mor_pair[m];
      const Idx nu = c.base_of_mor(nc);
      const Idx y = c.total->src(nc), y2 = c.total->dst(nc);
      const Idx z = d.total->src(nd), z2 = d.total->dst(nd);
      const Idx ehat = psi.mor_map[nc];
      const Idx k = psi.obj_map[y];
      const Idx hcomp = r.inner.mor_family[ehat][ev.inner_id_slice_obj(c.base_of_obj(y2), z2)];
      const Idx cross =
          ev.inner_cross_image(r.inner.obj_fun[k], c.base_of_obj(y), z, z2, nu, nd);
      out.mor_map[m] = etot.compose(hcomp, cross);
    }
    out.validate();
    const Idx target = r.global_rhs.object_of(out.obj_map, out.mor_map);
    if (target == kNone) fail(Errc::validation_error, "curried T-functor missing from the target");
    gc.obj_map[i] = target;
  }
  gc.mor_map.resize(r.global_lhs.morphisms.size());
  for (Idx t2 = 0; t2 < gc.mor_map.size(); ++t2) {
    const auto& rec = r.global_lhs.morphisms[t2];
    std::vector<Idx> comps(r.cd.tcat.total->object_count());
    for (Idx w = 0; w < comps.size(); ++w) {
      const auto [y, z] = r.cd.pairs.obj_pair[w];
      comps[w] = r.inner.mor_family[rec.components[y]][ev.inner_id_slice_obj(c.base_of_obj(y), z)];
    }
    const Idx target =
        r.global_rhs.morphism_of(gc.obj_map[rec.src_fun], gc.obj_map[rec.dst_fun], comps);
    if (target == kNone)
      fail(Errc::validation_error, "curried global transformation missing from the target");
    gc.mor_map[t2] = target;
  }
  gc.validate();
  r.global_comparison = std::move(gc);
  r.global_report = equivalence_report(r.global_comparison);
  return r;
}

}  // namespace parcat
