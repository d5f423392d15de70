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

CofreeComparison cofree_compare(const TCat& c, CatPtr d, std::size_t budget) {
  CofreeComparison r;
  r.cod = underline_objects(d, c.base, budget);
  r.lhs = fun_T(c, r.cod.fun.tcat, budget);
  r.rhs = functor_category(c.total, d, budget);

  const FinCat& s = *c.base;
  const FinCat& tot = *c.total;
  const FunTilde& ft = r.cod.fun;
  const FinCat& yt = *ft.tcat.total;  // total of the T-objects category
  const ProductCat& dxs = r.cod.d_times_s;

  // In the coslice fiber over s, the object "identity arrow of s".
  auto id_object = [&](Idx v) {
    return ft.x_fibers[v].cat->object_index(s.morphism_id(s.identity(v)));
  };
  // Decode a fiber object of the constant T-category into its d part.
  auto d_of = [&](Idx v, Idx yfiber_obj) {
    return dxs.obj_pair[ft.y_fibers[v].obj_in_total[yfiber_obj]].first;
  };
  auto d_of_mor = [&](Idx y_total_mor) { return dxs.mor_pair[y_total_mor].first; };

  // Evaluation of an object of fun_T(c, D_T) at identity arrows.
  auto evaluate = [&](const Functor& phi) {
    Functor ev{c.total, d, {}, {}};
    ev.obj_map.resize(tot.object_count());
    for (Idx xo = 0; xo < tot.object_count(); ++xo) {
      const Idx o = phi.obj_map[xo];
      ev.obj_map[xo] = d_of(ft.obj_base[o], ft.obj_fun[o].obj_map[id_object(ft.obj_base[o])]);
    }
    ev.mor_map.resize(tot.morphism_count());
    for (Idx m = 0; m < tot.morphism_count(); ++m) {
      const Idx f = c.base_of_mor(m);
      const Idx sv = s.src(f), tv = s.dst(f);
      const Idx e = phi.mor_map[m];  // edge of D_T over f
      const Idx o = phi.obj_map[tot.src(m)];
      // component at the identity arrow of the target
      const Idx i0t = id_object(tv);
      const Idx comp = ft.mor_family[e][i0t];  // F(f^* id_t) -> G(id_t) over f
      // coslice-of-sv morphism  id_sv -> f^*(id_tv): its arrow
      const Idx pulled = ft.x_transport[f].obj_map[i0t];
      const Idx pulled_arrow = ft.x_fibers[sv].obj_in_total[pulled];  // an arrow out of sv
      const Idx chi = [&]() -> Idx {
        const Idx from = id_object(sv);
        for (Idx fm : ft.x_fibers[sv].cat->hom(from, pulled)) {
          (void)fm;
          return fm;
        }
        return kNone;
      }();
      (void)pulled_arrow;
      if (chi == kNone) fail(Errc::validation_error, "coslice connecting morphism missing");
      const Idx hchi =
          ft.y_fibers[sv].mor_in_total[ft.obj_fun[o].mor_map[chi]];  // in the y total
      ev.mor_map[m] = d_of_mor(yt.compose(comp, hchi));
    }
    return ev;
  };

  Functor cmp{r.lhs.cat, r.rhs.cat, {}, {}};
  cmp.obj_map.resize(r.lhs.objects.size());
  for (Idx i = 0; i < r.lhs.objects.size(); ++i) {
    const Functor ev = evaluate(r.lhs.objects[i]);
    const Idx target = r.rhs.object_of(ev.obj_map, ev.mor_map);
    if (target == kNone) fail(Errc::validation_error, "evaluated functor missing from Fun(C, D)");
    cmp.obj_map[i] = target;
  }
  cmp.mor_map.resize(r.lhs.morphisms.size());
  for (Idx t2 = 0; t2 < r.lhs.morphisms.size(); ++t2) {
    const auto& rec = r.lhs.morphisms[t2];
    std::vector<Idx> comps(tot.object_count());
    for (Idx xo = 0; xo < tot.object_count(); ++xo) {
      const Idx mu = rec.components[xo];  // vertical edge of D_T
      const Idx v = c.base_of_obj(xo);
      comps[xo] = d_of_mor(ft.mor_family[mu][id_object(v)]);
    }
    const Idx target = r.rhs.morphism_of(cmp.obj_map[rec.src_fun], cmp.obj_map[rec.dst_fun], comps);
    if (target == kNone)
      fail(Errc::validation_error, "evaluated transformation missing from Fun(C, D)");
    cmp.mor_map[t2] = target;
  }
  cmp.validate();
  r.comparison = std::move(cmp);
  r.report = equivalence_report(r.comparison);
  return r;
}

// ---------------------------------------------------------------------------
// Right Kan extension

RightKanExtension right_kan_extend(const Functor& i, const TCat& d, std::size_t budget) {
  RightKanExtension r;
  r.op_t = opposite(i.target);
  r.op_u = opposite(i.source);
  if (!r.op_u->equals(*d.base))
    fail(Errc::target_mismatch, "the extended category must live over the opposite source");
  r.op_i = Functor{r.op_u, r.op_t, i.obj_map, i.mor_map};
  r.op_i.validate();

  const FinCat& opt = *r.op_t;
  const FinCat& dtot = *d.total;

  // Slices {t} ↓ op_u with their structure to op_u via the second
  // projection.
  r.slices.reserve(opt.object_count());
  for (Idx t = 0; t < opt.object_count(); ++t) {
    auto inc = object_inclusion(r.op_t, t);
    r.slices.push_back(lax_pullback(inc.include, r.op_i));
  }

  // Objects over t: functors slice_t -> total(d) strictly over op_u.
  struct ObjRec {
    Idx base;
    Functor fun;
  };
  std::vector<ObjRec> objs;
  for (Idx t = 0; t < opt.object_count(); ++t) {
    const auto& sl = r.slices[t];
    EnumConstraints k;
    k.obj_ok = [&](Idx o, Idx cand) { return d.base_of_obj(cand) == sl.to_second.obj_map[o]; };
    k.mor_ok = [&](Idx m, Idx cand) { return d.base_of_mor(cand) == sl.to_second.mor_map[m]; };
    for (auto& f : enumerate_functors(sl.cat, d.total, k, budget))
      objs.push_back({t, std::move(f)});
  }

  // Restriction along f: t -> t' carries slice objects (u, e') to (u, e'∘f).
  std::vector<Functor> restriction(opt.morphism_count());
  for (Idx f = 0; f < opt.morphism_count(); ++f) {
    const auto& from = r.slices[opt.dst(f)];
    const auto& to = r.slices[opt.src(f)];
    Functor res{from.cat, to.cat, {}, {}};
    res.obj_map.resize(from.cat->object_count());
    for (Idx o = 0; o < from.cat->object_count(); ++o) {
      const auto& [pt, u, e] = from.obj_data[o];
      (void)pt;
      res.obj_map[o] = to.object_of(0, u, opt.compose(e, f));
    }
    res.mor_map.resize(from.cat->morphism_count());
    for (Idx m = 0; m < from.cat->morphism_count(); ++m) {
      const auto [mm, nn] = from.mor_data[m];
      (void)mm;
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
    restriction[f] = std::move(res);
  }

  // Morphisms over f: vertical families indexed by the target slice.
  struct MorRec {
    Idx base, src_fun, dst_fun;
    std::vector<Idx> family;
  };
  std::vector<MorRec> mors;
  for (Idx so = 0; so < objs.size(); ++so) {
    for (Idx to2 = 0; to2 < objs.size(); ++to2) {
      for (Idx f : opt.hom(objs[so].base, objs[to2].base)) {
        const auto& slt = r.slices[objs[to2].base];
        const Functor& res = restriction[f];
        const Functor& hs = objs[so].fun;
        const Functor& ht = objs[to2].fun;
        const std::size_t n = slt.cat->object_count();
        auto candidates = [&](std::size_t slot) {
          std::vector<Idx> cands;
          const Idx from = hs.obj_map[res.obj_map[slot]];
          const Idx to3 = ht.obj_map[slot];
          const Idx idb = d.base->identity(d.base_of_obj(to3));
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
        for (auto& fam : detail::enumerate_families(n, candidates, check, budget))
          mors.push_back({f, static_cast<Idx>(so), static_cast<Idx>(to2), std::move(fam)});
      }
    }
  }

  CatBuilder b;
  for (Idx x = 0; x < objs.size(); ++x) b.add_object("R" + pad_index(x, objs.size()));
  for (Idx t2 = 0; t2 < mors.size(); ++t2)
    b.add_morphism("t" + pad_index(t2, mors.size()), "R" + pad_index(mors[t2].src_fun, objs.size()),
                   "R" + pad_index(mors[t2].dst_fun, objs.size()));

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
  auto lookup_mor = [&](Idx so, Idx to2, Idx f, const std::vector<Idx>& fam) -> Idx {
    auto it = r.mor_lookup.find(fam_key(f, so, to2, fam));
    return it == r.mor_lookup.end() ? kNone : it->second;
  };

  for (Idx x = 0; x < objs.size(); ++x) {
    const auto& slt = r.slices[objs[x].base];
    std::vector<Idx> fam;
    for (Idx o = 0; o < slt.cat->object_count(); ++o)
      fam.push_back(dtot.identity(objs[x].fun.obj_map[o]));
    const Idx found = lookup_mor(x, x, opt.identity(objs[x].base), fam);
    if (found == kNone) fail(Errc::validation_error, "identity family missing from extension");
    b.set_identity("R" + pad_index(x, objs.size()), "t" + pad_index(found, mors.size()));
  }

  CatSkeleton sk = std::move(b).freeze();
  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx m2, Idx m1) {
        const Idx f1 = r.mor_base[m1], f2 = r.mor_base[m2];
        const Idx comp_base = opt.compose(f2, f1);
        const auto& slu = r.slices[r.obj_base[cc.dst(m2)]];
        std::vector<Idx> fam(slu.cat->object_count());
        for (Idx o = 0; o < slu.cat->object_count(); ++o)
          fam[o] = dtot.compose(r.mor_family[m2][o],
                                r.mor_family[m1][restriction[f2].obj_map[o]]);
        return lookup_mor(cc.src(m1), cc.dst(m2), comp_base, fam);
      }));

  Functor st{cat, r.op_t, {}, {}};
  for (Idx x = 0; x < cat->object_count(); ++x) st.obj_map.push_back(r.obj_base[x]);
  for (Idx m = 0; m < cat->morphism_count(); ++m) st.mor_map.push_back(r.mor_base[m]);
  r.tcat = make_tcat(std::move(st));
  return r;
}

TFunctor rke_identity_compare(const RightKanExtension& r, const TCat& d) {
  // Defined when the extension was along the identity: evaluate an object
  // H over t at the slice object (t, id_t), and a morphism over f at the
  // connecting slice morphism.
  const FinCat& opt = *r.op_t;
  const FinCat& dtot = *d.total;
  Functor ev{r.tcat.total, d.total, {}, {}};
  auto id_slice_obj = [&](Idx t) { return r.slices[t].object_of(0, t, opt.identity(t)); };
  ev.obj_map.resize(r.tcat.total->object_count());
  for (Idx o = 0; o < ev.obj_map.size(); ++o)
    ev.obj_map[o] = r.obj_fun[o].obj_map[id_slice_obj(r.obj_base[o])];
  ev.mor_map.resize(r.tcat.total->morphism_count());
  for (Idx m = 0; m < ev.mor_map.size(); ++m) {
    const Idx f = r.mor_base[m];
    const Idx tv = opt.dst(f);
    const Idx src_fun = r.tcat.total->src(m);
    // component at (t', id) composed with H(cross morphism (t, f... ) -> (t', id))
    const Idx alpha = r.mor_family[m][id_slice_obj(tv)];
    // slice_{src} morphism (src-of-f object, id... ) -> (t', f) via n = f
    const auto& sls = r.slices[opt.src(f)];
    const Idx from = id_slice_obj(opt.src(f));
    const Idx to2 = sls.object_of(0, tv, f);
    Idx cross = kNone;
    for (Idx cand : sls.cat->hom(from, to2)) {
      if (sls.mor_data[cand].second == f) {
        cross = cand;
        break;
      }
    }
    if (cross == kNone) fail(Errc::validation_error, "slice cross morphism missing");
    ev.mor_map[m] = dtot.compose(alpha, r.obj_fun[src_fun].mor_map[cross]);
  }
  TFunctor tf{r.tcat, d, std::move(ev)};
  tf.validate();
  return tf;
}

FunTRestriction fun_T_restrict(const TFunctor& f, const TCat& e, std::size_t budget) {
  f.validate();
  FunTRestriction r;
  r.from = fun_T(f.target, e, budget);
  r.to = fun_T(f.source, e, budget);
  Functor ind{r.from.cat, r.to.cat, {}, {}};
  ind.obj_map.resize(r.from.objects.size());
  for (Idx i = 0; i < ind.obj_map.size(); ++i) {
    const Functor comp = compose(r.from.objects[i], f.underlying);
    const Idx target = r.to.object_of(comp.obj_map, comp.mor_map);
    if (target == kNone) fail(Errc::validation_error, "restricted T-functor missing");
    ind.obj_map[i] = target;
  }
  ind.mor_map.resize(r.from.morphisms.size());
  for (Idx t2 = 0; t2 < ind.mor_map.size(); ++t2) {
    const auto& rec = r.from.morphisms[t2];
    std::vector<Idx> comps;
    comps.reserve(f.source.total->object_count());
    for (Idx x = 0; x < f.source.total->object_count(); ++x)
      comps.push_back(rec.components[f.underlying.obj_map[x]]);
    const Idx target = r.to.morphism_of(ind.obj_map[rec.src_fun], ind.obj_map[rec.dst_fun], comps);
    if (target == kNone) fail(Errc::validation_error, "restricted transformation missing");
    ind.mor_map[t2] = target;
  }
  ind.validate();
  r.induced = std::move(ind);
  r.report = equivalence_report(r.induced);
  return r;
}

// ---------------------------------------------------------------------------
// Cocartesian sections

SectionsResult cocartesian_sections(const TCat& c, std::size_t budget) {
  SectionsResult r;
  r.sections = fun_T(star_tcat(c.base), c, budget);
  r.initial_base = c.base->find_initial();
  if (r.initial_base == kNone) return r;
  r.initial_fiber = fiber(c, r.initial_base);
  Functor ev{r.sections.cat, r.initial_fiber.cat, {}, {}};
  for (const auto& sec : r.sections.objects)
    ev.obj_map.push_back(r.initial_fiber.total_obj_to_fiber[sec.obj_map[r.initial_base]]);
  for (const auto& rec : r.sections.morphisms)
    ev.mor_map.push_back(r.initial_fiber.total_mor_to_fiber[rec.components[r.initial_base]]);
  ev.validate();
  r.evaluation = std::move(ev);
  r.report = equivalence_report(r.evaluation);
  return r;
}

}  // namespace parcat
