#include "parcat/paramcat.hpp"

namespace parcat {

namespace {

std::string vkey(Idx src_obj, Idx dst_obj, Idx base_mor, Idx vert) {
  return std::to_string(src_obj) + "," + std::to_string(dst_obj) + "," + std::to_string(base_mor) +
         "," + std::to_string(vert);
}

}  // namespace

Idx VopCat::morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor, Idx vert) const {
  auto it = mor_lookup.find(vkey(src_obj, dst_obj, base_mor, vert));
  return it == mor_lookup.end() ? kNone : it->second;
}

VopCat vop(const TCat& c) { return vop(c, choose_cleavage(c)); }

VopCat vop(const TCat& c, const Cleavage& cl) {
  const FinCat& tot = *c.total;
  const FinCat& base = *c.base;
  VopCat r;
  r.cleavage = cl;

  CatBuilder b;
  for (Idx o = 0; o < tot.object_count(); ++o) b.add_object(tot.object_id(o));

  auto mid = [&](Idx x, Idx y, Idx phi, Idx g) {
    return "[" + base.morphism_id(phi) + "|" + tot.morphism_id(g) + "]" + tot.object_id(x) + ">" +
           tot.object_id(y);
  };
  // morphisms x -> y over phi: vertical g: y -> phi_! x
  auto each = [&](auto&& visit) {
    for (Idx x = 0; x < tot.object_count(); ++x) {
      for (Idx y = 0; y < tot.object_count(); ++y) {
        for (Idx phi : base.hom(c.base_of_obj(x), c.base_of_obj(y))) {
          const Idx px = cl.pushforward(c, x, phi);
          const Idx idb = base.identity(c.base_of_obj(y));
          for (Idx g : tot.hom(y, px))
            if (c.base_of_mor(g) == idb) visit(x, y, phi, g);
        }
      }
    }
  };
  each([&](Idx x, Idx y, Idx phi, Idx g) {
    b.add_morphism(mid(x, y, phi, g), tot.object_id(x), tot.object_id(y));
  });
  for (Idx x = 0; x < tot.object_count(); ++x)
    b.set_identity(tot.object_id(x),
                   mid(x, x, base.identity(c.base_of_obj(x)), tot.identity(x)));

  CatSkeleton sk = std::move(b).freeze();
  r.over.assign(sk.morphism_count(), kNone);
  r.vertical.assign(sk.morphism_count(), kNone);
  each([&](Idx x, Idx y, Idx phi, Idx g) {
    const Idx i = sk.morphism_index(mid(x, y, phi, g));
    r.over[i] = phi;
    r.vertical[i] = g;
    r.mor_lookup.emplace(vkey(sk.object_index(tot.object_id(x)),
                              sk.object_index(tot.object_id(y)), phi, g),
                         i);
  });

  auto cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat& cc, Idx m2,
                                                                 Idx m1) {
    // (psi, g2) ∘ (phi, g1) = (psi∘phi, gamma ∘ psi_!(g1) ∘ g2)
    const Idx x = cc.src(m1);
    const Idx phi = r.over[m1], psi = r.over[m2];
    const Idx comp_base = base.compose(psi, phi);
    const Idx moved = cl.transport(c, psi, r.vertical[m1]);
    const Idx gm = cl.coherence(c, x, psi, phi);
    const Idx vert = tot.compose(gm, tot.compose(moved, r.vertical[m2]));
    return r.morphism_of(cc.src(m1), cc.dst(m2), comp_base, vert);
  }));

  Functor st{cat, c.base, {}, {}};
  for (Idx o = 0; o < cat->object_count(); ++o)
    st.obj_map.push_back(c.base_of_obj(tot.object_index(cat->object_id(o))));
  for (Idx m = 0; m < cat->morphism_count(); ++m) st.mor_map.push_back(r.over[m]);
  r.tcat = make_tcat(std::move(st));
  return r;
}

TFunctor vop_vop_compare(const TCat& c, const VopCat& w, const VopCat& ww) {
  const FinCat& tot = *c.total;
  const FinCat& base = *c.base;
  const Cleavage& cl = w.cleavage;        // cleavage of c
  const Cleavage& clw = ww.cleavage;      // cleavage of vop(c)

  Functor f{c.total, ww.tcat.total, {}, {}};
  // objects keep their ids through both passes
  for (Idx o = 0; o < tot.object_count(); ++o)
    f.obj_map.push_back(ww.tcat.total->object_index(tot.object_id(o)));
  f.mor_map.resize(tot.morphism_count());
  for (Idx m = 0; m < tot.morphism_count(); ++m) {
    const Idx x = tot.src(m), y = tot.dst(m);
    const Idx phi = c.base_of_mor(m);
    const Idx vm = cl.vertical_part(c, m);  // phi_! x -> y
    // w-cleavage lift of phi at x: a w-morphism x -> phi_!^w x with data an
    // invertible vertical h: phi_!^w x -> phi_! x.
    const Idx lw = clw.lift_of(w.tcat, w.tcat.total->object_index(tot.object_id(x)), phi);
    const Idx pwx = w.tcat.total->dst(lw);
    const Idx h = w.vertical[lw];
    // w-vertical y -> phi_!^w x with data vm ∘ h
    const Idx data = tot.compose(vm, h);
    const Idx gw = w.morphism_of(w.tcat.total->object_index(tot.object_id(y)), pwx,
                                 base.identity(c.base_of_obj(y)), data);
    if (gw == kNone) fail(Errc::validation_error, "vop comparison: missing vertical morphism");
    const Idx out = ww.morphism_of(f.obj_map[x], f.obj_map[y], phi, gw);
    if (out == kNone) fail(Errc::validation_error, "vop comparison: missing double-vop morphism");
    f.mor_map[m] = out;
  }
  TFunctor tf{c, ww.tcat, std::move(f)};
  tf.validate();
  return tf;
}

TFunctor tspace_vop_compare(const TCat& c, const VopCat& w) {
  const FinCat& tot = *c.total;
  Functor f{c.total, w.tcat.total, {}, {}};
  for (Idx o = 0; o < tot.object_count(); ++o)
    f.obj_map.push_back(w.tcat.total->object_index(tot.object_id(o)));
  f.mor_map.resize(tot.morphism_count());
  for (Idx m = 0; m < tot.morphism_count(); ++m) {
    const Idx vm = w.cleavage.vertical_part(c, m);
    if (!tot.is_iso(vm))
      fail(Errc::validation_error, "vertical part not invertible: not a T-space");
    f.mor_map[m] = w.morphism_of(f.obj_map[tot.src(m)], f.obj_map[tot.dst(m)], c.base_of_mor(m),
                                 tot.inverse(vm));
  }
  TFunctor tf{c, w.tcat, std::move(f)};
  tf.validate();
  return tf;
}

DualResult dualize(const Functor& q) {
  auto cls = classify_fibration(q);
  if (!cls.cartesian_fibration)
    fail(Errc::not_cartesian_fibration, "dualize requires a cartesian fibration");
  DualResult r;
  r.op_total = opposite(q.source);
  auto op_base = opposite(q.target);
  // The opposite functor has identical assignment tables.
  Functor opq{r.op_total, op_base, q.obj_map, q.mor_map};
  opq.validate();
  r.inner = vop(make_tcat(std::move(opq)));
  r.tcat = r.inner.tcat;
  return r;
}

UnderlineFinTSets underline_fin_T_sets(CatPtr t, int max_orbits) {
  UnderlineFinTSets r;
  r.ambient = fin_T_sets_category(t, max_orbits);

  // Inclusion of T as the singleton T-sets.
  Functor inc{t, r.ambient.cat, {}, {}};
  inc.obj_map.resize(t->object_count());
  for (Idx v = 0; v < t->object_count(); ++v) inc.obj_map[v] = r.ambient.object_of({v});
  inc.mor_map.resize(t->morphism_count());
  for (Idx m = 0; m < t->morphism_count(); ++m) {
    TSetMap tm;
    tm.phi = {0};
    tm.fam = {m};
    inc.mor_map[m] =
        r.ambient.morphism_of(inc.obj_map[t->src(m)], inc.obj_map[t->dst(m)], tm);
  }
  inc.validate();

  auto arrows = arrow_category(r.ambient.cat);
  auto pulled = fiber_product(inc, arrows.target_proj);
  r.dual = dualize(pulled.proj1);
  r.tcat = r.dual.tcat;
  return r;
}

}  // namespace parcat
