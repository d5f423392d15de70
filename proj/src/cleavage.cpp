#include "parcat/cleavage.hpp"

namespace parcat {

namespace {

// The unique vertical k with k ∘ e = m, for e cocartesian with p(e) = p(m)
// and matching source. kNone if none or several (several cannot happen for a
// verified cocartesian edge).
Idx vertical_filler(const TCat& c, Idx e, Idx m) {
  const FinCat& tot = *c.total;
  const Idx idb = c.base->identity(c.base_of_obj(tot.dst(m)));
  Idx found = kNone;
  for (Idx k : tot.hom(tot.dst(e), tot.dst(m))) {
    if (c.base_of_mor(k) == idb && tot.compose(k, e) == m) {
      if (found != kNone) return kNone;
      found = k;
    }
  }
  return found;
}

}  // namespace

Idx Cleavage::lift_of(const TCat& c, Idx x, Idx f) const {
  return lift[static_cast<std::size_t>(x) * c.base->morphism_count() + f];
}

Idx Cleavage::pushforward(const TCat& c, Idx x, Idx f) const {
  return c.total->dst(lift_of(c, x, f));
}

Idx Cleavage::coherence(const TCat& c, Idx x, Idx g, Idx f) const {
  const std::size_t bm = c.base->morphism_count();
  return gamma[(static_cast<std::size_t>(x) * bm + g) * bm + f];
}

Idx Cleavage::transport(const TCat& c, Idx f, Idx v) const {
  const FinCat& tot = *c.total;
  const Idx a = tot.src(v), b = tot.dst(v);
  const Idx la = lift_of(c, a, f), lb = lift_of(c, b, f);
  // unique vertical k with k ∘ la = lb ∘ v
  return vertical_filler(c, la, tot.compose(lb, v));
}

Idx Cleavage::vertical_part(const TCat& c, Idx m) const {
  return vertical_filler(c, lift_of(c, c.total->src(m), c.base_of_mor(m)), m);
}

Cleavage choose_cleavage(const TCat& c) {
  const FinCat& tot = *c.total;
  const FinCat& base = *c.base;
  const std::size_t bm = base.morphism_count();
  Cleavage cl;
  cl.lift.assign(tot.object_count() * bm, kNone);

  for (Idx x = 0; x < tot.object_count(); ++x) {
    const Idx px = c.base_of_obj(x);
    for (Idx f : base.out(px)) {
      Idx chosen;
      if (base.is_identity(f)) {
        chosen = tot.identity(x);  // identity normalization
      } else {
        chosen = kNone;
        for (Idx e : tot.out(x)) {
          if (c.base_of_mor(e) == f && c.is_cocart[e]) {
            chosen = e;
            break;
          }
        }
        if (chosen == kNone)
          fail(Errc::not_opfibration, "no cocartesian lift of '" + base.morphism_id(f) + "' at '" +
                                          tot.object_id(x) + "'");
      }
      cl.lift[static_cast<std::size_t>(x) * bm + f] = chosen;
    }
  }

  // Coherence isomorphisms from the uniqueness clause: gamma is the unique
  // vertical filler of  lift(x, g∘f)  against the composite lift.
  cl.gamma.assign(tot.object_count() * bm * bm, kNone);
  for (Idx x = 0; x < tot.object_count(); ++x) {
    const Idx px = c.base_of_obj(x);
    for (Idx f : base.out(px)) {
      const Idx lf = cl.lift[static_cast<std::size_t>(x) * bm + f];
      const Idx x1 = tot.dst(lf);
      for (Idx g : base.out(base.dst(f))) {
        const Idx lg = cl.lift[static_cast<std::size_t>(x1) * bm + g];
        const Idx composite = tot.compose(lg, lf);  // cocartesian over g∘f
        const Idx direct = cl.lift[static_cast<std::size_t>(x) * bm + base.compose(g, f)];
        const Idx gm = vertical_filler(c, composite, direct);
        if (gm == kNone || !tot.is_iso(gm))
          fail(Errc::validation_error, "coherence comparison failed at '" + tot.object_id(x) +
                                           "' over (" + base.morphism_id(g) + ", " +
                                           base.morphism_id(f) + ")");
        cl.gamma[(static_cast<std::size_t>(x) * bm + g) * bm + f] = gm;
      }
    }
  }

  // Cocycle identity on base triples:
  //   gamma(h, gf) ∘ h_!(gamma(g, f)) = gamma(hg, f) ∘ gamma(h, g)  at x.
  for (Idx x = 0; x < tot.object_count(); ++x) {
    const Idx px = c.base_of_obj(x);
    for (Idx f : base.out(px)) {
      const Idx fx = cl.pushforward(c, x, f);
      for (Idx g : base.out(base.dst(f))) {
        for (Idx h : base.out(base.dst(g))) {
          const Idx lhs = tot.compose(cl.coherence(c, x, h, base.compose(g, f)),
                                      cl.transport(c, h, cl.coherence(c, x, g, f)));
          const Idx rhs =
              tot.compose(cl.coherence(c, x, base.compose(h, g), f), cl.coherence(c, fx, h, g));
          if (lhs != rhs)
            fail(Errc::validation_error,
                 "cleavage cocycle fails at '" + tot.object_id(x) + "' over (" +
                     base.morphism_id(h) + ", " + base.morphism_id(g) + ", " + base.morphism_id(f) +
                     ")");
        }
      }
    }
  }

  // Naturality of gamma in the object argument, over vertical morphisms.
  for (Idx v = 0; v < tot.morphism_count(); ++v) {
    const Idx a = tot.src(v);
    const Idx pa = c.base_of_obj(a);
    if (c.base_of_mor(v) != base.identity(pa)) continue;
    const Idx b = tot.dst(v);
    for (Idx f : base.out(pa)) {
      for (Idx g : base.out(base.dst(f))) {
        const Idx gf = base.compose(g, f);
        const Idx lhs = tot.compose(cl.coherence(c, b, g, f),
                                    cl.transport(c, g, cl.transport(c, f, v)));
        const Idx rhs = tot.compose(cl.transport(c, gf, v), cl.coherence(c, a, g, f));
        if (lhs != rhs)
          fail(Errc::validation_error, "coherence naturality fails over ('" + base.morphism_id(g) +
                                           "', '" + base.morphism_id(f) + "') at '" +
                                           tot.morphism_id(v) + "'");
      }
    }
  }
  return cl;
}

StrongPushforward strong_pushforward(const TCat& c, const Cleavage& cl) {
  StrongPushforward sp;
  sp.base_arrows = arrow_category(c.base);
  sp.domain = fiber_product(c.structure, sp.base_arrows.source_proj);
  const FinCat& dom = *sp.domain.cat;
  const FinCat& tot = *c.total;

  Functor pf{sp.domain.cat, c.total, {}, {}};
  pf.obj_map.resize(dom.object_count());
  for (Idx o = 0; o < dom.object_count(); ++o) {
    const auto [x, arr] = sp.domain.obj_pair[o];
    pf.obj_map[o] = cl.pushforward(c, x, sp.base_arrows.obj_arrow[arr]);
  }
  pf.mor_map.resize(dom.morphism_count());
  for (Idx mm = 0; mm < dom.morphism_count(); ++mm) {
    const auto [m, sq] = sp.domain.mor_pair[mm];
    const auto [x, arr] = sp.domain.obj_pair[dom.src(mm)];
    const auto [x2, arr2] = sp.domain.obj_pair[dom.dst(mm)];
    const Idx f = sp.base_arrows.obj_arrow[arr];
    const Idx f2 = sp.base_arrows.obj_arrow[arr2];
    const Idx v = sp.base_arrows.mor_square[sq].second;  // far edge of the square
    // unique k over v with k ∘ lift(x, f) = lift(x2, f2) ∘ m
    const Idx rhs = tot.compose(cl.lift_of(c, x2, f2), m);
    const Idx e = cl.lift_of(c, x, f);
    Idx found = kNone;
    for (Idx k : tot.hom(pf.obj_map[dom.src(mm)], pf.obj_map[dom.dst(mm)])) {
      if (c.base_of_mor(k) == v && tot.compose(k, e) == rhs) {
        if (found != kNone)
          fail(Errc::validation_error, "pushforward filler not unique at '" + dom.morphism_id(mm) + "'");
        found = k;
      }
    }
    if (found == kNone)
      fail(Errc::validation_error, "pushforward filler missing at '" + dom.morphism_id(mm) + "'");
    pf.mor_map[mm] = found;
  }
  pf.validate();
  sp.functor = std::move(pf);

  // Unit section x -> (x, id_{p x}).
  Functor unit{c.total, sp.domain.cat, {}, {}};
  unit.obj_map.resize(tot.object_count());
  for (Idx x = 0; x < tot.object_count(); ++x) {
    const Idx arr = sp.base_arrows.object_of(c.base->identity(c.base_of_obj(x)));
    unit.obj_map[x] = sp.domain.object_of(x, arr);
  }
  unit.mor_map.resize(tot.morphism_count());
  for (Idx m = 0; m < tot.morphism_count(); ++m) {
    const Idx bm = c.base_of_mor(m);
    // the square (p m, p m): id -> id
    const Idx ida = c.base->identity(c.base->src(bm));
    const Idx idb = c.base->identity(c.base->dst(bm));
    const Idx sq = [&] {
      const Idx so = sp.base_arrows.object_of(ida);
      const Idx to = sp.base_arrows.object_of(idb);
      for (Idx q : sp.base_arrows.cat->hom(so, to)) {
        const auto [u, v] = sp.base_arrows.mor_square[q];
        if (u == bm && v == bm) return q;
      }
      fail(Errc::validation_error, "identity square missing in arrow category");
    }();
    unit.mor_map[m] = sp.domain.morphism_of(m, sq);
  }
  unit.validate();
  sp.unit_section = std::move(unit);
  return sp;
}

RetractionReport verify_retraction(const TCat& c, const Cleavage& cl) {
  RetractionReport rep;
  const FinCat& tot = *c.total;
  auto sp = strong_pushforward(c, cl);
  const FinCat& dom = *sp.domain.cat;

  // (a) The comparison from the cocartesian-arrow category.
  auto arrows = arrow_category(c.total);
  std::vector<Idx> cocart_objs;
  for (Idx o = 0; o < arrows.cat->object_count(); ++o)
    if (c.is_cocart[arrows.obj_arrow[o]]) cocart_objs.push_back(o);
  auto oc = full_subcategory(arrows.cat, cocart_objs);

  Functor cmp{oc.cat, sp.domain.cat, {}, {}};
  for (Idx o = 0; o < oc.cat->object_count(); ++o) {
    const Idx e = arrows.obj_arrow[oc.obj_in_ambient[o]];
    const Idx arr = sp.base_arrows.object_of(c.base_of_mor(e));
    cmp.obj_map.push_back(sp.domain.object_of(tot.src(e), arr));
  }
  for (Idx m = 0; m < oc.cat->morphism_count(); ++m) {
    const auto [u, v] = arrows.mor_square[oc.mor_in_ambient[m]];
    const Idx so = cmp.obj_map[oc.cat->src(m)];
    const Idx to = cmp.obj_map[oc.cat->dst(m)];
    // square (p u, p v) in the base
    const Idx pu = c.base_of_mor(u), pv = c.base_of_mor(v);
    Idx sq = kNone;
    const Idx sarr = sp.domain.obj_pair[so].second, tarr = sp.domain.obj_pair[to].second;
    for (Idx q : sp.base_arrows.cat->hom(sarr, tarr)) {
      if (sp.base_arrows.mor_square[q] == std::make_pair(pu, pv)) {
        sq = q;
        break;
      }
    }
    cmp.mor_map.push_back(sp.domain.morphism_of(u, sq));
  }
  cmp.validate();
  {
    std::vector<char> hit(dom.object_count(), 0);
    for (Idx o : cmp.obj_map) hit[o] = 1;
    rep.comparison_surjective_on_objects =
        std::all_of(hit.begin(), hit.end(), [](char x) { return x != 0; });
    auto cr = equivalence_report(cmp);
    rep.comparison_fully_faithful = cr.fully_faithful;
    if (!cr.fully_faithful) rep.witness = cr.describe(*oc.cat, dom);
  }

  // (b) P ∘ unit = identity on the nose.
  const Functor round_trip = compose(sp.functor, sp.unit_section);
  rep.unit_retraction_identity = round_trip.equals(identity_functor(c.total));

  // (c) The homotopy id => unit∘P with components (lift(x,f), (f, id)).
  NatTrans theta;
  theta.source = identity_functor(sp.domain.cat);
  theta.target = compose(sp.unit_section, sp.functor);
  theta.components.resize(dom.object_count());
  bool components_found = true;
  for (Idx o = 0; o < dom.object_count(); ++o) {
    const auto [x, arr] = sp.domain.obj_pair[o];
    const Idx f = sp.base_arrows.obj_arrow[arr];
    const Idx e = cl.lift_of(c, x, f);
    // square (f, id_{dst f}): f -> id
    const Idx idd = c.base->identity(c.base->dst(f));
    Idx sq = kNone;
    for (Idx q : sp.base_arrows.cat->hom(arr, sp.base_arrows.object_of(idd))) {
      if (sp.base_arrows.mor_square[q] == std::make_pair(f, idd)) {
        sq = q;
        break;
      }
    }
    const Idx comp = sq == kNone ? kNone : sp.domain.morphism_of(e, sq);
    if (comp == kNone) {
      components_found = false;
      break;
    }
    theta.components[o] = comp;
  }
  if (components_found) {
    try {
      theta.validate();
      rep.homotopy_natural = true;
    } catch (const Error& err) {
      rep.homotopy_natural = false;
      rep.witness = err.what();
    }
  }
  // Marked components: cocartesian first leg, invertible far edge.
  rep.homotopy_components_marked = components_found;
  if (components_found) {
    for (Idx o = 0; o < dom.object_count(); ++o) {
      const auto [m, sq] = sp.domain.mor_pair[theta.components[o]];
      const Idx far = sp.base_arrows.mor_square[sq].second;
      if (!c.is_cocart[m] || !c.base->is_iso(far)) {
        rep.homotopy_components_marked = false;
        break;
      }
    }
    rep.homotopy_image_invertible = true;
    for (Idx o = 0; o < dom.object_count(); ++o) {
      if (!tot.is_iso(sp.functor.mor_map[theta.components[o]])) {
        rep.homotopy_image_invertible = false;
        break;
      }
    }
  }

  // Marked squares push forward to isomorphisms.
  rep.marked_map_property = true;
  for (Idx mm = 0; mm < dom.morphism_count(); ++mm) {
    const auto [m, sq] = sp.domain.mor_pair[mm];
    const Idx far = sp.base_arrows.mor_square[sq].second;
    if (c.is_cocart[m] && c.base->is_iso(far) && !tot.is_iso(sp.functor.mor_map[mm])) {
      rep.marked_map_property = false;
      rep.witness = "marked pair '" + dom.morphism_id(mm) + "' does not push to an isomorphism";
      break;
    }
  }
  return rep;
}

}  // namespace parcat
