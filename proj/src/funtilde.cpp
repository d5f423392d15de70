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

Idx FunTilde::object_of(Idx base_obj, const Functor& f) const {
  auto it = obj_lookup.find(fun_key(base_obj, f));
  return it == obj_lookup.end() ? kNone : it->second;
}

Idx FunTilde::morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor,
                          const std::vector<Idx>& family) const {
  auto it = mor_lookup.find(fam_key(base_mor, src_obj, dst_obj, family));
  return it == mor_lookup.end() ? kNone : it->second;
}

FunTilde fun_tilde(const Functor& x, const TCat& y, std::size_t budget) {
  if (!x.target->equals(*y.base)) fail(Errc::target_mismatch, "pairing legs over different bases");
  auto cls = classify_fibration(x);
  if (!cls.cartesian_fibration)
    fail(Errc::not_cartesian_fibration, "pairing requires a cartesian first leg");

  const FinCat& s = *x.target;
  const FinCat& yt = *y.total;

  FunTilde r;
  // The opposite of x is an opfibration; its cleavage computes the cartesian
  // transports of x. Morphism ids (hence indices) agree between a category
  // and its opposite.
  auto op_base = opposite(x.target);
  Functor opx{opposite(x.source), op_base, x.obj_map, x.mor_map};
  TCat xop = make_tcat(std::move(opx));
  r.x_cleavage_op = choose_cleavage(xop);

  r.x_fibers.resize(s.object_count());
  r.y_fibers.resize(s.object_count());
  for (Idx v = 0; v < s.object_count(); ++v) {
    TCat xv{x.source, x.target, x, {}, {}};  // fibers only need the structure map
    r.x_fibers[v] = fiber(xv, v);
    r.y_fibers[v] = fiber(y, v);
  }

  // eta^*: fiber_x(dst eta) -> fiber_x(src eta).
  r.x_transport.resize(s.morphism_count());
  for (Idx eta = 0; eta < s.morphism_count(); ++eta) {
    const Fiber& from = r.x_fibers[s.dst(eta)];
    const Fiber& to = r.x_fibers[s.src(eta)];
    Functor tr{from.cat, to.cat, {}, {}};
    for (Idx o : from.obj_in_total)
      tr.obj_map.push_back(to.total_obj_to_fiber[r.x_cleavage_op.pushforward(xop, o, eta)]);
    for (Idx m : from.mor_in_total)
      tr.mor_map.push_back(to.total_mor_to_fiber[r.x_cleavage_op.transport(xop, eta, m)]);
    tr.validate();
    r.x_transport[eta] = std::move(tr);
  }

  // Objects: per base object, all functors fiber_x -> fiber_y.
  struct ObjRec {
    Idx base;
    Functor fun;
  };
  std::vector<ObjRec> objs;
  for (Idx v = 0; v < s.object_count(); ++v) {
    for (auto& f : enumerate_functors(r.x_fibers[v].cat, r.y_fibers[v].cat, {}, budget))
      objs.push_back({v, std::move(f)});
  }

  // Morphisms over eta: natural families indexed by the objects of
  // fiber_x(dst eta), with components F(eta^* x') -> G(x') over eta.
  struct MorRec {
    Idx base, src_fun, dst_fun;
    std::vector<Idx> family;
  };
  std::vector<MorRec> mors;
  for (Idx so = 0; so < objs.size(); ++so) {
    for (Idx to = 0; to < objs.size(); ++to) {
      for (Idx eta : s.hom(objs[so].base, objs[to].base)) {
        const Fiber& xft = r.x_fibers[objs[to].base];
        const Fiber& yfs = r.y_fibers[objs[so].base];
        const Fiber& yft = r.y_fibers[objs[to].base];
        const Functor& tr = r.x_transport[eta];
        const Functor& ffun = objs[so].fun;
        const Functor& gfun = objs[to].fun;
        const std::size_t n = xft.cat->object_count();
        auto candidates = [&](std::size_t slot) {
          const Idx fo = yfs.obj_in_total[ffun.obj_map[tr.obj_map[slot]]];
          const Idx go = yft.obj_in_total[gfun.obj_map[slot]];
          std::vector<Idx> cands;
          for (Idx cand : yt.hom(fo, go))
            if (y.base_of_mor(cand) == eta) cands.push_back(cand);
          return cands;
        };
        auto check = [&](const std::vector<Idx>& fam, std::size_t slot) {
          for (Idx fm = 0; fm < xft.cat->morphism_count(); ++fm) {
            const Idx a = xft.cat->src(fm), bb = xft.cat->dst(fm);
            if ((a != slot && bb != slot) || fam[a] == kNone || fam[bb] == kNone) continue;
            const Idx lhs = yt.compose(fam[bb], yfs.mor_in_total[ffun.mor_map[tr.mor_map[fm]]]);
            const Idx rhs = yt.compose(yft.mor_in_total[gfun.mor_map[fm]], fam[a]);
            if (lhs != rhs) return false;
          }
          return true;
        };
        for (auto& fam : detail::enumerate_families(n, candidates, check, budget))
          mors.push_back({eta, static_cast<Idx>(so), static_cast<Idx>(to), std::move(fam)});
      }
    }
  }

  CatBuilder b;
  for (Idx i = 0; i < objs.size(); ++i) b.add_object("F" + pad_index(i, objs.size()));
  for (Idx t2 = 0; t2 < mors.size(); ++t2)
    b.add_morphism("t" + pad_index(t2, mors.size()),
                   "F" + pad_index(mors[t2].src_fun, objs.size()),
                   "F" + pad_index(mors[t2].dst_fun, objs.size()));

  r.mor_base.resize(mors.size());
  r.mor_family.resize(mors.size());
  for (Idx t2 = 0; t2 < mors.size(); ++t2) {
    r.mor_base[t2] = mors[t2].base;
    r.mor_family[t2] = mors[t2].family;
    r.mor_lookup.emplace(
        fam_key(mors[t2].base, mors[t2].src_fun, mors[t2].dst_fun, mors[t2].family), t2);
  }
  r.obj_base.resize(objs.size());
  r.obj_fun.resize(objs.size());
  for (Idx i = 0; i < objs.size(); ++i) {
    r.obj_base[i] = objs[i].base;
    r.obj_fun[i] = objs[i].fun;
    r.obj_lookup.emplace(fun_key(objs[i].base, objs[i].fun), i);
  }

  for (Idx i = 0; i < objs.size(); ++i) {
    const Idx v = objs[i].base;
    std::vector<Idx> fam;
    const Fiber& xf = r.x_fibers[v];
    const Fiber& yf = r.y_fibers[v];
    for (Idx o = 0; o < xf.cat->object_count(); ++o)
      fam.push_back(yt.identity(yf.obj_in_total[objs[i].fun.obj_map[o]]));
    const Idx found = r.morphism_of(i, i, s.identity(v), fam);
    if (found == kNone) fail(Errc::validation_error, "identity family missing from enumeration");
    b.set_identity("F" + pad_index(i, objs.size()), "t" + pad_index(found, mors.size()));
  }

  CatSkeleton sk = std::move(b).freeze();
  auto cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat& cc, Idx m2,
                                                                 Idx m1) {
    // c over eta: s -> t, then d over theta: t -> u.
    const Idx eta = r.mor_base[m1], theta = r.mor_base[m2];
    const Idx comp_base = s.compose(theta, eta);
    const Idx sv = r.obj_base[cc.src(m1)];
    const Idx uv = r.obj_base[cc.dst(m2)];
    const Fiber& xfu = r.x_fibers[uv];
    const Fiber& xfs = r.x_fibers[sv];
    const Fiber& yfs = r.y_fibers[sv];
    const Functor& ffun = r.obj_fun[cc.src(m1)];
    std::vector<Idx> fam(xfu.cat->object_count());
    for (Idx o = 0; o < xfu.cat->object_count(); ++o) {
      const Idx mid_obj = r.x_transport[theta].obj_map[o];
      const Idx c_comp = r.mor_family[m1][mid_obj];
      const Idx d_comp = r.mor_family[m2][o];
      // The comparison (theta∘eta)^* x'' -> eta^* theta^* x'' is the
      // opposite-cleavage coherence read back in the original direction.
      const Idx delta_total = r.x_cleavage_op.coherence(xop, xfu.obj_in_total[o], eta, theta);
      const Idx f_delta =
          yfs.mor_in_total[ffun.mor_map[xfs.total_mor_to_fiber[delta_total]]];
      fam[o] = yt.compose(d_comp, yt.compose(c_comp, f_delta));
    }
    return r.morphism_of(cc.src(m1), cc.dst(m2), comp_base, fam);
  }));

  Functor st{cat, y.base, {}, {}};
  for (Idx i = 0; i < cat->object_count(); ++i) st.obj_map.push_back(r.obj_base[i]);
  for (Idx m = 0; m < cat->morphism_count(); ++m) st.mor_map.push_back(r.mor_base[m]);
  r.tcat = make_tcat(std::move(st));
  return r;
}

UnderlineObjects underline_objects(CatPtr d, CatPtr s, std::size_t budget) {
  UnderlineObjects r;
  r.d = d;
  r.base_arrows = arrow_category(s);
  r.d_times_s = product(d, s);
  TCat constant = make_tcat(r.d_times_s.proj2);
  r.fun = fun_tilde(r.base_arrows.source_proj, constant, budget);
  return r;
}

}  // namespace parcat
