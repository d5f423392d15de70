#include "parcat/orbits.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace parcat {

namespace {

std::string subgroup_id(const FinGroup& g, const std::vector<Idx>& h) {
  std::string s = "G/{";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ",";
    s += g.elements[h[i]];
  }
  return s + "}";
}

}  // namespace

Idx OrbitCategory::canonical_rep(Idx g, Idx dst_obj) const {
  Idx best = kNone;
  for (Idx k : subgroup[dst_obj]) best = std::min(best, group.times(g, k));
  return best;
}

Idx OrbitCategory::object_of_subgroup(const std::vector<Idx>& h) const {
  for (Idx o = 0; o < subgroup.size(); ++o)
    if (subgroup[o] == h) return o;
  return kNone;
}

Idx OrbitCategory::morphism_of_coset(Idx src_obj, Idx dst_obj, Idx g) const {
  const Idx rep = canonical_rep(g, dst_obj);
  for (Idx m : cat->hom(src_obj, dst_obj))
    if (coset_rep[m] == rep) return m;
  return kNone;
}

OrbitCategory orbit_category(const FinGroup& g) {
  OrbitCategory r;
  r.group = g;
  auto subs = g.subgroups();

  CatBuilder b;
  for (const auto& h : subs) b.add_object(subgroup_id(g, h));

  // Morphisms G/H -> G/K: cosets gK with g⁻¹Hg ⊆ K, named by their minimal
  // representative.
  auto conj_condition = [&](Idx rep, const std::vector<Idx>& h, const std::vector<Idx>& k) {
    const Idx ginv = g.inv[rep];
    for (Idx x : h)
      if (!g.subgroup_contains(k, g.times(g.times(ginv, x), rep))) return false;
    return true;
  };
  auto mid = [&](const std::vector<Idx>& h, const std::vector<Idx>& k, Idx rep) {
    return "[" + g.elements[rep] + "]" + subgroup_id(g, h) + ">" + subgroup_id(g, k);
  };
  for (const auto& h : subs) {
    for (const auto& k : subs) {
      std::set<Idx> reps;
      for (Idx x = 0; x < g.order(); ++x) {
        Idx best = kNone;
        for (Idx kk : k) best = std::min(best, g.times(x, kk));
        if (reps.insert(best).second && conj_condition(best, h, k))
          b.add_morphism(mid(h, k, best), subgroup_id(g, h), subgroup_id(g, k));
      }
    }
  }
  for (const auto& h : subs) {
    Idx best = kNone;
    for (Idx kk : h) best = std::min(best, kk);
    b.set_identity(subgroup_id(g, h), mid(h, h, best));
  }

  CatSkeleton sk = std::move(b).freeze();
  r.subgroup.resize(sk.object_count());
  for (const auto& h : subs) r.subgroup[sk.object_index(subgroup_id(g, h))] = h;
  r.coset_rep.assign(sk.morphism_count(), kNone);
  for (Idx m = 0; m < sk.morphism_count(); ++m) {
    const std::string& id = sk.morphism_id(m);
    const auto close = id.find(']');
    const std::string name = id.substr(1, close - 1);
    r.coset_rep[m] = g.element_index(name);
  }
  r.cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat& cc, Idx m2, Idx m1) {
    // xH -> x·a K -> x·a·b L
    const Idx rep = g.times(r.coset_rep[m1], r.coset_rep[m2]);
    Idx best = kNone;
    for (Idx kk : r.subgroup[cc.dst(m2)]) best = std::min(best, g.times(rep, kk));
    for (Idx m : cc.hom(cc.src(m1), cc.dst(m2)))
      if (r.coset_rep[m] == best) return m;
    return kNone;
  }));
  return r;
}

std::size_t count_equivariant_maps(const FinGroup& g, const std::vector<Idx>& h,
                                   const std::vector<Idx>& k) {
  // Enumerate the coset spaces explicitly.
  auto cosets = [&](const std::vector<Idx>& sub) {
    std::vector<std::vector<Idx>> cs;
    std::vector<char> seen(g.order(), 0);
    for (Idx x = 0; x < g.order(); ++x) {
      if (seen[x]) continue;
      std::vector<Idx> c;
      for (Idx s : sub) {
        const Idx y = g.times(x, s);
        if (!seen[y]) {
          seen[y] = 1;
          c.push_back(y);
        }
      }
      std::sort(c.begin(), c.end());
      cs.push_back(std::move(c));
    }
    std::sort(cs.begin(), cs.end());
    return cs;
  };
  auto gh = cosets(h), gk = cosets(k);
  auto coset_index = [&](const std::vector<std::vector<Idx>>& cs, Idx elt) -> Idx {
    for (Idx i = 0; i < cs.size(); ++i)
      if (std::binary_search(cs[i].begin(), cs[i].end(), elt)) return i;
    return kNone;
  };

  // All functions G/H -> G/K, tested for equivariance pointwise.
  std::size_t count = 0;
  std::vector<Idx> choice(gh.size(), 0);
  while (true) {
    bool ok = true;
    for (Idx a = 0; a < g.order() && ok; ++a) {
      for (Idx i = 0; i < gh.size() && ok; ++i) {
        const Idx moved_src = coset_index(gh, g.times(a, gh[i][0]));
        const Idx moved_dst = coset_index(gk, g.times(a, gk[choice[i]][0]));
        ok = choice[moved_src] == moved_dst;
      }
    }
    if (ok) ++count;
    std::size_t i = 0;
    while (i < choice.size() && choice[i] + 1 == gk.size()) choice[i++] = 0;
    if (i == choice.size()) break;
    ++choice[i];
  }
  return count;
}

// ---------------------------------------------------------------------------
// Finite T-sets

FinTSet make_tset(CatPtr t, const std::vector<Idx>& components) {
  FinTSet u;
  u.base_t = std::move(t);
  u.components = components;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i] >= u.base_t->object_count())
      fail(Errc::unknown_object, "T-set component out of range");
    u.index.push_back("i" + std::to_string(i));
  }
  return u;
}

std::vector<TSetMap> hom_fin_T_sets(const FinTSet& src, const FinTSet& dst) {
  const FinCat& t = *src.base_t;
  if (!t.equals(*dst.base_t)) fail(Errc::target_mismatch, "T-sets over different bases");
  std::vector<TSetMap> out;
  const std::size_t n = src.components.size();
  if (n == 0) {
    out.push_back(TSetMap{{}, {}});
    return out;
  }
  if (dst.components.empty()) return out;

  std::vector<Idx> phi(n, 0);
  while (true) {
    // product of hom sets for this index map
    std::vector<std::span<const Idx>> homs;
    bool nonempty = true;
    for (std::size_t i = 0; i < n; ++i) {
      homs.push_back(t.hom(src.components[i], dst.components[phi[i]]));
      nonempty = nonempty && !homs.back().empty();
    }
    if (nonempty) {
      std::vector<Idx> pick(n, 0);
      while (true) {
        TSetMap m;
        m.phi = phi;
        for (std::size_t i = 0; i < n; ++i) m.fam.push_back(homs[i][pick[i]]);
        out.push_back(std::move(m));
        std::size_t i = 0;
        while (i < n && pick[i] + 1 == homs[i].size()) pick[i++] = 0;
        if (i == n) break;
        ++pick[i];
      }
    }
    std::size_t i = 0;
    while (i < n && phi[i] + 1 == dst.components.size()) phi[i++] = 0;
    if (i == n) break;
    ++phi[i];
  }
  std::sort(out.begin(), out.end(), [](const TSetMap& a, const TSetMap& b) {
    if (a.phi != b.phi) return a.phi < b.phi;
    return a.fam < b.fam;
  });
  return out;
}

TSetMap compose_tset_maps(const FinTSet& a, const FinTSet& b, const FinTSet& c, const TSetMap& g,
                          const TSetMap& f) {
  (void)b;
  (void)c;
  const FinCat& t = *a.base_t;
  TSetMap r;
  r.phi.resize(f.phi.size());
  r.fam.resize(f.fam.size());
  for (std::size_t i = 0; i < f.phi.size(); ++i) {
    r.phi[i] = g.phi[f.phi[i]];
    r.fam[i] = t.compose(g.fam[f.phi[i]], f.fam[i]);
  }
  return r;
}

TSetMap identity_tset_map(const FinTSet& a) {
  TSetMap r;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    r.phi.push_back(static_cast<Idx>(i));
    r.fam.push_back(a.base_t->identity(a.components[i]));
  }
  return r;
}

std::vector<Idx> orbit_decomposition(const FinTSet& u) { return u.components; }

Idx TSetPresheaf::element_of(Idx w, Idx i, Idx mor) const {
  const auto& es = elt[w];
  for (Idx k = 0; k < es.size(); ++k)
    if (es[k] == std::make_pair(i, mor)) return k;
  return kNone;
}

TSetPresheaf tset_presheaf(const FinTSet& u) {
  TSetPresheaf r;
  const FinCat& t = *u.base_t;
  r.op_t = opposite(u.base_t);
  r.fun.cat = r.op_t;
  r.elt.resize(t.object_count());
  r.fun.size.resize(t.object_count());
  for (Idx w = 0; w < t.object_count(); ++w) {
    for (Idx i = 0; i < u.components.size(); ++i)
      for (Idx m : t.hom(w, u.components[i])) r.elt[w].emplace_back(i, m);
    r.fun.size[w] = static_cast<Idx>(r.elt[w].size());
  }
  // Morphism indices agree between t and its opposite (ids preserved); the
  // action along f: W -> W' in op(T), i.e. f: W' -> W in T, is precomposition.
  r.fun.act.resize(t.morphism_count());
  for (Idx f = 0; f < t.morphism_count(); ++f) {
    const Idx w_src_in_op = t.dst(f);  // = src of f in op(T)
    auto& table = r.fun.act[f];
    table.resize(r.fun.size[w_src_in_op]);
    for (Idx k = 0; k < table.size(); ++k) {
      const auto [i, m] = r.elt[w_src_in_op][k];
      table[k] = r.element_of(t.src(f), i, t.compose(m, f));
    }
  }
  r.fun.validate();
  return r;
}

// ---------------------------------------------------------------------------
// Pullbacks

TSetPullback pullback_fin_T_sets(const FinTSet& a, const FinTSet& b, const FinTSet& c,
                                 const TSetMap& f, const TSetMap& g) {
  const FinCat& t = *a.base_t;
  auto pa = tset_presheaf(a);
  auto pb = tset_presheaf(b);

  // Pointwise pullback presheaf: pairs (alpha, beta) with f∘alpha = g∘beta.
  auto push_elt = [&](const TSetMap& m, const std::pair<Idx, Idx>& e) {
    return std::make_pair(m.phi[e.first], t.compose(m.fam[e.first], e.second));
  };
  std::vector<std::vector<std::pair<Idx, Idx>>> q(t.object_count());  // (elt of PA, elt of PB)
  for (Idx w = 0; w < t.object_count(); ++w)
    for (Idx x = 0; x < pa.elt[w].size(); ++x)
      for (Idx y = 0; y < pb.elt[w].size(); ++y)
        if (push_elt(f, pa.elt[w][x]) == push_elt(g, pb.elt[w][y])) q[w].emplace_back(x, y);

  auto q_index = [&](Idx w, std::pair<Idx, Idx> e) -> Idx {
    for (Idx k = 0; k < q[w].size(); ++k)
      if (q[w][k] == e) return k;
    return kNone;
  };

  // Element category: objects (W, q-element); a T-morphism u: W' -> W acts by
  // precomposition Q(W) -> Q(W').
  struct Node {
    Idx w, k;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<Idx>> node_at(t.object_count());
  for (Idx w = 0; w < t.object_count(); ++w)
    for (Idx k = 0; k < q[w].size(); ++k) {
      node_at[w].push_back(static_cast<Idx>(nodes.size()));
      nodes.push_back({w, k});
    }

  auto act = [&](Idx u, Idx w, Idx k) -> Idx {  // u: W'' -> W in t, element over W
    const auto [x, y] = q[w][k];
    const auto [i, m] = pa.elt[w][x];
    const auto [j, m2] = pb.elt[w][y];
    const auto e2 = std::make_pair(pa.element_of(t.src(u), i, t.compose(m, u)),
                                   pb.element_of(t.src(u), j, t.compose(m2, u)));
    return q_index(t.src(u), e2);
  };

  // Connected components under the zigzag relation.
  std::vector<Idx> comp(nodes.size(), kNone);
  Idx ncomp = 0;
  for (Idx n0 = 0; n0 < nodes.size(); ++n0) {
    if (comp[n0] != kNone) continue;
    std::vector<Idx> stack{n0};
    comp[n0] = ncomp;
    while (!stack.empty()) {
      const Idx n = stack.back();
      stack.pop_back();
      const auto [w, k] = nodes[n];
      // edges out of (w', k') into (w, k) for u: w' -> w ... both directions:
      for (Idx u : t.in(w)) {
        const Idx k2 = act(u, w, k);
        const Idx n2 = node_at[t.src(u)][k2];
        if (comp[n2] == kNone) {
          comp[n2] = ncomp;
          stack.push_back(n2);
        }
      }
      for (Idx u : t.out(w)) {
        // elements over dst(u) mapping to (w, k)
        for (Idx k2 = 0; k2 < q[t.dst(u)].size(); ++k2) {
          if (act(u, t.dst(u), k2) == k) {
            const Idx n2 = node_at[t.dst(u)][k2];
            if (comp[n2] == kNone) {
              comp[n2] = ncomp;
              stack.push_back(n2);
            }
          }
        }
      }
    }
    ++ncomp;
  }

  // Each component needs a terminal element: (W0, k0) with exactly one
  // u: W -> W0 carrying k0 to k, for every (W, k) in the component.
  std::vector<Idx> terminal(ncomp, kNone);
  for (Idx cid = 0; cid < ncomp; ++cid) {
    for (Idx n0 = 0; n0 < nodes.size() && terminal[cid] == kNone; ++n0) {
      if (comp[n0] != cid) continue;
      const auto [w0, k0] = nodes[n0];
      bool is_terminal = true;
      for (Idx n = 0; n < nodes.size() && is_terminal; ++n) {
        if (comp[n] != cid) continue;
        const auto [w, k] = nodes[n];
        int arrows = 0;
        for (Idx u : t.hom(w, w0))
          if (act(u, w0, k0) == k) ++arrows;
        is_terminal = arrows == 1;
      }
      if (is_terminal) terminal[cid] = n0;
    }
    if (terminal[cid] == kNone) {
      Idx first = 0;
      for (Idx n = 0; n < nodes.size(); ++n)
        if (comp[n] == cid) {
          first = n;
          break;
        }
      const auto [w, k] = nodes[first];
      fail(Errc::not_orbital, "no terminal element in the component of ('" + t.object_id(w) +
                                  "', element " + std::to_string(k) +
                                  "): the cospan has no pullback among finite T-sets");
    }
  }

  // Assemble the apex and its legs from the terminal elements, in canonical
  // order of (object, element).
  std::vector<Idx> terms(terminal.begin(), terminal.end());
  std::sort(terms.begin(), terms.end());
  TSetPullback r;
  std::vector<Idx> comps;
  TSetMap ta, tb;
  for (Idx n : terms) {
    const auto [w0, k0] = nodes[n];
    comps.push_back(w0);
    const auto [x, y] = q[w0][k0];
    const auto [i, m] = pa.elt[w0][x];
    const auto [j, m2] = pb.elt[w0][y];
    ta.phi.push_back(i);
    ta.fam.push_back(m);
    tb.phi.push_back(j);
    tb.fam.push_back(m2);
  }
  r.apex = make_tset(a.base_t, comps);
  r.to_a = std::move(ta);
  r.to_b = std::move(tb);
  (void)c;
  return r;
}

TSetPullback pullback_fin_G_sets(const OrbitCategory& oc, const FinTSet& a, const FinTSet& b,
                                 const FinTSet& c, const TSetMap& f, const TSetMap& g) {
  const FinGroup& gr = oc.group;
  std::vector<Idx> comps;
  TSetMap ta, tb;

  // Orbitwise: components of A and B mapping to the same component of C.
  for (Idx i = 0; i < a.components.size(); ++i) {
    for (Idx j = 0; j < b.components.size(); ++j) {
      if (f.phi[i] != g.phi[j]) continue;
      const auto& h = oc.subgroup[a.components[i]];
      const auto& l = oc.subgroup[b.components[j]];
      const auto& k = oc.subgroup[c.components[f.phi[i]]];
      const Idx arep = oc.coset_rep[f.fam[i]];
      const Idx brep = oc.coset_rep[g.fam[j]];

      auto conj = [&](Idx x, const std::vector<Idx>& sub) {  // x⁻¹ sub x, sorted
        std::vector<Idx> r2;
        for (Idx s : sub) r2.push_back(gr.times(gr.times(gr.inv[x], s), x));
        std::sort(r2.begin(), r2.end());
        return r2;
      };
      const auto ht = conj(arep, h);  // a⁻¹Ha ⊆ K
      const auto lt = conj(brep, l);  // b⁻¹Lb ⊆ K

      // Double cosets ht\K/lt.
      std::vector<char> seen(gr.order(), 0);
      for (Idx x : k) {
        if (seen[x]) continue;
        // the double coset of x within K
        std::vector<Idx> dc;
        for (Idx u : ht)
          for (Idx v : lt) {
            const Idx y = gr.times(gr.times(u, x), v);
            if (!seen[y]) {
              seen[y] = 1;
              dc.push_back(y);
            }
          }
        const Idx rep = *std::min_element(dc.begin(), dc.end());
        // stabilizer  M = ht ∩ rep·lt·rep⁻¹
        std::vector<Idx> m;
        for (Idx u : ht) {
          const Idx conj_u = gr.times(gr.times(gr.inv[rep], u), rep);
          if (gr.subgroup_contains(lt, conj_u)) m.push_back(u);
        }
        std::sort(m.begin(), m.end());
        const Idx mobj = oc.object_of_subgroup(m);
        if (mobj == kNone) fail(Errc::validation_error, "stabilizer subgroup missing");
        comps.push_back(mobj);
        // legs: x·M -> x·a⁻¹·H  and  x·M -> x·rep·b⁻¹·L
        ta.phi.push_back(i);
        ta.fam.push_back(oc.morphism_of_coset(mobj, a.components[i], gr.inv[arep]));
        tb.phi.push_back(j);
        tb.fam.push_back(oc.morphism_of_coset(mobj, b.components[j], gr.times(rep, gr.inv[brep])));
      }
    }
  }
  TSetPullback r;
  r.apex = make_tset(a.base_t, comps);
  r.to_a = std::move(ta);
  r.to_b = std::move(tb);
  return r;
}

bool verify_pullback_universal(const FinTSet& a, const FinTSet& b, const FinTSet& c,
                               const TSetMap& f, const TSetMap& g, const TSetPullback& pb,
                               int max_orbits) {
  const FinCat& t = *a.base_t;
  // The claimed cone must commute.
  const auto via_a = compose_tset_maps(pb.apex, a, c, f, pb.to_a);
  const auto via_b = compose_tset_maps(pb.apex, b, c, g, pb.to_b);
  if (!(via_a == via_b)) return false;

  // Test objects: all component multisets with at most max_orbits entries.
  std::vector<std::vector<Idx>> shapes{{}};
  std::vector<std::vector<Idx>> frontier{{}};
  for (int s = 0; s < max_orbits; ++s) {
    std::vector<std::vector<Idx>> next;
    for (const auto& sh : frontier) {
      for (Idx o = sh.empty() ? 0 : sh.back(); o < t.object_count(); ++o) {
        auto n2 = sh;
        n2.push_back(o);
        next.push_back(n2);
        shapes.push_back(std::move(n2));
      }
    }
    frontier = std::move(next);
  }

  for (const auto& sh : shapes) {
    const FinTSet z = make_tset(a.base_t, sh);
    const auto za_all = hom_fin_T_sets(z, a);
    const auto zb_all = hom_fin_T_sets(z, b);
    const auto zp_all = hom_fin_T_sets(z, pb.apex);
    for (const auto& za : za_all) {
      const auto za_c = compose_tset_maps(z, a, c, f, za);
      for (const auto& zb : zb_all) {
        if (!(compose_tset_maps(z, b, c, g, zb) == za_c)) continue;
        int factorizations = 0;
        for (const auto& zp : zp_all) {
          if (compose_tset_maps(z, pb.apex, a, pb.to_a, zp) == za &&
              compose_tset_maps(z, pb.apex, b, pb.to_b, zp) == zb)
            ++factorizations;
        }
        if (factorizations != 1) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// The category of finite T-sets

Idx FinTSetsCat::object_of(const std::vector<Idx>& sorted_components) const {
  std::string key;
  for (Idx c : sorted_components) key += std::to_string(c) + ",";
  auto it = obj_lookup.find(key);
  return it == obj_lookup.end() ? kNone : it->second;
}

Idx FinTSetsCat::morphism_of(Idx src_obj, Idx dst_obj, const TSetMap& m) const {
  std::string key = std::to_string(src_obj) + ">" + std::to_string(dst_obj) + ":";
  for (std::size_t i = 0; i < m.phi.size(); ++i)
    key += std::to_string(m.phi[i]) + "." + std::to_string(m.fam[i]) + ",";
  auto it = mor_lookup.find(key);
  return it == mor_lookup.end() ? kNone : it->second;
}

FinTSetsCat fin_T_sets_category(CatPtr t, int max_orbits) {
  FinTSetsCat r;
  r.base_t = t;
  // Objects: sorted component multisets of size <= max_orbits.
  std::vector<std::vector<Idx>> shapes{{}};
  std::vector<std::vector<Idx>> frontier{{}};
  for (int s = 0; s < max_orbits; ++s) {
    std::vector<std::vector<Idx>> next;
    for (const auto& sh : frontier) {
      for (Idx o = sh.empty() ? 0 : sh.back(); o < t->object_count(); ++o) {
        auto n2 = sh;
        n2.push_back(o);
        next.push_back(n2);
        shapes.push_back(n2);
      }
    }
    frontier = std::move(next);
  }
  std::sort(shapes.begin(), shapes.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  auto oid = [&](const std::vector<Idx>& sh) {
    std::string s = "{";
    for (std::size_t i = 0; i < sh.size(); ++i) {
      if (i) s += ",";
      s += t->object_id(sh[i]) + "#" + std::to_string(i);
    }
    return s + "}";
  };
  auto mid = [&](Idx so, Idx to, const TSetMap& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.phi.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(m.phi[i]) + ":" + t->morphism_id(m.fam[i]);
    }
    return s + "]" + std::to_string(so) + ">" + std::to_string(to);
  };

  std::vector<FinTSet> tsets;
  for (const auto& sh : shapes) tsets.push_back(make_tset(t, sh));
  struct Rec {
    Idx so, to;
    TSetMap m;
  };
  std::vector<Rec> recs;
  for (Idx so = 0; so < shapes.size(); ++so)
    for (Idx to = 0; to < shapes.size(); ++to)
      for (auto& m : hom_fin_T_sets(tsets[so], tsets[to])) recs.push_back({so, to, m});

  // object index order in the builder differs from `shapes` order: id sort.
  CatBuilder b2;
  for (const auto& sh : shapes) b2.add_object(oid(sh));
  for (const auto& rec : recs)
    b2.add_morphism(mid(rec.so, rec.to, rec.m), oid(shapes[rec.so]), oid(shapes[rec.to]));
  for (Idx so = 0; so < shapes.size(); ++so)
    b2.set_identity(oid(shapes[so]), mid(so, so, identity_tset_map(tsets[so])));

  CatSkeleton sk = std::move(b2).freeze();
  r.objects.resize(sk.object_count());
  std::vector<Idx> obj_of_shape(shapes.size());
  for (Idx i = 0; i < shapes.size(); ++i) {
    const Idx o = sk.object_index(oid(shapes[i]));
    obj_of_shape[i] = o;
    r.objects[o] = tsets[i];
    std::string key;
    for (Idx cix : shapes[i]) key += std::to_string(cix) + ",";
    r.obj_lookup.emplace(key, o);
  }
  r.morphisms.resize(sk.morphism_count());
  for (const auto& rec : recs) {
    const Idx m = sk.morphism_index(mid(rec.so, rec.to, rec.m));
    r.morphisms[m] = rec.m;
    std::string key = std::to_string(obj_of_shape[rec.so]) + ">" +
                      std::to_string(obj_of_shape[rec.to]) + ":";
    for (std::size_t i = 0; i < rec.m.phi.size(); ++i)
      key += std::to_string(rec.m.phi[i]) + "." + std::to_string(rec.m.fam[i]) + ",";
    r.mor_lookup.emplace(std::move(key), m);
  }

  r.cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat& cc, Idx g, Idx f) {
    const auto comp = compose_tset_maps(r.objects[cc.src(f)], r.objects[cc.dst(f)],
                                        r.objects[cc.dst(g)], r.morphisms[g], r.morphisms[f]);
    return r.morphism_of(cc.src(f), cc.dst(g), comp);
  }));
  return r;
}

// ---------------------------------------------------------------------------
// Discrete T-spaces

DiscreteTSpace discrete_T_space(const FinTSet& u) {
  DiscreteTSpace r;
  r.presheaf = tset_presheaf(u);
  r.elements = category_of_elements(r.presheaf.fun);
  r.tcat = r.elements.tcat;
  auto cls = classify_fibration(r.tcat.structure);
  if (!cls.left_fibration)
    fail(Errc::validation_error, "discrete T-space failed the left fibration test");
  return r;
}

DiscreteTSpace underline_object(CatPtr t, Idx v) {
  return discrete_T_space(make_tset(std::move(t), {v}));
}

}  // namespace parcat
