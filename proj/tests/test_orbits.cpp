#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parcat/galois.hpp"
#include "parcat/orbits.hpp"

#include <random>

using namespace parcat;

namespace {

// Fixed-point count |（G/K)^H| by direct enumeration: cosets gK with
// h·gK = gK for all h in H.
std::size_t fixed_point_count(const FinGroup& g, const std::vector<Idx>& h,
                              const std::vector<Idx>& k) {
  std::size_t count = 0;
  std::vector<char> seen(g.order(), 0);
  for (Idx x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    std::vector<Idx> coset;
    for (Idx kk : k) {
      const Idx y = g.times(x, kk);
      if (!seen[y]) {
        seen[y] = 1;
        coset.push_back(y);
      }
    }
    std::sort(coset.begin(), coset.end());
    bool fixed = true;
    for (Idx hh : h) {
      // h·coset = coset?
      for (Idx y : coset) {
        if (!std::binary_search(coset.begin(), coset.end(), g.times(hh, y))) {
          fixed = false;
          break;
        }
      }
      if (!fixed) break;
    }
    if (fixed) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("group validation") {
  auto c2 = cyclic_group(2);
  CHECK(c2.order() == 2);
  CHECK(c2.unit == 0);
  auto s3 = symmetric_group(3);
  CHECK(s3.order() == 6);
  // broken table
  CHECK_THROWS_AS(FinGroup::from_table({"e", "a"}, {{0, 1}, {1, 1}}), Error);
}

TEST_CASE("subgroup enumeration") {
  CHECK(cyclic_group(1).subgroups().size() == 1);
  CHECK(cyclic_group(2).subgroups().size() == 2);
  CHECK(cyclic_group(3).subgroups().size() == 2);
  CHECK(cyclic_group(6).subgroups().size() == 4);
  // S3: trivial, three transposition subgroups, one C3, S3 itself.
  CHECK(symmetric_group(3).subgroups().size() == 6);
}

TEST_CASE("trivial group gives the point category") {
  auto oc = orbit_category(cyclic_group(1));
  CHECK(oc.cat->object_count() == 1);
  CHECK(oc.cat->morphism_count() == 1);
}

TEST_CASE("orbit category hom counts match fixed-point counts") {
  for (const auto& g : {cyclic_group(2), cyclic_group(3), symmetric_group(3)}) {
    auto oc = orbit_category(g);
    for (Idx a = 0; a < oc.cat->object_count(); ++a) {
      for (Idx b = 0; b < oc.cat->object_count(); ++b) {
        CHECK(oc.cat->hom(a, b).size() ==
              fixed_point_count(g, oc.subgroup[a], oc.subgroup[b]));
        CHECK(oc.cat->hom(a, b).size() ==
              count_equivariant_maps(g, oc.subgroup[a], oc.subgroup[b]));
      }
    }
  }
}

TEST_CASE("C2 orbit category hom counts") {
  auto g = cyclic_group(2);
  auto oc = orbit_category(g);
  REQUIRE(oc.cat->object_count() == 2);
  const Idx free = oc.object_of_subgroup({0});
  const Idx fixed = oc.object_of_subgroup({0, 1});
  CHECK(oc.cat->hom(free, free).size() == 2);
  CHECK(oc.cat->hom(free, fixed).size() == 1);
  CHECK(oc.cat->hom(fixed, free).size() == 0);
  CHECK(oc.cat->hom(fixed, fixed).size() == 1);
}

TEST_CASE("S3 orbit category has six objects in four iso classes") {
  auto oc = orbit_category(symmetric_group(3));
  CHECK(oc.cat->object_count() == 6);
  CHECK(oc.cat->iso_classes().size() == 4);
}

TEST_CASE("orbit category opposite transposes hom counts") {
  auto oc = orbit_category(cyclic_group(2));
  auto op = opposite(oc.cat);
  for (Idx a = 0; a < op->object_count(); ++a)
    for (Idx b = 0; b < op->object_count(); ++b)
      CHECK(op->hom(a, b).size() == oc.cat->hom(b, a).size());
}

TEST_CASE("T-set mapping formula") {
  auto oc = orbit_category(cyclic_group(2));
  const Idx free = oc.object_of_subgroup({0});
  const Idx fixed = oc.object_of_subgroup({0, 1});

  // Hom(C2/e, C2/e ⊔ C2/C2) = 2 + 1 = 3.
  auto a = make_tset(oc.cat, {free});
  auto b = make_tset(oc.cat, {free, fixed});
  CHECK(hom_fin_T_sets(a, b).size() == 3);

  // empty source: exactly one map; empty target: none from nonempty.
  auto empty = make_tset(oc.cat, {});
  CHECK(hom_fin_T_sets(empty, b).size() == 1);
  CHECK(hom_fin_T_sets(a, empty).empty());
  CHECK(hom_fin_T_sets(empty, empty).size() == 1);
}

TEST_CASE("mapping formula agrees with presheaf transformations") {
  // Deterministic randomized battery over O_C2 and O_S3.
  std::mt19937_64 rng(20240613);
  auto rng_below = [&](std::size_t n) { return static_cast<Idx>(rng() % n); };
  int checked = 0;
  for (const auto& g : {cyclic_group(2), symmetric_group(3)}) {
    auto oc = orbit_category(g);
    for (int it = 0; it < 12; ++it) {
      const std::size_t na = 1 + rng_below(3), nb = rng_below(4);
      std::vector<Idx> ca, cb;
      for (std::size_t i = 0; i < na; ++i) ca.push_back(rng_below(oc.cat->object_count()));
      for (std::size_t i = 0; i < nb; ++i) cb.push_back(rng_below(oc.cat->object_count()));
      auto a = make_tset(oc.cat, ca);
      auto b = make_tset(oc.cat, cb);
      auto formula = hom_fin_T_sets(a, b);
      auto pa = tset_presheaf(a);
      auto pb = tset_presheaf(b);
      auto brute = enumerate_set_nat_trans(pa.fun, pb.fun);
      CHECK(formula.size() == brute.size());
      ++checked;
    }
  }
  CHECK(checked == 24);
}

TEST_CASE("T-set map composition is associative and unital") {
  auto g3 = symmetric_group(3);
  auto oc = orbit_category(g3);
  const Idx free3 = oc.object_of_subgroup({g3.unit});
  std::vector<Idx> all3;
  for (Idx i = 0; i < g3.order(); ++i) all3.push_back(i);
  const Idx top3 = oc.object_of_subgroup(all3);
  auto u = make_tset(oc.cat, {free3, free3, free3});
  auto v = make_tset(oc.cat, {free3, top3});
  auto w = make_tset(oc.cat, {top3});
  auto uv = hom_fin_T_sets(u, v);
  auto vw = hom_fin_T_sets(v, w);
  REQUIRE(!uv.empty());
  REQUIRE(!vw.empty());
  for (std::size_t i = 0; i < std::min<std::size_t>(4, uv.size()); ++i) {
    for (std::size_t j = 0; j < std::min<std::size_t>(4, vw.size()); ++j) {
      auto c = compose_tset_maps(u, v, w, vw[j], uv[i]);
      // Orbit functoriality: the index map of the composite is the composite
      // of index maps.
      for (std::size_t x = 0; x < u.components.size(); ++x)
        CHECK(c.phi[x] == vw[j].phi[uv[i].phi[x]]);
      CHECK(compose_tset_maps(u, u, v, uv[i], identity_tset_map(u)) == uv[i]);
      CHECK(compose_tset_maps(u, v, v, identity_tset_map(v), uv[i]) == uv[i]);
    }
  }
}

TEST_CASE("orbit decomposition reassembles") {
  auto oc = orbit_category(cyclic_group(2));
  auto u = make_tset(oc.cat, {1, 0, 1});
  CHECK(orbit_decomposition(u) == u.components);
}

TEST_CASE("pullback along identities is the identity") {
  auto oc = orbit_category(cyclic_group(2));
  auto a = make_tset(oc.cat, {0, 1});
  auto pb = pullback_fin_T_sets(a, a, a, identity_tset_map(a), identity_tset_map(a));
  // diagonal: components agree with a (as a multiset)
  auto want = a.components;
  auto got = pb.apex.components;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  CHECK(got == want);
  CHECK(verify_pullback_universal(a, a, a, identity_tset_map(a), identity_tset_map(a), pb, 2));
}

TEST_CASE("C2 double-coset pullback: free times free over the point") {
  auto g = cyclic_group(2);
  auto oc = orbit_category(g);
  const Idx free = oc.object_of_subgroup({0});
  const Idx fixed = oc.object_of_subgroup({0, 1});
  auto a = make_tset(oc.cat, {free});
  auto c = make_tset(oc.cat, {fixed});
  auto legs = hom_fin_T_sets(a, c);
  REQUIRE(legs.size() == 1);

  auto pb1 = pullback_fin_G_sets(oc, a, a, c, legs[0], legs[0]);
  // C2/e ×_{C2/C2} C2/e = C2/e ⊔ C2/e.
  CHECK(pb1.apex.components == std::vector<Idx>{free, free});
  CHECK(verify_pullback_universal(a, a, c, legs[0], legs[0], pb1, 2));

  // The general path agrees.
  auto pb2 = pullback_fin_T_sets(a, a, c, legs[0], legs[0]);
  auto c1 = pb1.apex.components, c2 = pb2.apex.components;
  std::sort(c1.begin(), c1.end());
  std::sort(c2.begin(), c2.end());
  CHECK(c1 == c2);
  CHECK(verify_pullback_universal(a, a, c, legs[0], legs[0], pb2, 2));
}

TEST_CASE("S3 double cosets drive the pullback decomposition") {
  auto g = symmetric_group(3);
  auto oc = orbit_category(g);
  // a fixed order-2 subgroup
  std::vector<Idx> c2sub;
  for (const auto& sub : g.subgroups())
    if (sub.size() == 2) {
      c2sub = sub;
      break;
    }
  REQUIRE(!c2sub.empty());
  const Idx h = oc.object_of_subgroup(c2sub);
  const Idx top = oc.object_of_subgroup([&] {
    std::vector<Idx> all;
    for (Idx i = 0; i < g.order(); ++i) all.push_back(i);
    return all;
  }());
  auto a = make_tset(oc.cat, {h});
  auto c = make_tset(oc.cat, {top});
  auto legs = hom_fin_T_sets(a, c);
  REQUIRE(legs.size() == 1);
  auto pb = pullback_fin_G_sets(oc, a, a, c, legs[0], legs[0]);
  // |C2\S3/C2| = 2: one double coset of size 2 (stabilizer C2) and one of
  // size 4 (trivial stabilizer).
  REQUIRE(pb.apex.components.size() == 2);
  std::vector<std::size_t> sizes;
  for (Idx comp : pb.apex.components) sizes.push_back(oc.subgroup[comp].size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 2});
  CHECK(verify_pullback_universal(a, a, c, legs[0], legs[0], pb, 1));

  auto pb2 = pullback_fin_T_sets(a, a, c, legs[0], legs[0]);
  auto c1 = pb.apex.components, c2 = pb2.apex.components;
  std::sort(c1.begin(), c1.end());
  std::sort(c2.begin(), c2.end());
  CHECK(c1 == c2);
}

TEST_CASE("a non-orbital base is detected") {
  // Poset with w < x,y < a,b < top and x,y incomparable: the intersection of
  // the principal downsets of a and b is connected without a greatest
  // element, so the cospan a -> top <- b has no pullback.
  CatBuilder b;
  for (const char* o : {"w", "x", "y", "a", "b", "t"})
    b.add_object_with_identity(o, std::string("id_") + o);
  auto arrow = [&](const char* s, const char* d) {
    b.add_morphism(std::string(s) + d, s, d);
  };
  arrow("w", "x");
  arrow("w", "y");
  arrow("w", "a");
  arrow("w", "b");
  arrow("w", "t");
  arrow("x", "a");
  arrow("x", "b");
  arrow("x", "t");
  arrow("y", "a");
  arrow("y", "b");
  arrow("y", "t");
  arrow("a", "t");
  arrow("b", "t");
  auto poset = std::make_shared<FinCat>(std::move(b).freeze().complete(
      [](const FinCat& cc, Idx g2, Idx f2) -> Idx {
        // thin category: the unique morphism with matching endpoints
        auto h = cc.hom(cc.src(f2), cc.dst(g2));
        return h.size() == 1 ? h[0] : kNone;
      }));
  auto aset = make_tset(poset, {poset->object_index("a")});
  auto bset = make_tset(poset, {poset->object_index("b")});
  auto tset = make_tset(poset, {poset->object_index("t")});
  auto fa = hom_fin_T_sets(aset, tset);
  auto fb = hom_fin_T_sets(bset, tset);
  REQUIRE(fa.size() == 1);
  REQUIRE(fb.size() == 1);
  try {
    pullback_fin_T_sets(aset, bset, tset, fa[0], fb[0]);
    FAIL("expected NotOrbital");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_orbital);
  }
}

TEST_CASE("finite T-sets category") {
  auto oc = orbit_category(cyclic_group(2));
  auto ft = fin_T_sets_category(oc.cat, 2);
  CHECK(ft.cat->object_count() == 6);  // {}, two singletons, three pairs
  // Hom({e,e},{e}) = 4 maps by the formula; check against category homs.
  const Idx free = oc.object_of_subgroup({0});
  const Idx ee = ft.object_of({free, free});
  const Idx e1 = ft.object_of({free});
  REQUIRE(ee != kNone);
  REQUIRE(e1 != kNone);
  CHECK(ft.cat->hom(ee, e1).size() == hom_fin_T_sets(ft.objects[ee], ft.objects[e1]).size());
}

TEST_CASE("discrete T-spaces are left fibrations") {
  auto oc = orbit_category(cyclic_group(2));
  const Idx free = oc.object_of_subgroup({0});
  const Idx fixed = oc.object_of_subgroup({0, 1});

  auto und = underline_object(oc.cat, free);
  // fiber over W has |Map_T(W, V)| objects
  for (Idx w = 0; w < oc.cat->object_count(); ++w) {
    auto f = fiber(und.tcat, w);
    CHECK(f.cat->object_count() == oc.cat->hom(w, free).size());
  }

  // terminal pattern: the representable at a terminal object of T is
  // equivalent to the terminal T-space (the base itself).
  auto top = underline_object(oc.cat, fixed);
  auto rep = equivalence_report(top.tcat.structure);
  CHECK(rep.equivalence());

  // V ⊔ V splits as two copies.
  auto uu = discrete_T_space(make_tset(oc.cat, {free, free}));
  auto single = underline_object(oc.cat, free);
  CHECK(uu.tcat.total->object_count() == 2 * single.tcat.total->object_count());
}

TEST_CASE("finite fields") {
  auto f4 = finite_field(2, 2);
  CHECK(f4.add.size() == 4);
  // x^2 = x + 1 for the generator in F4 with x^2+x+1.
  CHECK(f4.mul[2][2] == f4.add[2][1]);
  CHECK(f4.in_subfield(0, 1));
  CHECK(f4.in_subfield(1, 1));
  CHECK_FALSE(f4.in_subfield(2, 1));
  CHECK(f4.frob[2] == f4.mul[2][2]);
  auto f8 = finite_field(2, 3);
  int count = 0;
  for (Idx x = 0; x < 8; ++x)
    if (f8.in_subfield(x, 1)) ++count;
  CHECK(count == 2);
}

TEST_CASE("galois vector demo") {
  GaloisConfig cfg;
  auto gv = galois_vect(cfg);
  CHECK(gv.tcat.total->object_count() == 4);  // (F2, F4) x (dim 0, 1)
  auto cls = classify_fibration(gv.tcat.structure);
  CHECK(cls.opfibration);
  CHECK_FALSE(cls.left_fibration);

  // dimension 0 only: fibers are groupoids of field embeddings
  GaloisConfig flat{2, 2, 0, 200000};
  auto gv0 = galois_vect(flat);
  CHECK(gv0.tcat.total->object_count() == 2);
  auto cls0 = classify_fibration(gv0.tcat.structure);
  CHECK(cls0.opfibration);
  CHECK(cls0.left_fibration);

  // budget
  GaloisConfig big{2, 2, 3, 10};
  CHECK_THROWS_AS(galois_vect(big), Error);
}
