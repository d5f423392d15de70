#include "parcat/equivalence.hpp"

#include "parcat/funcat.hpp"

#include <algorithm>

namespace parcat {

std::string EquivalenceReport::describe(const FinCat& src, const FinCat& dst) const {
  if (equivalence()) return "equivalence";
  std::string s;
  if (!fully_faithful) {
    s += "not fully faithful on (" + src.object_id(ff_src_a) + ", " + src.object_id(ff_src_b) + ")";
    if (ff_collision_m1 != kNone)
      s += ": morphisms '" + src.morphism_id(ff_collision_m1) + "' and '" +
           src.morphism_id(ff_collision_m2) + "' collide";
    if (ff_unhit_mor != kNone) s += ": '" + dst.morphism_id(ff_unhit_mor) + "' is not hit";
  }
  if (!essentially_surjective) {
    if (!s.empty()) s += "; ";
    s += "object '" + dst.object_id(unhit_object) + "' is not reached up to isomorphism";
  }
  return s;
}

EquivalenceReport equivalence_report(const Functor& f) {
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  EquivalenceReport rep;

  // Fully faithful: every hom map is a bijection.
  rep.fully_faithful = true;
  for (Idx a = 0; a < c.object_count() && rep.fully_faithful; ++a) {
    for (Idx b = 0; b < c.object_count() && rep.fully_faithful; ++b) {
      auto source_hom = c.hom(a, b);
      auto target_hom = d.hom(f.obj_map[a], f.obj_map[b]);
      std::vector<char> hit(target_hom.size(), 0);
      for (std::size_t i = 0; i < source_hom.size(); ++i) {
        const Idx im = f.mor_map[source_hom[i]];
        const auto pos = std::find(target_hom.begin(), target_hom.end(), im) - target_hom.begin();
        if (hit[pos]) {
          rep.fully_faithful = false;
          rep.ff_src_a = a;
          rep.ff_src_b = b;
          rep.ff_collision_m2 = source_hom[i];
          for (std::size_t j = 0; j < i; ++j)
            if (f.mor_map[source_hom[j]] == im) rep.ff_collision_m1 = source_hom[j];
          break;
        }
        hit[pos] = 1;
      }
      if (!rep.fully_faithful) break;
      for (std::size_t p = 0; p < target_hom.size(); ++p) {
        if (!hit[p]) {
          rep.fully_faithful = false;
          rep.ff_src_a = a;
          rep.ff_src_b = b;
          rep.ff_unhit_mor = target_hom[p];
          break;
        }
      }
    }
  }

  // Essential surjectivity: every target object isomorphic to some image.
  rep.essentially_surjective = true;
  std::vector<Idx> section(d.object_count(), kNone);  // chosen preimage object
  std::vector<Idx> counit(d.object_count(), kNone);   // iso F(section(y)) -> y
  for (Idx y = 0; y < d.object_count(); ++y) {
    for (Idx x = 0; x < c.object_count() && section[y] == kNone; ++x) {
      if (f.obj_map[x] == y) {
        section[y] = x;
        counit[y] = d.identity(y);
      }
    }
    for (Idx x = 0; x < c.object_count() && section[y] == kNone; ++x) {
      for (Idx iso : d.hom(f.obj_map[x], y)) {
        if (d.is_iso(iso)) {
          section[y] = x;
          counit[y] = iso;
          break;
        }
      }
    }
    if (section[y] == kNone) {
      rep.essentially_surjective = false;
      rep.unhit_object = y;
      break;
    }
  }

  if (!rep.equivalence()) return rep;

  // Quasi-inverse: on morphisms k: y -> y', G(k) is the unique preimage of
  // counit(y')⁻¹ ∘ k ∘ counit(y) under the hom bijection.
  auto preimage = [&](Idx a, Idx b, Idx target_mor) -> Idx {
    for (Idx m : c.hom(a, b))
      if (f.mor_map[m] == target_mor) return m;
    return kNone;
  };

  Functor g{f.target, f.source, section, {}};
  g.mor_map.resize(d.morphism_count(), kNone);
  for (Idx k = 0; k < d.morphism_count(); ++k) {
    const Idx y = d.src(k), y2 = d.dst(k);
    const Idx conj = d.compose(d.inverse(counit[y2]), d.compose(k, counit[y]));
    g.mor_map[k] = preimage(section[y], section[y2], conj);
    if (g.mor_map[k] == kNone)
      fail(Errc::validation_error, "quasi-inverse synthesis failed despite full faithfulness");
  }

  // Unit at x: the unique preimage of counit(F x)⁻¹.
  NatTrans unit;
  unit.source = identity_functor(f.source);
  unit.target = compose(g, f);
  unit.components.resize(c.object_count());
  for (Idx x = 0; x < c.object_count(); ++x) {
    const Idx fx = f.obj_map[x];
    unit.components[x] = preimage(x, section[fx], d.inverse(counit[fx]));
    if (unit.components[x] == kNone)
      fail(Errc::validation_error, "unit synthesis failed despite full faithfulness");
  }

  NatTrans cou;
  cou.source = compose(f, g);
  cou.target = identity_functor(f.target);
  cou.components.assign(counit.begin(), counit.end());

  EquivalenceReport::Witness w{std::move(g), std::move(unit), std::move(cou)};
  if (!revalidate_equivalence_witness(f, w))
    fail(Errc::validation_error, "synthesized equivalence witness failed re-validation");
  rep.inverse_witness = std::move(w);
  return rep;
}

bool revalidate_equivalence_witness(const Functor& f, const EquivalenceReport::Witness& w) {
  try {
    w.inverse.validate();
    w.unit.validate();
    w.counit.validate();
  } catch (const Error&) {
    return false;
  }
  if (!w.unit.is_isomorphism() || !w.counit.is_isomorphism()) return false;
  // The witness must actually connect f with its inverse.
  if (!w.unit.target.equals(compose(w.inverse, f))) return false;
  if (!w.counit.source.equals(compose(f, w.inverse))) return false;
  return true;
}

std::optional<Functor> find_isomorphism(CatPtr a, CatPtr b, std::size_t budget) {
  if (a->object_count() != b->object_count() || a->morphism_count() != b->morphism_count())
    return std::nullopt;
  // Backtracking over functors with a bijectivity filter; first hit wins.
  auto functors = enumerate_functors(a, b, {}, budget);
  for (auto& f : functors)
    if (f.is_bijective()) return f;
  return std::nullopt;
}

}  // namespace parcat
