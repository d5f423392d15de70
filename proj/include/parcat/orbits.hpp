#pragma once

#include "parcat/group.hpp"
#include "parcat/setfun.hpp"

namespace parcat {

/// The orbit category of a finite group: one object per subgroup H (standing
/// for G/H, conjugate subgroups kept distinct), morphisms G/H -> G/K the
/// cosets gK with g⁻¹Hg ⊆ K, composition by coset multiplication.
struct OrbitCategory {
  CatPtr cat;
  FinGroup group;
  std::vector<std::vector<Idx>> subgroup;  // per object, sorted element lists
  std::vector<Idx> coset_rep;              // per morphism: minimal representative

  Idx object_of_subgroup(const std::vector<Idx>& h) const;
  Idx morphism_of_coset(Idx src_obj, Idx dst_obj, Idx g) const;
  Idx canonical_rep(Idx g, Idx dst_obj) const;  // min element of g·K
};

OrbitCategory orbit_category(const FinGroup& g);

/// Independent oracle: counts equivariant maps G/H -> G/K by enumerating all
/// functions between the coset spaces and testing equivariance pointwise.
std::size_t count_equivariant_maps(const FinGroup& g, const std::vector<Idx>& h,
                                   const std::vector<Idx>& k);

/// A formal finite T-set: a finite index set with a T-object per index.
struct FinTSet {
  CatPtr base_t;  // the indexing category T (not its opposite)
  std::vector<std::string> index;
  std::vector<Idx> components;
};

FinTSet make_tset(CatPtr t, const std::vector<Idx>& components);

/// A map of finite T-sets in the coproduct-of-representables form: an index
/// map together with a family of T-morphisms into the chosen components.
struct TSetMap {
  std::vector<Idx> phi;  // index map I_src -> I_dst
  std::vector<Idx> fam;  // per i: T-morphism  src_i -> dst_{phi(i)}
  bool operator==(const TSetMap&) const = default;
};

/// All maps src -> dst by the mapping-set formula (disjoint union over index
/// maps of products of T-hom-sets), in canonical order.
std::vector<TSetMap> hom_fin_T_sets(const FinTSet& src, const FinTSet& dst);

TSetMap compose_tset_maps(const FinTSet& a, const FinTSet& b, const FinTSet& c,
                          const TSetMap& g, const TSetMap& f);  // g after f
TSetMap identity_tset_map(const FinTSet& a);

/// The representable decomposition: the list of component objects. The
/// action on maps is the index map.
std::vector<Idx> orbit_decomposition(const FinTSet& u);

/// The presheaf W -> Hom(W, U) as a set functor on opposite(T). Element k of
/// the value at W is pair_of(W, k) = (index i, T-morphism W -> U_i).
struct TSetPresheaf {
  SetFunctor fun;  // over opposite(T)
  CatPtr op_t;
  std::vector<std::vector<std::pair<Idx, Idx>>> elt;  // per base object: (i, mor)
  Idx element_of(Idx w, Idx i, Idx mor) const;
};
TSetPresheaf tset_presheaf(const FinTSet& u);

struct TSetPullback {
  FinTSet apex;
  TSetMap to_a, to_b;
};

/// Pullback of a cospan A -> C <- B of finite T-sets over a general base:
/// computes the pointwise presheaf pullback and decides whether it decomposes
/// into representables (throws NotOrbital with a witness otherwise).
TSetPullback pullback_fin_T_sets(const FinTSet& a, const FinTSet& b, const FinTSet& c,
                                 const TSetMap& f, const TSetMap& g);

/// Fast path for orbit categories: orbitwise double-coset decomposition.
TSetPullback pullback_fin_G_sets(const OrbitCategory& oc, const FinTSet& a, const FinTSet& b,
                                 const FinTSet& c, const TSetMap& f, const TSetMap& g);

/// Checks that a claimed pullback satisfies the universal property against
/// every finite T-set with at most max_orbits components.
bool verify_pullback_universal(const FinTSet& a, const FinTSet& b, const FinTSet& c,
                               const TSetMap& f, const TSetMap& g, const TSetPullback& pb,
                               int max_orbits);

/// The category of finite T-sets with at most max_orbits components.
struct FinTSetsCat {
  CatPtr cat;
  CatPtr base_t;
  std::vector<FinTSet> objects;
  std::vector<TSetMap> morphisms;
  Idx object_of(const std::vector<Idx>& sorted_components) const;
  Idx morphism_of(Idx src_obj, Idx dst_obj, const TSetMap& m) const;
  std::unordered_map<std::string, Idx> obj_lookup, mor_lookup;
};
FinTSetsCat fin_T_sets_category(CatPtr t, int max_orbits);

/// The discrete T-space attached to U: the category of elements of its
/// presheaf, a left fibration over opposite(T).
struct DiscreteTSpace {
  TCat tcat;
  TSetPresheaf presheaf;
  ElementsCat elements;
};
DiscreteTSpace discrete_T_space(const FinTSet& u);

/// The representable T-space attached to an object V of T.
DiscreteTSpace underline_object(CatPtr t, Idx v);

}  // namespace parcat
