#pragma once

#include "parcat/fibration.hpp"

namespace parcat {

/// A finite-set-valued functor on `cat` (covariant), stored as per-object
/// cardinalities and per-morphism value tables. Presheaves are represented
/// as set functors on the opposite category.
struct SetFunctor {
  CatPtr cat;
  std::vector<Idx> size;              // per object
  std::vector<std::vector<Idx>> act;  // per morphism m: table F(src m) -> F(dst m)

  Idx apply(Idx m, Idx elt) const { return act[m][elt]; }
  void validate() const;
};

SetFunctor terminal_set_functor(CatPtr cat);
SetFunctor product_set_functor(const SetFunctor& a, const SetFunctor& b);  // pairs b*|B|-major? (a_elt * |B| + b_elt)
/// Co-representable: W -> Hom(v, W).
SetFunctor corepresentable_set_functor(CatPtr cat, Idx v);

/// All natural families alpha_W: P(W) -> Q(W); enumeration with constraint
/// propagation in canonical order. Each family is a per-object value table.
std::vector<std::vector<std::vector<Idx>>> enumerate_set_nat_trans(const SetFunctor& p,
                                                                   const SetFunctor& q,
                                                                   std::size_t budget = kDefaultBudget);

/// The category of elements of a set functor, a left fibration over its
/// indexing category (all edges cocartesian, unique lifts).
struct ElementsCat {
  TCat tcat;
  std::vector<std::pair<Idx, Idx>> obj_elt;  // per object: (base object, element)
  Idx object_of(Idx base_obj, Idx elt) const;
  std::unordered_map<std::uint64_t, Idx> lookup;
};
ElementsCat category_of_elements(const SetFunctor& f);

}  // namespace parcat
