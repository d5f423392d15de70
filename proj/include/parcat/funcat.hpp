#pragma once

#include "parcat/core.hpp"

#include <unordered_map>

namespace parcat {

struct EnumConstraints {
  std::function<bool(Idx src_obj, Idx cand_obj)> obj_ok;  // optional
  std::function<bool(Idx src_mor, Idx cand_mor)> mor_ok;  // optional
};

/// All functors src -> dst satisfying the constraints, in canonical order
/// (lexicographic in the object then morphism assignment tables). Counts
/// partial assignments against the budget.
std::vector<Functor> enumerate_functors(CatPtr src, CatPtr dst,
                                        const EnumConstraints& k = {},
                                        std::size_t budget = kDefaultBudget);

/// All natural transformations f => g with components restricted by comp_ok,
/// in canonical (lexicographic component) order.
std::vector<std::vector<Idx>> enumerate_nat_components(
    const Functor& f, const Functor& g,
    const std::function<bool(Idx obj, Idx cand_mor)>& comp_ok = nullptr,
    std::size_t budget = kDefaultBudget);

/// A functor category materialized as a FinCat with decode tables. Object i
/// is `objects[i]`; morphism j is the transformation `morphisms[j]`.
struct EnumeratedFunCat {
  CatPtr cat;
  std::vector<Functor> objects;
  struct Mor {
    Idx src_fun, dst_fun;
    std::vector<Idx> components;
  };
  std::vector<Mor> morphisms;

  Idx object_of(const std::vector<Idx>& obj_map, const std::vector<Idx>& mor_map) const;
  Idx morphism_of(Idx src_fun, Idx dst_fun, const std::vector<Idx>& components) const;
  NatTrans nat_trans(Idx mor) const;

  std::unordered_map<std::string, Idx> obj_lookup, mor_lookup;
};

/// Fun(c, d) by exhaustive enumeration: objects are all functors, morphisms
/// all natural transformations, composition componentwise.
EnumeratedFunCat functor_category(CatPtr c, CatPtr d, std::size_t budget = kDefaultBudget);

/// Shared assembly: builds the category whose objects are the given functors
/// and whose morphisms are the transformations with components allowed by
/// comp_ok (used for plain, vertical and groupoid variants).
EnumeratedFunCat assemble_fun_cat(CatPtr c, CatPtr d, std::vector<Functor> objects,
                                  const std::function<bool(Idx obj, Idx cand_mor)>& comp_ok,
                                  std::size_t budget);

}  // namespace parcat
