#pragma once

#include "parcat/core.hpp"

#include <unordered_map>

namespace parcat {

/// Same objects and ids, arrows reversed, composition transposed. Involutive
/// on the nose: opposite(opposite(c)) equals c.
CatPtr opposite(const CatPtr& c);

struct ProductCat {
  CatPtr cat;
  std::vector<std::pair<Idx, Idx>> obj_pair;  // per product object
  std::vector<std::pair<Idx, Idx>> mor_pair;  // per product morphism
  Functor proj1, proj2;

  Idx object_of(Idx a, Idx b) const;
  Idx morphism_of(Idx m, Idx n) const;

  std::unordered_map<std::uint64_t, Idx> obj_lookup, mor_lookup;
};

ProductCat product(CatPtr c, CatPtr d);

/// Pairs agreeing in the common target of f and g.
ProductCat fiber_product(const Functor& f, const Functor& g);

/// Marking policy for a lax-pullback factor.
struct EdgeMarking {
  enum Kind { flat, sharp, given } kind = flat;
  std::vector<char> edges;  // bitmap, used when kind == given

  static EdgeMarking Flat() { return {flat, {}}; }
  static EdgeMarking Sharp() { return {sharp, {}}; }
  static EdgeMarking Given(std::vector<char> bitmap) { return {given, std::move(bitmap)}; }
  bool contains(const FinCat& c, Idx m) const;
};

/// The comma construction M ↓_S N on f: M -> S, g: N -> S. Objects are
/// triples (x, y, e: f(x) -> g(y)); morphisms are pairs (m, n) making the
/// evident square commute. A morphism is marked when both factor components
/// are marked under the given policies.
struct LaxPullback {
  CatPtr cat;
  std::vector<std::array<Idx, 3>> obj_data;  // (x, y, e)
  std::vector<std::pair<Idx, Idx>> mor_data;  // (m, n)
  Functor to_first, to_second;
  /// Structure map to the common target: (x,y,e) -> dst(e), (m,n) -> g(n).
  Functor to_base;
  std::vector<char> marked;  // bitmap over morphisms

  Idx object_of(Idx x, Idx y, Idx e) const;
  std::unordered_map<std::string, Idx> obj_lookup;
};

LaxPullback lax_pullback(const Functor& f, const Functor& g,
                         const EdgeMarking& mark_first = EdgeMarking::Flat(),
                         const EdgeMarking& mark_second = EdgeMarking::Flat());

/// One-object category on a chosen object of s, with its inclusion functor.
struct PointedInclusion {
  CatPtr point;
  Functor include;  // point -> s
};
PointedInclusion object_inclusion(CatPtr s, Idx x);

/// Overcategory S ↓_S {x} (objects: arrows into x).
LaxPullback slice(CatPtr s, Idx x);
/// Undercategory {x} ↓_S S (objects: arrows out of x).
LaxPullback coslice(CatPtr s, Idx x);

/// The arrow category: objects are morphisms of c (keeping their ids),
/// morphisms are commuting squares (u, v).
struct ArrowCat {
  CatPtr cat;
  std::vector<Idx> obj_arrow;                   // per object: morphism of c
  std::vector<std::pair<Idx, Idx>> mor_square;  // (u, v)
  Functor source_proj, target_proj;             // to c
  Idx object_of(Idx arrow) const;
};
ArrowCat arrow_category(CatPtr c);

/// The twisted arrow category: a morphism f -> g is a pair (u, v) with
/// g = v∘f∘u. Comes with the projection to opposite(c) × c.
struct TwistedArrowCat {
  CatPtr cat;
  std::vector<Idx> obj_arrow;
  std::vector<std::pair<Idx, Idx>> mor_pair;  // (u, v)
  CatPtr op;           // opposite(c)
  ProductCat op_times; // opposite(c) × c
  Functor projection;  // to op_times.cat
  Idx object_of(Idx arrow) const;
};
TwistedArrowCat twisted_arrow(CatPtr c);

// Small standard categories.
CatPtr empty_category();
CatPtr point_category();
CatPtr walking_arrow();    // 0 -> 1
CatPtr walking_iso();      // two isomorphic objects
CatPtr parallel_pair();    // two objects, two parallel arrows

/// Skeleton of finite sets of cardinality <= n with all maps. Morphism value
/// tables are exposed for set-level computations.
struct FinSetCat {
  CatPtr cat;
  std::vector<int> card;                        // per object
  std::vector<std::vector<std::uint8_t>> map_of;  // per morphism: value table
  Idx object_of_card(int k) const;
  Idx morphism_of(Idx src_obj, Idx dst_obj, const std::vector<std::uint8_t>& values) const;
  std::unordered_map<std::string, Idx> mor_lookup;
};
FinSetCat finset_skeleton(int n);

}  // namespace parcat
