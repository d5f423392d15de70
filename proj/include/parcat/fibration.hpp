#pragma once

#include "parcat/core.hpp"
#include "parcat/funcat.hpp"
#include "parcat/ops.hpp"
#include "parcat/equivalence.hpp"

#include <optional>

namespace parcat {

/// Witness for a failed cocartesian test: the pair (h, g) admitting no unique
/// filler, with the number of fillers found.
struct CocartWitness {
  bool ok = false;
  Idx h = kNone;
  Idx g = kNone;
  int fillers = 1;
};

/// The unique-factorization test for a single edge, with witness on failure.
CocartWitness is_cocartesian_edge(const Functor& p, Idx e);
CocartWitness is_cartesian_edge(const Functor& p, Idx e);

/// Bitmaps over all morphisms, computed with shared indexing (much faster
/// than per-edge witnesses; agrees with the per-edge test).
std::vector<char> cocartesian_edges(const Functor& p);
std::vector<char> cartesian_edges(const Functor& p);

struct LiftFailure {
  Idx obj = kNone;
  Idx base_mor = kNone;
};

struct FibrationReport {
  bool opfibration = false;
  bool cartesian_fibration = false;
  bool left_fibration = false;
  bool right_fibration = false;
  std::vector<char> cocart, cart;
  std::optional<LiftFailure> opfib_witness, cart_witness;
  Idx non_cocart_edge = kNone;  // witness when opfibration but not left
  Idx non_cart_edge = kNone;
};

FibrationReport classify_fibration(const Functor& p);

/// A verified Grothendieck opfibration with its cocartesian edges cached.
struct TCat {
  CatPtr total;
  CatPtr base;
  Functor structure;
  std::vector<Idx> cocart;      // sorted
  std::vector<char> is_cocart;  // bitmap

  Idx base_of_obj(Idx x) const { return structure.obj_map[x]; }
  Idx base_of_mor(Idx m) const { return structure.mor_map[m]; }
};

/// Verifies that p is an opfibration (throws NotOpfibration with the
/// unliftable pair otherwise), caches the cocartesian edges and checks they
/// are closed under composition and contain the identities.
TCat make_tcat(Functor p);

/// Rebuilds the TCat from its structure functor and checks that the supplied
/// cocartesian-edge set matches; used when loading serialized data.
TCat revalidate_tcat(Functor p, const std::vector<std::string>& claimed_cocart);

// Standard T-categories over a base s.
TCat star_tcat(CatPtr s);                    // identity structure map
TCat empty_tcat(CatPtr s);
TCat constant_tcat(CatPtr c, CatPtr s);      // projection C × S -> S

struct TCatProduct {
  TCat tcat;
  ProductCat pairs;  // decode tables; pairs.cat == tcat.total
};
TCatProduct product_tcat(const TCat& c, const TCat& d);

/// Fiber over a base object: objects over it, morphisms over its identity.
struct Fiber {
  CatPtr cat;
  std::vector<Idx> obj_in_total, mor_in_total;
  std::vector<Idx> total_obj_to_fiber;  // kNone off-fiber
  std::vector<Idx> total_mor_to_fiber;
};
Fiber fiber(const TCat& c, Idx base_obj);

/// A functor strictly over the common base carrying cocartesian edges to
/// cocartesian edges.
struct TFunctor {
  TCat source;
  TCat target;
  Functor underlying;
  void validate() const;
};

TFunctor identity_tfunctor(const TCat& c);
TFunctor compose(const TFunctor& g, const TFunctor& f);

/// Enumerates T-functors c -> d (strictly over the base, cocartesian
/// preserving) and assembles the category with vertical transformations as
/// morphisms.
EnumeratedFunCat fun_T(const TCat& c, const TCat& d, std::size_t budget = kDefaultBudget);

/// The maximal subgroupoid of fun_T: only invertible vertical
/// transformations.
EnumeratedFunCat map_T(const TCat& c, const TCat& d, std::size_t budget = kDefaultBudget);

/// Per-fiber equivalence checking; aggregate verdict plus per-fiber reports.
struct TEquivalenceReport {
  bool equivalence = true;
  std::vector<std::pair<Idx, EquivalenceReport>> fibers;  // (base object, report)
};
TEquivalenceReport t_equivalence_report(const TFunctor& f);

/// Subcategory predicates for a presentation (object subset, morphism
/// subset). Throws NotASubcategory if the presentation is not closed.
struct TSubcatReport {
  bool is_t_subcategory = false;         // restriction is an opfibration with agreeing cocartesian edges
  bool stable_under_equivalences = false;  // cocartesian edge in the subcategory iff its source is
  bool bullet_source_detection = false;  // cocartesian x -> y lies in C' iff x does
  bool bullet_triangle = false;          // in triangles over a cocartesian edge, membership transfers
  bool stability_lemma_consistent = false;
  bool full_fiberwise = false;
  bool full_in_total = false;
  bool fullness_lemma_consistent = false;
  bool full_stable_iff_target_closed = false;  // for full subcategories
  std::string witness;
};
TSubcatReport tsubcategory_checks(const TCat& c, const std::vector<Idx>& objs,
                                  const std::vector<Idx>& mors);

/// A T-functor that is itself an opfibration (or left fibration), with the
/// inherited-structure sanity check.
struct TFibrationReport {
  bool cocartesian_t_fibration = false;
  bool left_t_fibration = false;
  bool inherited_structure_ok = false;
  std::string witness;
};
TFibrationReport is_cocartesian_T_fibration(const TFunctor& f);

}  // namespace parcat
