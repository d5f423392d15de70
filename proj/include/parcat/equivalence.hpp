#pragma once

#include "parcat/core.hpp"

#include <optional>

namespace parcat {

/// Result of testing a functor for being an equivalence of categories. On
/// success an explicit quasi-inverse with unit/counit isomorphisms is
/// synthesized and re-validated; on failure the report carries counterexample
/// ids. inverse_witness is present iff both flags hold.
struct EquivalenceReport {
  bool fully_faithful = false;
  bool essentially_surjective = false;

  // Counterexample data (indices into source/target as appropriate).
  Idx ff_src_a = kNone, ff_src_b = kNone;  // object pair where the hom map fails
  Idx ff_collision_m1 = kNone, ff_collision_m2 = kNone;  // not faithful
  Idx ff_unhit_mor = kNone;                              // not full
  Idx unhit_object = kNone;                              // not essentially surjective

  struct Witness {
    Functor inverse;   // target -> source
    NatTrans unit;     // id_source => inverse ∘ functor
    NatTrans counit;   // functor ∘ inverse => id_target
  };
  std::optional<Witness> inverse_witness;

  bool equivalence() const { return fully_faithful && essentially_surjective; }
  std::string describe(const FinCat& src, const FinCat& dst) const;
};

EquivalenceReport equivalence_report(const Functor& f);

/// Re-runs every validity condition on a synthesized witness: functoriality,
/// naturality, and invertibility of all unit/counit components.
bool revalidate_equivalence_witness(const Functor& f, const EquivalenceReport::Witness& w);

/// Searches for an isomorphism of categories (bijective functor); returns the
/// first one in canonical order if any.
std::optional<Functor> find_isomorphism(CatPtr a, CatPtr b, std::size_t budget = kDefaultBudget);

}  // namespace parcat
