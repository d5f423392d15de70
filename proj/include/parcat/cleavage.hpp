#pragma once

#include "parcat/fibration.hpp"

namespace parcat {

/// A chosen system of cocartesian lifts, identity-normalized, together with
/// the coherence isomorphisms comparing iterated and composite pushforwards.
/// Lifts are addressed by (object, base morphism out of its image);
/// coherence by (object, second base morphism, first base morphism).
struct Cleavage {
  // lift[(x, f)]: the chosen cocartesian edge out of x over f.
  std::vector<Idx> lift;  // size |obj| * |base mor|, kNone where src(f) != p(x)
  // gamma[(x, g, f)]: iso  g_!(f_!x) -> (g∘f)_!x,  vertical over dst(g).
  std::vector<Idx> gamma;  // size |obj| * |base mor|^2, kNone where not composable

  Idx lift_of(const TCat& c, Idx x, Idx f) const;
  Idx pushforward(const TCat& c, Idx x, Idx f) const;  // target of the lift
  Idx coherence(const TCat& c, Idx x, Idx g, Idx f) const;

  /// Fiber transport of a vertical morphism v: a -> b along f out of their
  /// common base object: the unique vertical filler of the transport square.
  Idx transport(const TCat& c, Idx f, Idx v) const;

  /// Vertical part of an arbitrary morphism m: the unique vertical v with
  /// m = v ∘ lift(src m, p m).
  Idx vertical_part(const TCat& c, Idx m) const;
};

/// Deterministic cleavage: first cocartesian lift in canonical order,
/// identity-normalized. Verifies that every coherence component is an
/// isomorphism, satisfies the cocycle identity on all base triples and is
/// natural in the object argument.
Cleavage choose_cleavage(const TCat& c);

/// The functorial cocartesian transport  total ×_base O(base) -> total,
/// together with its domain data.
struct StrongPushforward {
  ProductCat domain;      // total ×_base O(base) via the source projection
  ArrowCat base_arrows;   // O(base)
  Functor functor;        // the pushforward
  Functor unit_section;   // total -> domain, x -> (x, id)
};
StrongPushforward strong_pushforward(const TCat& c, const Cleavage& cl);

struct RetractionReport {
  // Comparison of the cocartesian-arrow category with total ×_base O(base).
  bool comparison_surjective_on_objects = false;
  bool comparison_fully_faithful = false;
  // P ∘ unit section is the identity on the nose.
  bool unit_retraction_identity = false;
  // The homotopy from the identity to unit∘P: a natural transformation whose
  // components are marked (cocartesian first leg, invertible far edge) and
  // whose image under P is invertible.
  bool homotopy_natural = false;
  bool homotopy_components_marked = false;
  bool homotopy_image_invertible = false;
  // Marked squares (cocartesian edge, iso far edge) push forward to isos.
  bool marked_map_property = false;
  bool passed() const {
    return comparison_surjective_on_objects && comparison_fully_faithful &&
           unit_retraction_identity && homotopy_natural && homotopy_components_marked &&
           homotopy_image_invertible && marked_map_property;
  }
  std::string witness;
};
RetractionReport verify_retraction(const TCat& c, const Cleavage& cl);

}  // namespace parcat
