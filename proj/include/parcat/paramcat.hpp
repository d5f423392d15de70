#pragma once

#include "parcat/cleavage.hpp"
#include "parcat/orbits.hpp"

namespace parcat {

/// The fiberwise opposite of a T-category. Objects are unchanged; a morphism
/// x -> y over f is a vertical morphism y -> f_!x against the chosen
/// cleavage, composed through the coherence isomorphisms.
struct VopCat {
  TCat tcat;
  Cleavage cleavage;              // the cleavage of the input used to normalize
  std::vector<Idx> over;          // per morphism: base morphism
  std::vector<Idx> vertical;      // per morphism: vertical representative y -> f_!x
  Idx morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor, Idx vert) const;
  std::unordered_map<std::string, Idx> mor_lookup;
};
VopCat vop(const TCat& c);
VopCat vop(const TCat& c, const Cleavage& cl);

/// The canonical comparison C -> vop(vop(C)); a T-equivalence.
TFunctor vop_vop_compare(const TCat& c, const VopCat& w, const VopCat& ww);

/// For a T-space, inversion of vertical parts gives a T-equivalence
/// C -> vop(C).
TFunctor tspace_vop_compare(const TCat& c, const VopCat& w);

/// Dual of a cartesian fibration q: D -> T: the opfibration over
/// opposite(T) with the same fibers (built as the fiberwise opposite of the
/// opposite functor).
struct DualResult {
  TCat tcat;  // over opposite(T)
  VopCat inner;
  CatPtr op_total;
};
DualResult dualize(const Functor& q);

/// The T-category of finite T-sets (bounded): dual of the target projection
/// restricted to representables.
struct UnderlineFinTSets {
  TCat tcat;            // over opposite(T)
  FinTSetsCat ambient;  // the category of finite T-sets used
  DualResult dual;
};
UnderlineFinTSets underline_fin_T_sets(CatPtr t, int max_orbits);

/// Pairing construction: for a cartesian fibration x over s and a
/// T-category y over s, the opfibration whose fiber over an object is
/// Fun(X_s, Y_s) and whose edges are twisted function families.
struct FunTilde {
  TCat tcat;
  // objects
  std::vector<Idx> obj_base;            // base object
  std::vector<Functor> obj_fun;         // functor fiber_x(s) -> fiber_y(s)
  // morphisms: base morphism eta and a family over eta indexed by the
  // objects of the target x-fiber: components F(eta^* x') -> G(x') of y.
  std::vector<Idx> mor_base;
  std::vector<std::vector<Idx>> mor_family;
  // fibers of x and y per base object, and cartesian transports of x along
  // each base morphism eta: fiber_x(dst eta) -> fiber_x(src eta).
  std::vector<Fiber> x_fibers, y_fibers;
  std::vector<Functor> x_transport;
  Cleavage x_cleavage_op;  // cleavage of op(x) used for the transports

  Idx object_of(Idx base_obj, const Functor& f) const;
  Idx morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor, const std::vector<Idx>& family) const;
  std::unordered_map<std::string, Idx> obj_lookup, mor_lookup;
};
FunTilde fun_tilde(const Functor& x, const TCat& y, std::size_t budget = kDefaultBudget);

/// The T-category of T-objects in d: fun_tilde of the source projection of
/// the base's arrow category against the constant T-category on d. Fiber
/// over V is Fun(coslice of V, d).
struct UnderlineObjects {
  FunTilde fun;
  ArrowCat base_arrows;
  ProductCat d_times_s;  // the constant T-category on d
  CatPtr d;
};
UnderlineObjects underline_objects(CatPtr d, CatPtr s, std::size_t budget = kDefaultBudget);

/// Evaluation along the identity-arrow section: the comparison
/// fun_T(C, underline_objects(d)) -> Fun(total C, d), certified an
/// equivalence by the cofree check.
struct CofreeComparison {
  UnderlineObjects cod;     // underline_objects(d, base)
  EnumeratedFunCat lhs;     // fun_T(c, cod)
  EnumeratedFunCat rhs;     // Fun(total c, d)
  Functor comparison;       // lhs.cat -> rhs.cat
  EquivalenceReport report;
};
CofreeComparison cofree_compare(const TCat& c, CatPtr d, std::size_t budget = kDefaultBudget);

/// Right Kan extension of a U-category along i: U -> T, presented over
/// opposite(T) by lax-pullback functor data.
struct RightKanExtension {
  TCat tcat;  // over opposite(T)
  CatPtr op_t, op_u;
  Functor op_i;  // opposite(U) -> opposite(T)
  // objects: (t, functor H: {t}↓op_u -> total(D) over op_u)
  std::vector<Idx> obj_base;
  std::vector<LaxPullback> slices;      // per base object: {t} ↓ op_u
  std::vector<Functor> obj_fun;         // into total(D)
  std::vector<Idx> mor_base;
  std::vector<std::vector<Idx>> mor_family;  // vertical components over slice objects of dst
  std::unordered_map<std::string, Idx> obj_lookup, mor_lookup;
};
RightKanExtension right_kan_extend(const Functor& i, const TCat& d,
                                   std::size_t budget = kDefaultBudget);

/// The counit evaluation rke(id, D) -> D and, when i is the identity, the
/// comparison T-functor used by the tests.
TFunctor rke_identity_compare(const RightKanExtension& r, const TCat& d);

/// Internal-hom T-category of two T-categories over the same base. Objects
/// over V are marked functors from the coslice-pullback of C to D; morphisms
/// are vertical transformation families; cocartesian edges are the families
/// of isomorphisms.
struct FunUnderline {
  TCat tcat;
  TCat c, d;  // the inputs
  std::vector<Idx> obj_base;
  std::vector<LaxPullback> slices;   // per base object V: {V}♭ ↓ ♮C
  std::vector<Functor> obj_fun;      // H: slice(V).cat -> total(D)
  std::vector<Idx> mor_base;
  std::vector<std::vector<Idx>> mor_family;  // per object of slice(dst)
  // restriction along f: V -> W: slice(W) -> slice(V), (y, e) -> (y, e∘f)
  std::vector<Functor> restrict_along;  // per base morphism
  Idx object_of(Idx base_obj, const Functor& h) const;
  Idx morphism_of(Idx src_obj, Idx dst_obj, Idx base_mor, const std::vector<Idx>& family) const;
  std::unordered_map<std::string, Idx> obj_lookup, mor_lookup;
};
FunUnderline fun_underline(const TCat& c, const TCat& d, std::size_t budget = kDefaultBudget);

/// The currying comparison Fun(C, Fun(D, E)) -> Fun(C × D, E) induced by
/// evaluation, with its fiberwise equivalence report, plus the global
/// comparison on T-functor categories.
struct CurryComparison {
  FunUnderline inner;        // fun_underline(d, e)
  FunUnderline lhs;          // fun_underline(c, inner)
  TCatProduct cd;            // c × d
  FunUnderline rhs;          // fun_underline(c × d, e)
  TFunctor comparison;
  TEquivalenceReport fiberwise;
  EnumeratedFunCat global_lhs, global_rhs;  // fun_T versions
  Functor global_comparison;
  EquivalenceReport global_report;
};
CurryComparison curry_compare(const TCat& c, const TCat& d, const TCat& e,
                              std::size_t budget = kDefaultBudget);

/// Restriction along a T-functor: the induced functor
/// fun_T(target, e) -> fun_T(source, e) by precomposition, with its
/// equivalence report (an equivalence whenever the T-functor is one).
struct FunTRestriction {
  EnumeratedFunCat from;  // fun_T(f.target, e)
  EnumeratedFunCat to;    // fun_T(f.source, e)
  Functor induced;
  EquivalenceReport report;
};
FunTRestriction fun_T_restrict(const TFunctor& f, const TCat& e,
                               std::size_t budget = kDefaultBudget);

/// The category of cocartesian sections (T-functors from the terminal
/// T-space) and, when the base has an initial object, the evaluation
/// equivalence onto that fiber.
struct SectionsResult {
  EnumeratedFunCat sections;
  Idx initial_base = kNone;
  Fiber initial_fiber;          // valid when initial_base != kNone
  Functor evaluation;           // sections.cat -> initial_fiber.cat
  EquivalenceReport report;
};
SectionsResult cocartesian_sections(const TCat& c, std::size_t budget = kDefaultBudget);

}  // namespace parcat
