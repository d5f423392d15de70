#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parcat {

using Idx = std::uint32_t;
inline constexpr Idx kNone = 0xffffffffu;

enum class Errc {
  invalid_input,
  missing_composite,
  non_associative,
  bad_identity,
  target_mismatch,
  size_budget_exceeded,
  not_opfibration,
  not_cartesian_fibration,
  unknown_object,
  not_a_subcategory,
  not_orbital,
  budget_exceeded,
  bound_too_small,
  parse_error,
  validation_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Default cap on partial assignments explored by the functor/transformation
/// enumerators. Exceeding it raises Errc::size_budget_exceeded.
inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// A finite category given by explicit object and morphism lists and a total
/// composition table. Objects and morphisms are ordered lexicographically by
/// id, so every derived construction is reproducible run to run.
///
/// Immutable after construction; cheap to share via shared_ptr.
class FinCat {
 public:
  std::size_t object_count() const { return obj_ids_.size(); }
  std::size_t morphism_count() const { return mor_ids_.size(); }

  const std::string& object_id(Idx o) const { return obj_ids_[o]; }
  const std::string& morphism_id(Idx m) const { return mor_ids_[m]; }
  Idx object_index(std::string_view id) const;
  Idx morphism_index(std::string_view id) const;

  Idx src(Idx m) const { return src_[m]; }
  Idx dst(Idx m) const { return dst_[m]; }
  Idx identity(Idx o) const { return ident_[o]; }
  bool is_identity(Idx m) const { return ident_[src_[m]] == m; }

  /// g after f; requires dst(f) == src(g).
  Idx compose(Idx g, Idx f) const { return comp_data_[comp_off_[f] + out_rank_[g]]; }

  std::span<const Idx> out(Idx o) const;  // morphisms with src == o
  std::span<const Idx> in(Idx o) const;   // morphisms with dst == o
  std::span<const Idx> hom(Idx a, Idx b) const;

  bool is_iso(Idx m) const { return inverse_[m] != kNone; }
  Idx inverse(Idx m) const { return inverse_[m]; }
  bool objects_isomorphic(Idx a, Idx b) const;

  /// Iso classes of objects, each listed in canonical order.
  std::vector<std::vector<Idx>> iso_classes() const;

  /// Index of an initial object, or kNone.
  Idx find_initial() const;
  /// Index of a terminal object, or kNone.
  Idx find_terminal() const;

  bool equals(const FinCat& other) const;

  /// Total number of composable pairs (size of the composition table).
  std::size_t composable_pairs() const { return comp_data_.size(); }

 private:
  friend class CatSkeleton;
  friend class CatBuilder;
  FinCat() = default;
  void index_structure();
  void compute_inverses();
  void validate() const;

  std::vector<std::string> obj_ids_;
  std::vector<std::string> mor_ids_;
  std::vector<Idx> src_, dst_;
  std::vector<Idx> ident_;

  // CSR out/in lists and hom sets.
  std::vector<Idx> out_off_, out_data_;
  std::vector<Idx> in_off_, in_data_;
  std::vector<Idx> hom_off_, hom_data_;

  // comp_data_[comp_off_[f] + out_rank_[g]] = g∘f for dst(f)==src(g).
  std::vector<Idx> comp_off_;
  std::vector<Idx> comp_data_;
  std::vector<Idx> out_rank_;  // rank of m within out(src(m))

  std::vector<Idx> inverse_;

  std::unordered_map<std::string, Idx> obj_lookup_, mor_lookup_;
};

using CatPtr = std::shared_ptr<const FinCat>;

/// Staged construction: add objects/morphisms, freeze to a skeleton (which
/// fixes the canonical order and exposes index lookups), then complete with a
/// composition rule. complete() validates closure, units and associativity.
class CatSkeleton {
 public:
  Idx object_index(std::string_view id) const;
  Idx morphism_index(std::string_view id) const;
  std::size_t object_count() const { return cat_.obj_ids_.size(); }
  std::size_t morphism_count() const { return cat_.mor_ids_.size(); }
  Idx src(Idx m) const { return cat_.src_[m]; }
  Idx dst(Idx m) const { return cat_.dst_[m]; }
  Idx identity(Idx o) const { return cat_.ident_[o]; }
  const std::string& object_id(Idx o) const { return cat_.obj_ids_[o]; }
  const std::string& morphism_id(Idx m) const { return cat_.mor_ids_[m]; }

  /// compose(cat, g, f) is called once per composable pair and must return
  /// the composite's morphism index. `cat` is the category under
  /// construction: ids, endpoints and lookups are usable, compose() is not.
  FinCat complete(const std::function<Idx(const FinCat&, Idx g, Idx f)>& compose) &&;

 private:
  friend class CatBuilder;
  FinCat cat_;
};

class CatBuilder {
 public:
  CatBuilder& add_object(std::string id);
  CatBuilder& add_morphism(std::string id, std::string src, std::string dst);
  /// Marks an existing morphism as the identity of an object.
  CatBuilder& set_identity(const std::string& obj, const std::string& mor);
  /// Adds an object together with a fresh identity morphism.
  CatBuilder& add_object_with_identity(const std::string& obj_id, const std::string& ident_id);

  CatSkeleton freeze() &&;

  /// One-shot build from explicit composite triples (g, f, g∘f); pairs with an
  /// identity factor may be omitted and are filled in from the unit laws.
  FinCat build_with_triples(const std::vector<std::array<std::string, 3>>& triples) &&;

 private:
  struct MorDecl {
    std::string id, src, dst;
  };
  std::vector<std::string> objects_;
  std::vector<MorDecl> morphisms_;
  std::vector<std::pair<std::string, std::string>> identities_;
};

/// A functor given by explicit object/morphism assignments. validate()
/// checks endpoint, identity and composition preservation exhaustively.
struct Functor {
  CatPtr source;
  CatPtr target;
  std::vector<Idx> obj_map;
  std::vector<Idx> mor_map;

  Idx on_obj(Idx o) const { return obj_map[o]; }
  Idx on_mor(Idx m) const { return mor_map[m]; }
  void validate() const;
  bool equals(const Functor& other) const;
  bool is_bijective() const;
};

Functor identity_functor(CatPtr c);
/// g after f (validates that the middle categories agree structurally).
Functor compose(const Functor& g, const Functor& f);

/// A natural transformation between parallel functors; components are indexed
/// by source objects.
struct NatTrans {
  Functor source;
  Functor target;
  std::vector<Idx> components;

  void validate() const;
  bool is_isomorphism() const;
};

NatTrans identity_nat(const Functor& f);

/// Vertical composition (g after f).
NatTrans compose(const NatTrans& g, const NatTrans& f);

/// Morphisms a -> b of `cat` lying over `base_mor` under a functor `p` out of
/// `cat`.
std::vector<Idx> hom_over(const FinCat& cat, const Functor& p, Idx a, Idx b, Idx base_mor);

/// Full subcategory on a set of objects; preserves ids. Also returns object
/// and morphism index maps back into the ambient category.
struct SubCat {
  CatPtr cat;
  std::vector<Idx> obj_in_ambient;  // per sub object
  std::vector<Idx> mor_in_ambient;  // per sub morphism
  Functor inclusion;                // sub -> ambient
};
SubCat full_subcategory(CatPtr ambient, const std::vector<Idx>& objects);

std::string pad_index(std::size_t i, std::size_t total);

}  // namespace parcat
