#include "parcat/core.hpp"

#include <algorithm>
#include <numeric>

namespace parcat {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_input: return "InvalidInput";
    case Errc::missing_composite: return "MissingComposite";
    case Errc::non_associative: return "NonAssociative";
    case Errc::bad_identity: return "BadIdentity";
    case Errc::target_mismatch: return "TargetMismatch";
    case Errc::size_budget_exceeded: return "SizeBudgetExceeded";
    case Errc::not_opfibration: return "NotOpfibration";
    case Errc::not_cartesian_fibration: return "NotCartesianFibration";
    case Errc::unknown_object: return "UnknownObject";
    case Errc::not_a_subcategory: return "NotASubcategory";
    case Errc::not_orbital: return "NotOrbital";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::bound_too_small: return "BoundTooSmall";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

std::string pad_index(std::size_t i, std::size_t total) {
  std::size_t width = 1;
  for (std::size_t t = total; t > 10; t /= 10) ++width;
  std::string s = std::to_string(i);
  if (s.size() < width) s.insert(s.begin(), width - s.size(), '0');
  return s;
}

// ---------------------------------------------------------------------------
// FinCat

Idx FinCat::object_index(std::string_view id) const {
  auto it = obj_lookup_.find(std::string(id));
  return it == obj_lookup_.end() ? kNone : it->second;
}

Idx FinCat::morphism_index(std::string_view id) const {
  auto it = mor_lookup_.find(std::string(id));
  return it == mor_lookup_.end() ? kNone : it->second;
}

std::span<const Idx> FinCat::out(Idx o) const {
  return {out_data_.data() + out_off_[o], out_data_.data() + out_off_[o + 1]};
}

std::span<const Idx> FinCat::in(Idx o) const {
  return {in_data_.data() + in_off_[o], in_data_.data() + in_off_[o + 1]};
}

std::span<const Idx> FinCat::hom(Idx a, Idx b) const {
  const std::size_t k = static_cast<std::size_t>(a) * object_count() + b;
  return {hom_data_.data() + hom_off_[k], hom_data_.data() + hom_off_[k + 1]};
}

void FinCat::index_structure() {
  const std::size_t o = object_count();
  const std::size_t m = morphism_count();

  obj_lookup_.clear();
  mor_lookup_.clear();
  obj_lookup_.reserve(o);
  mor_lookup_.reserve(m);
  for (Idx i = 0; i < o; ++i) {
    if (!obj_lookup_.emplace(obj_ids_[i], i).second)
      fail(Errc::invalid_input, "duplicate object id '" + obj_ids_[i] + "'");
  }
  for (Idx i = 0; i < m; ++i) {
    if (!mor_lookup_.emplace(mor_ids_[i], i).second)
      fail(Errc::invalid_input, "duplicate morphism id '" + mor_ids_[i] + "'");
  }

  out_off_.assign(o + 1, 0);
  in_off_.assign(o + 1, 0);
  for (Idx i = 0; i < m; ++i) {
    ++out_off_[src_[i] + 1];
    ++in_off_[dst_[i] + 1];
  }
  std::partial_sum(out_off_.begin(), out_off_.end(), out_off_.begin());
  std::partial_sum(in_off_.begin(), in_off_.end(), in_off_.begin());
  out_data_.resize(m);
  in_data_.resize(m);
  {
    std::vector<Idx> oc(out_off_.begin(), out_off_.end() - 1);
    std::vector<Idx> ic(in_off_.begin(), in_off_.end() - 1);
    for (Idx i = 0; i < m; ++i) {
      out_data_[oc[src_[i]]++] = i;
      in_data_[ic[dst_[i]]++] = i;
    }
  }
  out_rank_.resize(m);
  for (Idx ob = 0; ob < o; ++ob) {
    Idx r = 0;
    for (Idx mi : out(ob)) out_rank_[mi] = r++;
  }

  // hom CSR: morphisms sorted by (src, dst, index).
  if (o > 0 && static_cast<std::size_t>(o) * o > (std::size_t{1} << 26))
    fail(Errc::size_budget_exceeded, "category too large to index (" + std::to_string(o) + " objects)");
  hom_off_.assign(o * o + 1, 0);
  for (Idx i = 0; i < m; ++i) ++hom_off_[static_cast<std::size_t>(src_[i]) * o + dst_[i] + 1];
  std::partial_sum(hom_off_.begin(), hom_off_.end(), hom_off_.begin());
  hom_data_.resize(m);
  {
    std::vector<Idx> hc(hom_off_.begin(), hom_off_.end() - 1);
    for (Idx ob = 0; ob < o; ++ob)
      for (Idx mi : out(ob)) hom_data_[hc[static_cast<std::size_t>(ob) * o + dst_[mi]]++] = mi;
  }
}

void FinCat::compute_inverses() {
  const std::size_t m = morphism_count();
  inverse_.assign(m, kNone);
  for (Idx f = 0; f < m; ++f) {
    if (inverse_[f] != kNone) continue;
    const Idx a = src_[f], b = dst_[f];
    for (Idx g : hom(b, a)) {
      if (compose(g, f) == ident_[a] && compose(f, g) == ident_[b]) {
        inverse_[f] = g;
        inverse_[g] = f;
        break;
      }
    }
  }
}

bool FinCat::objects_isomorphic(Idx a, Idx b) const {
  if (a == b) return true;
  for (Idx f : hom(a, b))
    if (is_iso(f)) return true;
  return false;
}

std::vector<std::vector<Idx>> FinCat::iso_classes() const {
  const std::size_t o = object_count();
  std::vector<Idx> rep(o, kNone);
  std::vector<std::vector<Idx>> classes;
  for (Idx a = 0; a < o; ++a) {
    if (rep[a] != kNone) continue;
    classes.emplace_back();
    auto& cls = classes.back();
    cls.push_back(a);
    rep[a] = a;
    for (Idx b = a + 1; b < o; ++b) {
      if (rep[b] == kNone && objects_isomorphic(a, b)) {
        rep[b] = a;
        cls.push_back(b);
      }
    }
  }
  return classes;
}

Idx FinCat::find_initial() const {
  for (Idx a = 0; a < object_count(); ++a) {
    bool ok = true;
    for (Idx b = 0; b < object_count() && ok; ++b) ok = hom(a, b).size() == 1;
    if (ok) return a;
  }
  return kNone;
}

Idx FinCat::find_terminal() const {
  for (Idx b = 0; b < object_count(); ++b) {
    bool ok = true;
    for (Idx a = 0; a < object_count() && ok; ++a) ok = hom(a, b).size() == 1;
    if (ok) return b;
  }
  return kNone;
}

bool FinCat::equals(const FinCat& other) const {
  return obj_ids_ == other.obj_ids_ && mor_ids_ == other.mor_ids_ && src_ == other.src_ &&
         dst_ == other.dst_ && ident_ == other.ident_ && comp_data_ == other.comp_data_;
}

void FinCat::validate() const {
  const std::size_t o = object_count();
  const std::size_t m = morphism_count();
  if (ident_.size() != o) fail(Errc::bad_identity, "identity table has the wrong size");
  for (Idx ob = 0; ob < o; ++ob) {
    const Idx e = ident_[ob];
    if (e == kNone) fail(Errc::bad_identity, "object '" + obj_ids_[ob] + "' has no identity");
    if (src_[e] != ob || dst_[e] != ob)
      fail(Errc::bad_identity, "identity of '" + obj_ids_[ob] + "' has wrong endpoints");
  }
  // Closure and units.
  for (Idx f = 0; f < m; ++f) {
    for (Idx g : out(dst_[f])) {
      const Idx gf = compose(g, f);
      if (gf == kNone)
        fail(Errc::missing_composite,
             "no composite for (" + mor_ids_[g] + ", " + mor_ids_[f] + ")");
      if (gf >= m || src_[gf] != src_[f] || dst_[gf] != dst_[g])
        fail(Errc::missing_composite, "composite of (" + mor_ids_[g] + ", " + mor_ids_[f] +
                                          ") has wrong endpoints");
    }
  }
  for (Idx f = 0; f < m; ++f) {
    if (compose(ident_[dst_[f]], f) != f || compose(f, ident_[src_[f]]) != f)
      fail(Errc::bad_identity, "unit law fails at '" + mor_ids_[f] + "'");
  }
  // Associativity over all composable triples.
  for (Idx f = 0; f < m; ++f) {
    for (Idx g : out(dst_[f])) {
      const Idx gf = compose(g, f);
      for (Idx h : out(dst_[g])) {
        if (compose(h, gf) != compose(compose(h, g), f))
          fail(Errc::non_associative, "associativity fails on (" + mor_ids_[h] + ", " +
                                          mor_ids_[g] + ", " + mor_ids_[f] + ")");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// CatSkeleton / CatBuilder

Idx CatSkeleton::object_index(std::string_view id) const { return cat_.object_index(id); }
Idx CatSkeleton::morphism_index(std::string_view id) const { return cat_.morphism_index(id); }

FinCat CatSkeleton::complete(const std::function<Idx(const FinCat&, Idx, Idx)>& compose) && {
  FinCat c = std::move(cat_);
  const std::size_t m = c.morphism_count();
  c.comp_off_.assign(m + 1, 0);
  for (Idx f = 0; f < m; ++f) c.comp_off_[f + 1] = c.comp_off_[f] + static_cast<Idx>(c.out(c.dst_[f]).size());
  c.comp_data_.assign(c.comp_off_[m], kNone);
  for (Idx f = 0; f < m; ++f) {
    Idx k = c.comp_off_[f];
    for (Idx g : c.out(c.dst_[f])) {
      Idx gf;
      // Unit laws are filled in automatically.
      if (c.ident_[c.src_[g]] == g) {
        gf = f;
      } else if (c.ident_[c.src_[f]] == f) {
        gf = g;
      } else {
        gf = compose(c, g, f);
      }
      if (gf == kNone)
        fail(Errc::missing_composite,
             "no composite for (" + c.mor_ids_[g] + ", " + c.mor_ids_[f] + ")");
      c.comp_data_[k++] = gf;
    }
  }
  c.validate();
  c.compute_inverses();
  return c;
}

CatBuilder& CatBuilder::add_object(std::string id) {
  objects_.push_back(std::move(id));
  return *this;
}

CatBuilder& CatBuilder::add_morphism(std::string id, std::string src, std::string dst) {
  morphisms_.push_back({std::move(id), std::move(src), std::move(dst)});
  return *this;
}

CatBuilder& CatBuilder::set_identity(const std::string& obj, const std::string& mor) {
  identities_.emplace_back(obj, mor);
  return *this;
}

CatBuilder& CatBuilder::add_object_with_identity(const std::string& obj_id,
                                                 const std::string& ident_id) {
  add_object(obj_id);
  add_morphism(ident_id, obj_id, obj_id);
  set_identity(obj_id, ident_id);
  return *this;
}

CatSkeleton CatBuilder::freeze() && {
  CatSkeleton sk;
  FinCat& c = sk.cat_;
  c.obj_ids_ = std::move(objects_);
  std::sort(c.obj_ids_.begin(), c.obj_ids_.end());

  std::sort(morphisms_.begin(), morphisms_.end(),
            [](const MorDecl& a, const MorDecl& b) { return a.id < b.id; });
  c.mor_ids_.reserve(morphisms_.size());
  for (auto& md : morphisms_) c.mor_ids_.push_back(md.id);

  // Resolve endpoints after sorting.
  std::unordered_map<std::string, Idx> obj_at;
  for (Idx i = 0; i < c.obj_ids_.size(); ++i) {
    if (!obj_at.emplace(c.obj_ids_[i], i).second)
      fail(Errc::invalid_input, "duplicate object id '" + c.obj_ids_[i] + "'");
  }
  c.src_.reserve(morphisms_.size());
  c.dst_.reserve(morphisms_.size());
  for (auto& md : morphisms_) {
    auto s = obj_at.find(md.src), d = obj_at.find(md.dst);
    if (s == obj_at.end() || d == obj_at.end())
      fail(Errc::invalid_input, "morphism '" + md.id + "' references unknown object");
    c.src_.push_back(s->second);
    c.dst_.push_back(d->second);
  }
  c.index_structure();

  c.ident_.assign(c.obj_ids_.size(), kNone);
  for (auto& [ob, mo] : identities_) {
    const Idx o = c.object_index(ob);
    const Idx m = c.morphism_index(mo);
    if (o == kNone) fail(Errc::invalid_input, "identity names unknown object '" + ob + "'");
    if (m == kNone) fail(Errc::invalid_input, "identity names unknown morphism '" + mo + "'");
    if (c.ident_[o] != kNone && c.ident_[o] != m)
      fail(Errc::bad_identity, "conflicting identities for '" + ob + "'");
    c.ident_[o] = m;
  }
  return sk;
}

FinCat CatBuilder::build_with_triples(const std::vector<std::array<std::string, 3>>& triples) && {
  CatSkeleton sk = std::move(*this).freeze();
  const std::size_t m = sk.morphism_count();
  std::vector<Idx> table(m * m, kNone);
  for (const auto& t : triples) {
    const Idx g = sk.morphism_index(t[0]);
    const Idx f = sk.morphism_index(t[1]);
    const Idx gf = sk.morphism_index(t[2]);
    if (g == kNone || f == kNone || gf == kNone)
      fail(Errc::invalid_input,
           "composition triple (" + t[0] + ", " + t[1] + ", " + t[2] + ") names unknown morphism");
    if (sk.dst(f) != sk.src(g))
      fail(Errc::missing_composite,
           "triple (" + t[0] + ", " + t[1] + ", " + t[2] + ") is not composable");
    if ((sk.identity(sk.src(g)) == g && gf != f) || (sk.identity(sk.src(f)) == f && gf != g))
      fail(Errc::bad_identity, "triple (" + t[0] + ", " + t[1] + ", " + t[2] +
                                   ") contradicts a unit law");
    table[static_cast<std::size_t>(g) * m + f] = gf;
  }
  return std::move(sk).complete(
      [&](const FinCat&, Idx g, Idx f) -> Idx { return table[static_cast<std::size_t>(g) * m + f]; });
}

// ---------------------------------------------------------------------------
// Functor

void Functor::validate() const {
  if (!source || !target) fail(Errc::invalid_input, "functor missing source or target");
  const FinCat& s = *source;
  const FinCat& t = *target;
  if (obj_map.size() != s.object_count() || mor_map.size() != s.morphism_count())
    fail(Errc::validation_error, "functor assignment tables have the wrong size");
  for (Idx o = 0; o < s.object_count(); ++o)
    if (obj_map[o] >= t.object_count())
      fail(Errc::validation_error, "functor maps object out of range");
  for (Idx m = 0; m < s.morphism_count(); ++m) {
    const Idx fm = mor_map[m];
    if (fm >= t.morphism_count()) fail(Errc::validation_error, "functor maps morphism out of range");
    if (t.src(fm) != obj_map[s.src(m)] || t.dst(fm) != obj_map[s.dst(m)])
      fail(Errc::validation_error,
           "functor breaks endpoints at '" + s.morphism_id(m) + "'");
  }
  for (Idx o = 0; o < s.object_count(); ++o)
    if (mor_map[s.identity(o)] != t.identity(obj_map[o]))
      fail(Errc::validation_error, "functor breaks identity at '" + s.object_id(o) + "'");
  for (Idx f = 0; f < s.morphism_count(); ++f) {
    for (Idx g : s.out(s.dst(f))) {
      if (mor_map[s.compose(g, f)] != t.compose(mor_map[g], mor_map[f]))
        fail(Errc::validation_error, "functor breaks composition on (" + s.morphism_id(g) + ", " +
                                         s.morphism_id(f) + ")");
    }
  }
}

bool Functor::equals(const Functor& other) const {
  return source->equals(*other.source) && target->equals(*other.target) &&
         obj_map == other.obj_map && mor_map == other.mor_map;
}

bool Functor::is_bijective() const {
  if (obj_map.size() != target->object_count() || mor_map.size() != target->morphism_count())
    return false;
  std::vector<char> seen_o(target->object_count(), 0), seen_m(target->morphism_count(), 0);
  for (Idx o : obj_map) {
    if (seen_o[o]) return false;
    seen_o[o] = 1;
  }
  for (Idx m : mor_map) {
    if (seen_m[m]) return false;
    seen_m[m] = 1;
  }
  return true;
}

Functor identity_functor(CatPtr c) {
  Functor f;
  f.source = c;
  f.target = c;
  f.obj_map.resize(c->object_count());
  f.mor_map.resize(c->morphism_count());
  std::iota(f.obj_map.begin(), f.obj_map.end(), 0);
  std::iota(f.mor_map.begin(), f.mor_map.end(), 0);
  return f;
}

Functor compose(const Functor& g, const Functor& f) {
  if (!f.target->equals(*g.source))
    fail(Errc::target_mismatch, "functor composition: middle categories differ");
  Functor r;
  r.source = f.source;
  r.target = g.target;
  r.obj_map.reserve(f.obj_map.size());
  r.mor_map.reserve(f.mor_map.size());
  for (Idx o : f.obj_map) r.obj_map.push_back(g.obj_map[o]);
  for (Idx m : f.mor_map) r.mor_map.push_back(g.mor_map[m]);
  return r;
}

// ---------------------------------------------------------------------------
// NatTrans

void NatTrans::validate() const {
  if (!source.source->equals(*target.source) || !source.target->equals(*target.target))
    fail(Errc::validation_error, "natural transformation between non-parallel functors");
  const FinCat& s = *source.source;
  const FinCat& t = *source.target;
  if (components.size() != s.object_count())
    fail(Errc::validation_error, "component family has the wrong size");
  for (Idx o = 0; o < s.object_count(); ++o) {
    const Idx c = components[o];
    if (c >= t.morphism_count() || t.src(c) != source.obj_map[o] || t.dst(c) != target.obj_map[o])
      fail(Errc::validation_error, "component at '" + s.object_id(o) + "' has wrong endpoints");
  }
  for (Idx m = 0; m < s.morphism_count(); ++m) {
    const Idx a = s.src(m), b = s.dst(m);
    if (t.compose(components[b], source.mor_map[m]) != t.compose(target.mor_map[m], components[a]))
      fail(Errc::validation_error, "naturality fails at '" + s.morphism_id(m) + "'");
  }
}

bool NatTrans::is_isomorphism() const {
  const FinCat& t = *source.target;
  for (Idx c : components)
    if (!t.is_iso(c)) return false;
  return true;
}

NatTrans identity_nat(const Functor& f) {
  NatTrans n;
  n.source = f;
  n.target = f;
  n.components.reserve(f.obj_map.size());
  for (Idx o : f.obj_map) n.components.push_back(f.target->identity(o));
  return n;
}

NatTrans compose(const NatTrans& g, const NatTrans& f) {
  NatTrans r;
  r.source = f.source;
  r.target = g.target;
  const FinCat& t = *f.source.target;
  r.components.reserve(f.components.size());
  for (Idx o = 0; o < f.components.size(); ++o)
    r.components.push_back(t.compose(g.components[o], f.components[o]));
  return r;
}

std::vector<Idx> hom_over(const FinCat& cat, const Functor& p, Idx a, Idx b, Idx base_mor) {
  std::vector<Idx> r;
  for (Idx m : cat.hom(a, b))
    if (p.mor_map[m] == base_mor) r.push_back(m);
  return r;
}

// ---------------------------------------------------------------------------
// Full subcategory

SubCat full_subcategory(CatPtr ambient, const std::vector<Idx>& objects) {
  const FinCat& c = *ambient;
  std::vector<char> keep(c.object_count(), 0);
  for (Idx o : objects) keep[o] = 1;

  CatBuilder b;
  for (Idx o = 0; o < c.object_count(); ++o)
    if (keep[o]) b.add_object(c.object_id(o));
  std::vector<Idx> mors;
  for (Idx m = 0; m < c.morphism_count(); ++m) {
    if (keep[c.src(m)] && keep[c.dst(m)]) {
      mors.push_back(m);
      b.add_morphism(c.morphism_id(m), c.object_id(c.src(m)), c.object_id(c.dst(m)));
    }
  }
  for (Idx o = 0; o < c.object_count(); ++o)
    if (keep[o]) b.set_identity(c.object_id(o), c.morphism_id(c.identity(o)));

  CatSkeleton sk = std::move(b).freeze();
  std::vector<Idx> mor_in(sk.morphism_count());
  std::vector<Idx> ambient_to_sub(c.morphism_count(), kNone);
  for (Idx m : mors) {
    const Idx sm = sk.morphism_index(c.morphism_id(m));
    mor_in[sm] = m;
    ambient_to_sub[m] = sm;
  }
  std::vector<Idx> obj_in(sk.object_count());
  for (Idx o = 0; o < c.object_count(); ++o)
    if (keep[o]) obj_in[sk.object_index(c.object_id(o))] = o;

  auto cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat&, Idx g, Idx f) -> Idx {
    // A full subcategory is closed under composition by construction.
    return ambient_to_sub[c.compose(mor_in[g], mor_in[f])];
  }));

  SubCat sub;
  sub.cat = cat;
  sub.obj_in_ambient = std::move(obj_in);
  sub.mor_in_ambient = std::move(mor_in);
  sub.inclusion = Functor{cat, ambient, sub.obj_in_ambient, sub.mor_in_ambient};
  return sub;
}

}  // namespace parcat
