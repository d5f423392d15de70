#include "parcat/ops.hpp"

#include <algorithm>

namespace parcat {

namespace {

std::uint64_t pair_key(Idx a, Idx b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

struct QuadKey {
  // (m, n, src, dst) packed for square-shaped morphism lookups.
  std::uint64_t hi, lo;
  bool operator==(const QuadKey& o) const { return hi == o.hi && lo == o.lo; }
};

struct QuadHash {
  std::size_t operator()(const QuadKey& k) const {
    std::uint64_t x = k.hi * 0x9e3779b97f4a7c15ull ^ (k.lo + 0x7f4a7c15u);
    x ^= x >> 31;
    return static_cast<std::size_t>(x * 0xbf58476d1ce4e5b9ull);
  }
};

QuadKey quad(Idx a, Idx b, Idx c, Idx d) {
  return {pair_key(a, b), pair_key(c, d)};
}

using QuadMap = std::unordered_map<QuadKey, Idx, QuadHash>;

}  // namespace

CatPtr opposite(const CatPtr& c) {
  CatBuilder b;
  for (Idx o = 0; o < c->object_count(); ++o) b.add_object(c->object_id(o));
  for (Idx m = 0; m < c->morphism_count(); ++m)
    b.add_morphism(c->morphism_id(m), c->object_id(c->dst(m)), c->object_id(c->src(m)));
  for (Idx o = 0; o < c->object_count(); ++o)
    b.set_identity(c->object_id(o), c->morphism_id(c->identity(o)));
  CatSkeleton sk = std::move(b).freeze();
  // Ids are preserved, so indices agree with the original category.
  return std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat&, Idx g, Idx f) { return c->compose(f, g); }));
}

// ---------------------------------------------------------------------------
// Products

Idx ProductCat::object_of(Idx a, Idx b) const {
  auto it = obj_lookup.find(pair_key(a, b));
  return it == obj_lookup.end() ? kNone : it->second;
}

Idx ProductCat::morphism_of(Idx m, Idx n) const {
  auto it = mor_lookup.find(pair_key(m, n));
  return it == mor_lookup.end() ? kNone : it->second;
}

namespace {

ProductCat build_pair_category(CatPtr c, CatPtr d,
                               const std::function<bool(Idx, Idx)>& obj_keep,
                               const std::function<bool(Idx, Idx)>& mor_keep) {
  ProductCat r;
  CatBuilder b;
  auto oid = [&](Idx x, Idx y) { return "(" + c->object_id(x) + "|" + d->object_id(y) + ")"; };
  auto mid = [&](Idx m, Idx n) { return "(" + c->morphism_id(m) + "|" + d->morphism_id(n) + ")"; };
  for (Idx x = 0; x < c->object_count(); ++x)
    for (Idx y = 0; y < d->object_count(); ++y)
      if (obj_keep(x, y)) b.add_object(oid(x, y));
  for (Idx m = 0; m < c->morphism_count(); ++m)
    for (Idx n = 0; n < d->morphism_count(); ++n)
      if (mor_keep(m, n))
        b.add_morphism(mid(m, n), oid(c->src(m), d->src(n)), oid(c->dst(m), d->dst(n)));
  for (Idx x = 0; x < c->object_count(); ++x)
    for (Idx y = 0; y < d->object_count(); ++y)
      if (obj_keep(x, y)) b.set_identity(oid(x, y), mid(c->identity(x), d->identity(y)));

  CatSkeleton sk = std::move(b).freeze();
  r.obj_pair.resize(sk.object_count());
  r.mor_pair.resize(sk.morphism_count());
  for (Idx x = 0; x < c->object_count(); ++x) {
    for (Idx y = 0; y < d->object_count(); ++y) {
      if (!obj_keep(x, y)) continue;
      const Idx i = sk.object_index(oid(x, y));
      r.obj_pair[i] = {x, y};
      r.obj_lookup.emplace(pair_key(x, y), i);
    }
  }
  for (Idx m = 0; m < c->morphism_count(); ++m) {
    for (Idx n = 0; n < d->morphism_count(); ++n) {
      if (!mor_keep(m, n)) continue;
      const Idx i = sk.morphism_index(mid(m, n));
      r.mor_pair[i] = {m, n};
      r.mor_lookup.emplace(pair_key(m, n), i);
    }
  }
  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat&, Idx g, Idx f) {
        const auto [gm, gn] = r.mor_pair[g];
        const auto [fm, fn] = r.mor_pair[f];
        return r.morphism_of(c->compose(gm, fm), d->compose(gn, fn));
      }));
  r.cat = cat;

  Functor p1{cat, c, {}, {}}, p2{cat, d, {}, {}};
  for (auto [x, y] : r.obj_pair) {
    p1.obj_map.push_back(x);
    p2.obj_map.push_back(y);
  }
  for (auto [m, n] : r.mor_pair) {
    p1.mor_map.push_back(m);
    p2.mor_map.push_back(n);
  }
  r.proj1 = std::move(p1);
  r.proj2 = std::move(p2);
  return r;
}

}  // namespace

ProductCat product(CatPtr c, CatPtr d) {
  return build_pair_category(
      std::move(c), std::move(d), [](Idx, Idx) { return true; },
      [](Idx, Idx) { return true; });
}

ProductCat fiber_product(const Functor& f, const Functor& g) {
  if (!f.target->equals(*g.target))
    fail(Errc::target_mismatch, "fiber product legs have different targets");
  return build_pair_category(
      f.source, g.source, [&](Idx x, Idx y) { return f.obj_map[x] == g.obj_map[y]; },
      [&](Idx m, Idx n) { return f.mor_map[m] == g.mor_map[n]; });
}

// ---------------------------------------------------------------------------
// Lax pullback

bool EdgeMarking::contains(const FinCat& c, Idx m) const {
  switch (kind) {
    case flat: return c.is_identity(m);
    case sharp: return true;
    case given: return edges[m] != 0;
  }
  return false;
}

Idx LaxPullback::object_of(Idx x, Idx y, Idx e) const {
  auto it = obj_lookup.find(std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(e));
  return it == obj_lookup.end() ? kNone : it->second;
}

LaxPullback lax_pullback(const Functor& f, const Functor& g, const EdgeMarking& mark_first,
                         const EdgeMarking& mark_second) {
  if (!f.target->equals(*g.target))
    fail(Errc::target_mismatch, "lax pullback legs have different targets");
  const FinCat& m = *f.source;
  const FinCat& n = *g.source;
  const FinCat& s = *f.target;

  LaxPullback r;
  CatBuilder b;
  auto oid = [&](Idx x, Idx y, Idx e) {
    return "(" + m.object_id(x) + "|" + n.object_id(y) + "|" + s.morphism_id(e) + ")";
  };
  std::vector<std::array<Idx, 3>> objs;
  for (Idx x = 0; x < m.object_count(); ++x)
    for (Idx y = 0; y < n.object_count(); ++y)
      for (Idx e : s.hom(f.obj_map[x], g.obj_map[y])) {
        objs.push_back({x, y, e});
        b.add_object(oid(x, y, e));
      }

  auto mid = [&](Idx mm, Idx nn, const std::array<Idx, 3>& so, const std::array<Idx, 3>& to) {
    return "[" + m.morphism_id(mm) + "|" + n.morphism_id(nn) + "]" + oid(so[0], so[1], so[2]) +
           ">" + oid(to[0], to[1], to[2]);
  };
  // A morphism (x,y,e) -> (x',y',e') is a pair (mm, nn) with e'∘f(mm) = g(nn)∘e.
  auto each_morphism = [&](auto&& visit) {
    for (const auto& so : objs) {
      const auto [x, y, e] = so;
      for (Idx mm : m.out(x)) {
        for (Idx nn : n.out(y)) {
          const Idx lhs = s.compose(g.mor_map[nn], e);
          for (Idx e2 : s.hom(f.obj_map[m.dst(mm)], g.obj_map[n.dst(nn)])) {
            if (s.compose(e2, f.mor_map[mm]) == lhs)
              visit(so, std::array<Idx, 3>{m.dst(mm), n.dst(nn), e2}, mm, nn);
          }
        }
      }
    }
  };
  each_morphism([&](const std::array<Idx, 3>& so, const std::array<Idx, 3>& to, Idx mm, Idx nn) {
    b.add_morphism(mid(mm, nn, so, to), oid(so[0], so[1], so[2]), oid(to[0], to[1], to[2]));
  });
  for (const auto& so : objs)
    b.set_identity(oid(so[0], so[1], so[2]),
                   mid(m.identity(so[0]), n.identity(so[1]), so, so));

  CatSkeleton sk = std::move(b).freeze();
  r.obj_data.resize(sk.object_count());
  for (const auto& o : objs) {
    const Idx i = sk.object_index(oid(o[0], o[1], o[2]));
    r.obj_data[i] = o;
    r.obj_lookup.emplace(
        std::to_string(o[0]) + "," + std::to_string(o[1]) + "," + std::to_string(o[2]), i);
  }
  r.mor_data.resize(sk.morphism_count());
  QuadMap mor_at;  // (mm, nn, src_obj, dst_obj) -> morphism
  each_morphism([&](const std::array<Idx, 3>& so, const std::array<Idx, 3>& to, Idx mm, Idx nn) {
    const Idx i = sk.morphism_index(mid(mm, nn, so, to));
    r.mor_data[i] = {mm, nn};
    mor_at.emplace(quad(mm, nn, r.obj_lookup.at(std::to_string(so[0]) + "," + std::to_string(so[1]) + "," + std::to_string(so[2])),
                        r.obj_lookup.at(std::to_string(to[0]) + "," + std::to_string(to[1]) + "," + std::to_string(to[2]))),
                   i);
  });

  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx gg, Idx ff) {
        const auto [gm, gn] = r.mor_data[gg];
        const auto [fm, fn] = r.mor_data[ff];
        auto it = mor_at.find(quad(m.compose(gm, fm), n.compose(gn, fn), cc.src(ff), cc.dst(gg)));
        return it == mor_at.end() ? kNone : it->second;
      }));
  r.cat = cat;

  Functor p1{cat, f.source, {}, {}}, p2{cat, g.source, {}, {}}, pb{cat, f.target, {}, {}};
  for (const auto& o : r.obj_data) {
    p1.obj_map.push_back(o[0]);
    p2.obj_map.push_back(o[1]);
    pb.obj_map.push_back(s.dst(o[2]));
  }
  for (Idx i = 0; i < cat->morphism_count(); ++i) {
    p1.mor_map.push_back(r.mor_data[i].first);
    p2.mor_map.push_back(r.mor_data[i].second);
    pb.mor_map.push_back(g.mor_map[r.mor_data[i].second]);
  }
  r.to_first = std::move(p1);
  r.to_second = std::move(p2);
  r.to_base = std::move(pb);

  r.marked.assign(cat->morphism_count(), 0);
  for (Idx i = 0; i < cat->morphism_count(); ++i)
    r.marked[i] = mark_first.contains(m, r.mor_data[i].first) &&
                          mark_second.contains(n, r.mor_data[i].second)
                      ? 1
                      : 0;
  return r;
}

// ---------------------------------------------------------------------------

PointedInclusion object_inclusion(CatPtr s, Idx x) {
  if (x >= s->object_count()) fail(Errc::unknown_object, "object index out of range");
  CatBuilder b;
  b.add_object(s->object_id(x));
  b.add_morphism(s->morphism_id(s->identity(x)), s->object_id(x), s->object_id(x));
  b.set_identity(s->object_id(x), s->morphism_id(s->identity(x)));
  auto point = std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat&, Idx, Idx) -> Idx { return 0; }));
  Functor inc{point, s, {x}, {s->identity(x)}};
  return {point, std::move(inc)};
}

LaxPullback slice(CatPtr s, Idx x) {
  auto inc = object_inclusion(s, x);
  return lax_pullback(identity_functor(s), inc.include);
}

LaxPullback coslice(CatPtr s, Idx x) {
  auto inc = object_inclusion(s, x);
  return lax_pullback(inc.include, identity_functor(s));
}

// ---------------------------------------------------------------------------
// Arrow and twisted arrow categories

Idx ArrowCat::object_of(Idx arrow) const {
  return cat->object_index(source_proj.target->morphism_id(arrow));
}

ArrowCat arrow_category(CatPtr c) {
  ArrowCat r;
  CatBuilder b;
  for (Idx m = 0; m < c->morphism_count(); ++m) b.add_object(c->morphism_id(m));

  auto mid = [&](Idx u, Idx v, Idx fo, Idx go) {
    return "[" + c->morphism_id(u) + "|" + c->morphism_id(v) + "]" + c->morphism_id(fo) + ">" +
           c->morphism_id(go);
  };
  // A square (u, v): fo -> go satisfies go∘u = v∘fo.
  auto each_square = [&](auto&& visit) {
    for (Idx fo = 0; fo < c->morphism_count(); ++fo) {
      for (Idx u : c->out(c->src(fo))) {
        for (Idx go : c->out(c->dst(u))) {
          for (Idx v : c->hom(c->dst(fo), c->dst(go))) {
            if (c->compose(go, u) == c->compose(v, fo)) visit(fo, go, u, v);
          }
        }
      }
    }
  };
  each_square([&](Idx fo, Idx go, Idx u, Idx v) {
    b.add_morphism(mid(u, v, fo, go), c->morphism_id(fo), c->morphism_id(go));
  });
  for (Idx m = 0; m < c->morphism_count(); ++m)
    b.set_identity(c->morphism_id(m), mid(c->identity(c->src(m)), c->identity(c->dst(m)), m, m));

  CatSkeleton sk = std::move(b).freeze();
  r.obj_arrow.resize(sk.object_count());
  for (Idx m = 0; m < c->morphism_count(); ++m) r.obj_arrow[sk.object_index(c->morphism_id(m))] = m;
  r.mor_square.resize(sk.morphism_count());
  QuadMap mor_at;
  each_square([&](Idx fo, Idx go, Idx u, Idx v) {
    const Idx i = sk.morphism_index(mid(u, v, fo, go));
    r.mor_square[i] = {u, v};
    mor_at.emplace(quad(u, v, fo, go), i);
  });

  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx g, Idx f) {
        const auto [u2, v2] = r.mor_square[g];
        const auto [u1, v1] = r.mor_square[f];
        auto it = mor_at.find(quad(c->compose(u2, u1), c->compose(v2, v1),
                                   r.obj_arrow[cc.src(f)], r.obj_arrow[cc.dst(g)]));
        return it == mor_at.end() ? kNone : it->second;
      }));
  r.cat = cat;

  Functor sp{cat, c, {}, {}}, tp{cat, c, {}, {}};
  for (Idx a : r.obj_arrow) {
    sp.obj_map.push_back(c->src(a));
    tp.obj_map.push_back(c->dst(a));
  }
  for (auto [u, v] : r.mor_square) {
    sp.mor_map.push_back(u);
    tp.mor_map.push_back(v);
  }
  r.source_proj = std::move(sp);
  r.target_proj = std::move(tp);
  return r;
}

Idx TwistedArrowCat::object_of(Idx arrow) const { return cat->object_index(op->morphism_id(arrow)); }

TwistedArrowCat twisted_arrow(CatPtr c) {
  TwistedArrowCat r;
  CatBuilder b;
  for (Idx m = 0; m < c->morphism_count(); ++m) b.add_object(c->morphism_id(m));

  auto mid = [&](Idx u, Idx v, Idx fo, Idx go) {
    return "[" + c->morphism_id(u) + "|" + c->morphism_id(v) + "]" + c->morphism_id(fo) + ">" +
           c->morphism_id(go);
  };
  // (u: c2 -> a, v: b -> d): (f: a -> b) -> (g: c2 -> d) with g = v∘f∘u.
  auto each_twist = [&](auto&& visit) {
    for (Idx fo = 0; fo < c->morphism_count(); ++fo) {
      for (Idx u : c->in(c->src(fo))) {
        for (Idx v : c->out(c->dst(fo))) {
          visit(fo, c->compose(v, c->compose(fo, u)), u, v);
        }
      }
    }
  };
  each_twist([&](Idx fo, Idx go, Idx u, Idx v) {
    b.add_morphism(mid(u, v, fo, go), c->morphism_id(fo), c->morphism_id(go));
  });
  for (Idx m = 0; m < c->morphism_count(); ++m)
    b.set_identity(c->morphism_id(m), mid(c->identity(c->src(m)), c->identity(c->dst(m)), m, m));

  CatSkeleton sk = std::move(b).freeze();
  r.obj_arrow.resize(sk.object_count());
  for (Idx m = 0; m < c->morphism_count(); ++m) r.obj_arrow[sk.object_index(c->morphism_id(m))] = m;
  r.mor_pair.resize(sk.morphism_count());
  QuadMap mor_at;
  each_twist([&](Idx fo, Idx go, Idx u, Idx v) {
    const Idx i = sk.morphism_index(mid(u, v, fo, go));
    r.mor_pair[i] = {u, v};
    mor_at.emplace(quad(u, v, fo, go), i);
  });

  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx g, Idx f) {
        const auto [u2, v2] = r.mor_pair[g];
        const auto [u1, v1] = r.mor_pair[f];
        // Contravariant twist on the u side.
        auto it = mor_at.find(quad(c->compose(u1, u2), c->compose(v2, v1),
                                   r.obj_arrow[cc.src(f)], r.obj_arrow[cc.dst(g)]));
        return it == mor_at.end() ? kNone : it->second;
      }));
  r.cat = cat;

  r.op = opposite(c);
  r.op_times = product(r.op, c);
  Functor pr{cat, r.op_times.cat, {}, {}};
  for (Idx a : r.obj_arrow) pr.obj_map.push_back(r.op_times.object_of(c->src(a), c->dst(a)));
  for (auto [u, v] : r.mor_pair) pr.mor_map.push_back(r.op_times.morphism_of(u, v));
  r.projection = std::move(pr);
  return r;
}

// ---------------------------------------------------------------------------
// Standard small categories

CatPtr empty_category() {
  CatBuilder b;
  return std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat&, Idx, Idx) -> Idx { return kNone; }));
}

CatPtr point_category() {
  CatBuilder b;
  b.add_object_with_identity("*", "id_*");
  return std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat&, Idx, Idx) -> Idx { return 0; }));
}

CatPtr walking_arrow() {
  CatBuilder b;
  b.add_object_with_identity("0", "id_0");
  b.add_object_with_identity("1", "id_1");
  b.add_morphism("a01", "0", "1");
  return std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat&, Idx, Idx) -> Idx { return kNone; }));
}

CatPtr walking_iso() {
  CatBuilder b;
  b.add_object_with_identity("p", "id_p");
  b.add_object_with_identity("q", "id_q");
  b.add_morphism("u_pq", "p", "q");
  b.add_morphism("u_qp", "q", "p");
  return std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat& cc, Idx, Idx f) -> Idx {
        // The only non-unit composites are u after u-inverse, an identity.
        return cc.identity(cc.src(f));
      }));
}

CatPtr parallel_pair() {
  CatBuilder b;
  b.add_object_with_identity("0", "id_0");
  b.add_object_with_identity("1", "id_1");
  b.add_morphism("a", "0", "1");
  b.add_morphism("b", "0", "1");
  return std::make_shared<FinCat>(
      std::move(b).freeze().complete([](const FinCat&, Idx, Idx) -> Idx { return kNone; }));
}

// ---------------------------------------------------------------------------
// Finite set skeleton

Idx FinSetCat::object_of_card(int k) const { return cat->object_index(std::to_string(k)); }

Idx FinSetCat::morphism_of(Idx src_obj, Idx dst_obj,
                           const std::vector<std::uint8_t>& values) const {
  std::string key = std::to_string(src_obj) + ">" + std::to_string(dst_obj) + ":";
  for (auto v : values) key += static_cast<char>('0' + v);
  auto it = mor_lookup.find(key);
  return it == mor_lookup.end() ? kNone : it->second;
}

FinSetCat finset_skeleton(int n) {
  if (n < 0 || n > 9) fail(Errc::invalid_input, "finset skeleton bound must be in [0, 9]");
  FinSetCat r;
  CatBuilder b;
  for (int k = 0; k <= n; ++k) b.add_object(std::to_string(k));

  auto mor_id = [](int a, int bcard, const std::vector<std::uint8_t>& vals) {
    std::string s = "f" + std::to_string(a) + "to" + std::to_string(bcard) + "_";
    for (auto v : vals) s += static_cast<char>('0' + v);
    return s;
  };
  auto each_map = [&](auto&& visit) {
    for (int a = 0; a <= n; ++a) {
      for (int bc = 0; bc <= n; ++bc) {
        if (a > 0 && bc == 0) continue;  // no maps from nonempty to empty
        std::vector<std::uint8_t> vals(a, 0);
        while (true) {
          visit(a, bc, vals);
          int i = a - 1;
          while (i >= 0 && vals[i] == bc - 1) {
            vals[i] = 0;
            --i;
          }
          if (i < 0) break;
          ++vals[i];
        }
      }
    }
  };
  each_map([&](int a, int bc, const std::vector<std::uint8_t>& vals) {
    b.add_morphism(mor_id(a, bc, vals), std::to_string(a), std::to_string(bc));
  });
  for (int k = 0; k <= n; ++k) {
    std::vector<std::uint8_t> idv(k);
    for (int i = 0; i < k; ++i) idv[i] = static_cast<std::uint8_t>(i);
    b.set_identity(std::to_string(k), mor_id(k, k, idv));
  }
  CatSkeleton sk = std::move(b).freeze();
  r.card.resize(sk.object_count());
  for (int k = 0; k <= n; ++k) r.card[sk.object_index(std::to_string(k))] = k;
  r.map_of.resize(sk.morphism_count());
  each_map([&](int a, int bc, const std::vector<std::uint8_t>& vals) {
    r.map_of[sk.morphism_index(mor_id(a, bc, vals))] = vals;
  });
  for (Idx i = 0; i < sk.morphism_count(); ++i) {
    std::string key = std::to_string(sk.src(i)) + ">" + std::to_string(sk.dst(i)) + ":";
    for (auto v : r.map_of[i]) key += static_cast<char>('0' + v);
    r.mor_lookup.emplace(std::move(key), i);
  }
  auto cat = std::make_shared<FinCat>(
      std::move(sk).complete([&](const FinCat& cc, Idx g, Idx f) {
        const auto& gv = r.map_of[g];
        const auto& fv = r.map_of[f];
        std::vector<std::uint8_t> comp(fv.size());
        for (std::size_t i = 0; i < fv.size(); ++i) comp[i] = gv[fv[i]];
        std::string key = std::to_string(cc.src(f)) + ">" + std::to_string(cc.dst(g)) + ":";
        for (auto v : comp) key += static_cast<char>('0' + v);
        auto it = r.mor_lookup.find(key);
        return it == r.mor_lookup.end() ? kNone : it->second;
      }));
  r.cat = cat;
  return r;
}

}  // namespace parcat
