#include "parcat/galois.hpp"

#include <algorithm>

namespace parcat {

namespace {

// Polynomials over F_p encoded as base-p digit vectors.
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  // m monic of degree n
  const int n = static_cast<int>(m.size()) - 1;
  for (int d = static_cast<int>(a.size()) - 1; d >= n; --d) {
    const int c = a[d];
    if (c == 0) continue;
    for (int i = 0; i <= n; ++i) {
      int& v = a[d - n + i];
      v = ((v - c * m[i]) % p + p * p) % p;
    }
  }
  a.resize(n);
  return a;
}

std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

int encode(const std::vector<int>& digits, int p) {
  int v = 0;
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) v = v * p + digits[i];
  return v;
}

std::vector<int> decode(int v, int p, int n) {
  std::vector<int> d(n, 0);
  for (int i = 0; i < n; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

}  // namespace

Idx FiniteField::apply_frob(Idx x, int times) const {
  for (int i = 0; i < times; ++i) x = frob[x];
  return x;
}

bool FiniteField::in_subfield(Idx x, int m) const { return apply_frob(x, m) == x; }

FiniteField finite_field(int p, int n) {
  if (p < 2 || n < 1) fail(Errc::invalid_input, "field parameters out of range");
  // primality of p
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) fail(Errc::invalid_input, "field characteristic must be prime");
  const long q_l = [&] {
    long v = 1;
    for (int i = 0; i < n; ++i) v *= p;
    return v;
  }();
  if (q_l > 4096) fail(Errc::budget_exceeded, "field too large for table arithmetic");
  const int q = static_cast<int>(q_l);

  // Find a monic irreducible polynomial of degree n: no roots is enough for
  // n <= 3; for larger n test divisibility by all lower-degree monics.
  std::vector<int> irr;
  if (n == 1) {
    irr = {0, 1};  // x
  } else {
    const int total = q;  // p^n monic candidates by lower coefficients
    for (int cand = 0; cand < total && irr.empty(); ++cand) {
      std::vector<int> m = decode(cand, p, n);
      m.push_back(1);
      bool reducible = false;
      // trial division by all monic polynomials of degree 1..n/2
      for (int deg = 1; deg <= n / 2 && !reducible; ++deg) {
        int dcount = 1;
        for (int i = 0; i < deg; ++i) dcount *= p;
        for (int dc = 0; dc < dcount && !reducible; ++dc) {
          std::vector<int> div = decode(dc, p, deg);
          div.push_back(1);
          // m mod div == 0?
          std::vector<int> rem = poly_mod(m, div, p);
          reducible = std::all_of(rem.begin(), rem.end(), [](int x) { return x == 0; });
        }
      }
      if (!reducible) irr = m;
    }
    if (irr.empty()) fail(Errc::validation_error, "no irreducible polynomial found");
  }

  FiniteField f;
  f.p = p;
  f.n = n;
  f.add.assign(q, std::vector<Idx>(q));
  f.mul.assign(q, std::vector<Idx>(q));
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      auto da = decode(a, p, n), db = decode(b, p, n);
      std::vector<int> sum(n);
      for (int i = 0; i < n; ++i) sum[i] = (da[i] + db[i]) % p;
      f.add[a][b] = static_cast<Idx>(encode(sum, p));
      auto prod = poly_mod(poly_mul(da, db, p), irr, p);
      f.mul[a][b] = static_cast<Idx>(encode(prod, p));
    }
  }
  f.frob.resize(q);
  for (int a = 0; a < q; ++a) {
    Idx v = static_cast<Idx>(a);
    Idx r = v;
    for (int i = 1; i < p; ++i) r = f.mul[r][v];
    f.frob[a] = r;
  }
  return f;
}

GaloisVect galois_vect(const GaloisConfig& cfg) {
  if (cfg.d < 0) fail(Errc::invalid_input, "dimension bound must be nonnegative");
  GaloisVect r;
  r.field = finite_field(cfg.p, cfg.n);
  const FiniteField& fld = r.field;

  // Galois group: cyclic of order n, generated by frobenius.
  FinGroup gal = cyclic_group(cfg.n);
  r.orbit = orbit_category(gal);
  auto base = opposite(r.orbit.cat);

  // Intermediate fields: F_{p^m} for m | n. Subgroup of the Galois group
  // fixing F_{p^m} is generated by frobenius^m.
  std::vector<int> degrees;
  for (int m = 1; m <= cfg.n; ++m)
    if (cfg.n % m == 0) degrees.push_back(m);
  auto gal_subgroup = [&](int m) {
    std::vector<Idx> h;
    for (int j = 0; j < cfg.n; j += m) h.push_back(static_cast<Idx>(j));
    std::sort(h.begin(), h.end());
    return h;
  };
  auto subfield_elements = [&](int m) {
    std::vector<Idx> e;
    for (Idx x = 0; x < fld.add.size(); ++x)
      if (fld.in_subfield(x, m)) e.push_back(x);
    return e;
  };

  // Budget estimate: total morphism count.
  std::size_t predicted = 0;
  for (int m1 : degrees) {
    for (int m2 : degrees) {
      if (m2 % m1 != 0) continue;
      const std::size_t field2 = subfield_elements(m2).size();
      for (int k1 = 0; k1 <= cfg.d; ++k1)
        for (int k2 = 0; k2 <= cfg.d; ++k2) {
          std::size_t mats = 1;
          for (int i = 0; i < k1 * k2; ++i) mats *= field2;
          predicted += static_cast<std::size_t>(m1) * mats;
        }
    }
  }
  if (predicted > cfg.budget)
    fail(Errc::budget_exceeded, "predicted morphism count " + std::to_string(predicted) +
                                    " exceeds the budget " + std::to_string(cfg.budget));

  auto oid = [&](int m, int k) {
    return "(F" + std::to_string([&] {
             int q = 1;
             for (int i = 0; i < m; ++i) q *= cfg.p;
             return q;
           }()) +
           "^" + std::to_string(k) + ")";
  };
  auto matrix_str = [&](const std::vector<Idx>& mat) {
    std::string s;
    for (Idx v : mat) s += "e" + std::to_string(v) + ".";
    return s;
  };
  auto mid = [&](int m1, int k1, int m2, int k2, int j, const std::vector<Idx>& mat) {
    return "[Fr" + std::to_string(j) + "|" + matrix_str(mat) + "]" + oid(m1, k1) + ">" +
           oid(m2, k2);
  };

  CatBuilder b;
  struct ObjRec {
    int m, k;
  };
  std::vector<ObjRec> objs;
  for (int m : degrees)
    for (int k = 0; k <= cfg.d; ++k) {
      objs.push_back({m, k});
      b.add_object(oid(m, k));
    }
  struct MorRec {
    int m1, k1, m2, k2, j;
    std::vector<Idx> mat;
  };
  std::vector<MorRec> mors;
  auto each_matrix = [&](int m2, int k1, int k2, auto&& visit) {
    const auto elems = subfield_elements(m2);
    std::vector<Idx> mat(static_cast<std::size_t>(k1) * k2, 0);  // entries index elems
    while (true) {
      std::vector<Idx> actual(mat.size());
      for (std::size_t i = 0; i < mat.size(); ++i) actual[i] = elems[mat[i]];
      visit(actual);
      std::size_t i = 0;
      while (i < mat.size() && mat[i] + 1 == elems.size()) mat[i++] = 0;
      if (i == mat.size()) break;
      ++mat[i];
    }
  };
  for (int m1 : degrees) {
    for (int m2 : degrees) {
      if (m2 % m1 != 0) continue;
      for (int k1 = 0; k1 <= cfg.d; ++k1) {
        for (int k2 = 0; k2 <= cfg.d; ++k2) {
          for (int j = 0; j < m1; ++j) {
            each_matrix(m2, k1, k2, [&](const std::vector<Idx>& mat) {
              mors.push_back({m1, k1, m2, k2, j, mat});
              b.add_morphism(mid(m1, k1, m2, k2, j, mat), oid(m1, k1), oid(m2, k2));
            });
          }
        }
      }
    }
  }
  for (const auto& o : objs) {
    std::vector<Idx> eye(static_cast<std::size_t>(o.k) * o.k, 0);
    for (int i = 0; i < o.k; ++i) eye[static_cast<std::size_t>(i) * o.k + i] = 1;
    b.set_identity(oid(o.m, o.k), mid(o.m, o.k, o.m, o.k, 0, eye));
  }

  CatSkeleton sk = std::move(b).freeze();
  r.obj_data.resize(sk.object_count());
  for (const auto& o : objs) {
    r.obj_data[sk.object_index(oid(o.m, o.k))] = {o.m, o.k};
  }
  r.mor_data.resize(sk.morphism_count());
  std::vector<std::array<int, 4>> mor_fields(sk.morphism_count());
  for (const auto& mrec : mors) {
    const Idx i = sk.morphism_index(mid(mrec.m1, mrec.k1, mrec.m2, mrec.k2, mrec.j, mrec.mat));
    r.mor_data[i] = {mrec.j, mrec.mat};
    mor_fields[i] = {mrec.m1, mrec.k1, mrec.m2, mrec.k2};
  }

  auto cat = std::make_shared<FinCat>(std::move(sk).complete([&](const FinCat& cc, Idx g2,
                                                                 Idx g1) {
    const auto& [j1, mat1] = r.mor_data[g1];
    const auto& [j2, mat2] = r.mor_data[g2];
    const auto& f1 = mor_fields[g1];
    const auto& f2 = mor_fields[g2];
    // composite embedding: frobenius powers add (mod the source degree
    // pattern); matrix: mat2 · frob^{j2}(mat1), entries in the final field.
    const int j = (j1 + j2) % f1[0];
    const int k1 = f1[1], k2 = f1[3], k3 = f2[3];
    std::vector<Idx> m1f(mat1.size());
    for (std::size_t i = 0; i < mat1.size(); ++i) m1f[i] = fld.apply_frob(mat1[i], j2);
    // (k3 x k2) * (k2 x k1) -> k3 x k1, row-major
    std::vector<Idx> prod(static_cast<std::size_t>(k3) * k1, 0);
    for (int row = 0; row < k3; ++row)
      for (int col = 0; col < k1; ++col) {
        Idx acc = 0;
        for (int mid2 = 0; mid2 < k2; ++mid2)
          acc = fld.add[acc][fld.mul[mat2[static_cast<std::size_t>(row) * k2 + mid2]]
                                    [m1f[static_cast<std::size_t>(mid2) * k1 + col]]];
        prod[static_cast<std::size_t>(row) * k1 + col] = acc;
      }
    return cc.morphism_index(mid(f1[0], k1, f2[2], k3, j, prod));
  }));

  // Structure functor to the opposite orbit category: (L, X) -> G/Gal(E/L),
  // an embedding frobenius^j maps to the coset frobenius^{-j}·Gal(E/L).
  Functor st{cat, base, {}, {}};
  st.obj_map.resize(cat->object_count());
  for (Idx o = 0; o < cat->object_count(); ++o) {
    const auto [m, k] = r.obj_data[o];
    (void)k;
    st.obj_map[o] = r.orbit.object_of_subgroup(gal_subgroup(m));
  }
  st.mor_map.resize(cat->morphism_count());
  for (Idx mm = 0; mm < cat->morphism_count(); ++mm) {
    const auto [j, mat] = r.mor_data[mm];
    (void)mat;
    const Idx src_t = st.obj_map[cat->src(mm)];  // G/Gal(E/L1)
    const Idx dst_t = st.obj_map[cat->dst(mm)];  // G/Gal(E/L2)
    // in the orbit category: coset frobenius^{-j} Gal(E/L1): dst_t -> src_t
    const Idx rep = static_cast<Idx>((cfg.n - j) % cfg.n);
    const Idx tmor = r.orbit.morphism_of_coset(dst_t, src_t, rep);
    if (tmor == kNone) fail(Errc::validation_error, "galois structure coset missing");
    st.mor_map[mm] = tmor;  // same index in the opposite category
  }
  st.validate();
  r.tcat = make_tcat(std::move(st));
  return r;
}

}  // namespace parcat
