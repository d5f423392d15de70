#pragma once

#include "parcat/orbits.hpp"

namespace parcat {

/// Bounded demo instance: the tower F_p ⊆ F_{p^n} with vector spaces of
/// dimension at most d over the intermediate fields.
struct GaloisConfig {
  int p = 2;
  int n = 2;
  int d = 1;
  std::size_t budget = 200000;  // cap on the total morphism count
};

/// Arithmetic of F_{p^n} with its subfield lattice; elements are indexed
/// 0..p^n-1 (0 is zero, 1 is one).
struct FiniteField {
  int p, n;
  std::vector<std::vector<Idx>> add, mul;
  std::vector<Idx> frob;  // x -> x^p
  Idx apply_frob(Idx x, int times) const;
  bool in_subfield(Idx x, int m) const;  // fixed by frob^m
};
FiniteField finite_field(int p, int n);

/// The category of pairs (L, X): an intermediate field F_{p^m} and an
/// L-vector space of dimension <= d, with semilinear maps, presented as a
/// verified opfibration over the opposite orbit category of the Galois
/// group.
struct GaloisVect {
  TCat tcat;
  OrbitCategory orbit;  // of the cyclic Galois group
  FiniteField field;
  std::vector<std::pair<int, int>> obj_data;  // per object: (subfield degree m, dimension k)
  // per morphism: (frobenius power j, row-major matrix over the target field)
  std::vector<std::pair<int, std::vector<Idx>>> mor_data;
};
GaloisVect galois_vect(const GaloisConfig& cfg);

}  // namespace parcat
