#pragma once

// Weak-contractibility and coinitiality verdicts.
//
// Deciding whether a finite category has weakly contractible nerve is not
// possible in general, so the pipeline is a ladder of sound partial methods:
// emptiness/disconnection refute immediately; an initial or terminal object
// certifies; posets get a beat-point core reduction; everything else goes
// through the order complex — integer reduced homology via Smith normal form,
// then an edge-path fundamental-group presentation simplified with a bounded
// budget.  Categories whose nerve is infinite-dimensional (directed cycles of
// non-identity morphisms) still admit a sound refutation through first
// homology of the classifying space; beyond that they are Unknown.

#include <vector>

#include "core/fincat.hpp"

namespace patkit {

// Nondegenerate nerve up to a dimension cap: an n-simplex is a chain of n
// composable non-identity morphisms.  Only meaningful when the category has
// no directed cycle of non-identity morphisms (checked by the caller); then
// every face of a chain is again a chain and the complex is face-closed.
struct OrderComplex {
  CatPtr cat;  // retained so boundary maps can compose inner faces
  int vertex_count = 0;
  // chains[k] holds the chains of length k+1 — the (k+1)-dimensional
  // simplices.  Vertices are the dimension-0 layer and live in vertex_count.
  std::vector<std::vector<std::vector<Mor>>> chains;
  int dimension_cap = 8;
  bool capped = false;  // true when some chain exceeded the cap
};

OrderComplex order_complex(const CatPtr& c, int dim_cap);
long long euler_characteristic(const OrderComplex& oc);

// Reduced integer homology of the order complex, one entry per dimension
// 0..dim: free rank and nontrivial torsion divisors.
struct HomologyReport {
  std::vector<int> betti;
  std::vector<std::vector<long long>> torsion;
  bool trivial() const;
  std::string describe() const;  // "" if trivial, otherwise the first nonzero group
};

HomologyReport reduced_homology(const OrderComplex& oc);

bool is_poset(const CatPtr& c);

// Beat-point reduction for posets: repeatedly discard points whose strict
// down-set has a maximum or strict up-set has a minimum.  Returns the
// surviving parent-object indices (the core).
std::vector<Obj> beat_point_core(const CatPtr& c);

// The individual methods, exposed so they can be cross-validated.
Verdict poset_core_verdict(const CatPtr& c, const Limits& lim = {});
Verdict nerve_verdict(const CatPtr& c, const Limits& lim = {});

// The full ladder.
Verdict contractibility_verdict(const CatPtr& c, const Limits& lim = {});

// Comma-fiber criterion: F is coinitial iff C ×_D D_{/d} is weakly
// contractible for every d; cofinal is the dual (fibers under d).
Verdict is_coinitial(const Functor& f, const Limits& lim = {});
Verdict is_cofinal(const Functor& f, const Limits& lim = {});

}  // namespace patkit
