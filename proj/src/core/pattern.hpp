#pragma once

// Algebraic patterns: a finite category carrying an inert/active factorization
// system and a chosen set of elementary objects.  Everything downstream
// (Segal conditions, soundness, extendability, fibrousness, envelopes) is
// phrased in terms of this structure.
//
// Truncation discipline: a base category may represent only a bounded piece
// of an infinite situation, with out-of-bound composites marked by the
// kTruncated sentinel.  Two facts keep the checks here exact rather than
// merely heuristic.  First, a truncated composite exists but is not
// representable, so it can never equal a represented morphism — comparisons
// against in-bound data are decidable inequalities, not unknowns.  Second,
// the composites the algorithms need (inert∘inert, active∘active, an active
// following an inert, and factorizations of maps that are themselves
// represented) stay in bound for every built-in fixture, so the searches
// below either finish exactly or fail loudly with a structural_error.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/fincat.hpp"
#include "core/pseudofunctor.hpp"

namespace patkit {

struct AlgebraicPattern {
  std::string name;
  CatPtr base;
  std::vector<char> inert;       // per morphism
  std::vector<char> active;      // per morphism
  std::vector<char> elementary;  // per object

  // Human-readable description of what was cut off ("" when the base is the
  // whole intended category).  Verdicts that depend on missing data weave
  // this into their wording.
  std::string truncation;

  bool is_inert(Mor m) const { return inert[static_cast<size_t>(m)] != 0; }
  bool is_active(Mor m) const { return active[static_cast<size_t>(m)] != 0; }
  bool is_elementary(Obj x) const { return elementary[static_cast<size_t>(x)] != 0; }
  std::vector<Obj> elementary_objects() const;
};

using PatternPtr = std::shared_ptr<const AlgebraicPattern>;

PatternPtr make_pattern(std::string name, CatPtr base,
                        const std::function<bool(const FinCat&, Mor)>& inert,
                        const std::function<bool(const FinCat&, Mor)>& active,
                        const std::function<bool(const FinCat&, Obj)>& elementary,
                        std::string truncation = "");

// Convenience for small hand-built examples: identities are flagged inert and
// active automatically; everything else is listed by label.
PatternPtr make_pattern_by_labels(std::string name, CatPtr base,
                                  const std::vector<std::string>& inert_labels,
                                  const std::vector<std::string>& active_labels,
                                  const std::vector<std::string>& elementary_labels,
                                  std::string truncation = "");

struct PatternMorphism {
  PatternPtr source, target;
  Functor fun;

  // Functor axioms plus preservation of inert/active flags and elementaries.
  void validate() const;
};

// Axioms: inert and active are wide subcategories closed under (defined)
// composition; every morphism factors as inert-then-active, and its category
// of factorizations is a contractible groupoid.  `report`, when given,
// collects one line per finding.
Verdict validate_pattern(const PatternPtr& p, std::vector<std::string>* report = nullptr,
                         const Limits& lim = {});

// ---------------------------------------------------------------------------
// Factorization

struct Factorization {
  Mor inert_part;
  Obj middle;
  Mor active_part;
};

// Deterministic canonical factorization: the smallest (inert, active) index
// pair under the base ordering.  Distinct calls on equal input return equal
// output.  Requires a validated pattern; throws if no representable
// factorization exists.
Factorization factor(const PatternPtr& p, Mor f);

// Factor alpha∘omega for an active omega out of X and an inert alpha out of
// tgt(omega); this is the transport of alpha along omega.
Factorization active_pushforward(const PatternPtr& p, Mor omega, Mor alpha);

// ---------------------------------------------------------------------------
// Slices that remember their base data

struct MappedSlice {
  CatPtr cat;
  std::vector<Mor> arrow;  // per slice object: its structure morphism in base
  std::vector<Mor> step;   // per slice morphism: the underlying base morphism
};

// All inert maps out of x; connecting maps are inert.
MappedSlice inert_under(const PatternPtr& p, Obj x, const Limits& lim = {});

// Inert maps out of x with elementary target — the full subcategory of
// inert_under on elementary targets.
MappedSlice elementary_slice(const PatternPtr& p, Obj x, const Limits& lim = {});

// All active maps into x; connecting maps are active.
MappedSlice active_slice(const PatternPtr& p, Obj x, const Limits& lim = {});

// The functor alpha ↦ (inert part of alpha∘omega) from the elementary slice
// at tgt(omega) to the inert under-category at src(omega).
Functor pushforward_functor(const PatternPtr& p, Mor omega, const MappedSlice& el_at_target,
                            const MappedSlice& inert_at_source);

// Transport of active slices along an inert phi: E → E', sending an active
// psi into E to the active part of phi∘psi.  `from` and `to` must be the
// active slices at E and E'.
Functor active_transport(const PatternPtr& p, Mor phi, const MappedSlice& from,
                         const MappedSlice& to);

// ---------------------------------------------------------------------------
// Soundness

// The fiber, over a slice object beta of the elementary slice at src(omega),
// of the pushforward functor from the elementary slice at tgt(omega): pairs
// (alpha, comparison map to beta).  Soundness asks each such fiber to be
// weakly contractible.
CatPtr el_beta_fiber(const PatternPtr& p, Mor omega, Mor beta, const Limits& lim = {});

// Fast path when the inert under-category at src(omega) is thin: the fiber
// is then the full subcategory of the elementary slice at tgt(omega) on
// those alpha whose pushforward sits below beta.
CatPtr el_beta_fiber_poset(const PatternPtr& p, Mor omega, Mor beta, const Limits& lim = {});

struct SoundRow {
  Mor omega;
  Mor beta;
  Verdict verdict;
};

Verdict check_sound(const PatternPtr& p, std::vector<SoundRow>* table = nullptr,
                    const Limits& lim = {});

// ---------------------------------------------------------------------------
// Extendability

// The chosen component arrows (active maps into each elementary target, in
// index order) of one object of the elementary limit.
using ActiveFamily = std::vector<Mor>;

// An exemption says: this limit object lies beyond the truncation bound of
// the base (e.g. its total source size exceeds the cap), so its absence from
// the image of the comparison functor is expected rather than a failure.
using FamilyExemption = std::function<bool(Obj at, const ActiveFamily&)>;

struct ExtendRow {
  Obj at;
  Verdict verdict;
};

// For every object X, compare the active slice at X with the limit of the
// active slices over X's elementaries along the transport pseudofunctor.
// Holds iff the canonical comparison functor is an equivalence at every X.
// With an exemption, unmatched limit objects it covers are reported but not
// counted as failures, and the verdict is phrased within the bound.
Verdict check_extendable(const PatternPtr& p, const FamilyExemption& exempt = {},
                         std::vector<ExtendRow>* table = nullptr, const Limits& lim = {});

// ---------------------------------------------------------------------------
// Segal conditions for finite-set-valued functors on the base

// Holds iff for every object X the canonical map from F(X) to the limit of F
// over the elementary slice at X is a bijection.
Verdict check_segal_set(const PatternPtr& p, const FinSetDiagram& F, const Limits& lim = {});

struct FinSetNatTrans {
  std::vector<std::vector<int>> component;  // per object x: a map F(x) -> G(x)

  void validate(const FinSetDiagram& f, const FinSetDiagram& g) const;
};

// Relative Segal condition: at every object the square formed by the two
// elementary-limit comparisons is a pullback of finite sets.
Verdict check_relative_segal_set(const PatternPtr& p, const FinSetDiagram& F,
                                 const FinSetDiagram& G, const FinSetNatTrans& eta,
                                 const Limits& lim = {});

// The analogous pullback square over a single active morphism omega: X ⇝ Y,
// with the limit taken over the elementary slice at Y of the values at the
// transported middles.  Soundness upgrades the elementary squares to these.
Verdict active_segal_square(const PatternPtr& p, const FinSetDiagram& F, const FinSetDiagram& G,
                            const FinSetNatTrans& eta, Mor omega, const Limits& lim = {});

// ---------------------------------------------------------------------------
// Constructions

PatternPtr product_pattern(const PatternPtr& p, const PatternPtr& q, const Limits& lim = {});

// Full subpattern on a subset of objects, flags induced.
PatternPtr restrict_pattern(const PatternPtr& p, const std::vector<Obj>& objects,
                            const Limits& lim = {});

PatternPtr terminal_pattern();

}  // namespace patkit
