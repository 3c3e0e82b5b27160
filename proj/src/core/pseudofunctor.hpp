#pragma once

// Category-valued diagrams with coherence data, and their pseudo-limits.
//
// A PseudoFunctor sends index objects to categories and index morphisms to
// functors, but composition is only respected up to chosen natural
// isomorphisms (the compositors).  That slack is not optional for us: the
// transport functors this toolkit builds come from chosen lifts, and chosen
// lifts compose strictly only by accident.  All coherence laws are checked by
// exhaustive scan at construction scale.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "core/fincat.hpp"

namespace patkit {

struct PseudoFunctor {
  CatPtr index;
  std::vector<CatPtr> value;    // per index object
  std::vector<Functor> arrow;   // per index morphism: value[src] -> value[tgt]

  // compositor[(g, f)], for composable pairs whose composite is represented:
  // per object a of value[src(f)], an iso  F(g)(F(f)(a)) -> F(g∘f)(a).
  std::map<std::pair<Mor, Mor>, std::vector<Mor>> compositor;

  // unitor[x]: per object a of value[x], an iso  F(id_x)(a) -> a.
  std::vector<std::vector<Mor>> unitor;

  // Exhaustive checks: functor endpoints, naturality and invertibility of
  // all compositors/unitors, the unit laws relating them, and associativity
  // coherence on every composable triple that stays in the fragment.
  void validate(const Limits& lim = {}) const;
};

// Promotes strictly functorial data (F(g)∘F(f) literally equals F(g∘f)) by
// filling identity compositors and unitors.  Throws if the data is not
// strict.
PseudoFunctor strict_pseudofunctor(const CatPtr& index, std::vector<CatPtr> value,
                                   std::vector<Functor> arrow);

// The pseudo-limit: objects are families of objects together with coherence
// isomorphisms over every index morphism (unit components forced by the
// unitors, cocycle condition over every represented composite); morphisms are
// families of morphisms commuting with the coherence isos.  Over a discrete
// index this is the product category.
struct PseudoLimitCat {
  CatPtr cat;

  // Per limit object: the chosen object at each index object, and the glue
  // iso over each index morphism.
  std::vector<std::vector<Obj>> object_choice;
  std::vector<std::vector<Mor>> object_glue;   // indexed by index morphism

  // Per limit morphism: the component at each index object.
  std::vector<std::vector<Mor>> morphism_parts;

  std::optional<Obj> find_object(const std::vector<Obj>& choice,
                                 const std::vector<Mor>& glue) const;
  std::optional<Mor> find_morphism(Obj from, Obj to, const std::vector<Mor>& parts) const;

  Functor projection(const PseudoFunctor& d, Obj index_object) const;
};

PseudoLimitCat pseudo_limit_cat(const PseudoFunctor& d, const Limits& lim = {});

}  // namespace patkit
