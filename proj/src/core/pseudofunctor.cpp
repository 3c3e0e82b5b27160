#include "core/pseudofunctor.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace patkit {

void PseudoFunctor::validate(const Limits& lim) const {
  if (!index) throw structural_error("pseudo-functor with null index");
  const FinCat& ix = *index;
  if (static_cast<int>(value.size()) != ix.object_count() ||
      static_cast<int>(arrow.size()) != ix.morphism_count() ||
      static_cast<int>(unitor.size()) != ix.object_count())
    throw structural_error("pseudo-functor table sizes do not match the index");

  for (Mor m = 0; m < ix.morphism_count(); ++m) {
    const Functor& fm = arrow[static_cast<size_t>(m)];
    fm.validate();
    if (!same_category(fm.source, value[static_cast<size_t>(ix.src(m))]) ||
        !same_category(fm.target, value[static_cast<size_t>(ix.tgt(m))]))
      throw structural_error("arrow at " + ix.morphism_label(m) + " has wrong endpoints");
  }

  // Unitors: natural isos F(id_x) => Id.
  for (Obj x = 0; x < ix.object_count(); ++x) {
    NatTrans u{unitor[static_cast<size_t>(x)]};
    u.validate(arrow[static_cast<size_t>(ix.identity(x))],
               identity_functor(value[static_cast<size_t>(x)]), /*require_iso=*/true);
  }

  // Compositors: natural isos F(g)∘F(f) => F(g∘f) for represented composites.
  for (Mor g = 0; g < ix.morphism_count(); ++g) {
    for (Mor f = 0; f < ix.morphism_count(); ++f) {
      if (ix.tgt(f) != ix.src(g)) continue;
      Mor gf = ix.compose(g, f);
      auto it = compositor.find({g, f});
      if (gf == kTruncated) {
        if (it != compositor.end())
          throw structural_error("compositor recorded for a truncated pair");
        continue;
      }
      if (it == compositor.end())
        throw structural_error("missing compositor for (" + ix.morphism_label(g) + ", " +
                               ix.morphism_label(f) + ")");
      NatTrans gamma{it->second};
      gamma.validate(compose_functors(arrow[static_cast<size_t>(g)], arrow[static_cast<size_t>(f)]),
                     arrow[static_cast<size_t>(gf)], /*require_iso=*/true);
    }
  }
  for (const auto& [key, _] : compositor) {
    auto [g, f] = key;
    if (g < 0 || g >= ix.morphism_count() || f < 0 || f >= ix.morphism_count() ||
        ix.tgt(f) != ix.src(g))
      throw structural_error("compositor recorded for a non-composable pair");
  }

  // Unit coherence: γ_{g,id} = F(g)(unitor) and γ_{id,g} = unitor at F(g)(-).
  for (Mor g = 0; g < ix.morphism_count(); ++g) {
    Obj x = ix.src(g), y = ix.tgt(g);
    const FinCat& cx = *value[static_cast<size_t>(x)];
    const Functor& fg = arrow[static_cast<size_t>(g)];
    const auto& right = compositor.at({g, ix.identity(x)});
    for (Obj a = 0; a < cx.object_count(); ++a) {
      Mor expect = fg.on_mor(unitor[static_cast<size_t>(x)][static_cast<size_t>(a)]);
      if (right[static_cast<size_t>(a)] != expect)
        throw structural_error("right unit coherence fails at " + ix.morphism_label(g));
    }
    const auto& left = compositor.at({ix.identity(y), g});
    for (Obj a = 0; a < cx.object_count(); ++a) {
      Mor expect = unitor[static_cast<size_t>(y)][static_cast<size_t>(fg.on_ob(a))];
      if (left[static_cast<size_t>(a)] != expect)
        throw structural_error("left unit coherence fails at " + ix.morphism_label(g));
    }
  }

  // Associativity coherence on composable triples with all composites
  // represented:  γ_{h,g∘f} ∘ F(h)(γ_{g,f}) = γ_{h∘g,f} ∘ γ_{h,g}(F(f)(-)).
  for (Mor h = 0; h < ix.morphism_count(); ++h) {
    for (Mor g = 0; g < ix.morphism_count(); ++g) {
      if (ix.tgt(g) != ix.src(h)) continue;
      Mor hg = ix.compose(h, g);
      if (hg == kTruncated) continue;
      for (Mor f = 0; f < ix.morphism_count(); ++f) {
        if (ix.tgt(f) != ix.src(g)) continue;
        Mor gf = ix.compose(g, f);
        if (gf == kTruncated) continue;
        Mor hgf = ix.compose(h, gf);
        if (hgf == kTruncated) continue;
        const FinCat& cx = *value[static_cast<size_t>(ix.src(f))];
        const FinCat& ctop = *value[static_cast<size_t>(ix.tgt(h))];
        const Functor& fh = arrow[static_cast<size_t>(h)];
        const Functor& ff = arrow[static_cast<size_t>(f)];
        for (Obj a = 0; a < cx.object_count(); ++a) {
          Mor lhs = ctop.compose(
              compositor.at({h, gf})[static_cast<size_t>(a)],
              fh.on_mor(compositor.at({g, f})[static_cast<size_t>(a)]));
          Mor rhs = ctop.compose(
              compositor.at({hg, f})[static_cast<size_t>(a)],
              compositor.at({h, g})[static_cast<size_t>(ff.on_ob(a))]);
          if (lhs < 0 || rhs < 0 || lhs != rhs)
            throw structural_error("associativity coherence fails on (" + ix.morphism_label(h) +
                                   ", " + ix.morphism_label(g) + ", " + ix.morphism_label(f) + ")");
        }
      }
    }
  }
  (void)lim;
}

PseudoFunctor strict_pseudofunctor(const CatPtr& index, std::vector<CatPtr> value,
                                   std::vector<Functor> arrow) {
  PseudoFunctor d;
  d.index = index;
  d.value = std::move(value);
  d.arrow = std::move(arrow);
  const FinCat& ix = *index;
  for (Obj x = 0; x < ix.object_count(); ++x) {
    const Functor& fid = d.arrow[static_cast<size_t>(ix.identity(x))];
    const FinCat& cx = *d.value[static_cast<size_t>(x)];
    std::vector<Mor> u;
    for (Obj a = 0; a < cx.object_count(); ++a) {
      if (fid.on_ob(a) != a)
        throw structural_error("strict_pseudofunctor: F(id) moves an object");
      u.push_back(cx.identity(a));
    }
    d.unitor.push_back(std::move(u));
  }
  for (Mor g = 0; g < ix.morphism_count(); ++g) {
    for (Mor f = 0; f < ix.morphism_count(); ++f) {
      if (ix.tgt(f) != ix.src(g)) continue;
      Mor gf = ix.compose(g, f);
      if (gf == kTruncated) continue;
      const Functor& fg = d.arrow[static_cast<size_t>(g)];
      const Functor& ffn = d.arrow[static_cast<size_t>(f)];
      const Functor& fgf = d.arrow[static_cast<size_t>(gf)];
      const FinCat& ctgt = *d.value[static_cast<size_t>(ix.tgt(g))];
      std::vector<Mor> gamma;
      for (Obj a = 0; a < ffn.source->object_count(); ++a) {
        if (fg.on_ob(ffn.on_ob(a)) != fgf.on_ob(a))
          throw structural_error("strict_pseudofunctor: composition not strict on objects");
        gamma.push_back(ctgt.identity(fgf.on_ob(a)));
      }
      for (Mor m = 0; m < ffn.source->morphism_count(); ++m)
        if (fg.on_mor(ffn.on_mor(m)) != fgf.on_mor(m))
          throw structural_error("strict_pseudofunctor: composition not strict on morphisms");
      d.compositor[{g, f}] = std::move(gamma);
    }
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Pseudo-limit

namespace {

std::string join_labels(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " , ";
    out += parts[i];
  }
  return out;
}

}  // namespace

PseudoLimitCat pseudo_limit_cat(const PseudoFunctor& d, const Limits& lim) {
  d.validate(lim);
  const FinCat& ix = *d.index;
  const int n = ix.object_count();

  // Non-identity index morphisms carry free glue choices; identity glue is
  // forced to the unitor component.
  std::vector<Mor> glue_slots;
  for (Mor m = 0; m < ix.morphism_count(); ++m)
    if (!ix.is_identity(m)) glue_slots.push_back(m);

  struct LimObj {
    std::vector<Obj> choice;        // per index object
    std::vector<Mor> glue;          // per index morphism (identities included)
    std::string label;
  };
  std::vector<LimObj> lobjs;

  std::vector<Obj> choice(static_cast<size_t>(n), 0);
  std::function<void(int)> pick_objects = [&](int at) {
    if (at == n) {
      // Enumerate glue families over the slots, then filter by the cocycle.
      std::vector<Mor> glue(static_cast<size_t>(ix.morphism_count()), -1);
      for (Obj x = 0; x < n; ++x)
        glue[static_cast<size_t>(ix.identity(x))] =
            d.unitor[static_cast<size_t>(x)][static_cast<size_t>(choice[static_cast<size_t>(x)])];

      std::vector<std::vector<Mor>> options(glue_slots.size());
      for (size_t s = 0; s < glue_slots.size(); ++s) {
        Mor m = glue_slots[s];
        const FinCat& ct = *d.value[static_cast<size_t>(ix.tgt(m))];
        Obj from = d.arrow[static_cast<size_t>(m)].on_ob(choice[static_cast<size_t>(ix.src(m))]);
        Obj to = choice[static_cast<size_t>(ix.tgt(m))];
        for (Mor k : ct.hom(from, to))
          if (ct.is_iso(k)) options[s].push_back(k);
        if (options[s].empty()) return;  // no glue over m: no limit object with this choice
      }

      std::function<void(size_t)> pick_glue = [&](size_t s) {
        if (s == glue_slots.size()) {
          // Cocycle over every represented composite.
          for (Mor g = 0; g < ix.morphism_count(); ++g) {
            for (Mor f = 0; f < ix.morphism_count(); ++f) {
              if (ix.tgt(f) != ix.src(g)) continue;
              Mor gf = ix.compose(g, f);
              if (gf == kTruncated) continue;
              const FinCat& ct = *d.value[static_cast<size_t>(ix.tgt(g))];
              Obj a = choice[static_cast<size_t>(ix.src(f))];
              // φ_{g∘f} ∘ γ_{g,f}(a)  =  φ_g ∘ F(g)(φ_f)
              Mor lhs = ct.compose(glue[static_cast<size_t>(gf)],
                                   d.compositor.at({g, f})[static_cast<size_t>(a)]);
              Mor rhs = ct.compose(
                  glue[static_cast<size_t>(g)],
                  d.arrow[static_cast<size_t>(g)].on_mor(glue[static_cast<size_t>(f)]));
              if (lhs < 0 || rhs < 0 || lhs != rhs) return;
            }
          }
          LimObj lo;
          lo.choice = choice;
          lo.glue = glue;
          std::vector<std::string> parts;
          for (Obj x = 0; x < n; ++x)
            parts.push_back(
                d.value[static_cast<size_t>(x)]->object_label(choice[static_cast<size_t>(x)]));
          for (Mor m : glue_slots)
            parts.push_back(ix.morphism_label(m) + ":" +
                            d.value[static_cast<size_t>(ix.tgt(m))]->morphism_label(
                                lo.glue[static_cast<size_t>(m)]));
          lo.label = "{" + join_labels(parts) + "}";
          lobjs.push_back(std::move(lo));
          if (static_cast<int>(lobjs.size()) > lim.max_objects)
            throw structural_error("pseudo-limit object count exceeds cap during enumeration");
          return;
        }
        for (Mor k : options[s]) {
          glue[static_cast<size_t>(glue_slots[s])] = k;
          pick_glue(s + 1);
        }
        glue[static_cast<size_t>(glue_slots[s])] = -1;
      };
      pick_glue(0);
      return;
    }
    for (Obj a = 0; a < d.value[static_cast<size_t>(at)]->object_count(); ++a) {
      choice[static_cast<size_t>(at)] = a;
      pick_objects(at + 1);
    }
  };
  if (n == 0) {
    lobjs.push_back({{}, {}, "{}"});
  } else {
    pick_objects(0);
  }

  if (static_cast<int>(lobjs.size()) > lim.max_objects)
    throw structural_error("pseudo-limit object count " + std::to_string(lobjs.size()) +
                           " exceeds cap");

  FinCatBuilder bld("pseudo-limit");
  for (const auto& lo : lobjs) bld.add_object(lo.label);

  struct LimMor {
    size_t from, to;
    std::vector<Mor> parts;
    std::string label;
  };
  std::vector<LimMor> lmors;
  bool dropped = false;
  for (size_t i = 0; i < lobjs.size(); ++i) {
    for (size_t j = 0; j < lobjs.size(); ++j) {
      // Families m_x: a_x -> b_x with  ψ_f ∘ F(f)(m_x) = m_y ∘ φ_f  for all f.
      std::vector<std::vector<Mor>> options(static_cast<size_t>(n));
      bool any = true;
      for (Obj x = 0; x < n && any; ++x) {
        options[static_cast<size_t>(x)] =
            d.value[static_cast<size_t>(x)]->hom(lobjs[i].choice[static_cast<size_t>(x)],
                                                 lobjs[j].choice[static_cast<size_t>(x)]);
        any = !options[static_cast<size_t>(x)].empty();
      }
      if (!any) continue;
      std::vector<Mor> parts(static_cast<size_t>(n), -1);
      std::function<void(int)> pick = [&](int x) {
        if (x == n) {
          for (Mor f = 0; f < ix.morphism_count(); ++f) {
            Obj sx = ix.src(f), ty = ix.tgt(f);
            const FinCat& ct = *d.value[static_cast<size_t>(ty)];
            Mor lhs = ct.compose(lobjs[j].glue[static_cast<size_t>(f)],
                                 d.arrow[static_cast<size_t>(f)].on_mor(
                                     parts[static_cast<size_t>(sx)]));
            Mor rhs = ct.compose(parts[static_cast<size_t>(ty)],
                                 lobjs[i].glue[static_cast<size_t>(f)]);
            if (lhs == kTruncated || rhs == kTruncated) { dropped = true; return; }
            if (lhs != rhs) return;
          }
          LimMor lm;
          lm.from = i;
          lm.to = j;
          lm.parts = parts;
          std::vector<std::string> ps;
          for (Obj x = 0; x < n; ++x)
            ps.push_back(
                d.value[static_cast<size_t>(x)]->morphism_label(parts[static_cast<size_t>(x)]));
          lm.label = "{" + join_labels(ps) + "} : " + lobjs[i].label + " => " + lobjs[j].label;
          lmors.push_back(std::move(lm));
          return;
        }
        for (Mor m : options[static_cast<size_t>(x)]) {
          parts[static_cast<size_t>(x)] = m;
          pick(x + 1);
        }
      };
      if (n == 0) {
        if (i == j) { /* only the identity, added below via identity handling */ }
        lmors.push_back({i, j, {}, "{} : {} => {}"});
        continue;
      }
      pick(0);
    }
  }

  for (const auto& lm : lmors)
    bld.add_morphism(lm.label, lobjs[lm.from].label, lobjs[lm.to].label);

  // Identities: the family of identities always satisfies the squares.
  std::map<std::tuple<size_t, size_t, std::vector<Mor>>, const LimMor*> mor_index;
  for (const auto& lm : lmors) mor_index[{lm.from, lm.to, lm.parts}] = &lm;
  auto mor_key = [&](size_t from, size_t to, const std::vector<Mor>& parts) -> const LimMor* {
    auto it = mor_index.find({from, to, parts});
    return it == mor_index.end() ? nullptr : it->second;
  };
  for (size_t i = 0; i < lobjs.size(); ++i) {
    std::vector<Mor> idparts;
    for (Obj x = 0; x < n; ++x)
      idparts.push_back(d.value[static_cast<size_t>(x)]->identity(
          lobjs[i].choice[static_cast<size_t>(x)]));
    const LimMor* lm = mor_key(i, i, idparts);
    if (!lm) throw structural_error("pseudo-limit: identity family missing");
    bld.set_identity(lobjs[i].label, lm->label);
  }

  for (const auto& p : lmors) {
    for (const auto& q : lmors) {
      if (q.from != p.to) continue;
      std::vector<Mor> comp(static_cast<size_t>(n));
      bool trunc = false;
      for (Obj x = 0; x < n; ++x) {
        Mor c = d.value[static_cast<size_t>(x)]->compose(q.parts[static_cast<size_t>(x)],
                                                         p.parts[static_cast<size_t>(x)]);
        if (c == kTruncated) { trunc = true; break; }
        comp[static_cast<size_t>(x)] = c;
      }
      if (trunc) {
        bld.set_truncated(q.label, p.label);
        bld.append_truncation_note("pseudo-limit: componentwise composite out of fragment");
        continue;
      }
      const LimMor* lm = mor_key(p.from, q.to, comp);
      if (!lm) {
        bld.set_truncated(q.label, p.label);
        bld.append_truncation_note("pseudo-limit: composite family not representable");
        continue;
      }
      bld.set_composite(q.label, p.label, lm->label);
    }
  }
  if (dropped)
    bld.append_truncation_note("pseudo-limit: candidate families with out-of-fragment squares dropped");

  PseudoLimitCat out;
  out.cat = bld.build(lim);
  const FinCat& k = *out.cat;
  out.object_choice.resize(static_cast<size_t>(k.object_count()));
  out.object_glue.resize(static_cast<size_t>(k.object_count()));
  out.morphism_parts.resize(static_cast<size_t>(k.morphism_count()));
  {
    std::map<std::string, size_t> by_label;
    for (size_t i = 0; i < lobjs.size(); ++i) by_label[lobjs[i].label] = i;
    for (Obj x = 0; x < k.object_count(); ++x) {
      const auto& lo = lobjs[by_label.at(k.object_label(x))];
      out.object_choice[static_cast<size_t>(x)] = lo.choice;
      out.object_glue[static_cast<size_t>(x)] = lo.glue;
    }
  }
  {
    std::map<std::string, size_t> by_label;
    for (size_t i = 0; i < lmors.size(); ++i) by_label[lmors[i].label] = i;
    for (Mor m = 0; m < k.morphism_count(); ++m)
      out.morphism_parts[static_cast<size_t>(m)] = lmors[by_label.at(k.morphism_label(m))].parts;
  }
  return out;
}

std::optional<Obj> PseudoLimitCat::find_object(const std::vector<Obj>& choice,
                                               const std::vector<Mor>& glue) const {
  for (Obj x = 0; x < cat->object_count(); ++x)
    if (object_choice[static_cast<size_t>(x)] == choice &&
        object_glue[static_cast<size_t>(x)] == glue)
      return x;
  return std::nullopt;
}

std::optional<Mor> PseudoLimitCat::find_morphism(Obj from, Obj to,
                                                 const std::vector<Mor>& parts) const {
  for (Mor m = 0; m < cat->morphism_count(); ++m)
    if (cat->src(m) == from && cat->tgt(m) == to &&
        morphism_parts[static_cast<size_t>(m)] == parts)
      return m;
  return std::nullopt;
}

Functor PseudoLimitCat::projection(const PseudoFunctor& d, Obj index_object) const {
  Functor p;
  p.source = cat;
  p.target = d.value[static_cast<size_t>(index_object)];
  for (Obj x = 0; x < cat->object_count(); ++x)
    p.ob.push_back(object_choice[static_cast<size_t>(x)][static_cast<size_t>(index_object)]);
  for (Mor m = 0; m < cat->morphism_count(); ++m)
    p.mor.push_back(morphism_parts[static_cast<size_t>(m)][static_cast<size_t>(index_object)]);
  p.validate();
  return p;
}

}  // namespace patkit
