#include "core/fincat.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace patkit {

namespace {

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

// ---------------------------------------------------------------------------
// FinCat

std::optional<Obj> FinCat::object_index(const std::string& label) const {
  for (Obj x = 0; x < object_count(); ++x)
    if (objects_[static_cast<size_t>(x)] == label) return x;
  return std::nullopt;
}

std::optional<Mor> FinCat::morphism_index(const std::string& label) const {
  for (Mor m = 0; m < morphism_count(); ++m)
    if (mors_[static_cast<size_t>(m)].label == label) return m;
  return std::nullopt;
}

Mor FinCat::compose_chain(const std::vector<Mor>& gs) const {
  if (gs.empty()) throw structural_error("compose_chain: empty chain");
  Mor acc = gs.back();
  for (auto it = gs.rbegin() + 1; it != gs.rend(); ++it) {
    if (acc < 0) return acc;
    acc = compose(*it, acc);
  }
  return acc;
}

std::vector<Mor> FinCat::hom(Obj x, Obj y) const {
  std::vector<Mor> out;
  for (Mor m = 0; m < morphism_count(); ++m)
    if (src(m) == x && tgt(m) == y) out.push_back(m);
  return out;
}

std::vector<Mor> FinCat::morphisms_from(Obj x) const {
  std::vector<Mor> out;
  for (Mor m = 0; m < morphism_count(); ++m)
    if (src(m) == x) out.push_back(m);
  return out;
}

std::vector<Mor> FinCat::morphisms_to(Obj y) const {
  std::vector<Mor> out;
  for (Mor m = 0; m < morphism_count(); ++m)
    if (tgt(m) == y) out.push_back(m);
  return out;
}

bool FinCat::isomorphic_objects(Obj x, Obj y) const {
  if (x == y) return true;
  for (Mor m : hom(x, y))
    if (is_iso(m)) return true;
  return false;
}

std::string FinCat::summary() const {
  std::ostringstream os;
  os << "category(" << object_count() << " objects, " << morphism_count() << " morphisms";
  if (!honest()) os << ", " << truncated_pair_count_ << " truncated composites";
  os << ")";
  return os.str();
}

void FinCat::validate(const Limits& lim) const {
  const int n = object_count(), m = morphism_count();
  if (n > lim.max_objects)
    throw structural_error("object count " + std::to_string(n) + " exceeds cap " +
                           std::to_string(lim.max_objects));
  if (m > lim.max_morphisms)
    throw structural_error("morphism count " + std::to_string(m) + " exceeds cap " +
                           std::to_string(lim.max_morphisms));

  {
    std::set<std::string> seen;
    for (const auto& l : objects_) {
      if (l.empty()) throw structural_error("empty object label");
      if (!seen.insert(l).second) throw structural_error("duplicate object label " + quoted(l));
    }
    seen.clear();
    for (const auto& d : mors_) {
      if (d.label.empty()) throw structural_error("empty morphism label");
      if (!seen.insert(d.label).second)
        throw structural_error("duplicate morphism label " + quoted(d.label));
      if (d.src < 0 || d.src >= n || d.tgt < 0 || d.tgt >= n)
        throw structural_error("morphism " + quoted(d.label) + " has out-of-range endpoints");
    }
  }

  if (static_cast<int>(identity_.size()) != n) throw structural_error("identity table size mismatch");
  for (Obj x = 0; x < n; ++x) {
    Mor i = identity_[static_cast<size_t>(x)];
    if (i < 0 || i >= m || src(i) != x || tgt(i) != x)
      throw structural_error("identity of " + quoted(object_label(x)) + " is not an endomorphism there");
  }

  if (table_.size() != static_cast<size_t>(m) * static_cast<size_t>(m))
    throw structural_error("composition table size mismatch");

  long long truncated_seen = 0;
  for (Mor g = 0; g < m; ++g) {
    for (Mor f = 0; f < m; ++f) {
      Mor c = table_[static_cast<size_t>(g) * m + f];
      if (tgt(f) != src(g)) {
        if (c != kNoComposite)
          throw structural_error("non-composable pair (" + morphism_label(g) + ", " +
                                 morphism_label(f) + ") has a table entry");
        continue;
      }
      if (c == kNoComposite)
        throw structural_error("composable pair (" + morphism_label(g) + ", " + morphism_label(f) +
                               ") marked non-composable");
      if (c == kTruncated) {
        ++truncated_seen;
        continue;
      }
      if (c < 0 || c >= m) throw structural_error("composition table entry out of range");
      if (src(c) != src(f) || tgt(c) != tgt(g))
        throw structural_error("composite of (" + morphism_label(g) + ", " + morphism_label(f) +
                               ") has wrong endpoints");
    }
  }
  if (truncated_seen != truncated_pair_count_)
    throw structural_error("truncated-entry count is stale");
  if (truncated_seen > 0 && truncation_note_.empty())
    throw structural_error("truncated composites present but no truncation note recorded");

  // Unit laws.  Units themselves must never be truncated.
  for (Mor f = 0; f < m; ++f) {
    if (compose(f, identity(src(f))) != f)
      throw structural_error("right unit law fails at " + quoted(morphism_label(f)));
    if (compose(identity(tgt(f)), f) != f)
      throw structural_error("left unit law fails at " + quoted(morphism_label(f)));
  }

  // Associativity on every triple where it is decidable.  A truncated inner
  // composite gives no handle; a defined path disagreeing with a truncated
  // outer step is a genuine inconsistency (in-cap vs out-of-cap).
  std::vector<std::vector<Mor>> from(static_cast<size_t>(n));
  for (Mor f = 0; f < m; ++f) from[static_cast<size_t>(src(f))].push_back(f);
  for (Mor f = 0; f < m; ++f) {
    for (Mor g : from[static_cast<size_t>(tgt(f))]) {
      Mor gf = compose(g, f);
      for (Mor h : from[static_cast<size_t>(tgt(g))]) {
        Mor hg = compose(h, g);
        // An out-of-fragment inner composite gives no handle on that
        // association order; comparison is only possible when both inner
        // steps are represented.
        if (gf == kTruncated || hg == kTruncated) continue;
        Mor a = compose(h, gf);   // h∘(g∘f)
        Mor b = compose(hg, f);   // (h∘g)∘f
        if (a >= 0 && b >= 0 && a != b)
          throw structural_error("associativity fails on (" + morphism_label(h) + ", " +
                                 morphism_label(g) + ", " + morphism_label(f) + ")");
        if ((a >= 0) != (b >= 0))
          throw structural_error("truncation inconsistency on (" + morphism_label(h) + ", " +
                                 morphism_label(g) + ", " + morphism_label(f) +
                                 "): one association order is in-cap, the other is not");
      }
    }
  }

  // Inverse table consistency.
  if (inverse_.size() != static_cast<size_t>(m)) throw structural_error("inverse table size mismatch");
  for (Mor f = 0; f < m; ++f) {
    Mor i = inverse_[static_cast<size_t>(f)];
    if (i >= 0) {
      if (compose(i, f) != identity(src(f)) || compose(f, i) != identity(tgt(f)))
        throw structural_error("recorded inverse of " + quoted(morphism_label(f)) + " is wrong");
    } else {
      for (Mor g : hom(tgt(f), src(f)))
        if (compose(g, f) == identity(src(f)) && compose(f, g) == identity(tgt(f)))
          throw structural_error("morphism " + quoted(morphism_label(f)) +
                                 " is invertible but not recorded as such");
    }
  }
}

// ---------------------------------------------------------------------------
// FinCatBuilder

int FinCatBuilder::add_object(const std::string& label) {
  if (label.empty()) throw structural_error(name_ + ": empty object label");
  auto it = ob_index_.find(label);
  if (it != ob_index_.end()) throw structural_error(name_ + ": duplicate object " + quoted(label));
  int idx = static_cast<int>(obs_.size());
  obs_.push_back(label);
  ob_index_[label] = idx;
  return idx;
}

int FinCatBuilder::add_morphism(const std::string& label, const std::string& src,
                                const std::string& tgt) {
  if (label.empty()) throw structural_error(name_ + ": empty morphism label");
  if (mor_index_.count(label)) throw structural_error(name_ + ": duplicate morphism " + quoted(label));
  if (!ob_index_.count(src)) throw structural_error(name_ + ": unknown source object " + quoted(src));
  if (!ob_index_.count(tgt)) throw structural_error(name_ + ": unknown target object " + quoted(tgt));
  int idx = static_cast<int>(pmors_.size());
  pmors_.push_back({label, src, tgt});
  mor_index_[label] = idx;
  return idx;
}

void FinCatBuilder::set_identity(const std::string& obj, const std::string& mor) {
  if (!ob_index_.count(obj)) throw structural_error(name_ + ": unknown object " + quoted(obj));
  if (!mor_index_.count(mor)) throw structural_error(name_ + ": unknown morphism " + quoted(mor));
  auto [it, fresh] = identity_of_.emplace(obj, mor);
  if (!fresh && it->second != mor)
    throw structural_error(name_ + ": conflicting identity for " + quoted(obj));
}

void FinCatBuilder::set_composite(const std::string& g, const std::string& f, const std::string& gf) {
  if (!mor_index_.count(g) || !mor_index_.count(f) || !mor_index_.count(gf))
    throw structural_error(name_ + ": set_composite with unknown morphism");
  auto key = std::make_pair(g, f);
  auto [it, fresh] = comp_.emplace(key, gf);
  if (!fresh && it->second != gf)
    throw structural_error(name_ + ": conflicting composite for (" + g + ", " + f + ")");
}

void FinCatBuilder::set_truncated(const std::string& g, const std::string& f) {
  if (!mor_index_.count(g) || !mor_index_.count(f))
    throw structural_error(name_ + ": set_truncated with unknown morphism");
  auto key = std::make_pair(g, f);
  auto [it, fresh] = comp_.emplace(key, std::string());
  if (!fresh && !it->second.empty())
    throw structural_error(name_ + ": pair (" + g + ", " + f + ") both composed and truncated");
  if (truncation_note_.empty())
    truncation_note_ = "some composites fall outside the represented fragment";
}

void FinCatBuilder::append_truncation_note(const std::string& note) {
  if (note.empty()) return;
  if (truncation_note_.find(note) != std::string::npos) return;
  if (!truncation_note_.empty()) truncation_note_ += "; ";
  truncation_note_ += note;
}

CatPtr FinCatBuilder::build(const Limits& lim) const {
  auto cat = std::make_shared<FinCat>();

  // Canonical order: objects lexicographic; morphisms by (src, tgt, label).
  std::vector<std::string> obs_sorted = obs_;
  std::sort(obs_sorted.begin(), obs_sorted.end());
  std::map<std::string, Obj> ob_of;
  for (size_t i = 0; i < obs_sorted.size(); ++i) ob_of[obs_sorted[i]] = static_cast<Obj>(i);

  std::vector<PMor> pm = pmors_;
  std::sort(pm.begin(), pm.end(), [&](const PMor& a, const PMor& b) {
    return std::tie(a.src, a.tgt, a.label) < std::tie(b.src, b.tgt, b.label);
  });
  std::map<std::string, Mor> mor_of;
  for (size_t i = 0; i < pm.size(); ++i) mor_of[pm[i].label] = static_cast<Mor>(i);

  cat->objects_ = obs_sorted;
  cat->mors_.reserve(pm.size());
  for (const auto& p : pm) cat->mors_.push_back({p.label, ob_of.at(p.src), ob_of.at(p.tgt)});

  cat->identity_.assign(obs_sorted.size(), -1);
  for (const auto& o : obs_sorted) {
    auto it = identity_of_.find(o);
    if (it == identity_of_.end())
      throw structural_error(name_ + ": no identity recorded for " + quoted(o));
    cat->identity_[static_cast<size_t>(ob_of.at(o))] = mor_of.at(it->second);
  }

  const size_t m = pm.size();
  cat->table_.assign(m * m, kNoComposite);
  auto ident_label = [&](const std::string& obj) -> const std::string& {
    return identity_of_.at(obj);
  };
  long long truncated = 0;
  for (size_t gi = 0; gi < m; ++gi) {
    for (size_t fi = 0; fi < m; ++fi) {
      const PMor& g = pm[gi];
      const PMor& f = pm[fi];
      if (f.tgt != g.src) continue;
      Mor entry = kNoComposite;
      auto it = comp_.find({g.label, f.label});
      if (it != comp_.end()) {
        entry = it->second.empty() ? kTruncated : mor_of.at(it->second);
      } else if (g.label == ident_label(g.src)) {
        entry = mor_of.at(f.label);  // left unit, auto-filled
      } else if (f.label == ident_label(f.src)) {
        entry = mor_of.at(g.label);  // right unit, auto-filled
      } else {
        throw structural_error(name_ + ": no composite recorded for (" + g.label + ", " + f.label +
                               ")");
      }
      if (entry == kTruncated) ++truncated;
      cat->table_[gi * m + fi] = entry;
    }
  }
  cat->truncated_pair_count_ = truncated;
  cat->truncation_note_ = truncation_note_;

  // Two-sided inverses; unique when they exist.
  cat->inverse_.assign(m, -1);
  for (Mor f = 0; f < static_cast<Mor>(m); ++f) {
    for (Mor g : cat->hom(cat->tgt(f), cat->src(f))) {
      if (cat->compose(g, f) == cat->identity(cat->src(f)) &&
          cat->compose(f, g) == cat->identity(cat->tgt(f))) {
        cat->inverse_[static_cast<size_t>(f)] = g;
        break;
      }
    }
  }

  cat->validate(lim);
  return cat;
}

// ---------------------------------------------------------------------------
// Functors

void Functor::validate() const {
  if (!source || !target) throw structural_error("functor with null endpoints");
  const FinCat& c = *source;
  const FinCat& d = *target;
  if (static_cast<int>(ob.size()) != c.object_count() ||
      static_cast<int>(mor.size()) != c.morphism_count())
    throw structural_error("functor table sizes do not match its source");
  for (Obj x = 0; x < c.object_count(); ++x)
    if (on_ob(x) < 0 || on_ob(x) >= d.object_count())
      throw structural_error("functor object image out of range");
  for (Mor m = 0; m < c.morphism_count(); ++m) {
    Mor fm = on_mor(m);
    if (fm < 0 || fm >= d.morphism_count())
      throw structural_error("functor morphism image out of range");
    if (d.src(fm) != on_ob(c.src(m)) || d.tgt(fm) != on_ob(c.tgt(m)))
      throw structural_error("functor breaks endpoints at " + c.morphism_label(m));
  }
  for (Obj x = 0; x < c.object_count(); ++x)
    if (on_mor(c.identity(x)) != d.identity(on_ob(x)))
      throw structural_error("functor breaks identity at " + c.object_label(x));
  for (Mor g = 0; g < c.morphism_count(); ++g) {
    for (Mor f = 0; f < c.morphism_count(); ++f) {
      if (c.tgt(f) != c.src(g)) continue;
      Mor gf = c.compose(g, f);
      if (gf == kTruncated) continue;  // source composite not represented: no constraint
      Mor dgf = d.compose(on_mor(g), on_mor(f));
      if (dgf == kTruncated)
        throw structural_error("functor maps the in-cap composite of (" + c.morphism_label(g) +
                               ", " + c.morphism_label(f) + ") to a truncated pair");
      if (dgf != on_mor(gf))
        throw structural_error("functor breaks composition on (" + c.morphism_label(g) + ", " +
                               c.morphism_label(f) + ")");
    }
  }
}

Functor identity_functor(const CatPtr& c) {
  Functor f;
  f.source = f.target = c;
  f.ob.resize(static_cast<size_t>(c->object_count()));
  std::iota(f.ob.begin(), f.ob.end(), 0);
  f.mor.resize(static_cast<size_t>(c->morphism_count()));
  std::iota(f.mor.begin(), f.mor.end(), 0);
  return f;
}

bool same_category(const CatPtr& a, const CatPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->object_count() != b->object_count() || a->morphism_count() != b->morphism_count())
    return false;
  for (Obj x = 0; x < a->object_count(); ++x)
    if (a->object_label(x) != b->object_label(x)) return false;
  for (Mor m = 0; m < a->morphism_count(); ++m) {
    if (a->morphism_label(m) != b->morphism_label(m) || a->src(m) != b->src(m) ||
        a->tgt(m) != b->tgt(m))
      return false;
  }
  for (Obj x = 0; x < a->object_count(); ++x)
    if (a->identity(x) != b->identity(x)) return false;
  for (Mor g = 0; g < a->morphism_count(); ++g)
    for (Mor f = 0; f < a->morphism_count(); ++f)
      if (a->compose(g, f) != b->compose(g, f)) return false;
  return true;
}

Functor compose_functors(const Functor& g, const Functor& f) {
  if (!same_category(f.target, g.source))
    throw structural_error("compose_functors: middle categories differ");
  Functor h;
  h.source = f.source;
  h.target = g.target;
  h.ob.reserve(f.ob.size());
  for (Obj x : f.ob) h.ob.push_back(g.on_ob(x));
  h.mor.reserve(f.mor.size());
  for (Mor m : f.mor) h.mor.push_back(g.on_mor(m));
  return h;
}

Functor constant_functor(const CatPtr& c, const CatPtr& d, Obj at) {
  Functor f;
  f.source = c;
  f.target = d;
  f.ob.assign(static_cast<size_t>(c->object_count()), at);
  f.mor.assign(static_cast<size_t>(c->morphism_count()), d->identity(at));
  return f;
}

bool is_fully_faithful(const Functor& f) {
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  for (Obj x = 0; x < c.object_count(); ++x) {
    for (Obj y = 0; y < c.object_count(); ++y) {
      auto upstairs = c.hom(x, y);
      auto downstairs = d.hom(f.on_ob(x), f.on_ob(y));
      if (upstairs.size() != downstairs.size()) return false;
      std::set<Mor> image;
      for (Mor m : upstairs) image.insert(f.on_mor(m));
      if (image.size() != upstairs.size()) return false;  // not injective
    }
  }
  return true;
}

bool is_essentially_surjective(const Functor& f) {
  const FinCat& d = *f.target;
  for (Obj y = 0; y < d.object_count(); ++y) {
    bool hit = false;
    for (Obj x = 0; x < f.source->object_count() && !hit; ++x)
      hit = d.isomorphic_objects(f.on_ob(x), y);
    if (!hit) return false;
  }
  return true;
}

void NatTrans::validate(const Functor& f, const Functor& g, bool require_iso) const {
  if (!same_category(f.source, g.source) || !same_category(f.target, g.target))
    throw structural_error("natural transformation between non-parallel functors");
  const FinCat& c = *f.source;
  const FinCat& d = *f.target;
  if (static_cast<int>(component.size()) != c.object_count())
    throw structural_error("component count mismatch");
  for (Obj x = 0; x < c.object_count(); ++x) {
    Mor k = component[static_cast<size_t>(x)];
    if (k < 0 || k >= d.morphism_count() || d.src(k) != f.on_ob(x) || d.tgt(k) != g.on_ob(x))
      throw structural_error("component at " + c.object_label(x) + " has wrong endpoints");
    if (require_iso && !d.is_iso(k))
      throw structural_error("component at " + c.object_label(x) + " is not invertible");
  }
  for (Mor m = 0; m < c.morphism_count(); ++m) {
    Obj x = c.src(m), y = c.tgt(m);
    Mor lhs = d.compose(g.on_mor(m), component[static_cast<size_t>(x)]);
    Mor rhs = d.compose(component[static_cast<size_t>(y)], f.on_mor(m));
    if (lhs == kTruncated && rhs == kTruncated) continue;
    if (lhs == kTruncated || rhs == kTruncated)
      throw structural_error("naturality square at " + c.morphism_label(m) +
                             " mixes in-cap and truncated composites");
    if (lhs != rhs)
      throw structural_error("naturality fails at " + c.morphism_label(m));
  }
}

// ---------------------------------------------------------------------------
// Comma constructions

namespace {

CommaCat comma_impl(const Functor& f, const Functor& g, bool iso_only, const Limits& lim,
                    const char* what) {
  f.validate();
  g.validate();
  if (!same_category(f.target, g.target))
    throw structural_error(std::string(what) + ": functors have different targets");
  const FinCat& c = *f.source;
  const FinCat& d = *g.source;
  const FinCat& e = *f.target;

  FinCatBuilder bld(what);
  struct ObData {
    Obj c_ob, d_ob;
    Mor arrow;
  };
  std::vector<ObData> obs;
  std::map<std::tuple<Obj, Obj, Mor>, std::string> ob_label;
  for (Obj x = 0; x < c.object_count(); ++x) {
    for (Obj y = 0; y < d.object_count(); ++y) {
      for (Mor m : e.hom(f.on_ob(x), g.on_ob(y))) {
        if (iso_only && !e.is_iso(m)) continue;
        std::string lbl =
            "(" + c.object_label(x) + " ; " + d.object_label(y) + " ; " + e.morphism_label(m) + ")";
        bld.add_object(lbl);
        ob_label[{x, y, m}] = lbl;
        obs.push_back({x, y, m});
      }
    }
  }

  // Morphisms: pairs (u, v) with the square over the structure arrows
  // commuting.  Squares whose commutativity is not decidable at this cap are
  // dropped and noted.
  struct MorData {
    Mor u, v;
    std::tuple<Obj, Obj, Mor> from, to;
  };
  std::vector<MorData> mors;
  std::map<std::tuple<Mor, Mor, Mor, Mor>, std::string> mor_label;  // (u, v, m_from, m_to)
  bool dropped = false;
  for (const auto& a : obs) {
    for (const auto& b : obs) {
      for (Mor u : c.hom(a.c_ob, b.c_ob)) {
        for (Mor v : d.hom(a.d_ob, b.d_ob)) {
          Mor lhs = e.compose(b.arrow, f.on_mor(u));
          Mor rhs = e.compose(g.on_mor(v), a.arrow);
          if (lhs == kTruncated || rhs == kTruncated) {
            dropped = true;
            continue;
          }
          if (lhs != rhs) continue;
          std::string lbl = "(" + c.morphism_label(u) + " ; " + d.morphism_label(v) + " : " +
                            e.morphism_label(a.arrow) + " => " + e.morphism_label(b.arrow) + ")";
          bld.add_morphism(lbl, ob_label.at({a.c_ob, a.d_ob, a.arrow}),
                           ob_label.at({b.c_ob, b.d_ob, b.arrow}));
          mor_label[{u, v, a.arrow, b.arrow}] = lbl;
          mors.push_back({u, v, {a.c_ob, a.d_ob, a.arrow}, {b.c_ob, b.d_ob, b.arrow}});
        }
      }
    }
  }
  if (dropped)
    bld.append_truncation_note(std::string(what) +
                               ": candidate squares with out-of-fragment composites were dropped");

  for (const auto& a : obs) {
    std::string lbl = mor_label.at(
        {c.identity(a.c_ob), d.identity(a.d_ob), a.arrow, a.arrow});
    bld.set_identity(ob_label.at({a.c_ob, a.d_ob, a.arrow}), lbl);
  }

  for (const auto& p : mors) {
    for (const auto& q : mors) {
      if (q.from != p.to) continue;
      // q ∘ p, componentwise.
      Mor uu = c.compose(q.u, p.u);
      Mor vv = d.compose(q.v, p.v);
      const std::string& gl = mor_label.at({q.u, q.v, std::get<2>(q.from), std::get<2>(q.to)});
      const std::string& fl = mor_label.at({p.u, p.v, std::get<2>(p.from), std::get<2>(p.to)});
      if (uu == kTruncated || vv == kTruncated) {
        bld.set_truncated(gl, fl);
        bld.append_truncation_note(std::string(what) + ": componentwise composite out of fragment");
        continue;
      }
      auto it = mor_label.find({uu, vv, std::get<2>(p.from), std::get<2>(q.to)});
      if (it == mor_label.end()) {
        // The composite square exists but was dropped above for truncation
        // reasons; record the entry as beyond the fragment.
        bld.set_truncated(gl, fl);
        bld.append_truncation_note(std::string(what) + ": composite square not representable");
        continue;
      }
      bld.set_composite(gl, fl, it->second);
    }
  }

  CommaCat out;
  out.cat = bld.build(lim);

  // Projections and structure arrows, re-expressed against the canonical
  // (sorted) object order of the built category.
  const FinCat& k = *out.cat;
  out.to_left.source = out.cat;
  out.to_left.target = f.source;
  out.to_right.source = out.cat;
  out.to_right.target = g.source;
  out.to_left.ob.resize(static_cast<size_t>(k.object_count()));
  out.to_right.ob.resize(static_cast<size_t>(k.object_count()));
  out.arrow_at.resize(static_cast<size_t>(k.object_count()));
  {
    std::map<std::string, std::tuple<Obj, Obj, Mor>> by_label;
    for (const auto& [key, lbl] : ob_label) by_label[lbl] = key;
    for (Obj x = 0; x < k.object_count(); ++x) {
      auto [cx, dx, ar] = by_label.at(k.object_label(x));
      out.to_left.ob[static_cast<size_t>(x)] = cx;
      out.to_right.ob[static_cast<size_t>(x)] = dx;
      out.arrow_at[static_cast<size_t>(x)] = ar;
    }
  }
  out.to_left.mor.resize(static_cast<size_t>(k.morphism_count()));
  out.to_right.mor.resize(static_cast<size_t>(k.morphism_count()));
  {
    std::map<std::string, std::pair<Mor, Mor>> by_label;
    for (const auto& [key, lbl] : mor_label)
      by_label[lbl] = {std::get<0>(key), std::get<1>(key)};
    for (Mor m = 0; m < k.morphism_count(); ++m) {
      auto [u, v] = by_label.at(k.morphism_label(m));
      out.to_left.mor[static_cast<size_t>(m)] = u;
      out.to_right.mor[static_cast<size_t>(m)] = v;
    }
  }
  out.to_left.validate();
  out.to_right.validate();
  return out;
}

}  // namespace

CommaCat comma_category(const Functor& f, const Functor& g, const Limits& lim) {
  return comma_impl(f, g, /*iso_only=*/false, lim, "comma");
}

CommaCat iso_comma(const Functor& f, const Functor& g, const Limits& lim) {
  return comma_impl(f, g, /*iso_only=*/true, lim, "iso-comma");
}

CommaCat slice_over(const CatPtr& c, Obj x, const Limits& lim) {
  return comma_category(identity_functor(c), constant_functor(terminal_cat(), c, x), lim);
}

CommaCat slice_under(const CatPtr& c, Obj x, const Limits& lim) {
  return comma_category(constant_functor(terminal_cat(), c, x), identity_functor(c), lim);
}

// ---------------------------------------------------------------------------
// Subcategories, opposites, products

SubCat subcategory(const CatPtr& c, const std::vector<Obj>& objects,
                   const std::vector<Mor>& morphisms, const Limits& lim) {
  std::set<Obj> obset(objects.begin(), objects.end());
  std::set<Mor> morset(morphisms.begin(), morphisms.end());
  for (Obj x : obset)
    if (!morset.count(c->identity(x)))
      throw structural_error("subcategory: identity of " + c->object_label(x) + " not selected");
  for (Mor m : morset)
    if (!obset.count(c->src(m)) || !obset.count(c->tgt(m)))
      throw structural_error("subcategory: morphism " + c->morphism_label(m) +
                             " has unselected endpoints");

  FinCatBuilder bld("subcategory");
  for (Obj x : obset) bld.add_object(c->object_label(x));
  for (Mor m : morset) bld.add_morphism(c->morphism_label(m), c->object_label(c->src(m)),
                                        c->object_label(c->tgt(m)));
  for (Obj x : obset) bld.set_identity(c->object_label(x), c->morphism_label(c->identity(x)));
  for (Mor g : morset) {
    for (Mor f : morset) {
      if (c->tgt(f) != c->src(g)) continue;
      Mor gf = c->compose(g, f);
      if (gf == kTruncated) {
        bld.set_truncated(c->morphism_label(g), c->morphism_label(f));
        bld.append_truncation_note(c->truncation_note());
        continue;
      }
      if (!morset.count(gf))
        throw structural_error("subcategory: not closed under composition at (" +
                               c->morphism_label(g) + ", " + c->morphism_label(f) + ")");
      bld.set_composite(c->morphism_label(g), c->morphism_label(f), c->morphism_label(gf));
    }
  }

  SubCat out;
  out.cat = bld.build(lim);
  const FinCat& k = *out.cat;
  out.inclusion.source = out.cat;
  out.inclusion.target = c;
  out.object_in_parent.resize(static_cast<size_t>(k.object_count()));
  out.morphism_in_parent.resize(static_cast<size_t>(k.morphism_count()));
  for (Obj x = 0; x < k.object_count(); ++x)
    out.object_in_parent[static_cast<size_t>(x)] = *c->object_index(k.object_label(x));
  for (Mor m = 0; m < k.morphism_count(); ++m)
    out.morphism_in_parent[static_cast<size_t>(m)] = *c->morphism_index(k.morphism_label(m));
  out.inclusion.ob = out.object_in_parent;
  out.inclusion.mor = out.morphism_in_parent;
  out.inclusion.validate();
  return out;
}

SubCat full_subcategory(const CatPtr& c, const std::vector<Obj>& objects, const Limits& lim) {
  std::set<Obj> obset(objects.begin(), objects.end());
  std::vector<Mor> mors;
  for (Mor m = 0; m < c->morphism_count(); ++m)
    if (obset.count(c->src(m)) && obset.count(c->tgt(m))) mors.push_back(m);
  return subcategory(c, objects, mors, lim);
}

SubCat max_subgroupoid(const CatPtr& c, const Limits& lim) {
  std::vector<Obj> obs(static_cast<size_t>(c->object_count()));
  std::iota(obs.begin(), obs.end(), 0);
  std::vector<Mor> isos;
  for (Mor m = 0; m < c->morphism_count(); ++m)
    if (c->is_iso(m)) isos.push_back(m);
  return subcategory(c, obs, isos, lim);
}

CatPtr opposite(const CatPtr& c) {
  // Labels are preserved, endpoints swap, the table transposes.  Indices may
  // shift (the builder re-sorts canonically), so cross-reference opposites by
  // label, as everywhere else.
  FinCatBuilder bld("opposite");
  for (Obj x = 0; x < c->object_count(); ++x) bld.add_object(c->object_label(x));
  for (Mor m = 0; m < c->morphism_count(); ++m)
    bld.add_morphism(c->morphism_label(m), c->object_label(c->tgt(m)),
                     c->object_label(c->src(m)));
  for (Obj x = 0; x < c->object_count(); ++x)
    bld.set_identity(c->object_label(x), c->morphism_label(c->identity(x)));
  for (Mor g = 0; g < c->morphism_count(); ++g) {
    for (Mor f = 0; f < c->morphism_count(); ++f) {
      // Composable in the opposite iff (f, g) is composable here, and then
      // g∘_op f is f∘g taken here.
      if (c->src(f) != c->tgt(g)) continue;
      Mor fg = c->compose(f, g);
      if (fg == kTruncated) {
        bld.set_truncated(c->morphism_label(g), c->morphism_label(f));
        bld.append_truncation_note(c->truncation_note());
      } else {
        bld.set_composite(c->morphism_label(g), c->morphism_label(f), c->morphism_label(fg));
      }
    }
  }
  return bld.build();
}

Obj ProductCat::pair_object(Obj a, Obj b) const {
  for (size_t i = 0; i < object_pairs.size(); ++i)
    if (object_pairs[i] == std::make_pair(a, b)) return static_cast<Obj>(i);
  throw structural_error("product: unknown object pair");
}

Mor ProductCat::pair_morphism(Mor a, Mor b) const {
  for (size_t i = 0; i < morphism_pairs.size(); ++i)
    if (morphism_pairs[i] == std::make_pair(a, b)) return static_cast<Mor>(i);
  throw structural_error("product: unknown morphism pair");
}

ProductCat product_cat(const CatPtr& a, const CatPtr& b, const Limits& lim) {
  FinCatBuilder bld("product");
  auto ol = [&](Obj x, Obj y) {
    return "(" + a->object_label(x) + " , " + b->object_label(y) + ")";
  };
  auto ml = [&](Mor u, Mor v) {
    return "(" + a->morphism_label(u) + " , " + b->morphism_label(v) + ")";
  };
  for (Obj x = 0; x < a->object_count(); ++x)
    for (Obj y = 0; y < b->object_count(); ++y) bld.add_object(ol(x, y));
  for (Mor u = 0; u < a->morphism_count(); ++u)
    for (Mor v = 0; v < b->morphism_count(); ++v)
      bld.add_morphism(ml(u, v), ol(a->src(u), b->src(v)), ol(a->tgt(u), b->tgt(v)));
  for (Obj x = 0; x < a->object_count(); ++x)
    for (Obj y = 0; y < b->object_count(); ++y)
      bld.set_identity(ol(x, y), ml(a->identity(x), b->identity(y)));
  for (Mor u2 = 0; u2 < a->morphism_count(); ++u2)
    for (Mor u1 = 0; u1 < a->morphism_count(); ++u1) {
      if (a->tgt(u1) != a->src(u2)) continue;
      Mor uu = a->compose(u2, u1);
      for (Mor v2 = 0; v2 < b->morphism_count(); ++v2)
        for (Mor v1 = 0; v1 < b->morphism_count(); ++v1) {
          if (b->tgt(v1) != b->src(v2)) continue;
          Mor vv = b->compose(v2, v1);
          if (uu == kTruncated || vv == kTruncated) {
            bld.set_truncated(ml(u2, v2), ml(u1, v1));
            bld.append_truncation_note(a->truncation_note());
            bld.append_truncation_note(b->truncation_note());
          } else {
            bld.set_composite(ml(u2, v2), ml(u1, v1), ml(uu, vv));
          }
        }
    }

  ProductCat out;
  out.cat = bld.build(lim);
  const FinCat& k = *out.cat;
  out.object_pairs.resize(static_cast<size_t>(k.object_count()));
  out.morphism_pairs.resize(static_cast<size_t>(k.morphism_count()));
  out.to_left.source = out.to_right.source = out.cat;
  out.to_left.target = a;
  out.to_right.target = b;
  out.to_left.ob.resize(out.object_pairs.size());
  out.to_right.ob.resize(out.object_pairs.size());
  out.to_left.mor.resize(out.morphism_pairs.size());
  out.to_right.mor.resize(out.morphism_pairs.size());
  std::map<std::string, std::pair<Obj, Obj>> ob_by_label;
  for (Obj x = 0; x < a->object_count(); ++x)
    for (Obj y = 0; y < b->object_count(); ++y) ob_by_label[ol(x, y)] = {x, y};
  std::map<std::string, std::pair<Mor, Mor>> mor_by_label;
  for (Mor u = 0; u < a->morphism_count(); ++u)
    for (Mor v = 0; v < b->morphism_count(); ++v) mor_by_label[ml(u, v)] = {u, v};
  for (Obj x = 0; x < k.object_count(); ++x) {
    auto [p, q] = ob_by_label.at(k.object_label(x));
    out.object_pairs[static_cast<size_t>(x)] = {p, q};
    out.to_left.ob[static_cast<size_t>(x)] = p;
    out.to_right.ob[static_cast<size_t>(x)] = q;
  }
  for (Mor m = 0; m < k.morphism_count(); ++m) {
    auto [u, v] = mor_by_label.at(k.morphism_label(m));
    out.morphism_pairs[static_cast<size_t>(m)] = {u, v};
    out.to_left.mor[static_cast<size_t>(m)] = u;
    out.to_right.mor[static_cast<size_t>(m)] = v;
  }
  out.to_left.validate();
  out.to_right.validate();
  return out;
}

CatPtr terminal_cat() {
  static CatPtr cached = [] {
    FinCatBuilder bld("terminal");
    bld.add_object("*");
    bld.add_morphism("id", "*", "*");
    bld.set_identity("*", "id");
    return bld.build();
  }();
  return cached;
}

CatPtr empty_cat() {
  static CatPtr cached = [] { return FinCatBuilder("empty").build(); }();
  return cached;
}

CatPtr discrete_cat(const std::vector<std::string>& labels, const Limits& lim) {
  FinCatBuilder bld("discrete");
  for (const auto& l : labels) {
    bld.add_object(l);
    bld.add_morphism("id[" + l + "]", l, l);
    bld.set_identity(l, "id[" + l + "]");
  }
  return bld.build(lim);
}

// ---------------------------------------------------------------------------
// Set-valued diagrams

void FinSetDiagram::validate() const {
  if (!index) throw structural_error("diagram with null index");
  const FinCat& c = *index;
  if (static_cast<int>(set_size.size()) != c.object_count() ||
      static_cast<int>(fn.size()) != c.morphism_count())
    throw structural_error("diagram table sizes do not match the index");
  for (int s : set_size)
    if (s < 0) throw structural_error("negative set size");
  for (Mor m = 0; m < c.morphism_count(); ++m) {
    const auto& t = fn[static_cast<size_t>(m)];
    if (static_cast<int>(t.size()) != set_size[static_cast<size_t>(c.src(m))])
      throw structural_error("function table at " + c.morphism_label(m) + " has wrong domain size");
    for (int v : t)
      if (v < 0 || v >= set_size[static_cast<size_t>(c.tgt(m))])
        throw structural_error("function at " + c.morphism_label(m) + " maps out of range");
  }
  for (Obj x = 0; x < c.object_count(); ++x) {
    const auto& t = fn[static_cast<size_t>(c.identity(x))];
    for (size_t i = 0; i < t.size(); ++i)
      if (t[i] != static_cast<int>(i))
        throw structural_error("identity at " + c.object_label(x) + " is not the identity function");
  }
  for (Mor g = 0; g < c.morphism_count(); ++g) {
    for (Mor f = 0; f < c.morphism_count(); ++f) {
      if (c.tgt(f) != c.src(g)) continue;
      Mor gf = c.compose(g, f);
      if (gf == kTruncated) continue;
      const auto& tf = fn[static_cast<size_t>(f)];
      const auto& tg = fn[static_cast<size_t>(g)];
      const auto& tgf = fn[static_cast<size_t>(gf)];
      for (size_t i = 0; i < tf.size(); ++i)
        if (tg[static_cast<size_t>(tf[i])] != tgf[i])
          throw structural_error("diagram breaks functoriality on (" + c.morphism_label(g) + ", " +
                                 c.morphism_label(f) + ")");
    }
  }
}

FinSetLimit finset_limit(const FinSetDiagram& d) {
  d.validate();
  const FinCat& c = *d.index;
  const int n = c.object_count();
  FinSetLimit out;
  std::vector<int> family(static_cast<size_t>(n), -1);

  // Incremental constraint check keeps the scan linear in practice; index
  // categories here never exceed a handful of objects.
  std::function<void(int)> go = [&](int at) {
    if (at == n) {
      out.families.push_back(family);
      return;
    }
    for (int v = 0; v < d.set_size[static_cast<size_t>(at)]; ++v) {
      family[static_cast<size_t>(at)] = v;
      bool ok = true;
      for (Mor m = 0; m < c.morphism_count() && ok; ++m) {
        Obj s = c.src(m), t = c.tgt(m);
        if (s > at || t > at) continue;
        if (d.fn[static_cast<size_t>(m)][static_cast<size_t>(family[static_cast<size_t>(s)])] !=
            family[static_cast<size_t>(t)])
          ok = false;
      }
      if (ok) go(at + 1);
    }
    family[static_cast<size_t>(at)] = -1;
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------------------
// Skeleton and equivalence

SubCat skeleton(const CatPtr& c, const Limits& lim) {
  std::vector<Obj> rep;
  std::vector<bool> claimed(static_cast<size_t>(c->object_count()), false);
  for (Obj x = 0; x < c->object_count(); ++x) {
    if (claimed[static_cast<size_t>(x)]) continue;
    rep.push_back(x);
    for (Obj y = x; y < c->object_count(); ++y)
      if (!claimed[static_cast<size_t>(y)] && c->isomorphic_objects(x, y))
        claimed[static_cast<size_t>(y)] = true;
  }
  return full_subcategory(c, rep, lim);
}

namespace {

struct Fingerprint {
  long long aut = 0;
  std::vector<int> out_profile, in_profile;
  bool operator==(const Fingerprint& o) const {
    return aut == o.aut && out_profile == o.out_profile && in_profile == o.in_profile;
  }
  bool operator<(const Fingerprint& o) const {
    return std::tie(aut, out_profile, in_profile) < std::tie(o.aut, o.out_profile, o.in_profile);
  }
};

Fingerprint fingerprint(const FinCat& c, Obj x) {
  Fingerprint fp;
  for (Mor m : c.hom(x, x))
    if (c.is_iso(m)) ++fp.aut;
  for (Obj y = 0; y < c.object_count(); ++y) {
    fp.out_profile.push_back(static_cast<int>(c.hom(x, y).size()));
    fp.in_profile.push_back(static_cast<int>(c.hom(y, x).size()));
  }
  std::sort(fp.out_profile.begin(), fp.out_profile.end());
  std::sort(fp.in_profile.begin(), fp.in_profile.end());
  return fp;
}

// Isomorphism search between two skeletal categories.  Succeeds with object
// and morphism assignments or reports definite failure; finite and strict,
// so exhaustion is refutation.
struct IsoSearch {
  const FinCat& c;
  const FinCat& d;
  std::vector<Obj> ob_map;
  std::vector<Mor> mor_map;
  std::vector<bool> ob_used;
  std::vector<bool> mor_used;
  std::vector<Fingerprint> fp_c, fp_d;

  IsoSearch(const FinCat& cc, const FinCat& dd) : c(cc), d(dd) {
    ob_map.assign(static_cast<size_t>(c.object_count()), -1);
    mor_map.assign(static_cast<size_t>(c.morphism_count()), -1);
    ob_used.assign(static_cast<size_t>(d.object_count()), false);
    mor_used.assign(static_cast<size_t>(d.morphism_count()), false);
    for (Obj x = 0; x < c.object_count(); ++x) fp_c.push_back(fingerprint(c, x));
    for (Obj y = 0; y < d.object_count(); ++y) fp_d.push_back(fingerprint(d, y));
  }

  bool objects_compatible(Obj x, Obj y) {
    if (!(fp_c[static_cast<size_t>(x)] == fp_d[static_cast<size_t>(y)])) return false;
    for (Obj z = 0; z < c.object_count(); ++z) {
      Obj w = ob_map[static_cast<size_t>(z)];
      if (w < 0) continue;
      if (c.hom(x, z).size() != d.hom(y, w).size()) return false;
      if (c.hom(z, x).size() != d.hom(w, y).size()) return false;
    }
    return true;
  }

  bool assign_objects(Obj x) {
    if (x == c.object_count()) return assign_morphisms();
    for (Obj y = 0; y < d.object_count(); ++y) {
      if (ob_used[static_cast<size_t>(y)] || !objects_compatible(x, y)) continue;
      ob_map[static_cast<size_t>(x)] = y;
      ob_used[static_cast<size_t>(y)] = true;
      if (assign_objects(x + 1)) return true;
      ob_map[static_cast<size_t>(x)] = -1;
      ob_used[static_cast<size_t>(y)] = false;
    }
    return false;
  }

  bool pair_consistent(Mor g, Mor f) {
    if (c.tgt(f) != c.src(g)) return true;
    Mor gf = c.compose(g, f);
    Mor dgf = d.compose(mor_map[static_cast<size_t>(g)], mor_map[static_cast<size_t>(f)]);
    if (gf == kTruncated) return dgf == kTruncated;  // truncation patterns must agree
    if (dgf == kTruncated) return false;
    if (mor_map[static_cast<size_t>(gf)] >= 0) return mor_map[static_cast<size_t>(gf)] == dgf;
    // gf not yet placed: it must eventually map to dgf, so dgf may not be
    // claimed by anything else.
    return !mor_used[static_cast<size_t>(dgf)];
  }

  bool consistent_after(Mor just) {
    for (Mor other = 0; other < c.morphism_count(); ++other) {
      if (mor_map[static_cast<size_t>(other)] < 0) continue;
      if (!pair_consistent(just, other)) return false;
      if (!pair_consistent(other, just)) return false;
      // Pairs whose *composite* is the morphism just placed also become
      // checkable now.
      for (Mor f2 = 0; f2 < c.morphism_count(); ++f2) {
        if (mor_map[static_cast<size_t>(f2)] < 0) continue;
        if (c.tgt(f2) != c.src(other)) continue;
        if (c.compose(other, f2) == just && !pair_consistent(other, f2)) return false;
      }
    }
    return true;
  }

  bool assign_morphisms_from(Mor m) {
    while (m < c.morphism_count() && mor_map[static_cast<size_t>(m)] >= 0) ++m;
    if (m == c.morphism_count()) return true;
    Obj sy = ob_map[static_cast<size_t>(c.src(m))];
    Obj ty = ob_map[static_cast<size_t>(c.tgt(m))];
    for (Mor cand : d.hom(sy, ty)) {
      if (mor_used[static_cast<size_t>(cand)]) continue;
      mor_map[static_cast<size_t>(m)] = cand;
      mor_used[static_cast<size_t>(cand)] = true;
      if (consistent_after(m) && assign_morphisms_from(m + 1)) return true;
      mor_map[static_cast<size_t>(m)] = -1;
      mor_used[static_cast<size_t>(cand)] = false;
    }
    return false;
  }

  bool assign_morphisms() {
    // Identities are forced.
    std::vector<std::pair<Mor, Mor>> forced;
    for (Obj x = 0; x < c.object_count(); ++x) {
      Mor i = c.identity(x);
      Mor j = d.identity(ob_map[static_cast<size_t>(x)]);
      mor_map[static_cast<size_t>(i)] = j;
      mor_used[static_cast<size_t>(j)] = true;
      forced.push_back({i, j});
    }
    if (assign_morphisms_from(0)) return true;
    for (auto [i, j] : forced) {
      mor_map[static_cast<size_t>(i)] = -1;
      mor_used[static_cast<size_t>(j)] = false;
    }
    return false;
  }
};

}  // namespace

Verdict check_equivalence(const CatPtr& c, const CatPtr& d, Functor* witness_out,
                          const Limits& lim) {
  const char* method = "skeletonize + fingerprint + backtracking";
  SubCat sc = skeleton(c, lim);
  SubCat sd = skeleton(d, lim);
  if (sc.cat->object_count() != sd.cat->object_count())
    return Verdict::fails("iso-class counts differ: " + std::to_string(sc.cat->object_count()) +
                              " vs " + std::to_string(sd.cat->object_count()),
                          method);

  {
    std::vector<Fingerprint> a, b;
    for (Obj x = 0; x < sc.cat->object_count(); ++x) a.push_back(fingerprint(*sc.cat, x));
    for (Obj y = 0; y < sd.cat->object_count(); ++y) b.push_back(fingerprint(*sd.cat, y));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (!(a == b))
      return Verdict::fails("hom-cardinality fingerprints of iso-classes do not match", method);
  }

  IsoSearch search(*sc.cat, *sd.cat);
  if (!search.assign_objects(0))
    return Verdict::fails("exhausted isomorphism search between skeletons", method);

  if (witness_out) {
    // Witness: skeleton of C mapped isomorphically onto a skeleton of D and
    // included there; fully faithful and essentially surjective into D.
    Functor w;
    w.source = sc.cat;
    w.target = d;
    w.ob.resize(static_cast<size_t>(sc.cat->object_count()));
    w.mor.resize(static_cast<size_t>(sc.cat->morphism_count()));
    for (Obj x = 0; x < sc.cat->object_count(); ++x)
      w.ob[static_cast<size_t>(x)] =
          sd.object_in_parent[static_cast<size_t>(search.ob_map[static_cast<size_t>(x)])];
    for (Mor m = 0; m < sc.cat->morphism_count(); ++m)
      w.mor[static_cast<size_t>(m)] =
          sd.morphism_in_parent[static_cast<size_t>(search.mor_map[static_cast<size_t>(m)])];
    w.validate();
    *witness_out = std::move(w);
  }
  std::string note;
  if (!c->honest() || !d->honest())
    note = "comparison restricted to represented composites";
  return Verdict::holds(method, note);
}

}  // namespace patkit
