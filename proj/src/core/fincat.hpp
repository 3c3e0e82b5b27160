#pragma once

// Exact finite-category kernel.
//
// Categories here are strict and tiny: object/morphism lists plus a dense
// composition table, with every structural law checked by exhaustive scan.
// One wrinkle matters throughout: some categories we care about are honest
// truncations of infinite ones (span categories under a cardinality cap, for
// instance), where a composite of two in-cap morphisms can land outside the
// cap.  The table records that as kTruncated rather than inventing a wrong
// answer, and every algorithm in the kernel treats such entries as "exists,
// but not represented here".  A category with no such entries is `honest()`
// and behaves exactly like a finite category.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/verdict.hpp"

namespace patkit {

struct structural_error : std::runtime_error {
  explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// Size caps and search budgets.  Defaults are desk scale: everything is meant
// to be exhaustively checkable in well under a second.
struct Limits {
  int max_objects = 64;
  int max_morphisms = 4096;
  int nerve_dim_cap = 8;
  long long simplification_budget = 50000;  // Tietze-move budget for pi_1 checks
};

using Obj = std::int32_t;
using Mor = std::int32_t;

inline constexpr Mor kNoComposite = -1;  // source/target mismatch
inline constexpr Mor kTruncated = -2;    // composite exists beyond the represented fragment

class FinCat;
using CatPtr = std::shared_ptr<const FinCat>;

class FinCat {
 public:
  struct MorData {
    std::string label;
    Obj src = 0;
    Obj tgt = 0;
  };

  int object_count() const { return static_cast<int>(objects_.size()); }
  int morphism_count() const { return static_cast<int>(mors_.size()); }

  const std::string& object_label(Obj x) const { return objects_[static_cast<size_t>(x)]; }
  const std::string& morphism_label(Mor m) const { return mors_[static_cast<size_t>(m)].label; }
  Obj src(Mor m) const { return mors_[static_cast<size_t>(m)].src; }
  Obj tgt(Mor m) const { return mors_[static_cast<size_t>(m)].tgt; }

  Mor identity(Obj x) const { return identity_[static_cast<size_t>(x)]; }
  bool is_identity(Mor m) const { return identity_[static_cast<size_t>(src(m))] == m && src(m) == tgt(m); }

  std::optional<Obj> object_index(const std::string& label) const;
  std::optional<Mor> morphism_index(const std::string& label) const;

  // g after f.  Returns kNoComposite when tgt(f) != src(g), kTruncated when
  // the composite exists but is not represented.
  Mor compose(Mor g, Mor f) const {
    if (tgt(f) != src(g)) return kNoComposite;
    return table_[static_cast<size_t>(g) * mors_.size() + static_cast<size_t>(f)];
  }

  // Composes a chain given target-to-source (last entry applied first).
  // Returns kTruncated as soon as any step leaves the represented fragment.
  Mor compose_chain(const std::vector<Mor>& gs) const;

  std::vector<Mor> hom(Obj x, Obj y) const;
  std::vector<Mor> morphisms_from(Obj x) const;
  std::vector<Mor> morphisms_to(Obj y) const;

  bool is_iso(Mor m) const { return inverse_[static_cast<size_t>(m)] >= 0; }
  std::optional<Mor> inverse(Mor m) const {
    Mor i = inverse_[static_cast<size_t>(m)];
    if (i < 0) return std::nullopt;
    return i;
  }
  bool isomorphic_objects(Obj x, Obj y) const;

  bool honest() const { return truncated_pair_count_ == 0; }
  long long truncated_pair_count() const { return truncated_pair_count_; }
  const std::string& truncation_note() const { return truncation_note_; }

  // Exhaustive well-formedness scan: index ranges, unique labels, identity
  // laws, associativity on every triple where both association orders are
  // defined, and consistency of sentinel entries.  Throws structural_error.
  void validate(const Limits& lim = {}) const;

  // Human-readable one-line summary, used in error messages and reports.
  std::string summary() const;

 private:
  friend class FinCatBuilder;

  std::vector<std::string> objects_;
  std::vector<MorData> mors_;
  std::vector<Mor> identity_;        // per object
  std::vector<Mor> table_;           // row-major: table_[g * n + f] = g∘f
  std::vector<Mor> inverse_;         // per morphism; -1 if not invertible
  long long truncated_pair_count_ = 0;
  std::string truncation_note_;
};

// Accumulates objects and morphisms under arbitrary string labels, then
// `build()` sorts everything into canonical (lexicographic) order, fills the
// composition table, computes inverses, and validates.  All construction in
// the toolkit goes through this, which is what makes outputs deterministic
// regardless of the order in which a construction happens to emit cells.
class FinCatBuilder {
 public:
  explicit FinCatBuilder(std::string name = "") : name_(std::move(name)) {}

  int add_object(const std::string& label);
  int add_morphism(const std::string& label, const std::string& src, const std::string& tgt);
  bool has_object(const std::string& label) const { return ob_index_.count(label) > 0; }
  bool has_morphism(const std::string& label) const { return mor_index_.count(label) > 0; }

  void set_identity(const std::string& obj, const std::string& mor);
  void set_composite(const std::string& g, const std::string& f, const std::string& gf);
  void set_truncated(const std::string& g, const std::string& f);
  void append_truncation_note(const std::string& note);

  int object_count() const { return static_cast<int>(obs_.size()); }

  // Sorts, checks that every composable pair was given a composite (or marked
  // truncated), and validates the result.
  CatPtr build(const Limits& lim = {}) const;

 private:
  struct PMor {
    std::string label, src, tgt;
  };
  std::string name_;
  std::vector<std::string> obs_;
  std::vector<PMor> pmors_;
  std::map<std::string, int> ob_index_;
  std::map<std::string, int> mor_index_;
  std::map<std::string, std::string> identity_of_;         // object label -> morphism label
  std::map<std::pair<std::string, std::string>, std::string> comp_;  // (g,f) -> g∘f; "" = truncated
  std::string truncation_note_;
};

// ---------------------------------------------------------------------------
// Functors and natural transformations

struct Functor {
  CatPtr source, target;
  std::vector<Obj> ob;   // indexed by source object
  std::vector<Mor> mor;  // indexed by source morphism

  Obj on_ob(Obj x) const { return ob[static_cast<size_t>(x)]; }
  Mor on_mor(Mor m) const { return mor[static_cast<size_t>(m)]; }

  // Preservation of identities, endpoints, and all composites defined on both
  // sides.  A pair defined in the source but truncated in the target is an
  // error: the source asserts an in-cap composite whose image the target
  // claims to be out of cap.
  void validate() const;
};

Functor identity_functor(const CatPtr& c);
Functor compose_functors(const Functor& g, const Functor& f);  // g∘f
Functor constant_functor(const CatPtr& c, const CatPtr& d, Obj at);

// Structural equality: same labels, endpoints, identities, and tables.
// Pointer equality short-circuits; constructions that rebuild a category
// produce distinct pointers but structurally equal results.
bool same_category(const CatPtr& a, const CatPtr& b);

bool is_fully_faithful(const Functor& f);
bool is_essentially_surjective(const Functor& f);

// Componentwise data of a natural transformation between parallel functors.
struct NatTrans {
  std::vector<Mor> component;  // per source object, a target morphism F(x) -> G(x)

  // Naturality squares are checked on every source morphism whose two
  // composites are both defined; `require_iso` additionally demands each
  // component be invertible.
  void validate(const Functor& f, const Functor& g, bool require_iso) const;
};

// ---------------------------------------------------------------------------
// Comma constructions

struct SubCat {
  CatPtr cat;
  Functor inclusion;               // cat -> parent
  std::vector<Obj> object_in_parent;
  std::vector<Mor> morphism_in_parent;
};

struct CommaCat {
  CatPtr cat;
  Functor to_left;    // projection to source(F)
  Functor to_right;   // projection to source(G)
  std::vector<Mor> arrow_at;  // per comma object, the structure morphism F c -> G d
};

// Objects (c, d, m: F c -> G d); morphisms are pairs making the square
// commute.  Candidate squares whose commutativity would require a truncated
// composite are dropped and recorded in the truncation note.
CommaCat comma_category(const Functor& f, const Functor& g, const Limits& lim = {});

// Same, but the structure morphism is required to be invertible.  This is the
// pseudo-pullback: a commuting square is "cartesian up to equivalence" when
// the comparison functor into the iso-comma is an equivalence.
CommaCat iso_comma(const Functor& f, const Functor& g, const Limits& lim = {});

CommaCat slice_over(const CatPtr& c, Obj x, const Limits& lim = {});   // C_{/x}
CommaCat slice_under(const CatPtr& c, Obj x, const Limits& lim = {});  // C_{x/}

// ---------------------------------------------------------------------------
// Subcategories, opposites, products

SubCat full_subcategory(const CatPtr& c, const std::vector<Obj>& objects, const Limits& lim = {});

// `morphisms` must contain all identities of `objects` and be closed under
// defined composition; pairs composing out of the selection are an error,
// pairs truncated in the parent stay truncated.
SubCat subcategory(const CatPtr& c, const std::vector<Obj>& objects,
                   const std::vector<Mor>& morphisms, const Limits& lim = {});

SubCat max_subgroupoid(const CatPtr& c, const Limits& lim = {});

CatPtr opposite(const CatPtr& c);

struct ProductCat {
  CatPtr cat;
  Functor to_left, to_right;
  std::vector<std::pair<Obj, Obj>> object_pairs;
  std::vector<std::pair<Mor, Mor>> morphism_pairs;
  Obj pair_object(Obj a, Obj b) const;
  Mor pair_morphism(Mor a, Mor b) const;
};
ProductCat product_cat(const CatPtr& a, const CatPtr& b, const Limits& lim = {});

CatPtr terminal_cat();
CatPtr empty_cat();
CatPtr discrete_cat(const std::vector<std::string>& labels, const Limits& lim = {});

// ---------------------------------------------------------------------------
// Set-valued diagrams and their limits

struct FinSetDiagram {
  CatPtr index;
  std::vector<int> set_size;              // value at object x is {0, ..., size-1}
  std::vector<std::vector<int>> fn;       // per index morphism, a function table

  void validate() const;  // strict functoriality on defined composites
};

struct FinSetLimit {
  std::vector<std::vector<int>> families;  // each family indexed by index objects, sorted lex
};

FinSetLimit finset_limit(const FinSetDiagram& d);

// ---------------------------------------------------------------------------
// Equivalence checking

// Holds with a witness functor that is fully faithful and essentially
// surjective (defined on a skeleton of C, included into D); Fails with an
// obstruction: iso-class count mismatch, hom-cardinality fingerprint
// mismatch, or an exhausted isomorphism search between skeletons (which for
// finite strict categories is a genuine refutation, not a timeout).
Verdict check_equivalence(const CatPtr& c, const CatPtr& d, Functor* witness_out = nullptr,
                          const Limits& lim = {});

// Least-index representatives of isomorphism classes, as a full subcategory.
SubCat skeleton(const CatPtr& c, const Limits& lim = {});

}  // namespace patkit
