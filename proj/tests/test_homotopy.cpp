#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "core/fincat.hpp"
#include "core/homotopy.hpp"

using namespace patkit;

// ---------------------------------------------------------------------------
// Fixtures

namespace {

CatPtr chain_poset(int k) {
  FinCatBuilder b("chain" + std::to_string(k));
  std::vector<std::string> lab;
  for (int i = 0; i < k; ++i) lab.push_back("c" + std::to_string(i));
  for (auto& l : lab) {
    b.add_object(l);
    b.add_morphism("id_" + l, l, l);
    b.set_identity(l, "id_" + l);
  }
  auto le = [&](int i, int j) { return "le" + std::to_string(i) + "_" + std::to_string(j); };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) b.add_morphism(le(i, j), lab[i], lab[j]);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) b.set_composite(le(j, l), le(i, j), le(i, l));
  return b.build();
}

CatPtr z2_groupoid() {
  FinCatBuilder b("BZ2");
  b.add_object("*");
  b.add_morphism("e", "*", "*");
  b.add_morphism("s", "*", "*");
  b.set_identity("*", "e");
  b.set_composite("s", "s", "e");
  return b.build();
}

CatPtr walking_iso() {
  FinCatBuilder b("walking_iso");
  b.add_object("a");
  b.add_object("b");
  b.add_morphism("1a", "a", "a");
  b.add_morphism("1b", "b", "b");
  b.add_morphism("f", "a", "b");
  b.add_morphism("g", "b", "a");
  b.set_identity("a", "1a");
  b.set_identity("b", "1b");
  b.set_composite("g", "f", "1a");
  b.set_composite("f", "g", "1b");
  return b.build();
}

// Four points a, b < x, y with all four relations; the order complex is a
// circle.
CatPtr circle_poset() {
  FinCatBuilder b("circle");
  for (const char* o : {"a", "b", "x", "y"}) {
    b.add_object(o);
    b.add_morphism(std::string("id_") + o, o, o);
    b.set_identity(o, std::string("id_") + o);
  }
  b.add_morphism("ax", "a", "x");
  b.add_morphism("ay", "a", "y");
  b.add_morphism("bx", "b", "x");
  b.add_morphism("by", "b", "y");
  return b.build();
}

// l -> m <- r
CatPtr zigzag() {
  FinCatBuilder b("zigzag");
  for (const char* o : {"l", "m", "r"}) {
    b.add_object(o);
    b.add_morphism(std::string("id_") + o, o, o);
    b.set_identity(o, std::string("id_") + o);
  }
  b.add_morphism("lm", "l", "m");
  b.add_morphism("rm", "r", "m");
  return b.build();
}

// Poset from a reflexive-transitive relation on n points labeled p0..p{n-1}.
CatPtr poset_from_relation(const std::vector<std::vector<char>>& le, const std::string& name) {
  const int n = static_cast<int>(le.size());
  FinCatBuilder b(name);
  auto lab = [](int i) { return "p" + std::to_string(i); };
  auto mor = [](int i, int j) { return "le" + std::to_string(i) + "_" + std::to_string(j); };
  for (int i = 0; i < n; ++i) {
    b.add_object(lab(i));
    b.add_morphism("id_" + lab(i), lab(i), lab(i));
    b.set_identity(lab(i), "id_" + lab(i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (le[static_cast<size_t>(i)][static_cast<size_t>(j)]) b.add_morphism(mor(i, j), lab(i), lab(j));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (le[static_cast<size_t>(i)][static_cast<size_t>(j)] &&
            le[static_cast<size_t>(j)][static_cast<size_t>(k)])
          b.set_composite(mor(j, k), mor(i, j), mor(i, k));
  return b.build();
}

CatPtr random_poset(std::mt19937_64& rng, int max_n) {
  const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_n - 1));
  std::vector<std::vector<char>> le(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) le[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) le[static_cast<size_t>(i)][static_cast<size_t>(j)] = (rng() % 100) < 35;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[static_cast<size_t>(i)][static_cast<size_t>(k)] &&
            le[static_cast<size_t>(k)][static_cast<size_t>(j)])
          le[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  return poset_from_relation(le, "rand");
}

long long alternating_betti_sum(const HomologyReport& h) {
  long long acc = 0, sign = 1;
  for (int b : h.betti) {
    acc += sign * b;
    sign = -sign;
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Contractibility ladder

TEST_CASE("poset with an initial element holds by the initial-object rule") {
  FinCatBuilder b("vee");
  for (const char* o : {"bot", "u", "v"}) {
    b.add_object(o);
    b.add_morphism(std::string("id_") + o, o, o);
    b.set_identity(o, std::string("id_") + o);
  }
  b.add_morphism("bu", "bot", "u");
  b.add_morphism("bv", "bot", "v");
  auto c = b.build();

  auto v = contractibility_verdict(c);
  CHECK(v.ok());
  CHECK(v.method == "initial object");
}

TEST_CASE("zigzag of three interval inclusions is weakly contractible") {
  auto v = contractibility_verdict(zigzag());
  CHECK(v.ok());
  CHECK(v.method == "terminal object");
  // The beat-point route agrees.
  auto p = poset_core_verdict(zigzag());
  CHECK(p.ok());
}

TEST_CASE("four-point circle poset fails with first homology of rank 1") {
  auto c = circle_poset();

  auto v = contractibility_verdict(c);
  CHECK(v.failed());
  CHECK(v.witness == "reduced H_1 has rank 1");
  CHECK(v.method == "nerve homology");

  // No beat points: the core is the whole poset, so that method alone cannot
  // decide.
  auto core = beat_point_core(c);
  CHECK(core.size() == 4);
  auto p = poset_core_verdict(c);
  CHECK(p.unknown());

  auto oc = order_complex(c, 8);
  CHECK(oc.chains.size() == 1);
  CHECK(oc.chains[0].size() == 4);
  CHECK(euler_characteristic(oc) == 0);
}

TEST_CASE("empty and disconnected categories fail immediately") {
  CHECK(contractibility_verdict(empty_cat()).failed());
  auto two = discrete_cat({"u", "v"});
  auto v = contractibility_verdict(two);
  CHECK(v.failed());
  CHECK(v.method == "connectivity");
}

TEST_CASE("one-object Z/2 groupoid is refuted through its classifying space") {
  auto v = contractibility_verdict(z2_groupoid());
  CHECK(v.failed());
  CHECK(v.method == "classifying-space homology");
  CHECK(v.witness.find("torsion Z/2") != std::string::npos);
}

TEST_CASE("walking isomorphism holds, and its classifying space is not misread") {
  auto c = walking_iso();
  CHECK(contractibility_verdict(c).ok());

  // Bypassing the initial-object shortcut: the cycle route must not report
  // nonzero first homology here (the two triangle cells kill the loop).
  auto v = nerve_verdict(c);
  CHECK(v.unknown());
  CHECK(v.witness == "infinite-dimensional nerve");
}

TEST_CASE("idempotent endomorphism stays unknown") {
  FinCatBuilder b("idem");
  b.add_object("*");
  b.add_morphism("e", "*", "*");
  b.add_morphism("z", "*", "*");
  b.set_identity("*", "e");
  b.set_composite("z", "z", "z");
  auto v = contractibility_verdict(b.build());
  CHECK(v.unknown());
  CHECK(v.witness == "infinite-dimensional nerve");
}

TEST_CASE("truncated composition table downgrades the nerve route to unknown") {
  FinCatBuilder b("trunc3");
  for (const char* o : {"x", "y", "z"}) {
    b.add_object(o);
    b.add_morphism(std::string("id_") + o, o, o);
    b.set_identity(o, std::string("id_") + o);
  }
  b.add_morphism("f", "x", "y");
  b.add_morphism("g", "y", "z");
  b.set_truncated("g", "f");
  auto c = b.build();

  CHECK_FALSE(is_poset(c));
  auto v = contractibility_verdict(c);
  CHECK(v.unknown());
}

TEST_CASE("deep chain holds by initial object while the raw nerve route hits the cap") {
  auto c = chain_poset(10);
  CHECK(contractibility_verdict(c).ok());
  auto v = nerve_verdict(c);
  CHECK(v.unknown());
  CHECK(v.witness == "nerve dimension exceeds cap");
}

TEST_CASE("simplex-shaped chain resolves through homology and the fundamental group") {
  auto c = chain_poset(3);
  auto oc = order_complex(c, 8);
  REQUIRE(oc.chains.size() == 2);
  CHECK(oc.chains[0].size() == 3);
  CHECK(oc.chains[1].size() == 1);
  CHECK(euler_characteristic(oc) == 1);
  CHECK(reduced_homology(oc).trivial());

  auto v = nerve_verdict(c);
  CHECK(v.ok());
  CHECK(v.method == "nerve homology and fundamental group");
}

// ---------------------------------------------------------------------------
// Coinitiality

TEST_CASE("identity functors are coinitial and cofinal") {
  auto c = chain_poset(3);
  CHECK(is_coinitial(identity_functor(c)).ok());
  CHECK(is_cofinal(identity_functor(c)).ok());
}

TEST_CASE("inclusion of the bottom of a chain is coinitial; the top is cofinal") {
  auto c = chain_poset(3);
  auto pt = terminal_cat();

  Functor bottom = constant_functor(pt, c, *c->object_index("c0"));
  CHECK(is_coinitial(bottom).ok());
  CHECK(is_cofinal(bottom).failed());  // nothing maps from c1 down to c0

  Functor top = constant_functor(pt, c, *c->object_index("c2"));
  CHECK(is_cofinal(top).ok());
  auto v = is_coinitial(top);
  CHECK(v.failed());
  CHECK(v.witness.find("fiber over 'c0'") != std::string::npos);
}

// The slice of pointed C2-sets at U = (free orbit) + (fixed orbit): orbits
// mapping to U over the orbit category, opposed.  The two summand inclusions
// form a coinitial subcategory.
TEST_CASE("orbit-summand inclusions are coinitial in the opposed slice over C2") {
  FinCatBuilder b("slice_C2_U");
  for (const char* o : {"f_id", "f_swap", "f_col", "t"}) b.add_object(o);
  b.add_morphism("1f_id", "f_id", "f_id");
  b.add_morphism("1f_swap", "f_swap", "f_swap");
  b.add_morphism("1f_col", "f_col", "f_col");
  b.add_morphism("1t", "t", "t");
  b.set_identity("f_id", "1f_id");
  b.set_identity("f_swap", "1f_swap");
  b.set_identity("f_col", "1f_col");
  b.set_identity("t", "1t");
  // The free orbit's swap exchanges the two maps onto the free summand and
  // acts as an automorphism over the collapsed one.
  b.add_morphism("sw12", "f_id", "f_swap");
  b.add_morphism("sw21", "f_swap", "f_id");
  b.add_morphism("sigma", "f_col", "f_col");
  b.add_morphism("col", "f_col", "t");
  b.set_composite("sw21", "sw12", "1f_id");
  b.set_composite("sw12", "sw21", "1f_swap");
  b.set_composite("sigma", "sigma", "1f_col");
  b.set_composite("col", "sigma", "col");
  auto slice = b.build();
  auto d = opposite(slice);

  auto orbs = discrete_cat({"orbF", "orbT"});
  Functor incl;
  incl.source = orbs;
  incl.target = d;
  incl.ob.assign(2, -1);
  incl.mor.assign(2, -1);
  incl.ob[static_cast<size_t>(*orbs->object_index("orbF"))] = *d->object_index("f_id");
  incl.ob[static_cast<size_t>(*orbs->object_index("orbT"))] = *d->object_index("t");
  incl.mor[static_cast<size_t>(orbs->identity(*orbs->object_index("orbF")))] =
      d->identity(*d->object_index("f_id"));
  incl.mor[static_cast<size_t>(orbs->identity(*orbs->object_index("orbT")))] =
      d->identity(*d->object_index("t"));
  incl.validate();

  CHECK(is_coinitial(incl).ok());

  // The free summand alone misses the collapsed maps: its fiber over 't' in
  // the opposed slice is empty.
  Functor only_free = constant_functor(terminal_cat(), d, *d->object_index("f_id"));
  CHECK(is_coinitial(only_free).failed());
}

// ---------------------------------------------------------------------------
// Cross-method properties

TEST_CASE("verdicts agree between a category and its opposite") {
  for (const auto& c :
       {chain_poset(3), circle_poset(), zigzag(), z2_groupoid(), walking_iso()}) {
    auto v = contractibility_verdict(c);
    auto w = contractibility_verdict(opposite(c));
    CHECK(v.status == w.status);
  }
}

TEST_CASE("beat-point core and nerve methods never contradict on random posets") {
  std::mt19937_64 rng(20260821);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_poset(rng, 8);
    auto byCore = poset_core_verdict(c);
    auto byNerve = nerve_verdict(c);
    CAPTURE(trial);
    CAPTURE(byCore.witness);
    CAPTURE(byNerve.witness);
    CHECK_FALSE((byCore.ok() && byNerve.failed()));
    CHECK_FALSE((byCore.failed() && byNerve.ok()));

    auto v = contractibility_verdict(c);
    auto w = contractibility_verdict(opposite(c));
    CHECK(v.status == w.status);
  }
}

TEST_CASE("Euler characteristic matches the alternating Betti sum on random posets") {
  std::mt19937_64 rng(97531);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = random_poset(rng, 8);
    auto oc = order_complex(c, 8);
    REQUIRE_FALSE(oc.capped);
    auto h = reduced_homology(oc);
    CAPTURE(trial);
    // chi = 1 + sum (-1)^i reduced-betti_i holds componentwise per connected
    // piece; reduced_homology folds components into reduced H_0, so the
    // global identity still holds.
    CHECK(euler_characteristic(oc) == 1 + alternating_betti_sum(h));
    if (nerve_verdict(c).failed()) CHECK_FALSE(h.trivial());
  }
}
