#include "core/homotopy.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace patkit {

namespace {

std::vector<Mor> non_identity_morphisms(const FinCat& c) {
  std::vector<Mor> out;
  for (Mor m = 0; m < c.morphism_count(); ++m)
    if (!c.is_identity(m)) out.push_back(m);
  return out;
}

bool connected(const FinCat& c) {
  const int n = c.object_count();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::queue<Obj> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    Obj x = q.front();
    q.pop();
    for (Mor m = 0; m < c.morphism_count(); ++m) {
      for (Obj other : {c.src(m) == x ? c.tgt(m) : -1, c.tgt(m) == x ? c.src(m) : -1}) {
        if (other >= 0 && !seen[static_cast<size_t>(other)]) {
          seen[static_cast<size_t>(other)] = 1;
          ++reached;
          q.push(other);
        }
      }
    }
  }
  return reached == n;
}

std::optional<Obj> find_initial(const FinCat& c) {
  for (Obj x = 0; x < c.object_count(); ++x) {
    bool ok = true;
    for (Obj y = 0; y < c.object_count() && ok; ++y) ok = c.hom(x, y).size() == 1;
    if (ok) return x;
  }
  return std::nullopt;
}

std::optional<Obj> find_terminal(const FinCat& c) {
  for (Obj x = 0; x < c.object_count(); ++x) {
    bool ok = true;
    for (Obj y = 0; y < c.object_count() && ok; ++y) ok = c.hom(y, x).size() == 1;
    if (ok) return x;
  }
  return std::nullopt;
}

// A directed cycle through non-identity morphisms makes the nondegenerate
// nerve infinite-dimensional.
bool has_directed_cycle(const FinCat& c) {
  const int n = c.object_count();
  std::vector<std::vector<Obj>> adj(static_cast<size_t>(n));
  for (Mor m : non_identity_morphisms(c)) {
    if (c.src(m) == c.tgt(m)) return true;
    adj[static_cast<size_t>(c.src(m))].push_back(c.tgt(m));
  }
  std::vector<int> state(static_cast<size_t>(n), 0);  // 0 fresh, 1 on stack, 2 done
  std::function<bool(Obj)> dfs = [&](Obj x) {
    state[static_cast<size_t>(x)] = 1;
    for (Obj y : adj[static_cast<size_t>(x)]) {
      if (state[static_cast<size_t>(y)] == 1) return true;
      if (state[static_cast<size_t>(y)] == 0 && dfs(y)) return true;
    }
    state[static_cast<size_t>(x)] = 2;
    return false;
  };
  for (Obj x = 0; x < n; ++x)
    if (state[static_cast<size_t>(x)] == 0 && dfs(x)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Smith normal form.  Entries start in {-2..2} (incidence matrices with
// accumulated coincident faces), so long long with smallest-pivot selection
// is comfortably safe; a guard catches the hypothetical blowup.

constexpr long long kEntryGuard = 1LL << 58;

void check_entry(long long v) {
  if (v > kEntryGuard || v < -kEntryGuard)
    throw structural_error("integer overflow risk in Smith normal form");
}

// Returns the nonzero diagonal (rank = its length, torsion = entries > 1).
std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> a) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  std::vector<long long> diag;
  size_t r = 0, c = 0;
  while (r < rows && c < cols) {
    size_t pr = r, pc = c;
    long long best = 0;
    for (size_t i = r; i < rows; ++i)
      for (size_t j = c; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < std::llabs(best))) {
          best = a[i][j];
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(a[r], a[pr]);
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][c], a[i][pc]);

    bool clean = true;
    for (size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      long long q = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) {
        a[i][j] -= q * a[r][j];
        check_entry(a[i][j]);
      }
      if (a[i][c] != 0) clean = false;
    }
    for (size_t j = c + 1; j < cols; ++j) {
      if (a[r][j] == 0) continue;
      long long q = a[r][j] / a[r][c];
      for (size_t i = r; i < rows; ++i) {
        a[i][j] -= q * a[i][c];
        check_entry(a[i][j]);
      }
      if (a[r][j] != 0) clean = false;
    }
    if (!clean) continue;  // division left remainders; re-pick a smaller pivot

    diag.push_back(std::llabs(a[r][c]));
    ++r;
    ++c;
  }
  // Normalize into a divisibility chain so reported divisors are elementary.
  for (size_t i = 0; i + 1 < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      long long g = std::gcd(diag[i], diag[j]);
      if (g == 0) continue;
      long long l = (diag[i] / g) * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

// ---------------------------------------------------------------------------
// Fundamental group via the edge-path presentation of the 2-skeleton:
// generators are the non-tree edges, one relator per 2-simplex.  Letters are
// +-(generator index + 1).

struct Presentation {
  int generators = 0;
  std::vector<std::vector<int>> relators;
};

void free_reduce(std::vector<int>& w) {
  std::vector<int> out;
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  // Cyclic reduction: a conjugate relator imposes the same relation.
  while (out.size() >= 2 && out.front() == -out.back()) {
    out.erase(out.begin());
    out.pop_back();
  }
  w = std::move(out);
}

// Substitute generator g := replacement (a word), in place, then reduce.
void substitute(std::vector<std::vector<int>>& relators, int g,
                const std::vector<int>& replacement, long long& budget) {
  std::vector<int> inverse(replacement.rbegin(), replacement.rend());
  for (int& letter : inverse) letter = -letter;
  for (auto& w : relators) {
    std::vector<int> out;
    for (int letter : w) {
      budget -= 1;
      if (letter == g)
        out.insert(out.end(), replacement.begin(), replacement.end());
      else if (letter == -g)
        out.insert(out.end(), inverse.begin(), inverse.end());
      else
        out.push_back(letter);
    }
    w = std::move(out);
    free_reduce(w);
  }
}

// Returns the number of generators left after simplification (0 = trivial
// group), or -1 when the budget ran out first.
int simplify_presentation(Presentation p, long long budget) {
  std::vector<char> alive(static_cast<size_t>(p.generators), 1);
  for (auto& w : p.relators) free_reduce(w);

  bool progress = true;
  while (progress && budget > 0) {
    progress = false;
    p.relators.erase(std::remove_if(p.relators.begin(), p.relators.end(),
                                    [](const std::vector<int>& w) { return w.empty(); }),
                     p.relators.end());

    // Length-1 relator: the generator is trivial.
    for (auto& w : p.relators) {
      if (w.size() != 1) continue;
      int g = std::abs(w[0]);
      substitute(p.relators, g, {}, budget);
      alive[static_cast<size_t>(g - 1)] = 0;
      progress = true;
      break;
    }
    if (progress) continue;

    // Length-2 relator over two distinct generators: one expresses the other.
    for (auto& w : p.relators) {
      if (w.size() != 2 || std::abs(w[0]) == std::abs(w[1])) continue;
      int b = std::abs(w[1]);
      // a^e b^d = 1  =>  b = a^(-e*d)
      int rep = (w[1] > 0) ? -w[0] : w[0];
      substitute(p.relators, b, {rep}, budget);
      alive[static_cast<size_t>(b - 1)] = 0;
      progress = true;
      break;
    }
    if (progress) continue;

    // A generator occurring exactly once in exactly one relator is free to
    // eliminate together with that relator.
    std::map<int, std::pair<int, int>> occurrences;  // gen -> (count, relator idx)
    for (size_t i = 0; i < p.relators.size(); ++i)
      for (int letter : p.relators[i]) {
        auto& rec = occurrences[std::abs(letter)];
        rec.first += 1;
        rec.second = static_cast<int>(i);
        budget -= 1;
      }
    for (const auto& [g, rec] : occurrences) {
      if (rec.first != 1) continue;
      p.relators.erase(p.relators.begin() + rec.second);
      alive[static_cast<size_t>(g - 1)] = 0;
      progress = true;
      break;
    }
  }
  int left = static_cast<int>(std::count(alive.begin(), alive.end(), 1));
  if (left == 0) return 0;        // settled, even if the budget hit zero late
  if (budget <= 0) return -1;
  return left;
}

// ---------------------------------------------------------------------------
// H1 of the classifying space, for categories whose nerve is
// infinite-dimensional.  H1(BC) is free abelian on the non-identity
// morphisms modulo [g.f] = [f] + [g] for every composable pair (with
// [identity] = 0), which only needs the composition table, not the nerve.
// Sound refutations only; requires every composite to be represented.

struct AbelianReport {
  int rank = 0;
  long long torsion = 0;  // first nontrivial divisor, 0 if none
};

AbelianReport classifying_space_h1(const FinCat& c) {
  auto edges = non_identity_morphisms(c);
  std::map<Mor, int> col;
  for (size_t i = 0; i < edges.size(); ++i) col[edges[i]] = static_cast<int>(i);

  // d1 (one row per edge, entries over vertices); self-loops give zero rows.
  std::vector<std::vector<long long>> d1;
  for (Mor m : edges) {
    std::vector<long long> row(static_cast<size_t>(c.object_count()), 0);
    row[static_cast<size_t>(c.tgt(m))] += 1;
    row[static_cast<size_t>(c.src(m))] -= 1;
    d1.push_back(std::move(row));
  }

  // d2: one row per nondegenerate 2-simplex (composable non-identity pair);
  // a composite that collapses to an identity is a degenerate face and
  // contributes nothing.
  std::vector<std::vector<long long>> d2;
  for (Mor f : edges)
    for (Mor g : edges) {
      if (c.tgt(f) != c.src(g)) continue;
      Mor gf = c.compose(g, f);
      std::vector<long long> row(edges.size(), 0);
      row[static_cast<size_t>(col[f])] += 1;
      row[static_cast<size_t>(col[g])] += 1;
      if (!c.is_identity(gf)) row[static_cast<size_t>(col[gf])] -= 1;
      d2.push_back(std::move(row));
    }

  size_t rank_d1 = smith_diagonal(std::move(d1)).size();
  auto diag2 = smith_diagonal(std::move(d2));

  AbelianReport out;
  out.rank = static_cast<int>(edges.size() - rank_d1 - diag2.size());
  for (long long d : diag2)
    if (d > 1) {
      out.torsion = d;
      break;
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Order complex

OrderComplex order_complex(const CatPtr& c, int dim_cap) {
  OrderComplex oc;
  oc.cat = c;
  oc.vertex_count = c->object_count();
  oc.dimension_cap = dim_cap;
  auto nonid = non_identity_morphisms(*c);
  if (nonid.empty()) return oc;

  std::vector<std::vector<Mor>> frontier;
  for (Mor m : nonid) frontier.push_back({m});
  oc.chains.push_back(std::move(frontier));
  while (static_cast<int>(oc.chains.size()) < dim_cap) {
    std::vector<std::vector<Mor>> next;
    for (const auto& chain : oc.chains.back()) {
      Obj end = c->tgt(chain.back());
      for (Mor m : nonid) {
        if (c->src(m) != end) continue;
        auto longer = chain;
        longer.push_back(m);
        next.push_back(std::move(longer));
      }
    }
    if (next.empty()) return oc;
    oc.chains.push_back(std::move(next));
  }
  // Cap reached: flag if anything would still extend.
  for (const auto& chain : oc.chains.back()) {
    Obj end = c->tgt(chain.back());
    for (Mor m : nonid)
      if (c->src(m) == end) {
        oc.capped = true;
        return oc;
      }
  }
  return oc;
}

long long euler_characteristic(const OrderComplex& oc) {
  long long chi = oc.vertex_count;
  long long sign = -1;
  for (const auto& layer : oc.chains) {
    chi += sign * static_cast<long long>(layer.size());
    sign = -sign;
  }
  return chi;
}

bool HomologyReport::trivial() const {
  for (int b : betti)
    if (b != 0) return false;
  for (const auto& t : torsion)
    if (!t.empty()) return false;
  return true;
}

std::string HomologyReport::describe() const {
  for (size_t i = 0; i < betti.size(); ++i) {
    if (betti[i] != 0) {
      std::ostringstream os;
      os << "reduced H_" << i << " has rank " << betti[i];
      return os.str();
    }
    if (i < torsion.size() && !torsion[i].empty()) {
      std::ostringstream os;
      os << "reduced H_" << i << " has torsion Z/" << torsion[i][0];
      return os.str();
    }
  }
  return "";
}

HomologyReport reduced_homology(const OrderComplex& oc) {
  const FinCat& c = *oc.cat;
  const int top = static_cast<int>(oc.chains.size());

  auto rank_of = [&](int d) -> size_t {
    if (d == 0) return static_cast<size_t>(oc.vertex_count);
    return oc.chains[static_cast<size_t>(d - 1)].size();
  };

  // Column index of each chain within its layer.
  std::vector<std::map<std::vector<Mor>, int>> index(static_cast<size_t>(top));
  for (int k = 0; k < top; ++k) {
    const auto& layer = oc.chains[static_cast<size_t>(k)];
    for (size_t i = 0; i < layer.size(); ++i)
      index[static_cast<size_t>(k)][layer[i]] = static_cast<int>(i);
  }

  // boundary[d]: C_d -> C_{d-1}, for d = 1..top.
  std::vector<std::vector<std::vector<long long>>> boundary(static_cast<size_t>(top) + 1);
  for (int d = 1; d <= top; ++d) {
    std::vector<std::vector<long long>> mat(rank_of(d - 1),
                                            std::vector<long long>(rank_of(d), 0));
    const auto& layer = oc.chains[static_cast<size_t>(d - 1)];
    for (size_t col = 0; col < layer.size(); ++col) {
      const auto& ch = layer[col];
      if (d == 1) {
        mat[static_cast<size_t>(c.tgt(ch[0]))][col] += 1;
        mat[static_cast<size_t>(c.src(ch[0]))][col] -= 1;
        continue;
      }
      long long sign = 1;
      for (int i = 0; i <= d; ++i, sign = -sign) {
        std::vector<Mor> face;
        face.reserve(ch.size() - 1);
        if (i == 0) {
          face.assign(ch.begin() + 1, ch.end());
        } else if (i == d) {
          face.assign(ch.begin(), ch.end() - 1);
        } else {
          face.assign(ch.begin(), ch.begin() + (i - 1));
          Mor composite = c.compose(ch[static_cast<size_t>(i)], ch[static_cast<size_t>(i - 1)]);
          if (composite == kTruncated)
            throw structural_error("cannot take nerve boundaries: composite not represented");
          face.push_back(composite);
          face.insert(face.end(), ch.begin() + (i + 1), ch.end());
        }
        auto it = index[static_cast<size_t>(d - 2)].find(face);
        if (it == index[static_cast<size_t>(d - 2)].end())
          throw structural_error("nerve face escapes the chain layer; category is not acyclic");
        mat[static_cast<size_t>(it->second)][col] += sign;
      }
    }
    boundary[static_cast<size_t>(d)] = std::move(mat);
  }

  std::vector<std::vector<long long>> diags(static_cast<size_t>(top) + 1);
  for (int d = 1; d <= top; ++d) diags[static_cast<size_t>(d)] = smith_diagonal(boundary[static_cast<size_t>(d)]);

  auto rank_boundary = [&](int d) -> size_t {
    if (d == 0) return oc.vertex_count > 0 ? 1 : 0;  // augmentation
    if (d > top) return 0;
    return diags[static_cast<size_t>(d)].size();
  };

  HomologyReport rep;
  for (int d = 0; d <= top; ++d) {
    long long beta = static_cast<long long>(rank_of(d)) -
                     static_cast<long long>(rank_boundary(d)) -
                     static_cast<long long>(rank_boundary(d + 1));
    rep.betti.push_back(static_cast<int>(beta));
    std::vector<long long> tor;
    if (d + 1 <= top)
      for (long long v : diags[static_cast<size_t>(d + 1)])
        if (v > 1) tor.push_back(v);
    rep.torsion.push_back(std::move(tor));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Posets and beat points

bool is_poset(const CatPtr& c) {
  if (!c->honest()) return false;  // hidden composites would hide relations
  for (Obj x = 0; x < c->object_count(); ++x)
    for (Obj y = 0; y < c->object_count(); ++y) {
      size_t fwd = c->hom(x, y).size();
      if (fwd > 1) return false;
      if (x != y && fwd == 1 && !c->hom(y, x).empty()) return false;
    }
  return true;
}

std::vector<Obj> beat_point_core(const CatPtr& c) {
  const int n = c->object_count();
  auto le = [&](Obj x, Obj y) { return !c->hom(x, y).empty(); };

  std::vector<char> alive(static_cast<size_t>(n), 1);
  bool removed = true;
  while (removed) {
    removed = false;
    for (Obj x = 0; x < n && !removed; ++x) {
      if (!alive[static_cast<size_t>(x)]) continue;
      std::vector<Obj> down, up;
      for (Obj y = 0; y < n; ++y) {
        if (!alive[static_cast<size_t>(y)] || y == x) continue;
        if (le(y, x)) down.push_back(y);
        if (le(x, y)) up.push_back(y);
      }
      auto has_extreme = [&](const std::vector<Obj>& part, bool maximum) {
        for (Obj m : part) {
          bool ok = true;
          for (Obj y : part)
            if (maximum ? !le(y, m) : !le(m, y)) {
              ok = false;
              break;
            }
          if (ok) return true;
        }
        return false;
      };
      if ((!down.empty() && has_extreme(down, true)) ||
          (!up.empty() && has_extreme(up, false))) {
        alive[static_cast<size_t>(x)] = 0;
        removed = true;
      }
    }
  }

  std::vector<Obj> core;
  for (Obj x = 0; x < n; ++x)
    if (alive[static_cast<size_t>(x)]) core.push_back(x);
  return core;
}

Verdict poset_core_verdict(const CatPtr& c, const Limits&) {
  if (c->object_count() == 0) return Verdict::fails("empty category", "beat-point core");
  if (!is_poset(c)) return Verdict::unknown("not a poset", "beat-point core");
  auto core = beat_point_core(c);
  if (core.size() == 1)
    return Verdict::holds("beat-point core",
                          "collapses to the single point '" + c->object_label(core[0]) + "'");
  std::ostringstream os;
  os << "core retains " << core.size() << " points";
  return Verdict::unknown(os.str(), "beat-point core");
}

// ---------------------------------------------------------------------------
// The nerve method: reduced homology, then the fundamental group.

Verdict nerve_verdict(const CatPtr& c, const Limits& lim) {
  if (c->object_count() == 0) return Verdict::fails("empty category", "nerve");
  if (!connected(*c))
    return Verdict::fails("underlying graph is disconnected", "nerve");

  if (has_directed_cycle(*c)) {
    if (!c->honest())
      return Verdict::unknown(
          "infinite-dimensional nerve and truncated composition table", "nerve");
    auto h1 = classifying_space_h1(*c);
    if (h1.rank != 0 || h1.torsion != 0) {
      std::ostringstream os;
      os << "first homology of the classifying space is nonzero (";
      if (h1.rank != 0)
        os << "rank " << h1.rank;
      else
        os << "torsion Z/" << h1.torsion;
      os << ")";
      return Verdict::fails(os.str(), "classifying-space homology");
    }
    return Verdict::unknown("infinite-dimensional nerve", "nerve");
  }

  if (!c->honest())
    return Verdict::unknown("composition table is truncated; boundaries not computable",
                            "nerve");

  auto oc = order_complex(c, lim.nerve_dim_cap);
  if (oc.capped) return Verdict::unknown("nerve dimension exceeds cap", "nerve");

  auto hom = reduced_homology(oc);
  if (!hom.trivial()) return Verdict::fails(hom.describe(), "nerve homology");

  // Homology is trivial; weak contractibility now reduces to a trivial
  // fundamental group (Hurewicz/Whitehead on a finite complex).
  if (oc.chains.empty()) return Verdict::holds("nerve", "single vertex");

  // Spanning tree over the 1-skeleton.
  const auto& edges = oc.chains[0];
  std::vector<int> letter_of_edge(edges.size(), 0);  // 0 on tree edges
  {
    std::vector<char> seen(static_cast<size_t>(oc.vertex_count), 0);
    std::vector<char> in_tree(edges.size(), 0);
    std::queue<Obj> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      Obj x = q.front();
      q.pop();
      for (size_t e = 0; e < edges.size(); ++e) {
        Obj s = c->src(edges[e][0]), t = c->tgt(edges[e][0]);
        Obj other = (s == x) ? t : (t == x ? s : -1);
        if (other < 0 || seen[static_cast<size_t>(other)]) continue;
        seen[static_cast<size_t>(other)] = 1;
        in_tree[e] = 1;
        q.push(other);
      }
    }
    int next = 1;
    for (size_t e = 0; e < edges.size(); ++e)
      if (!in_tree[e]) letter_of_edge[e] = next++;
  }

  Presentation pres;
  pres.generators = 0;
  for (int l : letter_of_edge) pres.generators = std::max(pres.generators, l);

  std::map<Mor, int> edge_index;
  for (size_t e = 0; e < edges.size(); ++e) edge_index[edges[e][0]] = static_cast<int>(e);

  if (oc.chains.size() >= 2) {
    for (const auto& tri : oc.chains[1]) {
      Mor f = tri[0], g = tri[1];
      Mor gf = c->compose(g, f);
      std::vector<int> word;
      auto push = [&](Mor m, int sign) {
        int l = letter_of_edge[static_cast<size_t>(edge_index.at(m))];
        if (l != 0) word.push_back(sign * l);
      };
      push(f, 1);
      push(g, 1);
      push(gf, -1);
      pres.relators.push_back(std::move(word));
    }
  }

  int left = simplify_presentation(std::move(pres), lim.simplification_budget);
  if (left == 0)
    return Verdict::holds("nerve homology and fundamental group",
                          "trivial reduced homology; edge-path presentation simplifies to the trivial group");
  if (left < 0)
    return Verdict::unknown("fundamental-group simplification budget exhausted", "nerve");
  std::ostringstream os;
  os << "fundamental-group presentation retains " << left << " generator(s)";
  return Verdict::unknown(os.str(), "nerve");
}

// ---------------------------------------------------------------------------
// The full ladder.

Verdict contractibility_verdict(const CatPtr& c, const Limits& lim) {
  if (c->object_count() == 0)
    return Verdict::fails("empty category", "emptiness");
  if (!connected(*c))
    return Verdict::fails("underlying graph is disconnected", "connectivity");

  if (auto x = find_initial(*c))
    return Verdict::holds("initial object", "object '" + c->object_label(*x) + "' is initial");
  if (auto x = find_terminal(*c))
    return Verdict::holds("terminal object", "object '" + c->object_label(*x) + "' is terminal");

  if (is_poset(c)) {
    auto core = beat_point_core(c);
    if (core.size() == 1)
      return Verdict::holds("beat-point core",
                            "collapses to '" + c->object_label(core[0]) + "'");
    // The core has the same weak homotopy type; run the nerve machinery there.
    auto sub = full_subcategory(c, core, lim);
    return nerve_verdict(sub.cat, lim);
  }

  return nerve_verdict(c, lim);
}

// ---------------------------------------------------------------------------
// Coinitiality via comma fibers.

namespace {

Verdict fiberwise(const Functor& f, const Limits& lim, bool over) {
  f.validate();
  const CatPtr& d = f.target;
  std::vector<Verdict> parts;
  for (Obj x = 0; x < d->object_count(); ++x) {
    Functor at = constant_functor(terminal_cat(), d, x);
    CommaCat comma = over ? comma_category(f, at, lim) : comma_category(at, f, lim);
    Verdict v = contractibility_verdict(comma.cat, lim);
    if (!v.ok())
      v.witness = "fiber over '" + d->object_label(x) + "': " + v.witness;
    parts.push_back(std::move(v));
  }
  return combine_all(parts, over ? "comma fibers (slices)" : "comma fibers (coslices)");
}

}  // namespace

Verdict is_coinitial(const Functor& f, const Limits& lim) { return fiberwise(f, lim, true); }

Verdict is_cofinal(const Functor& f, const Limits& lim) { return fiberwise(f, lim, false); }

}  // namespace patkit
