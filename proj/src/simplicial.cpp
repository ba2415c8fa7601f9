#include "dama/simplicial.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

#include "dama/error.hpp"

namespace dama {

namespace {

inline VertexSet bit(int v) { return VertexSet{1} << v; }

std::vector<VertexSet> maximal_only(std::vector<VertexSet> faces) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  std::vector<VertexSet> out;
  for (VertexSet f : faces) {
    bool dominated = false;
    for (VertexSet g : faces) {
      if (g != f && contains(g, f)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

void sort_sets(std::vector<VertexSet>& sets) {
  std::sort(sets.begin(), sets.end(), lex_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

// Splitting a part along a simplex can leave a piece (an edge, say) that
// also sits inside an irreducible factor found on the other side.
void keep_maximal(std::vector<VertexSet>& sets) {
  std::vector<VertexSet> out;
  for (VertexSet s : sets) {
    bool inside = std::any_of(sets.begin(), sets.end(),
                              [s](VertexSet t) { return t != s && contains(t, s); });
    if (!inside) out.push_back(s);
  }
  sets = std::move(out);
}

}  // namespace

std::vector<int> members(VertexSet s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

bool lex_less(VertexSet a, VertexSet b) {
  while (a != 0 && b != 0) {
    int x = std::countr_zero(a);
    int y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

SimplicialComplex::SimplicialComplex(std::vector<std::string> vertices,
                                     const std::vector<std::vector<std::string>>& faces) {
  if (vertices.empty()) throw InputError("vertices", "complex requires at least one vertex");
  if (vertices.size() > kMaxVertices)
    throw InputError("vertices", "complex exceeds " + std::to_string(kMaxVertices) + " vertices");
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw InputError("vertices", "duplicate vertex identifier");
  names_ = std::move(vertices);
  std::vector<VertexSet> masks;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].empty())
      throw InputError("maximal_faces/" + std::to_string(i), "empty face");
    VertexSet m = 0;
    for (const auto& n : faces[i]) {
      int idx = index_of(n);
      if (idx < 0)
        throw InputError("maximal_faces/" + std::to_string(i), "unknown vertex '" + n + "'");
      m |= bit(idx);
    }
    masks.push_back(m);
  }
  finish(std::move(masks));
}

SimplicialComplex SimplicialComplex::from_masks(std::vector<std::string> names,
                                                const std::vector<VertexSet>& faces) {
  if (names.empty()) throw PreconditionError("complex requires at least one vertex");
  SimplicialComplex c;
  c.names_ = std::move(names);
  c.finish(faces);
  return c;
}

void SimplicialComplex::finish(std::vector<VertexSet> faces) {
  faces_ = maximal_only(std::move(faces));
  VertexSet covered = 0;
  for (VertexSet f : faces_) covered |= f;
  if (covered != all()) {
    int missing = std::countr_zero(all() & ~covered);
    throw InputError("maximal_faces", "vertex '" + names_[missing] + "' lies in no face");
  }
  adjacency_.assign(names_.size(), 0);
  for (VertexSet f : faces_) {
    for (int v : members(f)) adjacency_[v] |= f & ~bit(v);
  }
}

VertexSet SimplicialComplex::all() const {
  return names_.size() == 64 ? ~VertexSet{0} : (bit(static_cast<int>(names_.size())) - 1);
}

bool SimplicialComplex::is_simplex(VertexSet s) const {
  return std::any_of(faces_.begin(), faces_.end(), [s](VertexSet f) { return contains(f, s); });
}

std::vector<std::string> SimplicialComplex::names_of(VertexSet s) const {
  std::vector<std::string> out;
  for (int v : members(s)) out.push_back(names_[v]);
  return out;
}

VertexSet SimplicialComplex::mask_of(const std::vector<std::string>& names) const {
  VertexSet m = 0;
  for (const auto& n : names) {
    int idx = index_of(n);
    if (idx < 0) throw InputError(n, "unknown vertex '" + n + "'");
    m |= bit(idx);
  }
  return m;
}

int SimplicialComplex::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

bool is_flag(const SimplicialComplex& c) {
  // Every maximal clique of the 1-skeleton must be a simplex (Bron-Kerbosch).
  bool ok = true;
  auto expand = [&](auto&& self, VertexSet r, VertexSet p, VertexSet x) -> void {
    if (!ok) return;
    if (p == 0 && x == 0) {
      if (!c.is_simplex(r)) ok = false;
      return;
    }
    int pivot = std::countr_zero(p | x);
    for (int v : members(p & ~c.neighbours(pivot))) {
      self(self, r | bit(v), p & c.neighbours(v), x & c.neighbours(v));
      p &= ~bit(v);
      x |= bit(v);
    }
  };
  expand(expand, 0, c.all(), 0);
  return ok;
}

bool is_chordal(const SimplicialComplex& c) {
  // Maximum cardinality search; chordal iff each vertex's earlier neighbours
  // form a clique.
  const int n = static_cast<int>(c.size());
  std::vector<int> weight(n, 0);
  VertexSet numbered = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if ((numbered >> v) & 1U) continue;
      if (best < 0 || weight[v] > weight[best]) best = v;
    }
    VertexSet earlier = c.neighbours(best) & numbered;
    for (int u : members(earlier)) {
      if (!contains(c.neighbours(u) | bit(u), earlier)) return false;
    }
    numbered |= bit(best);
    for (int u : members(c.neighbours(best) & ~numbered)) ++weight[u];
  }
  return true;
}

SimplicialComplex full_subcomplex(const SimplicialComplex& c, VertexSet vs) {
  vs &= c.all();
  if (vs == 0) throw PreconditionError("full subcomplex requires a nonempty vertex set");
  std::vector<int> keep = members(vs);
  std::vector<std::string> names;
  for (int v : keep) names.push_back(c.vertices()[v]);
  std::vector<VertexSet> faces;
  for (VertexSet f : c.maximal_faces()) {
    VertexSet g = f & vs;
    if (g == 0) continue;
    VertexSet local = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if ((g >> keep[i]) & 1U) local |= bit(static_cast<int>(i));
    }
    faces.push_back(local);
  }
  return SimplicialComplex::from_masks(std::move(names), faces);
}

std::vector<VertexSet> simplices_within(const SimplicialComplex& c, VertexSet within) {
  std::unordered_set<VertexSet> seen;
  seen.insert(0);
  for (VertexSet f : c.maximal_faces()) {
    VertexSet g = f & within;
    // Enumerate all submasks of g.
    if (seen.contains(g)) continue;
    for (VertexSet s = g; s != 0; s = (s - 1) & g) seen.insert(s);
  }
  std::vector<VertexSet> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<VertexSet> components(const SimplicialComplex& c, VertexSet within) {
  std::vector<VertexSet> out;
  VertexSet left = within;
  while (left != 0) {
    VertexSet comp = left & (~left + 1);
    VertexSet frontier = comp;
    while (frontier != 0) {
      VertexSet next = 0;
      for (int v : members(frontier)) next |= c.neighbours(v);
      next &= within & ~comp;
      comp |= next;
      frontier = next;
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

std::vector<Splitting> enumerate_splittings(const SimplicialComplex& c) {
  return enumerate_splittings(c, c.all());
}

std::vector<Splitting> enumerate_splittings(const SimplicialComplex& c, VertexSet within) {
  constexpr std::size_t kFullBipartitionLimit = 12;
  std::vector<Splitting> out;
  for (VertexSet sigma : simplices_within(c, within)) {
    std::vector<VertexSet> comps = components(c, within & ~sigma);
    const std::size_t m = comps.size();
    if (m < 2) continue;
    auto emit = [&](VertexSet group) {
      VertexSet a = sigma | group;
      VertexSet b = sigma | (within & ~sigma & ~group);
      if (lex_less(b, a)) std::swap(a, b);
      out.push_back({a, b, sigma});
    };
    if (m <= kFullBipartitionLimit) {
      // comps[0] always sits in the first group; the rest range over all
      // subsets that leave the second group nonempty.
      const std::uint32_t rest = (1U << (m - 1)) - 1;
      for (std::uint32_t pick = 0; pick < rest; ++pick) {
        VertexSet group = comps[0];
        for (std::size_t i = 1; i < m; ++i) {
          if ((pick >> (i - 1)) & 1U) group |= comps[i];
        }
        emit(group);
      }
    } else {
      for (VertexSet comp : comps) emit(comp);
    }
  }
  auto key_less = [](const Splitting& x, const Splitting& y) {
    if (x.separator != y.separator) return lex_less(x.separator, y.separator);
    if (x.part1 != y.part1) return lex_less(x.part1, y.part1);
    return lex_less(x.part2, y.part2);
  };
  std::sort(out.begin(), out.end(), key_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_irreducible(const SimplicialComplex& c) { return is_irreducible(c, c.all()); }

bool is_irreducible(const SimplicialComplex& c, VertexSet within) {
  for (VertexSet sigma : simplices_within(c, within)) {
    if (components(c, within & ~sigma).size() >= 2) return false;
  }
  return true;
}

namespace {

using Memo = std::map<VertexSet, std::vector<VertexSet>>;

template <class Pick>
const std::vector<VertexSet>& factors_of(const SimplicialComplex& c, VertexSet within,
                                         Memo& memo, Pick&& pick) {
  auto it = memo.find(within);
  if (it != memo.end()) return it->second;
  std::vector<VertexSet> result;
  std::vector<Splitting> splits = enumerate_splittings(c, within);
  if (splits.empty()) {
    result.push_back(within);
  } else {
    const Splitting& s = pick(splits);
    const VertexSet p1 = s.part1;
    const VertexSet p2 = s.part2;
    std::vector<VertexSet> left = factors_of(c, p1, memo, pick);
    const std::vector<VertexSet>& right = factors_of(c, p2, memo, pick);
    result = std::move(left);
    result.insert(result.end(), right.begin(), right.end());
    sort_sets(result);
    keep_maximal(result);
  }
  return memo.emplace(within, std::move(result)).first->second;
}

}  // namespace

std::vector<VertexSet> terminal_factors(const SimplicialComplex& c) {
  Memo memo;
  auto first = [](const std::vector<Splitting>& s) -> const Splitting& { return s.front(); };
  return factors_of(c, c.all(), memo, first);
}

std::vector<VertexSet> terminal_factors(const SimplicialComplex& c, std::mt19937_64& rng) {
  // No memo sharing across differently-ordered runs: each call draws afresh.
  Memo memo;
  auto random_pick = [&rng](const std::vector<Splitting>& s) -> const Splitting& {
    std::uniform_int_distribution<std::size_t> d(0, s.size() - 1);
    return s[d(rng)];
  };
  return factors_of(c, c.all(), memo, random_pick);
}

std::vector<VertexSet> maximally_full_irreducible(const SimplicialComplex& c,
                                                  std::size_t bound) {
  if (c.size() > bound || c.size() > 30)
    throw PreconditionError("brute-force enumeration limited to " + std::to_string(bound) +
                            " vertices");
  std::vector<VertexSet> irreducible;
  const VertexSet top = c.all();
  for (VertexSet s = 1; s <= top; ++s) {
    if (is_irreducible(c, s)) irreducible.push_back(s);
  }
  std::vector<VertexSet> out;
  for (VertexSet s : irreducible) {
    bool maximal = std::none_of(irreducible.begin(), irreducible.end(),
                                [s](VertexSet t) { return t != s && contains(t, s); });
    if (maximal) out.push_back(s);
  }
  sort_sets(out);
  return out;
}

bool is_infinity_large(const SimplicialComplex& c) { return is_flag(c) && is_chordal(c); }

}  // namespace dama
