#include "mso/ramsey.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "mso/algebra.hpp"
#include "mso/errors.hpp"

namespace mso {

SemigroupTable::SemigroupTable(int size) : size_(size), table_(static_cast<std::size_t>(size * size), -1) {}

std::optional<int> SemigroupTable::sum(int a, int b) const {
  const int c = table_[static_cast<std::size_t>(a * size_ + b)];
  if (c < 0) return std::nullopt;
  return c;
}

void SemigroupTable::set_sum(int a, int b, int c) { table_[static_cast<std::size_t>(a * size_ + b)] = c; }

int SemigroupTable::add_element() {
  std::vector<int> grown(static_cast<std::size_t>((size_ + 1) * (size_ + 1)), -1);
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b)
      grown[static_cast<std::size_t>(a * (size_ + 1) + b)] = table_[static_cast<std::size_t>(a * size_ + b)];
  table_ = std::move(grown);
  return size_++;
}

bool SemigroupTable::associative() const {
  for (int x = 0; x < size_; ++x)
    for (int y = 0; y < size_; ++y) {
      const auto xy = sum(x, y);
      if (!xy) continue;
      for (int z = 0; z < size_; ++z) {
        const auto yz = sum(y, z);
        if (!yz) continue;
        const auto l = sum(*xy, z);
        const auto r = sum(x, *yz);
        if (l && r && *l != *r) return false;
      }
    }
  return true;
}

SemigroupTable SemigroupTable::cyclic_group(int n) {
  SemigroupTable s(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s.set_sum(a, b, (a + b) % n);
  return s;
}

SemigroupTable SemigroupTable::from_transformations(const std::vector<std::vector<int>>& maps) {
  using Map = std::vector<int>;
  const auto then = [](const Map& f, const Map& g) {
    Map h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = g[static_cast<std::size_t>(f[i])];
    return h;
  };
  std::vector<Map> elems;
  std::map<Map, int> index;
  const auto intern = [&](const Map& m) {
    auto [it, fresh] = index.emplace(m, static_cast<int>(elems.size()));
    if (fresh) elems.push_back(m);
    return it->second;
  };
  for (const auto& m : maps) intern(m);
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      intern(then(elems[i], elems[j]));
      intern(then(elems[j], elems[i]));
    }
  const int n = static_cast<int>(elems.size());
  SemigroupTable s(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      s.set_sum(a, b, index.at(then(elems[static_cast<std::size_t>(a)], elems[static_cast<std::size_t>(b)])));
  return s;
}

AdditiveColoring::AdditiveColoring(int length, SemigroupTable table)
    : length_(length),
      table_(std::move(table)),
      colors_(static_cast<std::size_t>(length > 1 ? length * (length - 1) / 2 : 0), -1) {}

std::size_t AdditiveColoring::index(int i, int j) const {
  if (!(0 <= i && i < j && j < length_)) throw DomainError("coloring pair out of range");
  // Row i holds the pairs (i, i+1) .. (i, length-1).
  return static_cast<std::size_t>(i * (2 * length_ - i - 1) / 2 + (j - i - 1));
}

int AdditiveColoring::color(int i, int j) const { return colors_[index(i, j)]; }
void AdditiveColoring::set_color(int i, int j, int c) { colors_[index(i, j)] = c; }

AdditiveColoring AdditiveColoring::from_steps(const SemigroupTable& table, const std::vector<int>& steps) {
  const int n = static_cast<int>(steps.size()) + 1;
  AdditiveColoring c(n, table);
  for (int i = 0; i + 1 < n; ++i) {
    int acc = steps[static_cast<std::size_t>(i)];
    c.set_color(i, i + 1, acc);
    for (int j = i + 2; j < n; ++j) {
      const auto s = table.sum(acc, steps[static_cast<std::size_t>(j - 1)]);
      if (!s) throw DomainError("from_steps: undefined sum");
      acc = *s;
      c.set_color(i, j, acc);
    }
  }
  return c;
}

AdditivityReport check_additive(const AdditiveColoring& c) {
  const int n = c.length();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int z = y + 1; z < n; ++z) {
        const auto s = c.table().sum(c.color(x, y), c.color(y, z));
        if (!s || *s != c.color(x, z)) return {false, {x, y, z}};
      }
  return {};
}

int homogeneous_bound(int elements, int k) { return elements * (k - 1) * (elements + 1) + 1; }

std::optional<HomogeneousSet> homogeneous_subset(const AdditiveColoring& c, int k) {
  if (const auto r = check_additive(c); !r.additive)
    throw DomainError("homogeneous_subset: coloring is not additive at (" + std::to_string(r.counterexample[0]) +
                      ", " + std::to_string(r.counterexample[1]) + ", " + std::to_string(r.counterexample[2]) + ")");
  const int n = c.length();
  HomogeneousSet best;
  if (n >= 2) best = {{0, 1}, c.color(0, 1)};
  if (n == 1) best = {{0}, -1};

  // Three or more points force an idempotent color e, and then a chain whose
  // consecutive pairs all have color e is homogeneous by additivity.  The
  // longest such chain per e is a longest path in a DAG.
  const SemigroupTable& s = c.table();
  for (int e = 0; e < s.size(); ++e) {
    if (s.sum(e, e) != e) continue;
    std::vector<int> len(static_cast<std::size_t>(n), 1);
    std::vector<int> prev(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < j; ++i)
        if (c.color(i, j) == e && len[static_cast<std::size_t>(i)] + 1 > len[static_cast<std::size_t>(j)]) {
          len[static_cast<std::size_t>(j)] = len[static_cast<std::size_t>(i)] + 1;
          prev[static_cast<std::size_t>(j)] = i;
        }
    const auto top = std::max_element(len.begin(), len.end());
    if (top == len.end() || *top <= static_cast<int>(best.positions.size())) continue;
    HomogeneousSet h{{}, e};
    for (int j = static_cast<int>(top - len.begin()); j >= 0; j = prev[static_cast<std::size_t>(j)])
      h.positions.push_back(j);
    std::reverse(h.positions.begin(), h.positions.end());
    best = std::move(h);
  }
  if (static_cast<int>(best.positions.size()) < k) return std::nullopt;
  return best;
}

bool is_homogeneous(const AdditiveColoring& c, const HomogeneousSet& h) {
  for (std::size_t a = 0; a < h.positions.size(); ++a)
    for (std::size_t b = a + 1; b < h.positions.size(); ++b) {
      if (h.positions[a] >= h.positions[b]) return false;
      if (c.color(h.positions[a], h.positions[b]) != h.color) return false;
    }
  return true;
}

std::pair<int, int> idempotent_power(int t, const SemigroupTable& s) {
  int p = t;
  for (int i = 1; i <= s.size(); ++i) {
    const auto pp = s.sum(p, p);
    if (!pp) throw DomainError("idempotent_power: undefined sum");
    if (*pp == p) return {i, p};
    const auto next = s.sum(p, t);
    if (!next) throw DomainError("idempotent_power: undefined sum");
    p = *next;
  }
  throw DomainError("idempotent_power: table is not associative");
}

IntervalColoring interval_coloring(const LabeledFiniteOrder& w, Signature sig) {
  const int n = static_cast<int>(w.size()) + 1;
  IntervalColoring out;
  std::unordered_map<Theory, int> index;
  const auto intern = [&](const Theory& t) {
    auto [it, fresh] = index.emplace(t, static_cast<int>(out.elements.size()));
    if (fresh) out.elements.push_back(t);
    return it->second;
  };
  std::vector<int> colors;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      LabeledFiniteOrder part{w.predicates, {w.letters.begin() + a, w.letters.begin() + b}};
      colors.push_back(intern(eval_finite(part, sig)));
    }
  const int m = static_cast<int>(out.elements.size());
  std::vector<std::pair<std::pair<int, int>, int>> sums;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      sums.push_back({{x, y}, intern(compose_sum(out.elements[static_cast<std::size_t>(x)],
                                                 out.elements[static_cast<std::size_t>(y)]))});
  SemigroupTable table(static_cast<int>(out.elements.size()));
  for (const auto& [xy, z] : sums) table.set_sum(xy.first, xy.second, z);
  out.coloring = AdditiveColoring(n, std::move(table));
  std::size_t k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out.coloring.set_color(a, b, colors[k++]);
  return out;
}

SemigroupTable random_semigroup(std::mt19937_64& rng, int max_size) {
  const auto below = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  for (;;) {
    if (below(4) == 0) return SemigroupTable::cyclic_group(1 + below(max_size));
    const int points = 2 + below(2);
    std::vector<std::vector<int>> maps(static_cast<std::size_t>(1 + below(2)));
    for (auto& m : maps) {
      m.resize(static_cast<std::size_t>(points));
      for (auto& v : m) v = below(points);
    }
    SemigroupTable s = SemigroupTable::from_transformations(maps);
    if (s.size() <= max_size) return s;
  }
}

}  // namespace mso
