#include "dbr/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dbr {

bool is_permutation(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& s, const Perm& t) {
  if (s.size() != t.size()) throw std::invalid_argument("compose: size mismatch");
  Perm r(s.size());
  for (size_t i = 0; i < t.size(); ++i) r[i] = s[t[i]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

int koszul_sign(const Perm& p, const std::vector<int>& degs) {
  if (p.size() != degs.size()) throw std::invalid_argument("koszul_sign: size mismatch");
  if (!is_permutation(p)) throw std::invalid_argument("koszul_sign: not a permutation");
  int parity = 0;
  const size_t n = p.size();
  for (size_t a = 0; a < n; ++a) {
    if ((degs[p[a]] & 1) == 0) continue;
    for (size_t b = a + 1; b < n; ++b)
      if (p[a] > p[b] && (degs[p[b]] & 1)) parity ^= 1;
  }
  return parity ? -1 : 1;
}

std::vector<Perm> unshuffles(int i, int j) {
  if (i < 0 || j < 0) throw std::invalid_argument("unshuffles: negative block");
  const int n = i + j;
  std::vector<Perm> out;
  // choose the image set of the first block; the rest is forced
  std::vector<int> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + i, 1);
  do {
    Perm p;
    p.reserve(n);
    for (int k = 0; k < n; ++k)
      if (mask[k]) p.push_back(k);
    for (int k = 0; k < n; ++k)
      if (!mask[k]) p.push_back(k);
    out.push_back(std::move(p));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<Perm> all_permutations(int n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::pair<int, Word> canonical_order(const Word& word, const std::vector<int>& basis_deg) {
  const int n = static_cast<int>(word.size());
  Perm order = identity_perm(n);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return word[a] < word[b]; });
  std::vector<int> degs(n);
  for (int k = 0; k < n; ++k) degs[k] = basis_deg.at(word[k]);
  Word sorted(n);
  for (int k = 0; k < n; ++k) sorted[k] = word[order[k]];
  for (int k = 0; k + 1 < n; ++k)
    if (sorted[k] == sorted[k + 1] && (basis_deg[sorted[k]] & 1)) return {0, sorted};
  return {koszul_sign(order, degs), sorted};
}

}  // namespace dbr
