#pragma once

#include <utility>
#include <vector>

namespace dbr {

// 0-based permutation stored by images: p[i] is the image of i.
using Perm = std::vector<int>;
using Word = std::vector<int>;

bool is_permutation(const Perm& p);
Perm identity_perm(int n);
Perm compose(const Perm& s, const Perm& t);  // (s o t)(i) = s(t(i))
Perm inverse(const Perm& p);

// Sign s with v_{p(0)} ... v_{p(n-1)} = s * v_0 ... v_{n-1} in the graded
// symmetric algebra, where degs[i] is the degree of v_i.
// Counted as the product of (-1)^{|v_a||v_b|} over the inversions of p.
int koszul_sign(const Perm& p, const std::vector<int>& degs);

// All (i, j)-unshuffles of i + j letters, lexicographic in the images.
std::vector<Perm> unshuffles(int i, int j);
std::vector<Perm> all_permutations(int n);

// Sorts a word of basis indices. Returns the sign s with word = s * sorted
// in the graded symmetric algebra, or 0 when an odd index repeats.
std::pair<int, Word> canonical_order(const Word& word, const std::vector<int>& basis_deg);

}  // namespace dbr
