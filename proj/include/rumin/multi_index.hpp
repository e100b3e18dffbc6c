#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rumin {

// Strictly increasing indices in {1..n}.
using MultiIndex = std::vector<int>;

// Sorts an arbitrary tuple; sign is the permutation parity, 0 on repeats.
std::pair<MultiIndex, int> canonicalize(const std::vector<int>& tuple, int n);

inline int popcount(std::uint32_t m) { return __builtin_popcount(m); }
std::uint32_t to_mask(const MultiIndex& idx);
MultiIndex from_mask(std::uint32_t mask);
// Number of pairs (a in x, b in y) with a > b: the sign exponent of merging x then y.
int merge_inversions(std::uint32_t x, std::uint32_t y);
// Position (0-based) of index a within the sorted mask.
int position_in(std::uint32_t mask, int a);
// All subsets of {1..n} of size k, in lexicographic order of the sorted tuple.
std::vector<std::uint32_t> subsets(int n, int k);
bool lex_less(std::uint32_t x, std::uint32_t y);

// Monomial θ? ∧ θ^A ∧ θ^{B̄}.
struct Key {
  bool theta = false;
  std::uint32_t A = 0;
  std::uint32_t B = 0;

  int degree() const { return (theta ? 1 : 0) + popcount(A) + popcount(B); }
  int p() const { return popcount(A); }
  int q() const { return popcount(B); }
  friend bool operator==(const Key& x, const Key& y) {
    return x.theta == y.theta && x.A == y.A && x.B == y.B;
  }
  friend bool operator!=(const Key& x, const Key& y) { return !(x == y); }
  std::string str() const;
};

// (hasTheta, A, B) lexicographic.
struct KeyLess {
  bool operator()(const Key& x, const Key& y) const {
    if (x.theta != y.theta) return !x.theta;
    if (x.A != y.A) return lex_less(x.A, y.A);
    if (x.B != y.B) return lex_less(x.B, y.B);
    return false;
  }
};

// All keys of the given degree on C^n, sorted by KeyLess.
std::vector<Key> keys_of_degree(int n, int k);
std::vector<Key> keys_of_bidegree(int n, int p, int q, bool theta);

// Sign and key of key1 ∧ key2 (sign 0 on a repeated factor).
std::pair<Key, int> wedge_keys(const Key& x, const Key& y);

}  // namespace rumin
