#include "rumin/multi_index.hpp"

#include <algorithm>

#include "rumin/errors.hpp"

namespace rumin {

std::pair<MultiIndex, int> canonicalize(const std::vector<int>& tuple, int n) {
  for (int a : tuple)
    if (a < 1 || a > n) throw IndexOutOfRange("index " + std::to_string(a) + " not in 1.." + std::to_string(n));
  MultiIndex idx = tuple;
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return {{}, 0};
      if (idx[i] > idx[j]) sign = -sign;
    }
  std::sort(idx.begin(), idx.end());
  return {idx, sign};
}

std::uint32_t to_mask(const MultiIndex& idx) {
  std::uint32_t m = 0;
  for (int a : idx) m |= 1u << (a - 1);
  return m;
}

MultiIndex from_mask(std::uint32_t mask) {
  MultiIndex idx;
  for (int a = 1; mask; ++a, mask >>= 1)
    if (mask & 1u) idx.push_back(a);
  return idx;
}

int merge_inversions(std::uint32_t x, std::uint32_t y) {
  int inv = 0;
  for (int b = 0; b < 32; ++b)
    if (y & (1u << b)) inv += popcount(x >> (b + 1));
  return inv;
}

int position_in(std::uint32_t mask, int a) { return popcount(mask & ((1u << (a - 1)) - 1)); }

bool lex_less(std::uint32_t x, std::uint32_t y) {
  while (x && y) {
    int ax = __builtin_ctz(x), ay = __builtin_ctz(y);
    if (ax != ay) return ax < ay;
    x &= x - 1;
    y &= y - 1;
  }
  return !x && y;
}

std::vector<std::uint32_t> subsets(int n, int k) {
  std::vector<std::uint32_t> out;
  if (k < 0 || k > n) return out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (popcount(m) == k) out.push_back(m);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::string Key::str() const {
  std::string s;
  auto add = [&](const std::string& part) { s += (s.empty() ? "" : "∧") + part; };
  if (theta) add("θ");
  for (int a : from_mask(A)) add("θ^" + std::to_string(a));
  for (int b : from_mask(B)) add("θ^" + std::to_string(b) + "̄");
  return s.empty() ? "1" : s;
}

std::vector<Key> keys_of_degree(int n, int k) {
  std::vector<Key> out;
  for (int t = 0; t <= 1; ++t)
    for (int p = 0; p <= k - t; ++p)
      for (auto a : subsets(n, p))
        for (auto b : subsets(n, k - t - p)) out.push_back(Key{t == 1, a, b});
  std::sort(out.begin(), out.end(), KeyLess());
  return out;
}

std::vector<Key> keys_of_bidegree(int n, int p, int q, bool theta) {
  std::vector<Key> out;
  for (auto a : subsets(n, p))
    for (auto b : subsets(n, q)) out.push_back(Key{theta, a, b});
  std::sort(out.begin(), out.end(), KeyLess());
  return out;
}

std::pair<Key, int> wedge_keys(const Key& x, const Key& y) {
  if ((x.theta && y.theta) || (x.A & y.A) || (x.B & y.B)) return {Key{}, 0};
  int e = 0;
  if (y.theta) e += popcount(x.A) + popcount(x.B);
  e += popcount(y.A) * popcount(x.B);
  e += merge_inversions(x.A, y.A) + merge_inversions(x.B, y.B);
  return {Key{x.theta || y.theta, x.A | y.A, x.B | y.B}, (e % 2) ? -1 : 1};
}

}  // namespace rumin
