#pragma once

// Permutation groups for strongly valid randomization of rows and columns:
// affine groups over prime and prime-power fields, closure of user-supplied
// generators, the double-transitivity test, and seeded randomization.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sqarray/core.hpp"

namespace sqarray {

/// Bijection on {0, ..., t-1}; image(x) is where x goes.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> hit(images_.size(), 0);
    for (int y : images_) {
      if (y < 0 || y >= static_cast<int>(images_.size()) || hit[y])
        throw StructuralError("not a permutation of 0.." + std::to_string(images_.size() - 1));
      hit[y] = 1;
    }
  }

  static Permutation identity(int t) {
    std::vector<int> m(t);
    for (int x = 0; x < t; ++x) m[x] = x;
    return Permutation(std::move(m));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int x) const { return images_[x]; }
  const std::vector<int>& images() const { return images_; }

  /// x -> after(before(x)).
  static Permutation compose(const Permutation& after, const Permutation& before) {
    std::vector<int> m(before.images_.size());
    for (std::size_t x = 0; x < m.size(); ++x) m[x] = after.images_[before.images_[x]];
    return Permutation(std::move(m));
  }

  Permutation inverse() const {
    std::vector<int> m(images_.size());
    for (std::size_t x = 0; x < m.size(); ++x) m[images_[x]] = static_cast<int>(x);
    return Permutation(std::move(m));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

enum class GroupProvenance { AffinePrime, AffinePrimePower, GeneratorClosure };

inline const char* to_string(GroupProvenance p) {
  switch (p) {
    case GroupProvenance::AffinePrime: return "affine_prime";
    case GroupProvenance::AffinePrimePower: return "affine_prime_power";
    case GroupProvenance::GeneratorClosure: return "generator_closure";
  }
  return "?";
}

inline constexpr std::size_t kGroupSizeCap = 1'000'000;

/// Explicitly listed permutation group, elements in sorted order.
class PermutationGroup {
 public:
  PermutationGroup(int degree, std::vector<Permutation> elements, GroupProvenance provenance)
      : degree_(degree), elements_(std::move(elements)), provenance_(provenance) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    for (const auto& e : elements_)
      if (e.degree() != degree_) throw StructuralError("element degree differs from group degree");
  }

  int degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const Permutation& element(std::size_t i) const { return elements_[i]; }
  GroupProvenance provenance() const { return provenance_; }

  bool contains(const Permutation& p) const {
    return std::binary_search(elements_.begin(), elements_.end(), p);
  }

 private:
  int degree_;
  std::vector<Permutation> elements_;
  GroupProvenance provenance_;
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// x -> a x + b mod t, a != 0, for prime t.
inline PermutationGroup affine_group(int t) {
  if (!is_prime(t))
    throw StructuralError("affine group needs prime t (got " + std::to_string(t) +
                          "); use affine_prime_power_group or a generator file");
  std::vector<Permutation> elements;
  elements.reserve(static_cast<std::size_t>(t) * (t - 1));
  for (int a = 1; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      std::vector<int> m(t);
      for (int x = 0; x < t; ++x) m[x] = (a * x + b) % t;
      elements.emplace_back(std::move(m));
    }
  return PermutationGroup(t, std::move(elements), GroupProvenance::AffinePrime);
}

/// GF(p^e) with elements numbered by their base-p coefficient digits
/// (c0 + c1 p + c2 p^2 + ...), multiplication modulo a fixed irreducible.
class GaloisField {
 public:
  /// `modulus` holds the low-order coefficients of a monic degree-e polynomial.
  GaloisField(int p, std::vector<int> modulus) : p_(p), e_(static_cast<int>(modulus.size())) {
    if (!is_prime(p)) throw StructuralError("field characteristic must be prime");
    q_ = 1;
    for (int i = 0; i < e_; ++i) q_ *= p_;
    add_.assign(static_cast<std::size_t>(q_) * q_, 0);
    mul_.assign(static_cast<std::size_t>(q_) * q_, 0);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b) {
        auto da = digits(a), db = digits(b);
        std::vector<int> sum(e_);
        for (int i = 0; i < e_; ++i) sum[i] = (da[i] + db[i]) % p_;
        add_[idx(a, b)] = number(sum);
        std::vector<int> prod(2 * e_ - 1, 0);
        for (int i = 0; i < e_; ++i)
          for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        // x^e = -(modulus), reduce from the top.
        for (int deg = 2 * e_ - 2; deg >= e_; --deg) {
          int c = prod[deg];
          if (!c) continue;
          prod[deg] = 0;
          for (int i = 0; i < e_; ++i)
            prod[deg - e_ + i] = ((prod[deg - e_ + i] - c * modulus[i]) % p_ + p_) % p_;
        }
        prod.resize(e_);
        mul_[idx(a, b)] = number(prod);
      }
    for (int a = 1; a < q_; ++a) {
      bool invertible = false;
      for (int b = 1; b < q_ && !invertible; ++b) invertible = mul(a, b) == 1;
      if (!invertible) throw StructuralError("modulus is not irreducible");
    }
  }

  /// Built-in moduli for p in {2, 3, 5} and degree 1..4.
  static GaloisField of_order(int q) {
    static const std::map<int, std::pair<int, std::vector<int>>> table = {
        {2, {2, {0}}},          {3, {3, {0}}},         {5, {5, {0}}},
        {4, {2, {1, 1}}},       {8, {2, {1, 1, 0}}},   {16, {2, {1, 1, 0, 0}}},
        {9, {3, {1, 0}}},       {27, {3, {1, 2, 0}}},  {81, {3, {2, 0, 0, 2}}},
        {25, {5, {2, 4}}},      {125, {5, {3, 3, 0}}}, {625, {5, {2, 4, 4, 0}}},
    };
    auto it = table.find(q);
    if (it == table.end())
      throw StructuralError("no built-in field of order " + std::to_string(q) +
                            " (prime powers of 2, 3, 5 up to degree 4)");
    return GaloisField(it->second.first, it->second.second);
  }

  int characteristic() const { return p_; }
  int degree() const { return e_; }
  int order() const { return q_; }
  int add(int a, int b) const { return add_[idx(a, b)]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * q_ + b; }
  std::vector<int> digits(int a) const {
    std::vector<int> d(e_);
    for (int i = 0; i < e_; ++i, a /= p_) d[i] = a % p_;
    return d;
  }
  int number(const std::vector<int>& d) const {
    int a = 0;
    for (int i = e_ - 1; i >= 0; --i) a = a * p_ + d[i];
    return a;
  }

  int p_;
  int e_;
  int q_ = 1;
  std::vector<int> add_;
  std::vector<int> mul_;
};

/// Returns {p, e} with t = p^e, or {0, 0} if t is not a prime power.
inline std::pair<int, int> prime_power(int t) {
  for (int p = 2; p <= t; ++p) {
    if (t % p) continue;
    int e = 0;
    while (t % p == 0) {
      t /= p;
      ++e;
    }
    return t == 1 ? std::pair{p, e} : std::pair{0, 0};
  }
  return {0, 0};
}

/// x -> a x + b over GF(p^e), a != 0; points are the field's element numbers.
inline PermutationGroup affine_prime_power_group(int t) {
  auto [p, e] = prime_power(t);
  if (p == 0) throw StructuralError(std::to_string(t) + " is not a prime power");
  if (e < 2) throw StructuralError(std::to_string(t) + " is prime; use affine_group");
  const GaloisField field = GaloisField::of_order(t);
  std::vector<Permutation> elements;
  elements.reserve(static_cast<std::size_t>(t) * (t - 1));
  for (int a = 1; a < t; ++a)
    for (int b = 0; b < t; ++b) {
      std::vector<int> m(t);
      for (int x = 0; x < t; ++x) m[x] = field.add(field.mul(a, x), b);
      elements.emplace_back(std::move(m));
    }
  return PermutationGroup(t, std::move(elements), GroupProvenance::AffinePrimePower);
}

/// The affine group AGL(1, t) when t is a prime power. Other sizes have no
/// built-in doubly transitive group and are refused.
inline PermutationGroup standard_group(int t) {
  if (is_prime(t)) return affine_group(t);
  std::string reason = "not a prime power";
  if (prime_power(t).first != 0) {
    try {
      return affine_prime_power_group(t);
    } catch (const StructuralError& e) {
      reason = e.what();
    }
  }
  throw RefusedError("no built-in doubly transitive group of degree " + std::to_string(t) + " (" +
                     reason + "); supply generators with --group file:<path>");
}

/// Subgroup generated by `generators`, by breadth-first closure. Throws
/// RefusedError once more than `cap` elements have been found.
inline PermutationGroup closure_from_generators(int t, const std::vector<Permutation>& generators,
                                                std::size_t cap = kGroupSizeCap) {
  for (const auto& g : generators)
    if (g.degree() != t)
      throw StructuralError("generator of degree " + std::to_string(g.degree()) +
                            " for a group of degree " + std::to_string(t));
  std::set<Permutation> seen{Permutation::identity(t)};
  std::vector<Permutation> frontier{Permutation::identity(t)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& h : frontier)
      for (const auto& g : generators) {
        auto product = Permutation::compose(g, h);
        if (seen.insert(product).second) {
          if (seen.size() > cap)
            throw RefusedError("group closure exceeded cap of " + std::to_string(cap) +
                               " elements (partial size " + std::to_string(seen.size()) + ")");
          next.push_back(std::move(product));
        }
      }
    frontier = std::move(next);
  }
  return PermutationGroup(t, std::vector<Permutation>(seen.begin(), seen.end()),
                          GroupProvenance::GeneratorClosure);
}

/// Transitive on ordered pairs of distinct points: the orbit of (0, 1)
/// has all t(t-1) pairs.
inline bool is_doubly_transitive(const PermutationGroup& g) {
  const int t = g.degree();
  if (t < 2) return false;
  std::vector<char> hit(static_cast<std::size_t>(t) * t, 0);
  std::size_t count = 0;
  for (const auto& e : g.elements()) {
    auto& h = hit[static_cast<std::size_t>(e(0)) * t + e(1)];
    if (!h) {
      h = 1;
      ++count;
    }
  }
  return count == static_cast<std::size_t>(t) * (t - 1);
}

/// mt19937_64 with rejection sampling for bounded integers, so a seed yields
/// the same draws on every standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Moves row x to rows(x) and column y to columns(y).
inline SquareArrayDesign permute(const SquareArrayDesign& sq, const Permutation& rows,
                                 const Permutation& columns) {
  const int t = sq.t();
  if (rows.degree() != t || columns.degree() != t)
    throw StructuralError("permutation degree does not match design size " + std::to_string(t));
  std::vector<Cell> grid(static_cast<std::size_t>(t) * t);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < t; ++c) grid[static_cast<std::size_t>(rows(r)) * t + columns(c)] = sq.at(r, c);
  return SquareArrayDesign(t, sq.k(), std::move(grid));
}

struct Randomization {
  SquareArrayDesign design;
  Permutation rows;
  Permutation columns;
};

/// Draws row and column permutations independently and uniformly from `g`.
inline Randomization randomize_with(const SquareArrayDesign& sq, const PermutationGroup& g,
                                    SeededRng& rng) {
  if (g.degree() != sq.t())
    throw StructuralError("group degree " + std::to_string(g.degree()) +
                          " does not match design size " + std::to_string(sq.t()));
  const Permutation& rows = g.element(rng.index(g.order()));
  const Permutation& columns = g.element(rng.index(g.order()));
  return {permute(sq, rows, columns), rows, columns};
}

inline SquareArrayDesign randomize(const SquareArrayDesign& sq, const PermutationGroup& g,
                                   std::uint64_t seed) {
  SeededRng rng(seed);
  return randomize_with(sq, g, rng).design;
}

}  // namespace sqarray
