// Randomizes a cyclic layout for the field with the affine group, or with
// PSL(2,11) generators for t = 12, and reports phi_2 before and after.
//
//   sample_randomize_field [seed]

#include <cstdlib>
#include <iostream>

#include "sqarray/sqarray.hpp"

int main(int argc, char** argv) {
  using namespace sqarray;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  const auto sq13 = to_square_array(cyclic_auxiliary(13, {0, 1, 3, 9}));
  const auto g13 = standard_group(13);
  const auto field13 = randomize(sq13, g13, seed);
  std::cout << "t=13, affine group of order " << g13.order() << '\n'
            << render(field13) << "phi2 " << phi2(sq13) << " -> " << phi2(field13) << "\n\n";

  // x -> x + 1 and x -> -1/x on the projective line over GF(11), infinity = 11.
  std::vector<int> shift(12), invert(12);
  for (int x = 0; x < 11; ++x) {
    shift[x] = (x + 1) % 11;
    int inv = 1;
    while (x && (x * inv) % 11 != 1) ++inv;
    invert[x] = x == 0 ? 11 : (11 - inv) % 11;
  }
  shift[11] = 11;
  invert[11] = 0;
  const auto psl = closure_from_generators(12, {Permutation(shift), Permutation(invert)});
  std::cout << "PSL(2,11) order " << psl.order() << ", doubly transitive "
            << std::boolalpha << is_doubly_transitive(psl) << '\n';

  const auto sq12 = to_square_array(cyclic_auxiliary(12, {0, 3, 7}));
  const auto field12 = randomize(sq12, psl, seed);
  std::cout << render(field12);
  const auto before = direct_metrics(sq12);
  const auto after = direct_metrics(field12);
  std::cout << "A_tt " << before.a_tt << " -> " << after.a_tt << '\n';
}
