// Lists the multiplier classes of cyclic designs for t rows and k controls,
// then builds the best one as a square array.
//
//   sample_cyclic_catalog [t] [k]

#include <cstdlib>
#include <iostream>

#include "sqarray/sqarray.hpp"

int main(int argc, char** argv) {
  using namespace sqarray;
  const int t = argc > 1 ? std::atoi(argv[1]) : 12;
  const int k = argc > 2 ? std::atoi(argv[2]) : 3;

  for (const auto& c : equivalence_classes(t, k)) {
    std::cout << c.representative().to_string();
    if (c.connected)
      std::cout << "  A_tt " << c.metrics.a_tt << "  A_ct " << c.metrics.a_ct;
    else
      std::cout << "  disconnected";
    std::cout << '\n';
  }

  const auto best = min_metric_search(t, k);
  const auto aux = cyclic_auxiliary(t, best.best.representative().initial_block());
  const auto sq = to_square_array(aux);
  std::cout << "\nbest: " << best.best.representative().to_string() << '\n' << render(sq);

  // The closed form and the full pseudoinverse agree.
  const auto direct = direct_metrics(sq);
  std::cout << "A_tt closed form " << best.metrics.a_tt << ", direct " << direct.a_tt << '\n';
}
