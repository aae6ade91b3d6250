// Multiplication by lambda = x1 a1 + x2 a2 in the Schubert basis of I2(m):
// prints each 2x2 step with its determinant next to the closed form.
//   sample_dihedral_chevalley [m]     (default 5)

#include <cstdlib>
#include <iostream>

#include "coxhodge/coxhodge.hpp"

using namespace coxhodge;

namespace {

std::string show(const QuadraticForm2& q) {
  return "(" + q.c11.to_string() + ")*a1^2 + (" + q.c12.to_string() + ")*a1*a2 + (" + q.c22.to_string() +
         ")*a2^2";
}

}  // namespace

int main(int argc, char** argv) {
  const int m = argc > 1 ? std::atoi(argv[1]) : 5;
  try {
    auto g = dihedral_group(m);
    std::cout << "I2(" << m << "), c = 2cos(pi/" << m << ")\n";
    for (int i = 1; i < m - 1; ++i) {
      DihedralStep st = dihedral_closed_forms(*g, i);
      std::cout << "\ndegree " << 2 * i << " -> " << 2 * i + 2 << "\n";
      for (int r = 0; r < 2; ++r) {
        std::cout << "  Y_" << word_string(st.targets[r]) << ":";
        for (int c = 0; c < 2; ++c) std::cout << "  " << st.entries[r][c].to_string();
        std::cout << "\n";
      }
      std::cout << "  det      " << show(st.determinant) << "\n"
                << "  expected " << show(st.expected) << "  " << (st.identity_holds() ? "ok" : "MISMATCH")
                << "\n";
    }
    if (m % 2 == 1 && m >= 3)
      std::cout << "\nodd middle matrix " << (odd_middle_matrix(m).matches() ? "matches" : "differs") << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
