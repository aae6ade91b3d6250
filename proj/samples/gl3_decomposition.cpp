// Splits the Bott-Samelson module of s1 s2 s1 in type A2 into indecomposables
// and names each summand.

#include <iostream>

#include "coxhodge/coxhodge.hpp"

using namespace coxhodge;

int main() {
  auto a2 = CoxeterSystem::from_type("A2");
  const Word w{0, 1, 0};
  GradedModule bs = bs_module(*a2, w);
  std::cout << "BS(" << word_string(w) << ") graded dims:";
  for (size_t d : bs.piece_dims()) std::cout << " " << d;
  std::cout << "\n";

  Decomposition dec = decompose(bs);
  SoergelCatalog cat(a2);
  cat.label(dec);
  for (const auto& s : dec.summands) {
    std::cout << "  " << s.label << "  shift " << s.shift << "  dims";
    for (size_t d : s.module.piece_dims()) std::cout << " " << d;
    std::cout << "\n";
  }
  std::cout << describe(dec) << "\n"
            << "idempotents verified: " << (verify_decomposition(bs, dec) ? "yes" : "no") << "\n";
  return 0;
}
