// Hard Lefschetz / Hodge-Riemann on every D_w of a finite group, for rho and
// a few sampled ample weights.
//   sample_lefschetz_sweep [type]     (default I2:5)

#include <iostream>
#include <memory>
#include <string>

#include "coxhodge/coxhodge.hpp"

using namespace coxhodge;

int main(int argc, char** argv) {
  const std::string type = argc > 1 ? argv[1] : "I2:5";
  try {
    auto g = std::make_shared<const FiniteCoxeterGroup>(CoxeterSystem::from_type(type));
    const CoxeterSystem& sys = g->system();
    std::vector<AmpleWeight> weights{rho_weight(sys)};
    for (auto& w : sample_ample_weights(sys, 2)) weights.push_back(w);
    size_t passed = 0, total = 0;
    for (size_t x = 0; x < g->order(); ++x) {
      const Word& w = g->word(x);
      if (w.empty()) continue;
      SoergelModule d = soergel_module(sys, w);
      for (const auto& lam : weights) {
        LefschetzReport r = check_module(d.module, lam, static_cast<int>(w.size()));
        ++total;
        passed += r.pass;
        std::cout << (r.pass ? "pass" : "FAIL") << "  w = " << word_string(w) << "  lambda = (";
        for (size_t k = 0; k < r.lambda.size(); ++k) std::cout << (k ? ", " : "") << r.lambda[k];
        std::cout << ")\n";
      }
    }
    std::cout << passed << "/" << total << " checks pass\n";
    return passed == total ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
