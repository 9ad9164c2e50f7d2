#include "adam.hpp"

#include <cmath>

namespace fc2n {

void adam_step(const std::vector<Parameter*>& params, AdamHyper& hyper) {
  hyper.step_count += 1;
  const real t = static_cast<real>(hyper.step_count);
  const real corr1 = real(1) - std::pow(hyper.beta1, t);
  const real corr2 = real(1) - std::pow(hyper.beta2, t);

  for (Parameter* p : params) {
    real* v = p->value.data();
    real* g = p->grad.data();
    real* m1 = p->adam_m.data();
    real* m2 = p->adam_v.data();
    const std::size_t n = p->value.size();
    for (std::size_t i = 0; i < n; ++i) {
      m1[i] = hyper.beta1 * m1[i] + (real(1) - hyper.beta1) * g[i];
      m2[i] = hyper.beta2 * m2[i] + (real(1) - hyper.beta2) * g[i] * g[i];
      const real mhat = m1[i] / corr1;
      const real vhat = m2[i] / corr2;
      v[i] -= hyper.lr * mhat / (std::sqrt(vhat) + hyper.eps);
      g[i] = 0;
    }
  }
}

}  // namespace fc2n
