#pragma once

#include <cstdint>
#include <vector>

#include "autograd.hpp"

namespace fc2n {

struct AdamHyper {
  real lr = real(2e-4);
  real beta1 = real(0.9);
  real beta2 = real(0.999);
  real eps = real(1e-8);
  std::int64_t step_count = 0;  // completed steps, drives bias correction
};

// Standard Adam update with bias correction; increments hyper.step_count and
// zeroes every Parameter.grad afterwards.
void adam_step(const std::vector<Parameter*>& params, AdamHyper& hyper);

}  // namespace fc2n
