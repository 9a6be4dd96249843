#pragma once

#include <cstdint>

namespace iab::testing {

// Builds a small random network and Huber batch from `seed`, then returns the
// largest relative gap between backpropagated gradients and central
// differences with h = 1e-5 over every parameter.
double MaxRelativeGradientError(std::uint64_t seed);

}  // namespace iab::testing
