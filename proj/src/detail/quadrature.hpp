#pragma once

#include <array>

namespace fracschrod::detail {

// 3-point Gauss-Legendre on [0, 1].
inline constexpr std::array<double, 3> kGaussPoints = {0.5 - 0.5 * 0.7745966692414834, 0.5,
                                                       0.5 + 0.5 * 0.7745966692414834};
inline constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

} // namespace fracschrod::detail
