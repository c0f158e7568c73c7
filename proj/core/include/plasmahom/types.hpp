// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_TYPES_HPP
#define PLASMAHOM_TYPES_HPP

#include <complex>

#include <Eigen/Core>

namespace plasmahom
{

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace plasmahom

#endif  // PLASMAHOM_TYPES_HPP
