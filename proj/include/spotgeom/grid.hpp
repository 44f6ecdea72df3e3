#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace spotgeom {

/// Row-major H x W grid; element (i, j) is row i, column j.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Strictly {0, 1}.
using BinaryMap = Grid<std::uint8_t>;

/// 0 is background; components are numbered 1..K.
using LabelMap = Grid<std::int32_t>;

/// Values in [0, 1].
template <typename Scalar>
using ProbabilityMap = Grid<Scalar>;

template <typename Derived>
bool is_binary(const Eigen::ArrayBase<Derived>& g) {
  return ((g == 0) || (g == 1)).all();
}

template <typename Derived>
bool is_probability(const Eigen::ArrayBase<Derived>& g) {
  using S = typename Derived::Scalar;
  return ((g >= S(0)) && (g <= S(1))).all();
}

}  // namespace spotgeom
