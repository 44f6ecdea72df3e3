#pragma once

#include "spotgeom/grid.hpp"

#include <optional>
#include <stdexcept>

namespace spotgeom {

template <typename Scalar>
struct LossResult {
  Scalar value = 0;
  Grid<Scalar> gradient;  // dL/dS
};

/// Dice loss L = 1 - 2 I / U with I = sum(S * G) and U = sum(S) + sum(G).
///
/// No smoothing term is added; U = 0 yields L = 0 with a zero gradient.
/// The gradient is dL/dS = -2 G / U + 2 I / U^2. Cells where `valid` is 0
/// are excluded from every sum and receive zero gradient.
template <typename Derived, typename Scalar = typename Derived::Scalar>
LossResult<Scalar> dice_loss(const Eigen::ArrayBase<Derived>& s, const BinaryMap& g,
                             const std::optional<BinaryMap>& valid = std::nullopt) {
  if (s.rows() != g.rows() || s.cols() != g.cols()) throw std::invalid_argument("dice_loss: dimension mismatch");
  if (valid && (valid->rows() != s.rows() || valid->cols() != s.cols())) {
    throw std::invalid_argument("dice_loss: validity mask dimension mismatch");
  }
  if (!is_probability(s)) throw std::invalid_argument("dice_loss: S must lie in [0, 1]");
  if (!is_binary(g)) throw std::invalid_argument("dice_loss: G must be binary");
  const Grid<Scalar> w = valid ? valid->template cast<Scalar>().eval() : Grid<Scalar>::Ones(s.rows(), s.cols());
  const Grid<Scalar> gs = g.template cast<Scalar>() * w;
  const Grid<Scalar> ss = s * w;

  const Scalar inter = (ss * gs).sum();
  const Scalar uni = ss.sum() + gs.sum();

  LossResult<Scalar> out;
  if (uni == Scalar(0)) {
    out.value = Scalar(0);
    out.gradient = Grid<Scalar>::Zero(s.rows(), s.cols());
    return out;
  }
  out.value = Scalar(1) - Scalar(2) * inter / uni;
  out.gradient = (Scalar(-2) * gs / uni + Scalar(2) * inter / (uni * uni)) * w;
  return out;
}

/// L = L_s + alpha1 * L_rcnn + alpha2 * L_mask, with the detector and mask
/// terms supplied by the caller.
template <typename Scalar>
Scalar total_loss(Scalar seg_loss, Scalar rcnn_loss, Scalar mask_loss, Scalar alpha1 = Scalar(1),
                  Scalar alpha2 = Scalar(1)) {
  return seg_loss + alpha1 * rcnn_loss + alpha2 * mask_loss;
}

}  // namespace spotgeom
