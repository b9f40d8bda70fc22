// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>

namespace egoskill {

/// Sample Pearson correlation. Undefined below three samples or when either
/// input has zero variance; throws InputError on a length mismatch.
template <typename DerivedX, typename DerivedY>
std::optional<typename DerivedX::Scalar> pearson(const Eigen::DenseBase<DerivedX>& x,
                                                 const Eigen::DenseBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != y.size()) throw InputError("pearson: length mismatch");
  if (x.size() < 3) return std::nullopt;
  if (x.maxCoeff() == x.minCoeff() || y.maxCoeff() == y.minCoeff()) return std::nullopt;
  const auto xc = (x.derived().array() - x.derived().mean()).eval();
  const auto yc = (y.derived().array() - y.derived().mean()).eval();
  const Scalar sxx = xc.square().sum();
  const Scalar syy = yc.square().sum();
  if (!(sxx > Scalar(0)) || !(syy > Scalar(0))) return std::nullopt;
  const Scalar r = (xc * yc).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Population variance.
template <typename Derived>
typename Derived::Scalar population_variance(const Eigen::DenseBase<Derived>& v) {
  if (v.size() == 0) return typename Derived::Scalar(0);
  return (v.derived().array() - v.derived().mean()).square().mean();
}

}  // namespace egoskill
