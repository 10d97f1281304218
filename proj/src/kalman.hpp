// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#pragma once

#include <Eigen/Dense>

namespace dtrack {

/// Measurement space of the box motion model: center x, center y, aspect
/// ratio w/h, height.
using BoxMeasurement = Eigen::Vector4d;

/// Constant-velocity state over the measurement plus its velocities.
struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean;
  Eigen::Matrix<double, 8, 8> covariance;

  double height() const { return mean[3]; }
};

/// Constant-velocity Kalman filter over (cx, cy, a, h) with noise scales
/// proportional to the box height. dt is one frame.
class KalmanFilter {
 public:
  struct Params {
    double std_weight_position = 1.0 / 20.0;
    double std_weight_velocity = 1.0 / 160.0;
  };

  KalmanFilter() : KalmanFilter(Params{}) {}
  explicit KalmanFilter(const Params& params);

  /// New state at the measurement with zero velocities; h must be positive.
  KalmanState initiate(const BoxMeasurement& measurement) const;

  /// One-frame constant-velocity prediction with process noise inflation.
  KalmanState predict(const KalmanState& state) const;

  /// Standard linear correction; throws on a non-invertible innovation
  /// covariance (corrupted state).
  KalmanState update(const KalmanState& state, const BoxMeasurement& measurement) const;

  /// Squared Mahalanobis distance of the measurement under the state's
  /// predicted measurement distribution.
  double gating_distance(const KalmanState& state, const BoxMeasurement& measurement) const;

  /// Measurement-space projection (Hx, HPH' + R); exposed for tests.
  void project(const KalmanState& state, Eigen::Vector4d* mean, Eigen::Matrix4d* cov) const;

 private:
  Params params_;
  Eigen::Matrix<double, 8, 8> motion_;  // F
};

}  // namespace dtrack
