// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 distilltrack contributors

#include "kalman.hpp"

#include <cmath>

#include "errors.hpp"

namespace dtrack {

KalmanFilter::KalmanFilter(const Params& params) : params_(params) {
  motion_.setIdentity();
  for (int i = 0; i < 4; ++i) motion_(i, 4 + i) = 1.0;  // dt = 1 frame
}

KalmanState KalmanFilter::initiate(const BoxMeasurement& measurement) const {
  if (!(measurement[3] > 0.0)) {
    throw ValidationError("kalman initiate: measurement height must be positive");
  }
  KalmanState s;
  s.mean.setZero();
  s.mean.head<4>() = measurement;

  const double h = measurement[3];
  const double wp = params_.std_weight_position;
  const double wv = params_.std_weight_velocity;
  Eigen::Matrix<double, 8, 1> std;
  std << 2 * wp * h, 2 * wp * h, 1e-2, 2 * wp * h, 10 * wv * h, 10 * wv * h, 1e-5, 10 * wv * h;
  s.covariance = std.array().square().matrix().asDiagonal();
  return s;
}

KalmanState KalmanFilter::predict(const KalmanState& state) const {
  const double h = state.height();
  const double wp = params_.std_weight_position;
  const double wv = params_.std_weight_velocity;
  Eigen::Matrix<double, 8, 1> std;
  std << wp * h, wp * h, 1e-2, wp * h, wv * h, wv * h, 1e-5, wv * h;

  KalmanState out;
  out.mean = motion_ * state.mean;
  out.covariance = motion_ * state.covariance * motion_.transpose();
  out.covariance += Eigen::Matrix<double, 8, 8>(std.array().square().matrix().asDiagonal());
  // Symmetrize to keep round-off from drifting.
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

void KalmanFilter::project(const KalmanState& state, Eigen::Vector4d* mean,
                           Eigen::Matrix4d* cov) const {
  const double h = std::abs(state.height());
  const double wp = params_.std_weight_position;
  Eigen::Vector4d std;
  std << wp * h, wp * h, 1e-1, wp * h;
  *mean = state.mean.head<4>();
  *cov = state.covariance.topLeftCorner<4, 4>();
  *cov += Eigen::Matrix4d(std.array().square().matrix().asDiagonal());
}

KalmanState KalmanFilter::update(const KalmanState& state, const BoxMeasurement& measurement) const {
  Eigen::Vector4d projected_mean;
  Eigen::Matrix4d innovation_cov;
  project(state, &projected_mean, &innovation_cov);

  Eigen::LLT<Eigen::Matrix4d> chol(innovation_cov);
  if (chol.info() != Eigen::Success) {
    throw ValidationError("kalman update: innovation covariance is not positive definite");
  }
  // K = P H' S^-1, solved through the Cholesky factor.
  const Eigen::Matrix<double, 8, 4> pht = state.covariance.leftCols<4>();
  const Eigen::Matrix<double, 8, 4> gain = chol.solve(pht.transpose()).transpose();

  KalmanState out;
  out.mean = state.mean + gain * (measurement - projected_mean);
  out.covariance = state.covariance - gain * innovation_cov * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

double KalmanFilter::gating_distance(const KalmanState& state,
                                     const BoxMeasurement& measurement) const {
  Eigen::Vector4d projected_mean;
  Eigen::Matrix4d innovation_cov;
  project(state, &projected_mean, &innovation_cov);
  Eigen::LLT<Eigen::Matrix4d> chol(innovation_cov);
  if (chol.info() != Eigen::Success) {
    throw ValidationError("kalman gating: innovation covariance is not positive definite");
  }
  const Eigen::Vector4d d = measurement - projected_mean;
  return d.dot(chol.solve(d));
}

}  // namespace dtrack
