#pragma once

#include <cstddef>

// Frozen acceptance bands. The statistical bounds were measured with the
// `calibrate` harness over seeded Monte-Carlo runs and then pinned here;
// self-test and the test suite assert against these exact values.
namespace hosa::calibration {

// Gaussianity test on white Gaussian noise at alpha = 0.05.
inline constexpr int kGaussNullTrials = 200;
inline constexpr double kGaussNullRejectLo = 0.01;
inline constexpr double kGaussNullRejectHi = 0.12;

// Linearity decisions on the exponential-FIR and replay-chain fixtures.
inline constexpr int kLinearityTrials = 50;
inline constexpr double kLinearAcceptMin = 0.80;
inline constexpr double kNonlinearRejectMin = 0.90;

// Coupled-triple bicoherence peak at 64 segments, unsmoothed.
inline constexpr int kQpcSegments = 64;
inline constexpr double kCoupledPeakMin = 0.90;
inline constexpr double kUncoupledPeakMax = 0.30;

// Frame-failure fractions on the standard fixture set.
inline constexpr double kCleanFailingMax = 0.35;
inline constexpr double kReplayFailingMin = 0.90;

// Gaussian-noise recordings produce almost no QPC peaks at threshold 0.5.
inline constexpr double kNoiseZeroPeakFractionMin = 0.90;

// Uniform-phase grids score near the band coverage 2 * (pi/8) / (2 pi).
inline constexpr double kPhaseBiasUniformCenter = 0.125;
inline constexpr double kPhaseBiasUniformTol = 0.02;

inline constexpr double kSnrToleranceDb = 0.5;

} // namespace hosa::calibration
