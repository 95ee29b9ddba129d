#pragma once

#include <cstdint>

#include "hosa/audio_io.hpp"
#include "hosa/replay_sim.hpp"

namespace hosa::fixtures {

// Standard fixture set shared by the self-test command, the calibration
// harness, and the test suite. Parameters are frozen together with the
// calibrated bands; changing one invalidates the other.
inline constexpr int kSampleRate = 16000;
// Fundamental on an exact bin of the 128-point analysis segments (5/128), so
// harmonic energy lands on the statistic lattice instead of leaking across it.
inline constexpr double kSpeechF0 = 0.0390625;   // 625 Hz fundamental
inline constexpr int kSpeechHarmonics = 5;
// The exponential noise bed sits ~26 dB below the harmonic stack (which the
// peak normalization leaves at ~0.4 rms). Low enough that intermodulation
// lines from the replay chain clear the bed, high enough to dominate the
// chain's additive noise floor.
inline constexpr double kSpeechNoiseMix = 0.010;
inline constexpr std::size_t kSpeechLen = 32768; // ~2 s, 63 detector frames
inline constexpr std::uint64_t kChainSeedBase = 9000;

// Voiced-speech stand-in used as the "direct recording" of the fixture set.
AudioBuffer standard_clean(std::uint64_t seed);

// The same fixture passed through the default replay chain (order 1 or 2).
AudioBuffer standard_replay(std::uint64_t seed, int order);

AudioBuffer white_gaussian(std::size_t n, std::uint64_t seed, double sigma = 0.25);

// Linear but non-Gaussian: i.i.d. exponential innovations through a fixed FIR
// filter. Rejects Gaussianity, passes linearity.
AudioBuffer linear_non_gaussian(std::size_t n, std::uint64_t seed);

} // namespace hosa::fixtures
