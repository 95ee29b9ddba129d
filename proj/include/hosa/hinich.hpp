#pragma once

#include "hosa/audio_io.hpp"
#include "hosa/hosa_core.hpp"

namespace hosa {

enum class HinichDecision { gaussian, non_gaussian_linear, non_gaussian_nonlinear };

enum class Hypothesis { H0, H1 };

const char* to_string(HinichDecision d);
const char* to_string(Hypothesis h);

struct HinichConfig {
    int fft_len = 0;         // 0 -> frame length of the input sequence
    int resolution = 5;      // frequency-smoothing width in bins; also the step
                             // of the interior principal-domain lattice, so that
                             // neighbouring smoothed estimates stay disjoint
    double alpha = 0.05;
    // Nonlinear when the sample IQR exceeds the theoretical IQR by this factor.
    double linearity_factor = 1.85;
};

struct HinichResult {
    double gaussianity_stat = 0.0;
    int gaussianity_dof = 0;
    double gaussianity_pvalue = 1.0;
    bool gaussianity_evaluated = false;
    bool gaussianity_rejected = false;

    double linearity_stat = 0.0;       // sample IQR of the squared-skewness values
    double linearity_reference = 0.0;  // theoretical IQR under constant noncentrality
    bool linearity_evaluated = false;
    bool linearity_rejected = false;

    HinichDecision decision = HinichDecision::gaussian;
};

// The provided frames act as the averaging segments of the underlying
// bicoherence estimate; they should be non-overlapping for the chi-square
// calibration to hold. Requires >= 8 segments.
HinichResult gaussianity_test(const FrameSequence& segments, const HinichConfig& config,
                              double alpha);

// Requires a prior Gaussianity rejection on the same segments; augments and
// returns the combined result.
HinichResult linearity_test(const FrameSequence& segments, const HinichConfig& config,
                            double alpha, const HinichResult& prior);

// Runs the two-stage hierarchy: Gaussianity first, linearity only on rejection.
HinichResult run_hinich_tests(const FrameSequence& segments, const HinichConfig& config);

// H1 iff both tests rejected; everything else maps to H0.
Hypothesis decide_hypothesis(const HinichResult& result);

} // namespace hosa
