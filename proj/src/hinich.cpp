#include "hosa/hinich.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/complement.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>

#include "hosa/errors.hpp"

namespace hosa {

namespace {

int effective_fft_len(const FrameSequence& segments, const HinichConfig& config) {
    return config.fft_len > 0 ? config.fft_len : static_cast<int>(segments.frame_len);
}

void validate_segments(const FrameSequence& segments) {
    if (segments.count() < 8)
        throw Error(ErrorKind::TooFewSegments, "tests need >= 8 segments");
    double power = 0.0;
    for (const auto& frame : segments.frames)
        for (double s : frame) power += s * s;
    if (power <= 0.0)
        throw Error(ErrorKind::DegenerateInput, "zero-power input");
}

// One normalized squared-skewness value per interior lattice point, spaced
// `resolution` bins apart so neighbouring smoothed estimates do not share
// stencil cells. Each value is
//     2 * |smoothed numerator|^2 / Var0
// with Var0 the null variance of the smoothed numerator assembled from the
// measured per-cell power products; chi-square(2) distributed under the
// Gaussian null, noncentral chi-square(2) under a linear non-Gaussian one.
// Cells with negligible variance carry no skewness information (stopbands,
// the DC guard) and are dropped; the caller sizes the dof from what remains.
std::vector<double> squared_skewness_values(const FrameSequence& segments,
                                            const HinichConfig& config) {
    const int fft_len = effective_fft_len(segments, config);
    const int half = fft_len / 2;
    const int step = std::max(1, config.resolution);
    const auto window = rao_gabr_window(step);

    int radius = 0;
    for (const auto& tap : window.taps)
        radius = std::max({radius, std::abs(tap.dm), std::abs(tap.dn)});
    if (step + radius > half - 1)
        throw Error(ErrorKind::ParameterOutOfRange,
                    "lattice resolution too coarse for the FFT length");

    const auto acc = accumulate_triple_products(segments, fft_len);
    const double k = static_cast<double>(acc.segments);

    // (|smoothed numerator|^2, Var0) per lattice point.
    std::vector<std::pair<double, double>> points;
    double max_var = 0.0;
    for (int m = step; m + radius <= half - 1; m += step) {
        for (int n = step; n <= m && m + n < half; n += step) {
            // Taps that cross the m = n mirror line hit duplicated grid values;
            // fold them onto one representative cell before squaring weights,
            // otherwise Var0 undercounts the doubled contribution.
            std::map<std::pair<int, int>, double> folded;
            for (const auto& tap : window.taps) {
                int a = m + tap.dm;
                int b = n + tap.dn;
                if (b > a) std::swap(a, b);
                folded[{a, b}] += tap.weight;
            }
            std::complex<double> numerator{};
            double var0 = 0.0;
            for (const auto& [cell, weight] : folded) {
                numerator += weight * acc.num.at(cell.first, cell.second);
                var0 += weight * weight * acc.p12.at(cell.first, cell.second) *
                        acc.p3.at(cell.first, cell.second) / k;
            }
            points.emplace_back(std::norm(numerator), var0);
            max_var = std::max(max_var, var0);
        }
    }

    std::vector<double> values;
    values.reserve(points.size());
    for (const auto& [num_sq, var0] : points)
        if (var0 > 1e-16 * max_var) values.push_back(2.0 * num_sq / var0);
    if (values.size() < 4)
        throw Error(ErrorKind::DegenerateInput, "too few usable lattice points");
    return values;
}

// Linear-interpolation sample quantile on sorted data.
double sample_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

const char* to_string(HinichDecision d) {
    switch (d) {
    case HinichDecision::gaussian: return "gaussian";
    case HinichDecision::non_gaussian_linear: return "non_gaussian_linear";
    case HinichDecision::non_gaussian_nonlinear: return "non_gaussian_nonlinear";
    }
    return "unknown";
}

const char* to_string(Hypothesis h) {
    return h == Hypothesis::H1 ? "H1" : "H0";
}

HinichResult gaussianity_test(const FrameSequence& segments, const HinichConfig& config,
                              double alpha) {
    validate_segments(segments);
    const auto values = squared_skewness_values(segments, config);

    double stat = 0.0;
    for (double v : values) stat += v;
    const int dof = 2 * static_cast<int>(values.size());

    boost::math::chi_squared null_dist(dof);
    const double pvalue = boost::math::cdf(boost::math::complement(null_dist, stat));

    HinichResult result;
    result.gaussianity_stat = stat;
    result.gaussianity_dof = dof;
    result.gaussianity_pvalue = pvalue;
    result.gaussianity_evaluated = true;
    result.gaussianity_rejected = pvalue < alpha;
    result.decision = HinichDecision::gaussian;
    return result;
}

HinichResult linearity_test(const FrameSequence& segments, const HinichConfig& config,
                            double alpha, const HinichResult& prior) {
    (void)alpha;  // the decision is the IQR-ratio rule, kept for interface symmetry
    if (!prior.gaussianity_evaluated || !prior.gaussianity_rejected)
        throw Error(ErrorKind::TestOrderViolation,
                    "linearity test requires a prior Gaussianity rejection");
    validate_segments(segments);

    auto values = squared_skewness_values(segments, config);
    std::sort(values.begin(), values.end());

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());

    const double sample_iqr = sample_quantile(values, 0.75) - sample_quantile(values, 0.25);

    // Under a linear non-Gaussian process every lattice value follows a
    // noncentral chi-square(2) with one shared noncentrality, estimated from
    // the mean (E = 2 + lambda).
    const double lambda = std::max(0.0, mean - 2.0);
    double reference_iqr;
    if (lambda > 1e-12) {
        boost::math::non_central_chi_squared linear_dist(2.0, lambda);
        reference_iqr = boost::math::quantile(linear_dist, 0.75) -
                        boost::math::quantile(linear_dist, 0.25);
    } else {
        boost::math::chi_squared central(2.0);
        reference_iqr =
            boost::math::quantile(central, 0.75) - boost::math::quantile(central, 0.25);
    }

    HinichResult result = prior;
    result.linearity_stat = sample_iqr;
    result.linearity_reference = reference_iqr;
    result.linearity_evaluated = true;
    result.linearity_rejected = sample_iqr > config.linearity_factor * reference_iqr;
    result.decision = result.linearity_rejected ? HinichDecision::non_gaussian_nonlinear
                                                : HinichDecision::non_gaussian_linear;
    return result;
}

HinichResult run_hinich_tests(const FrameSequence& segments, const HinichConfig& config) {
    HinichResult result = gaussianity_test(segments, config, config.alpha);
    if (result.gaussianity_rejected)
        result = linearity_test(segments, config, config.alpha, result);
    return result;
}

Hypothesis decide_hypothesis(const HinichResult& result) {
    if (!result.gaussianity_evaluated)
        throw Error(ErrorKind::IncompleteResult, "Gaussianity portion missing");
    if (!result.gaussianity_rejected) return Hypothesis::H0;
    if (!result.linearity_evaluated)
        throw Error(ErrorKind::IncompleteResult, "linearity portion missing");
    return result.linearity_rejected ? Hypothesis::H1 : Hypothesis::H0;
}

} // namespace hosa
