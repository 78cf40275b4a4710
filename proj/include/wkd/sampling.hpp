#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkd/geometry.hpp"

namespace wkd {

/// Gaussian displacement convention. The Wasserstein noise model measures
/// sigma as the total standard deviation (per-axis sigma/sqrt(d)), which is
/// the default; reading N(0, sigma^2) as per-axis is available behind the
/// flag.
enum class NoiseConvention { kPerAxis, kTotalVariance };

struct NoiseSpec {
    double sigma = 0.0;
    uint64_t seed = 0;
    NoiseConvention convention = NoiseConvention::kTotalVariance;
};

/// Two tangent circles sharing the origin, centers (-r1, 0) and (r2, 0).
struct Figure8Spec {
    double r1 = std::sqrt(2.0);
    double r2 = std::sqrt(9.0 / 8.0);
};

/// N points from the arc-length-uniform measure on the figure-8 (circle
/// chosen with probability proportional to its circumference), plus isotropic
/// Gaussian displacement. Deterministic given (spec, n, noise.seed).
PointCloud sample_figure8(const Figure8Spec& spec, int n, const NoiseSpec& noise);

/// Same for a single circle of radius r centered at the origin.
PointCloud sample_circle(double r, int n, const NoiseSpec& noise);

struct DimensionEstimate {
    int ell = 0;
    double alpha = 0.0;
    double diameter = 0.0;
};

/// Estimates the dimension constant: the smallest empirical-mass/r^ell ratio
/// over probe points and a log-spaced radius grid in [2 * sample spacing, D].
/// The sample is assumed to be a dense noiseless sampling of the support with
/// uniform empirical masses.
DimensionEstimate estimate_alpha(const PointCloud& sample, int ell, int max_probes = 256,
                                 int radius_count = 32);

/// Greedy farthest-point covering count: upper-bounds the covering number.
int covering_number(const PointCloud& cloud, double eps);

struct ConcentrationReport {
    struct ProbeResult {
        int probe_index = 0;  // index into the support sample
        double mass = 0.0;    // empirical mass of B(probe, eta) under uniform-on-P
        bool flagged = false;
    };
    double m0 = 0.0;
    double eta = 0.0;
    std::vector<ProbeResult> probes;
    int flagged_count = 0;
};

/// For probes drawn from the support sample, reports the empirical mass that
/// the cloud P places in B(probe, eta) and flags probes below m0.
ConcentrationReport concentration_check(const PointCloud& p, const PointCloud& k_sample,
                                        double m0, double eta, int max_probes = 100);

/// CLI-facing sampler spec strings, e.g.
///   figure8:R1=1.4142,R2=1.0607,sigma=0.45,N=6000,seed=42
///   circle:R=1,sigma=0,N=1000,seed=7,convention=total
struct SamplerSpec {
    std::string kind;  // "figure8" | "circle"
    Figure8Spec fig8;
    double circle_r = 1.0;
    int n = 0;
    NoiseSpec noise;
};

SamplerSpec parse_sampler_spec(const std::string& text);
PointCloud run_sampler(const SamplerSpec& spec);
std::string canonical_spec_string(const SamplerSpec& spec);

}  // namespace wkd
