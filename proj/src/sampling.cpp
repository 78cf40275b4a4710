#include "wkd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkd/io.hpp"
#include "wkd/kdtree.hpp"
#include "wkd/rng.hpp"

namespace wkd {

namespace {

double per_axis_sigma(const NoiseSpec& noise, int dim) {
    if (noise.sigma < 0.0 || !std::isfinite(noise.sigma)) {
        throw std::invalid_argument("noise sigma must be finite and >= 0");
    }
    if (noise.convention == NoiseConvention::kTotalVariance) {
        return noise.sigma / std::sqrt(static_cast<double>(dim));
    }
    return noise.sigma;
}

std::vector<int> strided_probes(int n, int max_probes) {
    const int count = std::min(n, std::max(1, max_probes));
    std::vector<int> probes(count);
    for (int t = 0; t < count; ++t) {
        probes[t] = static_cast<int>(static_cast<int64_t>(t) * n / count);
    }
    return probes;
}

}  // namespace

PointCloud sample_figure8(const Figure8Spec& spec, int n, const NoiseSpec& noise) {
    if (spec.r1 <= 0.0 || spec.r2 <= 0.0) {
        throw std::invalid_argument("figure-8 radii must be positive");
    }
    if (n < 1) {
        throw std::invalid_argument("sample size must be >= 1");
    }
    const double sigma = per_axis_sigma(noise, 2);
    const double p_left = spec.r1 / (spec.r1 + spec.r2);
    Rng rng(noise.seed);

    std::vector<double> coords;
    coords.reserve(2 * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const bool left = rng.uniform() < p_left;
        const double radius = left ? spec.r1 : spec.r2;
        const double cx = left ? -spec.r1 : spec.r2;
        const double angle = 2.0 * M_PI * rng.uniform();
        double x = cx + radius * std::cos(angle);
        double y = radius * std::sin(angle);
        if (sigma > 0.0) {
            x += sigma * rng.gauss();
            y += sigma * rng.gauss();
        }
        coords.push_back(x);
        coords.push_back(y);
    }
    return PointCloud(2, std::move(coords));
}

PointCloud sample_circle(double r, int n, const NoiseSpec& noise) {
    if (r <= 0.0) {
        throw std::invalid_argument("circle radius must be positive");
    }
    if (n < 1) {
        throw std::invalid_argument("sample size must be >= 1");
    }
    const double sigma = per_axis_sigma(noise, 2);
    Rng rng(noise.seed);

    std::vector<double> coords;
    coords.reserve(2 * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * rng.uniform();
        double x = r * std::cos(angle);
        double y = r * std::sin(angle);
        if (sigma > 0.0) {
            x += sigma * rng.gauss();
            y += sigma * rng.gauss();
        }
        coords.push_back(x);
        coords.push_back(y);
    }
    return PointCloud(2, std::move(coords));
}

DimensionEstimate estimate_alpha(const PointCloud& sample, int ell, int max_probes,
                                 int radius_count) {
    if (ell <= 0) {
        throw std::invalid_argument("dimension ell must be positive");
    }
    sample.validate();
    const int n = sample.size();
    const double diameter = sample.diameter_exact();
    if (n < 2 || diameter <= 0.0) {
        throw std::runtime_error("degenerate support");
    }

    // Below the sample resolution the empirical ball masses are meaningless.
    // Two floors: twice the largest nearest-neighbor gap (geometric
    // resolution), and the radius at which balls hold ~N/8 samples, below
    // which Poisson noise dominates the min over probes.
    NeighborIndex index(sample);
    double spacing = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto nn = index.query(sample.point(i), 2);
        spacing = std::max(spacing, dist(sample.point(i), sample.point(nn[1])));
    }
    const int count_floor = std::max(2, n / 8);
    double mass_radius = 0.0;
    std::vector<double> probe_dists(n);
    const std::vector<int> probes = strided_probes(n, max_probes);
    for (int probe : probes) {
        for (int i = 0; i < n; ++i) {
            probe_dists[i] = dist(sample.point(probe), sample.point(i));
        }
        std::nth_element(probe_dists.begin(), probe_dists.begin() + (count_floor - 1),
                         probe_dists.end());
        mass_radius = std::max(mass_radius, probe_dists[count_floor - 1]);
    }
    const double r_min = std::min(std::max(2.0 * spacing, mass_radius), diameter / 2.0);

    std::vector<double> radii(radius_count);
    const double log_lo = std::log(r_min);
    const double log_hi = std::log(diameter);
    for (int t = 0; t < radius_count; ++t) {
        const double s = radius_count == 1 ? 1.0 : static_cast<double>(t) / (radius_count - 1);
        radii[t] = std::exp(log_lo + s * (log_hi - log_lo));
    }

    double alpha = std::numeric_limits<double>::infinity();
    std::vector<double> dists(n);
    for (int probe : probes) {
        for (int i = 0; i < n; ++i) {
            dists[i] = dist(sample.point(probe), sample.point(i));
        }
        std::sort(dists.begin(), dists.end());
        for (double r : radii) {
            const auto it = std::upper_bound(dists.begin(), dists.end(), r);
            const double mass = static_cast<double>(it - dists.begin()) / n;
            alpha = std::min(alpha, mass / std::pow(r, ell));
        }
    }
    return DimensionEstimate{ell, alpha, diameter};
}

int covering_number(const PointCloud& cloud, double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("covering radius must be positive");
    }
    cloud.validate();
    const int n = cloud.size();
    const double eps2 = eps * eps;

    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    int centers = 0;
    int next_center = 0;  // greedy: start at point 0, then farthest-first
    while (true) {
        ++centers;
        auto c = cloud.point(next_center);
        double worst = -1.0;
        int worst_idx = -1;
        for (int i = 0; i < n; ++i) {
            min_d2[i] = std::min(min_d2[i], dist2(c, cloud.point(i)));
            if (min_d2[i] > worst) {
                worst = min_d2[i];
                worst_idx = i;
            }
        }
        if (worst <= eps2) {
            return centers;
        }
        next_center = worst_idx;
    }
}

ConcentrationReport concentration_check(const PointCloud& p, const PointCloud& k_sample,
                                        double m0, double eta, int max_probes) {
    p.validate();
    k_sample.validate();
    if (p.dim() != k_sample.dim()) {
        throw std::invalid_argument("cloud and support sample live in different dimensions");
    }
    if (!(m0 > 0.0) || !(eta >= 0.0)) {
        throw std::invalid_argument("m0 must be positive and eta non-negative");
    }

    ConcentrationReport report;
    report.m0 = m0;
    report.eta = eta;
    const double eta2 = eta * eta;
    const int n = p.size();
    for (int probe : strided_probes(k_sample.size(), max_probes)) {
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (dist2(k_sample.point(probe), p.point(i)) <= eta2) ++count;
        }
        ConcentrationReport::ProbeResult r;
        r.probe_index = probe;
        r.mass = static_cast<double>(count) / n;
        r.flagged = r.mass < m0;
        if (r.flagged) ++report.flagged_count;
        report.probes.push_back(r);
    }
    return report;
}

SamplerSpec parse_sampler_spec(const std::string& text) {
    const auto colon = text.find(':');
    SamplerSpec spec;
    spec.kind = text.substr(0, colon);
    if (spec.kind != "figure8" && spec.kind != "circle") {
        throw std::invalid_argument("unknown sampler kind '" + spec.kind + "'");
    }
    bool have_n = false;
    if (colon != std::string::npos) {
        std::stringstream rest(text.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("malformed sampler parameter '" + item + "'");
            }
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            if (key == "R1") {
                spec.fig8.r1 = std::stod(value);
            } else if (key == "R2") {
                spec.fig8.r2 = std::stod(value);
            } else if (key == "R") {
                spec.circle_r = std::stod(value);
            } else if (key == "sigma") {
                spec.noise.sigma = std::stod(value);
            } else if (key == "N") {
                spec.n = std::stoi(value);
                have_n = true;
            } else if (key == "seed") {
                spec.noise.seed = std::stoull(value);
            } else if (key == "convention") {
                if (value == "axis") {
                    spec.noise.convention = NoiseConvention::kPerAxis;
                } else if (value == "total") {
                    spec.noise.convention = NoiseConvention::kTotalVariance;
                } else {
                    throw std::invalid_argument("noise convention must be 'axis' or 'total'");
                }
            } else {
                throw std::invalid_argument("unknown sampler parameter '" + key + "'");
            }
        }
    }
    if (!have_n || spec.n < 1) {
        throw std::invalid_argument("sampler spec needs N >= 1");
    }
    return spec;
}

PointCloud run_sampler(const SamplerSpec& spec) {
    if (spec.kind == "figure8") {
        return sample_figure8(spec.fig8, spec.n, spec.noise);
    }
    if (spec.kind == "circle") {
        return sample_circle(spec.circle_r, spec.n, spec.noise);
    }
    throw std::invalid_argument("unknown sampler kind '" + spec.kind + "'");
}

std::string canonical_spec_string(const SamplerSpec& spec) {
    std::string out = spec.kind + ":";
    if (spec.kind == "figure8") {
        out += "R1=" + fmt_double(spec.fig8.r1) + ",R2=" + fmt_double(spec.fig8.r2) + ",";
    } else {
        out += "R=" + fmt_double(spec.circle_r) + ",";
    }
    out += "sigma=" + fmt_double(spec.noise.sigma);
    out += ",N=" + std::to_string(spec.n);
    out += ",seed=" + std::to_string(spec.noise.seed);
    out += ",convention=";
    out += (spec.noise.convention == NoiseConvention::kPerAxis ? "axis" : "total");
    return out;
}

}  // namespace wkd
