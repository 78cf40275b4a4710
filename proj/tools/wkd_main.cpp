// Command-line surface over the witnessed k-distance library: samplers,
// distance evaluation, exact Wasserstein, bound checks, and sublevel-set
// topology, composed through CSV/JSON/SVG files.
//
// Exit codes: 0 success, 2 usage error, 3 guard/size violation, 4 check failed.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wkd/dtm.hpp"
#include "wkd/field.hpp"
#include "wkd/io.hpp"
#include "wkd/kdtree.hpp"
#include "wkd/rng.hpp"
#include "wkd/sampling.hpp"
#include "wkd/svg.hpp"
#include "wkd/topology.hpp"
#include "wkd/transport.hpp"

namespace {

using nlohmann::json;

struct check_failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_json(const std::string& path, const json& j) {
    wkd::atomic_write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
    wkd::SamplerSpec spec;
    std::string convention = "total";
    std::string spec_string;
    std::string output;
};

void run_sample(SampleArgs& args, const std::string& kind) {
    if (kind == "spec") {
        args.spec = wkd::parse_sampler_spec(args.spec_string);
    } else {
        args.spec.kind = kind;
        if (args.convention == "axis") {
            args.spec.noise.convention = wkd::NoiseConvention::kPerAxis;
        } else if (args.convention == "total") {
            args.spec.noise.convention = wkd::NoiseConvention::kTotalVariance;
        } else {
            throw CLI::ValidationError("--noise-convention must be 'axis' or 'total'");
        }
    }
    const wkd::PointCloud cloud = wkd::run_sampler(args.spec);
    wkd::write_point_cloud(args.output, cloud);

    json sidecar;
    sidecar["command"] = "sample";
    sidecar["spec"] = wkd::canonical_spec_string(args.spec);
    sidecar["seed"] = args.spec.noise.seed;
    sidecar["n"] = args.spec.n;
    sidecar["output"] = args.output;
    write_json(args.output + ".json", sidecar);
    std::cout << "wrote " << cloud.size() << " points to " << args.output << "\n";
}

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
    std::string input;
    std::string queries;
    std::string output;
    std::string sites_out;
    std::string mode = "witnessed";
    int k = 1;
    int grid = 0;
    double level = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> box;
    double inflate = std::numeric_limits<double>::quiet_NaN();
};

wkd::BoundingBox2D resolve_box(const wkd::PointCloud& cloud, const std::vector<double>& box,
                               double inflate, double level) {
    if (!box.empty()) {
        if (box.size() != 4) {
            throw CLI::ValidationError("--box needs xmin,xmax,ymin,ymax");
        }
        return wkd::BoundingBox2D{box[0], box[1], box[2], box[3]};
    }
    double pad = inflate;
    if (std::isnan(pad)) {
        // Default padding is the max level of interest, falling back to 5%
        // of the bounding-box diagonal.
        pad = std::isnan(level) ? 0.05 * cloud.diameter_upper_bound() : level;
    }
    return wkd::BoundingBox2D::of_cloud(cloud, pad);
}

void run_dist(DistArgs& args) {
    const wkd::PointCloud cloud = wkd::read_point_cloud(args.input);
    const wkd::NeighborIndex index(cloud);
    if (args.k < 1 || args.k > cloud.size()) {
        throw wkd::guard_error("k must lie in [1, N]");
    }

    std::function<double(std::span<const double>)> f;
    std::optional<wkd::WitnessedKDistance> witnessed;
    std::optional<wkd::PowerDistance> brute;
    std::optional<wkd::KDistance> kdist;
    if (args.mode == "witnessed") {
        witnessed.emplace(index, args.k);
        f = [&](std::span<const double> x) { return witnessed->eval(x); };
        if (!args.sites_out.empty()) {
            wkd::atomic_write_text(args.sites_out, wkd::sites_to_csv(witnessed->sites(), args.k,
                                                                     cloud.size(), "witnessed"));
        }
    } else if (args.mode == "brute") {
        brute.emplace(wkd::brute_force_sites(cloud, args.k));
        f = [&](std::span<const double> x) { return brute->eval(x); };
        if (!args.sites_out.empty()) {
            wkd::atomic_write_text(args.sites_out,
                                   wkd::sites_to_csv(*brute, args.k, cloud.size(), "brute"));
        }
    } else if (args.mode == "exact") {
        kdist.emplace(index, args.k);
        f = [&](std::span<const double> x) { return kdist->eval(x); };
        if (!args.sites_out.empty()) {
            throw CLI::ValidationError("--sites-out needs mode witnessed or brute");
        }
    } else {
        throw CLI::ValidationError("--mode must be witnessed, exact, or brute");
    }

    if (!args.queries.empty()) {
        const wkd::PointCloud q = wkd::read_point_cloud(args.queries);
        if (q.dim() != cloud.dim()) {
            throw std::runtime_error("query dimension does not match the cloud");
        }
        std::string out = "# dist mode=" + args.mode + " k=" + std::to_string(args.k) + "\n";
        for (int i = 0; i < q.size(); ++i) {
            auto p = q.point(i);
            for (int t = 0; t < q.dim(); ++t) {
                out += wkd::fmt_double(p[t]);
                out += ',';
            }
            out += wkd::fmt_double(f(p));
            out += '\n';
        }
        wkd::atomic_write_text(args.output, out);
        std::cout << "evaluated " << q.size() << " queries to " << args.output << "\n";
        return;
    }

    if (args.grid < 2) {
        throw CLI::ValidationError("provide --queries or --grid >= 2");
    }
    if (cloud.dim() != 2) {
        throw std::runtime_error("grid evaluation needs a 2D cloud");
    }
    const wkd::BoundingBox2D box = resolve_box(cloud, args.box, args.inflate, args.level);
    const wkd::ScalarField2D field = wkd::rasterize(
        [&](double x, double y) {
            const double p[2] = {x, y};
            return f(p);
        },
        box, args.grid, args.grid);
    wkd::atomic_write_text(args.output, wkd::field_to_csv(field));
    std::cout << "rasterized " << args.grid << "x" << args.grid << " field to " << args.output
              << "\n";
}

// ---------------------------------------------------------------------------
// w2

struct W2Args {
    std::string a;
    std::string b;
    std::string type = "clouds";
    std::string plan_out;
    std::string output;
};

void run_w2(W2Args& args) {
    wkd::W2Result result;
    if (args.type == "clouds") {
        const wkd::PointCloud a = wkd::read_point_cloud(args.a);
        const wkd::PointCloud b = wkd::read_point_cloud(args.b);
        result = wkd::w2_exact(wkd::DiscreteMeasure::uniform_on(a),
                               wkd::DiscreteMeasure::uniform_on(b));
    } else if (args.type == "measures") {
        result = wkd::w2_exact(wkd::read_measure(args.a), wkd::read_measure(args.b));
    } else {
        throw CLI::ValidationError("--type must be clouds or measures");
    }

    if (!args.plan_out.empty()) {
        std::string csv = "# transport plan: src_idx,tgt_idx,mass\n";
        for (const auto& e : result.plan.entries) {
            csv += std::to_string(e.src) + "," + std::to_string(e.tgt) + "," +
                   wkd::fmt_double(e.mass) + "\n";
        }
        wkd::atomic_write_text(args.plan_out, csv);
    }
    if (!args.output.empty()) {
        json report;
        report["command"] = "w2";
        report["type"] = args.type;
        report["distance"] = result.distance;
        report["plan_entries"] = result.plan.entries.size();
        write_json(args.output, report);
    }
    std::cout << wkd::fmt_double(result.distance) << "\n";
}

// ---------------------------------------------------------------------------
// check-bounds

struct CheckArgs {
    std::string check;
    std::string output;
    uint64_t seed = 1;
    int clouds = 50;
    int pairs = 30;
    int queries = 50;
    int trials = 5;
    int n = 2000;
    int grid = 128;
    int ref_atoms = 2048;
    int ell = 1;
    double r = 1.0;
    double sigma = 0.0;
    double m0 = 0.05;
};

wkd::PointCloud random_cloud(wkd::Rng& rng, int n, int d, double half_width) {
    std::vector<double> coords(static_cast<size_t>(n) * d);
    for (double& c : coords) c = rng.uniform(-half_width, half_width);
    return wkd::PointCloud(d, std::move(coords));
}

std::vector<double> random_query(wkd::Rng& rng, int d, double half_width, bool far_field) {
    std::vector<double> q(d);
    for (double& c : q) c = rng.uniform(-half_width, half_width);
    if (far_field) {
        // Push the query out to ~10x the data scale.
        const int axis = rng.uniform_int(d);
        q[axis] += (rng.uniform() < 0.5 ? -1.0 : 1.0) * 20.0 * half_width;
    }
    return q;
}

json check_general(const CheckArgs& args) {
    wkd::Rng rng(args.seed);
    const double bound = 2.0 + std::sqrt(2.0);
    double max_ratio = 0.0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    bool pass = true;
    for (int trial = 0; trial < args.clouds; ++trial) {
        const int d = 1 + rng.uniform_int(3);
        const int n = 2 + rng.uniform_int(199);
        const int k = 1 + rng.uniform_int(std::min(n, 20));
        const wkd::PointCloud cloud = random_cloud(rng, n, d, 1.0);
        const wkd::NeighborIndex index(cloud);
        const wkd::KDistance kdist(index, k);
        const wkd::WitnessedKDistance witnessed(index, k);
        for (int t = 0; t < args.queries; ++t) {
            const auto q = random_query(rng, d, 1.5, t % 5 == 4);
            const double dk = kdist.eval(q);
            const double dw = witnessed.eval(q);
            if (dk > dw + 1e-9 || dw > bound * dk + 1e-9) pass = false;
            if (dk > 1e-12) max_ratio = std::max(max_ratio, dw / dk);
            worst_margin = std::max(worst_margin, dw - bound * dk);
        }
    }
    json report;
    report["check"] = "general-bound";
    report["seed"] = args.seed;
    report["clouds"] = args.clouds;
    report["queries"] = args.queries;
    report["max_ratio"] = max_ratio;
    report["bound"] = bound;
    report["worst_margin"] = worst_margin;
    report["pass"] = pass;
    return report;
}

wkd::DiscreteMeasure random_measure(wkd::Rng& rng, int max_atoms) {
    const int n = 1 + rng.uniform_int(max_atoms);
    std::vector<double> coords;
    std::vector<int64_t> numer(n);
    int64_t den = 0;
    for (int i = 0; i < n; ++i) {
        coords.push_back(rng.uniform());
        coords.push_back(rng.uniform());
        numer[i] = 1 + rng.uniform_int(9);
        den += numer[i];
    }
    wkd::DiscreteMeasure mu;
    mu.support = wkd::PointCloud(2, std::move(coords));
    for (int i = 0; i < n; ++i) {
        mu.masses.push_back(static_cast<double>(numer[i]) / static_cast<double>(den));
    }
    mu.denominator = den;
    return mu;
}

json check_stability(const CheckArgs& args) {
    wkd::Rng rng(args.seed);
    const std::vector<double> m0_values = {0.25, 0.5, 0.9};
    double max_violation = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < args.pairs; ++trial) {
        const wkd::DiscreteMeasure mu = random_measure(rng, 8);
        const wkd::DiscreteMeasure nu = random_measure(rng, 8);
        const double w2 = wkd::w2_exact(mu, nu).distance;
        for (double m0 : m0_values) {
            for (int t = 0; t < args.queries; ++t) {
                const std::vector<double> q = {rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
                const double diff = std::abs(wkd::eval_dtm(mu, m0, q) - wkd::eval_dtm(nu, m0, q));
                max_violation = std::max(max_violation, diff - w2 / std::sqrt(m0));
            }
        }
    }
    const bool pass = max_violation <= 1e-9;
    json report;
    report["check"] = "stability";
    report["seed"] = args.seed;
    report["pairs"] = args.pairs;
    report["queries"] = args.queries;
    report["m0_values"] = m0_values;
    report["max_violation"] = max_violation;
    report["tolerance"] = 1e-9;
    report["pass"] = pass;
    return report;
}

json check_witnessed(const CheckArgs& args) {
    // Closed-form circle quantities: alpha = inf_r mass(B(p,r))/r = 1/(pi R),
    // exact distance d_K(x) = | ||x|| - R |.
    const double alpha = 1.0 / (M_PI * args.r);
    const int k = std::max(1, static_cast<int>(std::llround(args.m0 * args.n)));
    const double m0 = static_cast<double>(k) / args.n;

    // Reference discretization of the circle and its W2 error bound.
    std::vector<double> ref_coords;
    for (int j = 0; j < args.ref_atoms; ++j) {
        const double a = 2.0 * M_PI * (j + 0.5) / args.ref_atoms;
        ref_coords.push_back(args.r * std::cos(a));
        ref_coords.push_back(args.r * std::sin(a));
    }
    const wkd::DiscreteMeasure ref =
        wkd::DiscreteMeasure::uniform_on(wkd::PointCloud(2, std::move(ref_coords)));
    const double disc_err = M_PI * args.r / args.ref_atoms;

    json trials = json::array();
    bool all_pass = true;
    for (int trial = 0; trial < args.trials; ++trial) {
        const uint64_t seed = args.seed + static_cast<uint64_t>(trial);
        wkd::NoiseSpec noise;
        noise.sigma = args.sigma;
        noise.seed = seed;
        const wkd::PointCloud cloud = wkd::sample_circle(args.r, args.n, noise);
        const wkd::NeighborIndex index(cloud);
        const wkd::WitnessedKDistance witnessed(index, k);

        const double w2_hat = wkd::w2_empirical_to_reference(cloud, ref) + disc_err;
        const double bound = 6.0 * w2_hat / std::sqrt(m0) +
                             24.0 * std::pow(m0, 1.0 / args.ell) *
                                 std::pow(alpha, -1.0 / args.ell);

        const wkd::BoundingBox2D box{-2.0 * args.r, 2.0 * args.r, -2.0 * args.r, 2.0 * args.r};
        const wkd::ScalarField2D field = wkd::rasterize(
            [&](double x, double y) {
                const double q[2] = {x, y};
                return witnessed.eval(q);
            },
            box, args.grid, args.grid);
        double sup_err = 0.0;
        for (int iy = 0; iy < field.ny(); ++iy) {
            for (int ix = 0; ix < field.nx(); ++ix) {
                const double dk = std::abs(std::hypot(field.cell_x(ix), field.cell_y(iy)) - args.r);
                sup_err = std::max(sup_err, std::abs(field.value(ix, iy) - dk));
            }
        }
        const bool pass = sup_err <= bound;
        all_pass = all_pass && pass;
        json t;
        t["seed"] = seed;
        t["w2_hat"] = w2_hat;
        t["sup_error"] = sup_err;
        t["bound"] = bound;
        t["pass"] = pass;
        trials.push_back(t);
    }

    json report;
    report["check"] = "witnessed-bound";
    report["seed"] = args.seed;
    report["r"] = args.r;
    report["n"] = args.n;
    report["sigma"] = args.sigma;
    report["m0"] = m0;
    report["ell"] = args.ell;
    report["alpha"] = alpha;
    report["ref_atoms"] = args.ref_atoms;
    report["grid"] = args.grid;
    report["trials"] = trials;
    report["pass"] = all_pass;
    return report;
}

void run_check(CheckArgs& args) {
    json report;
    if (args.check == "general") {
        report = check_general(args);
    } else if (args.check == "stability") {
        report = check_stability(args);
    } else if (args.check == "witnessed") {
        report = check_witnessed(args);
    } else {
        throw CLI::ValidationError("--check must be general, stability, or witnessed");
    }
    if (!args.output.empty()) {
        write_json(args.output, report);
    }
    std::cout << report.dump(2) << "\n";
    if (!report["pass"].get<bool>()) {
        throw check_failed("bound check failed");
    }
}

// ---------------------------------------------------------------------------
// topology

struct TopologyArgs {
    std::string input;
    std::string field_in;
    std::string diagram_out;
    std::string svg_out;
    std::string output;
    int k = 1;
    int grid = 256;
    double level = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> box;
    double inflate = std::numeric_limits<double>::quiet_NaN();
};

void run_topology(TopologyArgs& args) {
    std::optional<wkd::PointCloud> cloud;
    std::optional<wkd::ScalarField2D> field;
    double m0 = std::numeric_limits<double>::quiet_NaN();
    if (!args.field_in.empty()) {
        field = wkd::field_from_csv(wkd::read_text_file(args.field_in));
    } else {
        if (args.input.empty()) {
            throw CLI::ValidationError("provide --input cloud or --field");
        }
        cloud = wkd::read_point_cloud(args.input);
        const wkd::NeighborIndex index(*cloud);
        if (args.k < 1 || args.k > cloud->size()) {
            throw wkd::guard_error("k must lie in [1, N]");
        }
        const wkd::WitnessedKDistance witnessed(index, args.k);
        m0 = witnessed.m0();
        const wkd::BoundingBox2D box = resolve_box(*cloud, args.box, args.inflate, args.level);
        field = wkd::rasterize(
            [&](double x, double y) {
                const double q[2] = {x, y};
                return witnessed.eval(q);
            },
            box, args.grid, args.grid);
    }

    const wkd::PersistenceDiagram diagram = wkd::sublevel_persistence(*field);
    if (!args.diagram_out.empty()) {
        wkd::atomic_write_text(args.diagram_out, wkd::diagram_to_csv(diagram));
    }
    json report;
    report["command"] = "topology";
    report["k"] = args.k;
    if (!std::isnan(m0)) report["m0"] = m0;
    report["grid_nx"] = field->nx();
    report["grid_ny"] = field->ny();
    report["pairs"] = diagram.pairs.size();
    if (!std::isnan(args.level)) {
        const auto [b0, b1] = wkd::betti_at_level(*field, args.level);
        report["level"] = args.level;
        report["betti0"] = b0;
        report["betti1"] = b1;
        std::cout << "betti at r=" << wkd::fmt_double(args.level) << ": beta0=" << b0
                  << " beta1=" << b1 << "\n";
    }
    if (!args.svg_out.empty()) {
        if (std::isnan(args.level)) {
            throw CLI::ValidationError("--svg needs --level for the threshold render");
        }
        wkd::atomic_write_text(args.svg_out,
                               wkd::svg_field_threshold(*field, args.level,
                                                        cloud ? &*cloud : nullptr));
    }
    if (!args.output.empty()) {
        write_json(args.output, report);
    }
}

struct VineyardArgs {
    std::string input;
    std::string k_range;
    std::string output;
    std::string svg_out;
    int grid = 128;
    std::vector<double> box;
    double inflate = std::numeric_limits<double>::quiet_NaN();
};

std::vector<int> parse_k_range(const std::string& text) {
    std::vector<int> out;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        return out;
    }
    const auto c2 = text.find(':', c1 + 1);
    const int lo = std::stoi(text.substr(0, c1));
    const int hi = std::stoi(text.substr(c1 + 1, c2 - c1 - 1));
    const int step = c2 == std::string::npos ? 1 : std::stoi(text.substr(c2 + 1));
    if (step < 1 || hi < lo) {
        throw CLI::ValidationError("--k range must be lo:hi:step with step >= 1");
    }
    for (int k = lo; k <= hi; k += step) out.push_back(k);
    return out;
}

void run_vineyard(VineyardArgs& args) {
    const wkd::PointCloud cloud = wkd::read_point_cloud(args.input);
    const std::vector<int> k_values = parse_k_range(args.k_range);
    const wkd::BoundingBox2D box =
        resolve_box(cloud, args.box, args.inflate, std::numeric_limits<double>::quiet_NaN());
    const wkd::Vineyard vineyard = wkd::vineyard_sweep(cloud, k_values, box, args.grid, args.grid);
    wkd::atomic_write_text(args.output, wkd::vineyard_to_csv(vineyard));
    if (!args.svg_out.empty()) {
        wkd::atomic_write_text(args.svg_out, wkd::svg_vineyard(vineyard));
    }
    std::cout << "swept " << k_values.size() << " k values to " << args.output << "\n";
}

void add_vineyard_options(CLI::App* cmd, VineyardArgs& args) {
    cmd->add_option("--input", args.input, "point cloud CSV")->required();
    cmd->add_option("--k", args.k_range, "k sweep: lo:hi:step or comma list")->required();
    cmd->add_option("--grid", args.grid, "grid resolution per axis");
    cmd->add_option("--box", args.box, "xmin,xmax,ymin,ymax")->delimiter(',')->expected(4);
    cmd->add_option("--inflate", args.inflate, "bounding-box padding");
    cmd->add_option("-o,--output", args.output, "vineyard CSV")->required();
    cmd->add_option("--svg", args.svg_out, "persistence-vs-m0 SVG");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"witnessed k-distance toolkit"};
    app.require_subcommand(1);

    // sample ---------------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "generate point clouds");
    sample->require_subcommand(1);
    SampleArgs sample_args;
    std::string sample_kind;
    for (const char* kind : {"figure8", "circle", "spec"}) {
        auto* sub = sample->add_subcommand(kind);
        if (std::string(kind) == "figure8") {
            sub->add_option("--r1", sample_args.spec.fig8.r1, "left circle radius");
            sub->add_option("--r2", sample_args.spec.fig8.r2, "right circle radius");
        } else if (std::string(kind) == "circle") {
            sub->add_option("--r", sample_args.spec.circle_r, "circle radius");
        } else {
            sub->add_option("--spec", sample_args.spec_string, "sampler spec string")->required();
        }
        if (std::string(kind) != "spec") {
            sub->add_option("--sigma", sample_args.spec.noise.sigma, "noise std deviation");
            sub->add_option("--n", sample_args.spec.n, "sample size")->required();
            sub->add_option("--seed", sample_args.spec.noise.seed, "rng seed");
            sub->add_option("--noise-convention", sample_args.convention, "axis|total");
        }
        sub->add_option("-o,--output", sample_args.output, "output CSV")->required();
        sub->callback([&sample_args, &sample_kind, kind] {
            sample_kind = kind;
            run_sample(sample_args, sample_kind);
        });
    }

    // dist -----------------------------------------------------------------
    auto* dist = app.add_subcommand("dist", "evaluate distance functions");
    DistArgs dist_args;
    dist->add_option("--input", dist_args.input, "point cloud CSV")->required();
    dist->add_option("--k", dist_args.k, "neighbor count")->required();
    dist->add_option("--mode", dist_args.mode, "witnessed|exact|brute");
    dist->add_option("--queries", dist_args.queries, "query points CSV");
    dist->add_option("--grid", dist_args.grid, "grid resolution per axis");
    dist->add_option("--box", dist_args.box, "xmin,xmax,ymin,ymax")->delimiter(',')->expected(4);
    dist->add_option("--inflate", dist_args.inflate, "bounding-box padding");
    dist->add_option("--level", dist_args.level, "level of interest (default padding)");
    dist->add_option("--sites-out", dist_args.sites_out, "write the weighted sites CSV");
    dist->add_option("-o,--output", dist_args.output, "values CSV or field CSV")->required();
    dist->callback([&dist_args] { run_dist(dist_args); });

    // w2 ---------------------------------------------------------------------
    auto* w2 = app.add_subcommand("w2", "exact Wasserstein-2 distance");
    W2Args w2_args;
    w2->add_option("--a", w2_args.a, "first input CSV")->required();
    w2->add_option("--b", w2_args.b, "second input CSV")->required();
    w2->add_option("--type", w2_args.type, "clouds|measures");
    w2->add_option("--plan", w2_args.plan_out, "transport plan CSV");
    w2->add_option("-o,--output", w2_args.output, "JSON report");
    w2->callback([&w2_args] { run_w2(w2_args); });

    // check-bounds -----------------------------------------------------------
    auto* check = app.add_subcommand("check-bounds", "verify the approximation bounds");
    CheckArgs check_args;
    check->add_option("--check", check_args.check, "general|stability|witnessed")->required();
    check->add_option("--seed", check_args.seed, "rng seed");
    check->add_option("--clouds", check_args.clouds, "random clouds (general)");
    check->add_option("--pairs", check_args.pairs, "measure pairs (stability)");
    check->add_option("--queries", check_args.queries, "queries per instance");
    check->add_option("--trials", check_args.trials, "seeded trials (witnessed)");
    check->add_option("--n", check_args.n, "sample size (witnessed)");
    check->add_option("--grid", check_args.grid, "grid resolution (witnessed)");
    check->add_option("--ref-atoms", check_args.ref_atoms, "reference discretization size");
    check->add_option("--ell", check_args.ell, "assumed dimension");
    check->add_option("--r", check_args.r, "circle radius (witnessed)");
    check->add_option("--sigma", check_args.sigma, "noise level (witnessed)");
    check->add_option("--m0", check_args.m0, "mass parameter (witnessed)");
    check->add_option("-o,--output", check_args.output, "JSON report");
    check->callback([&check_args] { run_check(check_args); });

    // topology ----------------------------------------------------------------
    auto* topo = app.add_subcommand("topology", "sublevel-set topology");
    TopologyArgs topo_args;
    topo->add_option("--input", topo_args.input, "point cloud CSV");
    topo->add_option("--field", topo_args.field_in, "precomputed field CSV");
    topo->add_option("--k", topo_args.k, "neighbor count");
    topo->add_option("--grid", topo_args.grid, "grid resolution per axis");
    topo->add_option("--box", topo_args.box, "xmin,xmax,ymin,ymax")->delimiter(',')->expected(4);
    topo->add_option("--inflate", topo_args.inflate, "bounding-box padding");
    topo->add_option("--level", topo_args.level, "sublevel threshold r");
    topo->add_option("--diagram", topo_args.diagram_out, "persistence diagram CSV");
    topo->add_option("--svg", topo_args.svg_out, "threshold render SVG");
    topo->add_option("-o,--output", topo_args.output, "JSON report");

    VineyardArgs topo_vineyard_args;
    auto* topo_vineyard = topo->add_subcommand("vineyard", "per-k dim-1 diagrams");
    add_vineyard_options(topo_vineyard, topo_vineyard_args);
    topo_vineyard->callback([&topo_vineyard_args] { run_vineyard(topo_vineyard_args); });
    topo->callback([&topo_args, topo_vineyard] {
        if (topo_vineyard->parsed()) return;
        run_topology(topo_args);
    });

    // vineyard (top-level alias) ----------------------------------------------
    auto* vineyard = app.add_subcommand("vineyard", "alias of 'topology vineyard'");
    VineyardArgs vineyard_args;
    add_vineyard_options(vineyard, vineyard_args);
    vineyard->callback([&vineyard_args] { run_vineyard(vineyard_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const wkd::guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const check_failed& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
