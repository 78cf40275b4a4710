#include "wkd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wkd {

namespace {

constexpr int kSupportGuard = 4096;

// --- exact rational mass handling -----------------------------------------

struct ScaledMeasure {
    std::vector<int64_t> units;  // mass_i = units_i / scale
    int64_t scale = 1;
};

int64_t checked_mul(int64_t a, int64_t b, const char* what) {
    if (a != 0 && b > std::numeric_limits<int64_t>::max() / a) {
        throw guard_error(std::string("integer overflow while scaling ") + what);
    }
    return a * b;
}

ScaledMeasure scale_to_units(const DiscreteMeasure& mu, int64_t common_scale) {
    if (!mu.denominator) {
        throw std::runtime_error(
            "exact transport requires rational masses with a declared denominator");
    }
    const int64_t den = *mu.denominator;
    if (common_scale % den != 0) {
        throw std::logic_error("common scale is not a multiple of the denominator");
    }
    const int64_t factor = common_scale / den;
    ScaledMeasure out;
    out.scale = common_scale;
    out.units.reserve(mu.masses.size());
    for (double m : mu.masses) {
        const double scaled = m * static_cast<double>(den);
        const int64_t numer = std::llround(scaled);
        if (numer < 1 || std::abs(scaled - static_cast<double>(numer)) > 1e-6) {
            throw std::runtime_error(
                "mass is not an integer multiple of 1/denominator; pre-round the measure");
        }
        out.units.push_back(checked_mul(numer, factor, "masses"));
    }
    return out;
}

int64_t lcm_guarded(int64_t a, int64_t b) {
    const int64_t g = std::gcd(a, b);
    return checked_mul(a / g, b, "denominators");
}

// --- transportation network simplex ----------------------------------------
//
// Complete bipartite graph: sources 0..n-1, sinks n..n+m-1, arc a = i*m + j
// oriented source->sink. Supplies and demands are positive integers with
// equal totals, so the basis is a spanning tree whose arcs are all real and
// flows stay integral throughout. Starts from the northwest-corner basis.
class TransportSimplex {
public:
    TransportSimplex(int n, int m, std::vector<int64_t> supply, std::vector<int64_t> demand,
                     std::vector<double> cost)
        : n_(n), m_(m), supply_(std::move(supply)), demand_(std::move(demand)),
          cost_(std::move(cost)) {
        const int v = n_ + m_;
        parent_.assign(v, -1);
        pred_arc_.assign(v, -1);
        flow_.assign(v, 0);
        pi_.assign(v, 0.0);
        depth_.assign(v, 0);
        first_child_.assign(v, -1);
        next_sib_.assign(v, -1);
        prev_sib_.assign(v, -1);

        double max_cost = 0.0;
        for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
        eps_ = 1e-10 * (1.0 + max_cost);

        build_initial_basis();
        refresh_potentials_and_depths();
    }

    void solve() {
        const int64_t arc_count = static_cast<int64_t>(n_) * m_;
        const int block = std::max<int>(64, static_cast<int>(std::sqrt(static_cast<double>(arc_count))));
        const int64_t max_pivots = 60LL * (n_ + m_) + 20000;
        int64_t next_arc = 0;
        int64_t pivots = 0;

        for (int round = 0; round < 6; ++round) {
            while (true) {
                // Block pricing: take the most negative reduced cost in the
                // first block that contains any candidate.
                int64_t enter = -1;
                double best = -eps_;
                int64_t scanned = 0;
                while (scanned < arc_count) {
                    const int64_t stop = std::min<int64_t>(scanned + block, arc_count);
                    for (; scanned < stop; ++scanned) {
                        const int64_t a = next_arc + scanned < arc_count
                                              ? next_arc + scanned
                                              : next_arc + scanned - arc_count;
                        const int i = static_cast<int>(a / m_);
                        const int j = static_cast<int>(a % m_);
                        const double rc = cost_[a] + pi_[i] - pi_[n_ + j];
                        if (rc < best) {
                            best = rc;
                            enter = a;
                        }
                    }
                    if (enter >= 0) break;
                }
                if (enter < 0) break;
                next_arc = (next_arc + scanned) % arc_count;
                pivot(enter, best);
                if (++pivots > max_pivots) {
                    throw std::runtime_error("transport solver exceeded its pivot budget");
                }
            }
            // Pivoting updates potentials incrementally; rebuild them from the
            // tree and rescan once to make sure drift did not hide candidates.
            refresh_potentials_and_depths();
            if (!any_negative_arc()) return;
        }
        throw std::runtime_error("transport solver failed to verify optimality");
    }

    template <typename F>
    void for_each_basic(F&& f) const {
        const int v = n_ + m_;
        for (int w = 0; w < v; ++w) {
            if (parent_[w] < 0 || flow_[w] == 0) continue;
            const int64_t a = pred_arc_[w];
            f(static_cast<int>(a / m_), static_cast<int>(a % m_), flow_[w]);
        }
    }

    double total_cost() const {
        double s = 0.0;
        for_each_basic([&](int i, int j, int64_t fl) {
            s += static_cast<double>(fl) * cost_[static_cast<int64_t>(i) * m_ + j];
        });
        return s;
    }

private:
    bool is_source(int v) const { return v < n_; }

    void attach(int child, int par) {
        parent_[child] = par;
        prev_sib_[child] = -1;
        next_sib_[child] = first_child_[par];
        if (first_child_[par] >= 0) prev_sib_[first_child_[par]] = child;
        first_child_[par] = child;
    }

    void detach(int child) {
        const int par = parent_[child];
        if (prev_sib_[child] >= 0) {
            next_sib_[prev_sib_[child]] = next_sib_[child];
        } else {
            first_child_[par] = next_sib_[child];
        }
        if (next_sib_[child] >= 0) prev_sib_[next_sib_[child]] = prev_sib_[child];
        parent_[child] = -1;
        prev_sib_[child] = -1;
        next_sib_[child] = -1;
    }

    // Northwest-corner rule: the visited cells form a staircase joining one
    // new node per cell, i.e. a spanning tree rooted at source 0.
    void build_initial_basis() {
        std::vector<int64_t> s = supply_;
        std::vector<int64_t> d = demand_;
        int i = 0, j = 0;
        while (true) {
            const int64_t t = std::min(s[i], d[j]);
            const int node_sink = n_ + j;
            // Exactly one endpoint is new per cell: the sink when we just
            // moved right (and at the very first cell), the source when we
            // just moved down.
            if (!in_tree(node_sink)) {
                attach(node_sink, i);
                pred_arc_[node_sink] = static_cast<int64_t>(i) * m_ + j;
                flow_[node_sink] = t;
            } else {
                if (in_tree(i)) throw std::logic_error("northwest staircase revisited a node");
                attach(i, node_sink);
                pred_arc_[i] = static_cast<int64_t>(i) * m_ + j;
                flow_[i] = t;
            }
            s[i] -= t;
            d[j] -= t;
            if (i == n_ - 1 && j == m_ - 1) break;
            if (s[i] == 0 && i < n_ - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    bool in_tree(int v) const { return v == 0 || parent_[v] >= 0; }

    void refresh_potentials_and_depths() {
        pi_[0] = 0.0;
        depth_[0] = 0;
        std::vector<int> stack = {0};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int c = first_child_[u]; c >= 0; c = next_sib_[c]) {
                depth_[c] = depth_[u] + 1;
                const double cc = cost_[pred_arc_[c]];
                pi_[c] = is_source(c) ? pi_[u] - cc : pi_[u] + cc;
                stack.push_back(c);
            }
        }
    }

    bool any_negative_arc() const {
        const int64_t arc_count = static_cast<int64_t>(n_) * m_;
        for (int64_t a = 0; a < arc_count; ++a) {
            const int i = static_cast<int>(a / m_);
            const int j = static_cast<int>(a % m_);
            if (cost_[a] + pi_[i] - pi_[n_ + j] < -eps_) return true;
        }
        return false;
    }

    void pivot(int64_t enter, double rc) {
        const int p = static_cast<int>(enter / m_);
        const int q = n_ + static_cast<int>(enter % m_);

        int u = p, v = q;
        while (u != v) {
            if (depth_[u] >= depth_[v]) {
                u = parent_[u];
            } else {
                v = parent_[v];
            }
        }
        const int join = u;

        // Pushing delta along p->q sends flow q..join upward and join..p
        // downward. Decreasing arcs: sources on the p side, sinks on the q
        // side. Ties prefer the q side (strongly feasible leaving rule).
        int64_t delta = std::numeric_limits<int64_t>::max();
        int u_out = -1;
        bool out_on_p_side = true;
        for (int w = p; w != join; w = parent_[w]) {
            if (is_source(w) && flow_[w] < delta) {
                delta = flow_[w];
                u_out = w;
                out_on_p_side = true;
            }
        }
        for (int w = q; w != join; w = parent_[w]) {
            if (!is_source(w) && flow_[w] <= delta) {
                delta = flow_[w];
                u_out = w;
                out_on_p_side = false;
            }
        }
        if (u_out < 0) {
            throw std::logic_error("transport cycle without a blocking arc");
        }

        if (delta > 0) {
            for (int w = p; w != join; w = parent_[w]) {
                flow_[w] += is_source(w) ? -delta : delta;
            }
            for (int w = q; w != join; w = parent_[w]) {
                flow_[w] += is_source(w) ? delta : -delta;
            }
        }

        const int w_in = out_on_p_side ? p : q;
        const int w_att = out_on_p_side ? q : p;

        // Re-root the cut subtree at w_in and hang it off w_att through the
        // entering arc, shifting the subtree's potentials so the arc's
        // reduced cost becomes zero.
        int node = w_in;
        int par = parent_[node];
        int64_t arc = pred_arc_[node];
        int64_t fl = flow_[node];
        detach(w_in);
        attach(w_in, w_att);
        pred_arc_[w_in] = enter;
        flow_[w_in] = delta;
        while (node != u_out) {
            const int next_node = par;
            const int next_par = parent_[next_node];
            const int64_t next_arc = pred_arc_[next_node];
            const int64_t next_fl = flow_[next_node];
            detach(next_node);
            attach(next_node, node);
            pred_arc_[next_node] = arc;
            flow_[next_node] = fl;
            node = next_node;
            par = next_par;
            arc = next_arc;
            fl = next_fl;
        }

        const double shift = (w_in == p) ? -rc : rc;
        std::vector<int> stack = {w_in};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            pi_[x] += shift;
            depth_[x] = depth_[parent_[x]] + 1;
            for (int c = first_child_[x]; c >= 0; c = next_sib_[c]) stack.push_back(c);
        }
    }

    int n_, m_;
    std::vector<int64_t> supply_, demand_;
    std::vector<double> cost_;
    double eps_ = 0.0;

    std::vector<int> parent_;
    std::vector<int64_t> pred_arc_;
    std::vector<int64_t> flow_;
    std::vector<double> pi_;
    std::vector<int> depth_;
    std::vector<int> first_child_, next_sib_, prev_sib_;
};

void check_plan_feasibility(const TransportPlan& plan, const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu) {
    std::vector<double> row(mu.masses.size(), 0.0);
    std::vector<double> col(nu.masses.size(), 0.0);
    for (const auto& e : plan.entries) {
        if (!(e.mass > 0.0)) throw std::logic_error("transport plan entry with non-positive mass");
        row[e.src] += e.mass;
        col[e.tgt] += e.mass;
    }
    for (size_t i = 0; i < row.size(); ++i) {
        if (std::abs(row[i] - mu.masses[i]) > 1e-9) {
            throw std::logic_error("transport plan row sums do not match source masses");
        }
    }
    for (size_t j = 0; j < col.size(); ++j) {
        if (std::abs(col[j] - nu.masses[j]) > 1e-9) {
            throw std::logic_error("transport plan column sums do not match target masses");
        }
    }
}

// Classic O(n^3) shortest augmenting path assignment (1-based, virtual
// column 0), exact for double costs.
std::vector<int> solve_assignment(int n, const std::vector<double>& cost) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_of_col(n);
    for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
    return row_of_col;
}

}  // namespace

double TransportPlan::squared_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
    double s = 0.0;
    for (const Entry& e : entries) {
        s += e.mass * dist2(mu.support.point(e.src), nu.support.point(e.tgt));
    }
    return s;
}

W2Result w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    mu.validate();
    nu.validate();
    const int n = mu.support.size();
    const int m = nu.support.size();
    if (n > kSupportGuard || m > kSupportGuard) {
        throw guard_error("support size exceeds the exact transport guard");
    }
    if (mu.support.dim() != nu.support.dim()) {
        throw std::invalid_argument("measures live in different dimensions");
    }
    if (std::abs(mu.total_mass() - nu.total_mass()) > 1e-9) {
        throw std::runtime_error("mass mismatch between measures");
    }

    if (!mu.denominator || !nu.denominator) {
        throw std::runtime_error(
            "exact transport requires rational masses with a declared denominator");
    }
    const int64_t scale = lcm_guarded(*mu.denominator, *nu.denominator);
    const ScaledMeasure a = scale_to_units(mu, scale);
    const ScaledMeasure b = scale_to_units(nu, scale);
    const int64_t total_a = std::accumulate(a.units.begin(), a.units.end(), int64_t{0});
    const int64_t total_b = std::accumulate(b.units.begin(), b.units.end(), int64_t{0});
    if (total_a != total_b) {
        throw std::runtime_error("mass mismatch between measures");
    }

    std::vector<double> cost(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        auto pi = mu.support.point(i);
        for (int j = 0; j < m; ++j) {
            cost[static_cast<size_t>(i) * m + j] = dist2(pi, nu.support.point(j));
        }
    }

    TransportSimplex simplex(n, m, a.units, b.units, std::move(cost));
    simplex.solve();

    W2Result result;
    const double inv_scale = 1.0 / static_cast<double>(scale);
    simplex.for_each_basic([&](int i, int j, int64_t fl) {
        result.plan.entries.push_back({i, j, static_cast<double>(fl) * inv_scale});
    });
    std::sort(result.plan.entries.begin(), result.plan.entries.end(),
              [](const TransportPlan::Entry& x, const TransportPlan::Entry& y) {
                  return x.src != y.src ? x.src < y.src : x.tgt < y.tgt;
              });
    check_plan_feasibility(result.plan, mu, nu);
    result.distance = std::sqrt(std::max(0.0, simplex.total_cost() * inv_scale));
    return result;
}

W2Result w2_assignment(const PointCloud& a, const PointCloud& b) {
    a.validate();
    b.validate();
    if (a.size() != b.size()) {
        throw std::runtime_error("assignment requires equal-size clouds");
    }
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("clouds live in different dimensions");
    }
    const int n = a.size();
    if (n > kSupportGuard) {
        throw guard_error("support size exceeds the exact transport guard");
    }
    std::vector<double> cost(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cost[static_cast<size_t>(i) * n + j] = dist2(a.point(i), b.point(j));
        }
    }
    const std::vector<int> row_of_col = solve_assignment(n, cost);

    W2Result result;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const int i = row_of_col[j];
        total += cost[static_cast<size_t>(i) * n + j];
        result.plan.entries.push_back({i, j, 1.0 / n});
    }
    std::sort(result.plan.entries.begin(), result.plan.entries.end(),
              [](const TransportPlan::Entry& x, const TransportPlan::Entry& y) {
                  return x.src != y.src ? x.src < y.src : x.tgt < y.tgt;
              });
    result.distance = std::sqrt(std::max(0.0, total / n));
    return result;
}

double w2_empirical_to_reference(const PointCloud& p, const DiscreteMeasure& ref) {
    return w2_exact(DiscreteMeasure::uniform_on(p), ref).distance;
}

}  // namespace wkd
