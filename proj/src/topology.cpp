#include "wkd/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wkd/dtm.hpp"
#include "wkd/io.hpp"
#include "wkd/parallel.hpp"

namespace wkd {

namespace {

// Union-find over grid cells with elder-rule birth tracking. Components are
// identified by the filtration rank of their birth cell; rank -1 marks the
// virtual boundary component, which is older than everything.
class ElderUnionFind {
public:
    explicit ElderUnionFind(int n) : parent_(n, -1), birth_rank_(n, 0) {}

    bool active(int x) const { return parent_[x] >= 0; }

    void make_set(int x, int rank) {
        parent_[x] = x;
        birth_rank_[x] = rank;
    }

    int find(int x) {
        int root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const int next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    int birth_rank(int root) const { return birth_rank_[root]; }

    // Merges the two components; the one with the later birth dies. Returns
    // the dying component's birth rank, or -2 when the roots already agree.
    int merge(int a, int b) {
        int ra = find(a);
        int rb = find(b);
        if (ra == rb) return -2;
        if (birth_rank_[ra] > birth_rank_[rb]) std::swap(ra, rb);
        const int dying = birth_rank_[rb];
        parent_[rb] = ra;
        return dying;
    }

private:
    std::vector<int> parent_;
    std::vector<int> birth_rank_;
};

std::vector<int> filtration_order(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return values[a] != values[b] ? values[a] < values[b] : a < b;
    });
    return order;
}

constexpr int kNeighbors4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr int kNeighbors8[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                   {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

}  // namespace

std::vector<PersistencePair> PersistenceDiagram::in_dim(int dim) const {
    std::vector<PersistencePair> out;
    for (const auto& p : pairs) {
        if (p.dim == dim) out.push_back(p);
    }
    return out;
}

std::vector<double> PersistenceDiagram::persistences(int dim) const {
    std::vector<double> out;
    for (const auto& p : pairs) {
        if (p.dim == dim && !p.essential()) out.push_back(p.persistence());
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

std::pair<int, int> betti_at_level(const ScalarField2D& field, double r) {
    if (!std::isfinite(r)) {
        throw std::invalid_argument("betti level must be finite");
    }
    field.validate();
    const int nx = field.nx();
    const int ny = field.ny();
    const int cells = nx * ny;
    const auto& v = field.values();

    // Foreground components, 4-connectivity.
    ElderUnionFind fg(cells);
    for (int i = 0; i < cells; ++i) {
        if (v[i] <= r) fg.make_set(i, 0);
    }
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int i = iy * nx + ix;
            if (v[i] > r) continue;
            if (ix + 1 < nx && v[i + 1] <= r) fg.merge(i, i + 1);
            if (iy + 1 < ny && v[i + nx] <= r) fg.merge(i, i + nx);
        }
    }
    int beta0 = 0;
    for (int i = 0; i < cells; ++i) {
        if (v[i] <= r && fg.find(i) == i) ++beta0;
    }

    // Background components, 8-connectivity, with a virtual node absorbing
    // everything that touches the grid boundary.
    const int virtual_node = cells;
    ElderUnionFind bg(cells + 1);
    bg.make_set(virtual_node, -1);
    for (int i = 0; i < cells; ++i) {
        if (v[i] > r) bg.make_set(i, 0);
    }
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int i = iy * nx + ix;
            if (v[i] <= r) continue;
            if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1) bg.merge(i, virtual_node);
            for (const auto& d : kNeighbors8) {
                const int jx = ix + d[0];
                const int jy = iy + d[1];
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                const int j = jy * nx + jx;
                if (v[j] > r) bg.merge(i, j);
            }
        }
    }
    int beta1 = 0;
    const int boundary_root = bg.find(virtual_node);
    for (int i = 0; i < cells; ++i) {
        if (v[i] > r && bg.find(i) == i && i != boundary_root) ++beta1;
    }
    return {beta0, beta1};
}

PersistenceDiagram sublevel_persistence(const ScalarField2D& field) {
    field.validate();
    const int nx = field.nx();
    const int ny = field.ny();
    const int cells = nx * ny;
    const auto& values = field.values();

    PersistenceDiagram diagram;

    // --- dim 0: sublevel union-find, 4-adjacency -------------------------
    {
        const std::vector<int> order = filtration_order(values);
        std::vector<int> rank(cells);
        for (int t = 0; t < cells; ++t) rank[order[t]] = t;
        std::vector<int> cell_of_rank = order;

        ElderUnionFind uf(cells);
        for (int t = 0; t < cells; ++t) {
            const int i = cell_of_rank[t];
            uf.make_set(i, t);
            const int ix = i % nx;
            const int iy = i / nx;
            for (const auto& d : kNeighbors4) {
                const int jx = ix + d[0];
                const int jy = iy + d[1];
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                const int j = jy * nx + jx;
                if (!uf.active(j) || rank[j] > t) continue;
                const int dying = uf.merge(i, j);
                if (dying < 0) continue;
                const int birth_cell = cell_of_rank[dying];
                if (values[birth_cell] == values[i]) continue;  // zero length
                diagram.pairs.push_back({values[birth_cell], values[i], 0, birth_cell, i});
            }
        }
        const int survivor = uf.find(0);
        const int birth_cell = cell_of_rank[uf.birth_rank(survivor)];
        diagram.pairs.push_back(
            {values[birth_cell], std::numeric_limits<double>::infinity(), 0, birth_cell, -1});
    }

    // --- dim 1: superlevel union-find on the negated field, 8-adjacency,
    // virtual boundary node; (b', d') maps to (-d', -b') ------------------
    {
        std::vector<double> neg(values.size());
        for (size_t i = 0; i < values.size(); ++i) neg[i] = -values[i];
        const std::vector<int> order = filtration_order(neg);
        std::vector<int> rank(cells);
        for (int t = 0; t < cells; ++t) rank[order[t]] = t;
        std::vector<int> cell_of_rank = order;

        const int virtual_node = cells;
        ElderUnionFind uf(cells + 1);
        uf.make_set(virtual_node, -1);

        auto record = [&](int dying_rank, int merge_cell) {
            if (dying_rank < 0) return;  // same component, or the virtual one
            const int death_cell = cell_of_rank[dying_rank];
            if (values[death_cell] == values[merge_cell]) return;  // zero length
            diagram.pairs.push_back(
                {values[merge_cell], values[death_cell], 1, merge_cell, death_cell});
        };

        for (int t = 0; t < cells; ++t) {
            const int i = cell_of_rank[t];
            uf.make_set(i, t);
            const int ix = i % nx;
            const int iy = i / nx;
            if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1) {
                record(uf.merge(i, virtual_node), i);
            }
            for (const auto& d : kNeighbors8) {
                const int jx = ix + d[0];
                const int jy = iy + d[1];
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                const int j = jy * nx + jx;
                if (!uf.active(j) || rank[j] > t) continue;
                record(uf.merge(i, j), i);
            }
        }
    }

    std::sort(diagram.pairs.begin(), diagram.pairs.end(),
              [](const PersistencePair& a, const PersistencePair& b) {
                  if (a.dim != b.dim) return a.dim < b.dim;
                  if (a.birth != b.birth) return a.birth < b.birth;
                  if (a.death != b.death) return a.death < b.death;
                  return a.birth_cell < b.birth_cell;
              });
    return diagram;
}

int persistent_betti(const PersistenceDiagram& diag, double a, double b, int dim) {
    if (!(a < b)) {
        throw std::invalid_argument("persistent betti needs a < b");
    }
    int count = 0;
    for (const auto& p : diag.pairs) {
        if (p.dim == dim && p.birth <= a && p.death > b) ++count;
    }
    return count;
}

Vineyard vineyard_sweep(const PointCloud& cloud, const std::vector<int>& k_values,
                        BoundingBox2D box, int nx, int ny) {
    cloud.validate();
    if (cloud.dim() != 2) {
        throw std::invalid_argument("vineyard sweep needs a 2D cloud");
    }
    for (size_t t = 0; t < k_values.size(); ++t) {
        if (k_values[t] < 1 || k_values[t] > cloud.size()) {
            throw std::runtime_error("k exceeds cloud size");
        }
        if (t > 0 && k_values[t] <= k_values[t - 1]) {
            throw std::invalid_argument("k values must be strictly increasing");
        }
    }

    NeighborIndex index(cloud);
    Vineyard vineyard;
    vineyard.entries.resize(k_values.size());
    parallel_for(0, static_cast<int>(k_values.size()), [&](int t) {
        const int k = k_values[t];
        const WitnessedKDistance witnessed(index, k);
        const ScalarField2D field = rasterize(
            [&](double x, double y) {
                const double q[2] = {x, y};
                return witnessed.eval(q);
            },
            box, nx, ny);
        const PersistenceDiagram diag = sublevel_persistence(field);
        VineyardEntry& entry = vineyard.entries[t];
        entry.k = k;
        entry.m0 = static_cast<double>(k) / cloud.size();
        entry.diagram.pairs = diag.in_dim(1);
    });
    return vineyard;
}

std::string diagram_to_csv(const PersistenceDiagram& diag) {
    std::string out = "# persistence diagram: dim,birth,death\n";
    for (const auto& p : diag.pairs) {
        out += std::to_string(p.dim);
        out += ',';
        out += fmt_double(p.birth);
        out += ',';
        out += fmt_double(p.death);
        out += '\n';
    }
    return out;
}

PersistenceDiagram diagram_from_csv(const std::string& text) {
    PersistenceDiagram diag;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string dim_s, birth_s, death_s;
        if (!std::getline(row, dim_s, ',') || !std::getline(row, birth_s, ',') ||
            !std::getline(row, death_s, ',')) {
            throw std::runtime_error("malformed diagram row '" + line + "'");
        }
        PersistencePair p;
        p.dim = std::stoi(dim_s);
        p.birth = parse_double(birth_s);
        p.death = parse_double(death_s);
        if (p.death < p.birth) {
            throw std::runtime_error("diagram row has death < birth");
        }
        diag.pairs.push_back(p);
    }
    return diag;
}

std::string vineyard_to_csv(const Vineyard& vineyard) {
    std::string out = "# vineyard: k,m0,class_rank,birth,death,persistence\n";
    for (const auto& entry : vineyard.entries) {
        auto pairs = entry.diagram.in_dim(1);
        std::sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
            if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
            return a.birth < b.birth;
        });
        for (size_t rank = 0; rank < pairs.size(); ++rank) {
            const auto& p = pairs[rank];
            out += std::to_string(entry.k);
            out += ',';
            out += fmt_double(entry.m0);
            out += ',';
            out += std::to_string(rank);
            out += ',';
            out += fmt_double(p.birth);
            out += ',';
            out += fmt_double(p.death);
            out += ',';
            out += fmt_double(p.persistence());
            out += '\n';
        }
    }
    return out;
}

}  // namespace wkd
