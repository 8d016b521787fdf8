#include "hcma/grid.hpp"

#include <algorithm>
#include <cmath>

#include "hcma/error.hpp"

namespace hcma {

std::string to_string(Topology t) { return t == Topology::Torus ? "torus" : "patch"; }

Topology topology_from_string(const std::string& s) {
    if (s == "torus") return Topology::Torus;
    if (s == "patch") return Topology::Patch;
    throw ValidationError("unknown topology '" + s + "'");
}

GridSpec GridSpec::torus(int n, int nt) {
    GridSpec g;
    g.topology = Topology::Torus;
    g.n = n;
    g.nt = nt;
    g.nx = n;
    g.ny = n;
    g.validate();
    return g;
}

GridSpec GridSpec::centred_patch(int n, int nt, int half) {
    GridSpec g;
    g.topology = Topology::Patch;
    g.n = n;
    g.nt = nt;
    g.nx = 2 * half + 1;
    g.ny = n;
    g.ox = -half;
    g.oy = 0;
    g.validate();
    return g;
}

double GridSpec::x(int i) const {
    if (periodic_x()) return (2 * i <= n ? i : i - n) * h();
    return (i + ox) * h();
}

double GridSpec::y(int j) const {
    if (topology == Topology::Torus) return (2 * j <= n ? j : j - n) * h();
    const int jj = j + oy;
    return (2 * jj <= ny ? jj : jj - ny) * h();
}

int GridSpec::wrap_x(int i) const {
    if (!periodic_x()) return i;
    i %= nx;
    return i < 0 ? i + nx : i;
}

int GridSpec::wrap_y(int j) const {
    j %= ny;
    return j < 0 ? j + ny : j;
}

int GridSpec::mirror_x(int i) const {
    if (periodic_x()) return wrap_x(-i);
    const int m = -2 * ox - i;
    return (m >= 0 && m < nx) ? m : -1;
}

int GridSpec::mirror_y(int j) const { return wrap_y(-2 * oy - j); }

bool GridSpec::has_symmetry() const {
    if (periodic_x()) return true;
    return 2 * ox + nx - 1 == 0;
}

int GridSpec::origin_i() const {
    if (periodic_x()) return 0;
    return (-ox >= 0 && -ox < nx) ? -ox : -1;
}

int GridSpec::origin_j() const { return wrap_y(-oy); }

void GridSpec::validate() const {
    if (n < 2) throw ValidationError("grid: n must be at least 2");
    if (nt < 1) throw ValidationError("grid: nt must be positive");
    if (nx < 1 || ny < 1) throw ValidationError("grid: empty spatial extent");
    if (topology == Topology::Torus) {
        if (n % 2 != 0) throw ValidationError("grid: torus n must be even");
        if (nx != n || ny != n) throw ValidationError("grid: torus must have n x n nodes");
        if (ox != 0 || oy != 0) throw ValidationError("grid: torus origin must be 0");
    } else {
        if (nx < 3) throw ValidationError("grid: patch needs at least 3 x-nodes");
        if (ny % 2 != 0) throw ValidationError("grid: periodic y extent must be even");
    }
}

GridFunction::GridFunction(const GridSpec& g, double omega, double fill)
    : grid(g), omega11(omega), values(g.size(), fill) {}

GridFunction GridFunction::slice(int k) const {
    if (k < 0 || k >= grid.nt) throw DomainError("slice index out of range");
    GridSpec g = grid;
    g.nt = 1;
    GridFunction s(g, omega11);
    s.symmetric = symmetric;
    const std::size_t m = grid.slice_size();
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(k * m), m, s.values.begin());
    return s;
}

void GridFunction::require_finite(const char* who) const {
    if (values.size() != grid.size())
        throw ValidationError(std::string(who) + ": value count does not match the grid");
    for (double v : values)
        if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": non-finite value");
}

double GridFunction::symmetry_residual() const {
    if (!grid.has_symmetry()) throw DomainError("grid is not symmetric under z -> -z");
    double r = 0.0;
    for (int k = 0; k < grid.nt; ++k)
        for (int i = 0; i < grid.nx; ++i) {
            const int mi = grid.mirror_x(i);
            for (int j = 0; j < grid.ny; ++j)
                r = std::max(r, std::abs((*this)(k, i, j) - (*this)(k, mi, grid.mirror_y(j))));
        }
    return r;
}

}  // namespace hcma
