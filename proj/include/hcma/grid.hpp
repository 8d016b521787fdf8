#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hcma {

enum class Topology {
    Torus,  // R^2 / Z^2, periodic in x and y, n x n nodes
    Patch,  // x bounded with Dirichlet faces, y periodic
};

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

// Uniform grid over [0,1]_t x (torus or patch). Spatial spacing h = 1/n, time
// spacing 1/(nt-1). Patch coordinates are x = (i + ox) h, y = (j + oy) h.
struct GridSpec {
    Topology topology = Topology::Torus;
    int n = 0;
    int nt = 1;
    int nx = 0;
    int ny = 0;
    int ox = 0;
    int oy = 0;

    static GridSpec torus(int n, int nt);
    // x in [-(half) h, (half) h] with Dirichlet faces, y periodic with n nodes
    static GridSpec centred_patch(int n, int nt, int half);

    double h() const { return 1.0 / n; }
    double ht() const { return nt > 1 ? 1.0 / (nt - 1) : 0.0; }
    double t(int k) const { return nt > 1 ? static_cast<double>(k) / (nt - 1) : 1.0; }
    // torus coordinates are wrapped into [-1/2, 1/2]
    double x(int i) const;
    double y(int j) const;
    bool periodic_x() const { return topology == Topology::Torus; }
    std::size_t slice_size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t size() const { return slice_size() * nt; }
    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * nx + i) * ny + j;
    }
    int wrap_x(int i) const;
    int wrap_y(int j) const;
    // node image under z -> -z, or -1 when the image is not a node
    int mirror_x(int i) const;
    int mirror_y(int j) const;
    bool has_symmetry() const;
    // node of z = 0, or -1 when absent
    int origin_i() const;
    int origin_j() const;
    bool dirichlet_x(int i) const { return !periodic_x() && (i == 0 || i == nx - 1); }

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

struct GridFunction {
    GridSpec grid;
    double omega11 = 1.0;
    bool symmetric = false;  // values(t, -z) == values(t, z) exactly
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(const GridSpec& g, double omega, double fill = 0.0);

    double& operator()(int k, int i, int j) { return values[grid.index(k, i, j)]; }
    double operator()(int k, int i, int j) const { return values[grid.index(k, i, j)]; }

    // single time slice as a function with nt = 1
    GridFunction slice(int k) const;
    void require_finite(const char* who) const;
    // max |u(t,z) - u(t,-z)|
    double symmetry_residual() const;
};

}  // namespace hcma
