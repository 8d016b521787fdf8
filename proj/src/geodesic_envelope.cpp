#include "hcma/geodesic_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>

#include "hcma/error.hpp"
#include "hcma/local_model.hpp"

namespace hcma {

std::vector<LatticeDirection> default_directions() {
    return {{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {1, 0, -1, 0}, {1, 0, 0, -1}};
}

double EnvelopeProblem::resolved_tol() const {
    if (tol_sweep > 0.0) return tol_sweep;
    double m = 0.0;
    for (double x : v.values) m = std::max(m, std::abs(x));
    return 1e-10 * (1.0 + m);
}

void EnvelopeProblem::validate() const {
    grid.validate();
    if (grid.nt < 3) throw InsufficientResolution("envelope: nt must be at least 3");
    if (!(omega11 > 0.0) || !std::isfinite(omega11))
        throw ValidationError("envelope: omega11 must be positive");
    if (v.grid.nt != 1 || v.grid.nx != grid.nx || v.grid.ny != grid.ny || v.grid.n != grid.n ||
        v.grid.topology != grid.topology)
        throw ValidationError("envelope: v must be a single slice on the problem grid");
    v.require_finite("envelope v");
    if (grid.topology == Topology::Patch) {
        if (!boundary) throw ValidationError("envelope: patch problems need boundary data");
        if (!(boundary->grid == grid)) throw ValidationError("envelope: boundary grid mismatch");
        boundary->require_finite("envelope boundary");
    }
    if (max_sweeps < 1) throw ValidationError("envelope: max_sweeps must be positive");
    if (phases < 1) throw ValidationError("envelope: phases must be at least 1");
    if (kernel_candidates < 1) throw ValidationError("envelope: kernel_candidates must be positive");
    if (threads < 1) throw ValidationError("envelope: threads must be positive");
    if (max_multiple < 0 || max_denominator < 0)
        throw ValidationError("envelope: negative stencil limits");
    if (!(tol_sweep >= 0.0) || !std::isfinite(tol_sweep))
        throw ValidationError("envelope: tol_sweep must be finite");

    bool has_t = false, has_z = false;
    int mixed = 0;
    for (const auto& d : directions) {
        const bool s = d.s_re != 0 || d.s_im != 0, z = d.z_re != 0 || d.z_im != 0;
        if (!s && !z) throw ValidationError("envelope: zero direction");
        has_t = has_t || (s && !z);
        has_z = has_z || (!s && z);
        mixed += s && z;
    }
    if (!has_t || !has_z || mixed < 2)
        throw ValidationError("envelope: directions need (1,0), (0,1) and two mixed directions");

    const auto c = wirtinger(v, 0, Wirtinger::ZZBar);
    for (const auto& x : c)
        if (!(omega11 + x.real() > 0.0))
            throw InvalidPotential("envelope: omega11 + v_zzbar must be positive on the grid");
}

GridFunction upper_barrier(const EnvelopeProblem& problem) {
    const GridSpec& G = problem.grid;
    GridFunction u(G, problem.omega11);
    u.symmetric = problem.v.symmetric;
    for (int k = 0; k < G.nt; ++k) {
        const double t = G.t(k);
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) u(k, i, j) = t * problem.v(0, i, j);
    }
    for (int i = 0; i < G.nx; ++i)
        for (int j = 0; j < G.ny; ++j) u(G.nt - 1, i, j) = problem.v(0, i, j);
    return u;
}

LowerBarrier lower_barrier(const EnvelopeProblem& problem, double safety) {
    const GridSpec& G = problem.grid;
    const auto vz = wirtinger(problem.v, 0, Wirtinger::Z);
    const auto vzzb = wirtinger(problem.v, 0, Wirtinger::ZZBar);
    double grad2 = 0.0, cmin = 0.0;
    for (std::size_t p = 0; p < vz.size(); ++p) {
        grad2 = std::max(grad2, std::norm(vz[p]));
        cmin = std::min(cmin, vzzb[p].real());
    }
    // omega11 + t v_zzbar is affine in t, so its minimum over [0,1] sits at an end
    const double delta = problem.omega11 + cmin;
    if (!(delta > 0.0))
        throw InvalidPotential("lower_barrier: omega11 + t v_zzbar must stay positive");
    LowerBarrier lb;
    lb.C = grad2 > 0.0 ? safety * grad2 / (2.0 * delta) : 0.0;
    lb.L = upper_barrier(problem);
    for (int k = 0; k < G.nt; ++k) {
        const double t = G.t(k);
        const double drop = lb.C * t * (1.0 - t);
        if (drop == 0.0) continue;
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) lb.L(k, i, j) -= drop;
    }
    return lb;
}

namespace {

// One lattice direction at one multiple r, in grid units.
struct Stencil {
    int t1, x1, y1, t2, x2, y2;
    std::ptrdiff_t o1, o2;  // t strides of the two pairs
    double treach;          // t reach in slice units
    int xreach, yreach;
    double cost;            // omega11 (r h)^2 |d_z|^2
    bool pair1_zero;
    std::uint8_t lg;        // log2 r
};

class Scheme {
public:
    explicit Scheme(const EnvelopeProblem& pb)
        : G_(pb.grid), omega_(pb.omega11), h_(pb.grid.h()), max_mult_(pb.max_multiple),
          aligned_(pb.grid.nt - 1 == pb.grid.n),
          tscale_(static_cast<double>(pb.grid.nt - 1) / pb.grid.n) {
        for (const auto& d : pb.directions) add_direction(d);
        nbase_ = static_cast<int>(dirs_.size());
        // wrapped row offsets and columns for indices in [-n, 2n)
        xrow_.resize(3 * nx_);
        ywrap_.resize(3 * ny_);
        for (int i = -nx_; i < 2 * nx_; ++i)
            xrow_[i + nx_] = static_cast<std::ptrdiff_t>(px_ ? (i + nx_) % nx_ : std::clamp(i, 0, nx_ - 1)) * ny_;
        for (int j = -ny_; j < 2 * ny_; ++j) ywrap_[j + ny_] = (j + ny_) % ny_;
    }

    int add_direction(const LatticeDirection& d) {
        const LatticeDirection n{-d.s_re, -d.s_im, -d.z_re, -d.z_im};
        for (std::size_t q = 0; q < dirs_.size(); ++q)
            if (dirs_[q] == d || dirs_[q] == n) return static_cast<int>(q);
        dirs_.push_back(d);
        begin_.push_back(static_cast<int>(all_.size()));
        expand(d);
        end_.push_back(static_cast<int>(all_.size()));
        return static_cast<int>(dirs_.size() - 1);
    }

    void set_candidates(std::vector<std::uint16_t> cand, int slots) {
        cand_ = std::move(cand);
        slots_ = slots;
    }

    const std::vector<LatticeDirection>& directions() const { return dirs_; }
    int base_count() const { return nbase_; }

    // smallest stencil bound at node (k, i, j) of the values d
    double bound(const double* d, int k, int i, int j, std::int32_t& arg, std::uint8_t& argm) const {
        double best = std::numeric_limits<double>::infinity();
        int best_id = -1;
        std::uint8_t best_lg = 0;
        const double kd = k, kl = G_.nt - 1 - k;
        const std::ptrdiff_t kb = static_cast<std::ptrdiff_t>(k) * nx_ * ny_;
        const std::ptrdiff_t* xr = xrow_.data() + nx_;
        const int* yw = ywrap_.data() + ny_;
        auto visit = [&](int id) {
            for (int q = begin_[id]; q < end_[id]; ++q) {
                const Stencil& s = all_[q];
                if (kd < s.treach - 1e-9 || kl < s.treach - 1e-9) break;
                if (!px_ && (i < s.xreach || i + s.xreach > nx_ - 1)) break;
                double S1 = 0.0, S2;
                if (aligned_) {
                    const std::ptrdiff_t t2 = s.o2;
                    S2 = d[kb + t2 + xr[i + s.x2] + yw[j + s.y2]] + d[kb - t2 + xr[i - s.x2] + yw[j - s.y2]];
                    if (!s.pair1_zero) {
                        const std::ptrdiff_t t1 = s.o1;
                        S1 = d[kb + t1 + xr[i + s.x1] + yw[j + s.y1]] +
                             d[kb - t1 + xr[i - s.x1] + yw[j - s.y1]];
                    }
                } else {
                    S2 = at(d, k, i, j, s.t2, s.x2, s.y2) + at(d, k, i, j, -s.t2, -s.x2, -s.y2);
                    if (!s.pair1_zero)
                        S1 = at(d, k, i, j, s.t1, s.x1, s.y1) + at(d, k, i, j, -s.t1, -s.x1, -s.y1);
                }
                const double b = s.pair1_zero ? 0.5 * S2 + 2.0 * s.cost : 0.25 * (S1 + S2) + s.cost;
                if (b < best) {
                    best = b;
                    best_id = id;
                    best_lg = s.lg;
                }
            }
        };
        for (int id = 0; id < nbase_; ++id) visit(id);
        if (slots_ > 0) {
            const std::uint16_t* c = cand_.data() + G_.index(k, i, j) * slots_;
            for (int q = 0; q < slots_ && c[q] != kEmpty; ++q) visit(c[q]);
        }
        arg = best_id;
        argm = best_lg;
        return best;
    }

    // bound of one stencil, for sweeps that keep the previous minimizer
    double bound_of(const double* d, int k, int i, int j, int id, int lg) const {
        const Stencil& s = all_[begin_[id] + lg];
        double S1 = 0.0, S2;
        if (aligned_) {
            const std::ptrdiff_t kb = static_cast<std::ptrdiff_t>(k) * nx_ * ny_;
            const std::ptrdiff_t* xr = xrow_.data() + nx_;
            const int* yw = ywrap_.data() + ny_;
            S2 = d[kb + s.o2 + xr[i + s.x2] + yw[j + s.y2]] + d[kb - s.o2 + xr[i - s.x2] + yw[j - s.y2]];
            if (!s.pair1_zero)
                S1 = d[kb + s.o1 + xr[i + s.x1] + yw[j + s.y1]] + d[kb - s.o1 + xr[i - s.x1] + yw[j - s.y1]];
        } else {
            S2 = at(d, k, i, j, s.t2, s.x2, s.y2) + at(d, k, i, j, -s.t2, -s.x2, -s.y2);
            if (!s.pair1_zero) S1 = at(d, k, i, j, s.t1, s.x1, s.y1) + at(d, k, i, j, -s.t1, -s.x1, -s.y1);
        }
        return s.pair1_zero ? 0.5 * S2 + 2.0 * s.cost : 0.25 * (S1 + S2) + s.cost;
    }

    static constexpr std::uint16_t kEmpty = 0xFFFF;

private:
    void expand(const LatticeDirection& d) {
        const int a = d.s_re, b = d.s_im, c = d.z_re, e = d.z_im;
        // zeta = r h: (dt, dz) = r (b, c + i e); zeta = i r h: r (a, -e + i c)
        const int t1 = b, x1 = c, y1 = e, t2 = a, x2 = -e, y2 = c;
        const int tm = std::max(std::abs(t1), std::abs(t2));
        const int xm = std::max(std::abs(x1), std::abs(x2));
        const int ym = std::max(std::abs(y1), std::abs(y2));
        const bool spatial = tm == 0;
        std::uint8_t lg = 0;
        for (int r = 1;; r *= 2, ++lg) {
            if (max_mult_ > 0 && r > max_mult_) break;
            const double treach = r * tm * tscale_;
            if (2.0 * treach > G_.nt - 1 + 1e-9) break;
            if (!G_.periodic_x() && 2 * r * xm > G_.nx - 1) break;
            // periodic axes: at most one turn, and spatial circles within half a period
            if (G_.periodic_x() && r * xm > (spatial ? G_.nx / 2 : G_.nx)) break;
            if (r * ym > (spatial ? G_.ny / 2 : G_.ny)) break;
            Stencil s;
            s.t1 = r * t1;
            s.x1 = r * x1;
            s.y1 = r * y1;
            s.t2 = r * t2;
            s.x2 = r * x2;
            s.y2 = r * y2;
            const std::ptrdiff_t st = static_cast<std::ptrdiff_t>(G_.nx) * G_.ny;
            s.o1 = s.t1 * st;
            s.o2 = s.t2 * st;
            s.treach = treach;
            s.xreach = r * xm;
            s.yreach = r * ym;
            s.cost = omega_ * h_ * h_ * static_cast<double>(r) * r * static_cast<double>(c * c + e * e);
            s.pair1_zero = t1 == 0 && x1 == 0 && y1 == 0;
            s.lg = lg;
            all_.push_back(s);
        }
    }

    double at(const double* u, int k, int i, int j, int dt, int dx, int dy) const {
        int ii = i + dx, jj = j + dy;
        if (px_) ii += ii < 0 ? nx_ : (ii >= nx_ ? -nx_ : 0);
        jj += jj < 0 ? ny_ : (jj >= ny_ ? -ny_ : 0);
        if (aligned_) return u[(static_cast<std::size_t>(k + dt) * nx_ + ii) * ny_ + jj];
        const double kt = k + dt * tscale_;
        const int k0 = std::clamp(static_cast<int>(std::floor(kt + 1e-12)), 0, G_.nt - 1);
        const double w = kt - k0;
        if (w <= 1e-12 || k0 == G_.nt - 1) return u[G_.index(k0, ii, jj)];
        return (1.0 - w) * u[G_.index(k0, ii, jj)] + w * u[G_.index(k0 + 1, ii, jj)];
    }

    const GridSpec& G_;
    int nx_ = G_.nx, ny_ = G_.ny;
    bool px_ = G_.periodic_x();
    double omega_, h_;
    int max_mult_;
    bool aligned_;
    double tscale_;
    std::vector<LatticeDirection> dirs_;
    std::vector<Stencil> all_;
    std::vector<int> begin_, end_;
    int nbase_ = 0;
    std::vector<std::uint16_t> cand_;
    int slots_ = 0;
    std::vector<std::ptrdiff_t> xrow_;
    std::vector<int> ywrap_;
};

void reset_dirichlet(const EnvelopeProblem& pb, GridFunction& u) {
    const GridSpec& G = pb.grid;
    for (int k = 0; k < G.nt; ++k)
        for (int i = 0; i < G.nx; ++i) {
            const bool face = k == 0 || k == G.nt - 1 || G.dirichlet_x(i);
            if (!face) continue;
            for (int j = 0; j < G.ny; ++j) {
                double val;
                if (pb.boundary) val = (*pb.boundary)(k, i, j);
                else val = k == 0 ? 0.0 : pb.v(0, i, j);
                u(k, i, j) = val;
            }
        }
}

bool problem_is_symmetric(const EnvelopeProblem& pb) {
    if (!pb.grid.has_symmetry()) return false;
    if (pb.v.symmetry_residual() != 0.0) return false;
    return !pb.boundary || pb.boundary->symmetry_residual() == 0.0;
}

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
    return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

// Lattice directions approximating the estimated kernel line of the reduced
// Hessian at every updatable node.
void refine_directions(const EnvelopeProblem& pb, const GridFunction& u, bool symmetric,
                       Scheme& scheme) {
    const GridSpec& G = pb.grid;
    GridFunction w = u;
    if (symmetric) {
        for (int k = 0; k < G.nt; ++k)
            for (int i = 0; i < G.nx; ++i)
                for (int j = 0; j < G.ny; ++j)
                    w(k, i, j) = 0.5 * (u(k, i, j) + u(k, G.mirror_x(i), G.mirror_y(j)));
    }
    const ReducedHessian H = reduced_hessian(w, pb.omega11);
    const int M = pb.max_denominator > 0 ? pb.max_denominator : std::max(2, G.n / 8);
    const int K = pb.kernel_candidates;
    const int slots = 2 * K;
    const double wmax = 0.25 * G.n;
    std::vector<std::uint16_t> cand(G.size() * slots, Scheme::kEmpty);

    struct Cand {
        double score;
        int m, c, e;
    };
    std::vector<Cand> list;
    for (int k = 1; k < G.nt - 1; ++k)
        for (int i = 0; i < G.nx; ++i) {
            if (G.dirichlet_x(i)) continue;
            for (int j = 0; j < G.ny; ++j) {
                const std::size_t p = G.index(k, i, j);
                const auto [ds, dz] = H.kernel_direction(p);
                if (std::abs(ds) * wmax < std::abs(dz)) continue;  // spatial line, in the base set
                const cplx wk = dz / ds;
                const double nw = 1.0 + std::norm(wk);
                list.clear();
                for (int m = 1; m <= M; ++m) {
                    const double cr = m * wk.real(), ci = m * wk.imag();
                    for (double c : {std::floor(cr), std::ceil(cr)})
                        for (double e : {std::floor(ci), std::ceil(ci)}) {
                            const std::int64_t g = gcd3(m, static_cast<std::int64_t>(c),
                                                        static_cast<std::int64_t>(e));
                            const int mm = static_cast<int>(m / g);
                            const int cc = static_cast<int>(static_cast<std::int64_t>(c) / g);
                            const int ee = static_cast<int>(static_cast<std::int64_t>(e) / g);
                            const cplx z(static_cast<double>(cc) / mm, static_cast<double>(ee) / mm);
                            const double score = std::norm(wk - z) / (nw * (1.0 + std::norm(z)));
                            list.push_back({score, mm, cc, ee});
                        }
                }
                std::sort(list.begin(), list.end(), [](const Cand& x, const Cand& y) {
                    return std::tie(x.score, x.m, x.c, x.e) < std::tie(y.score, y.m, y.c, y.e);
                });
                list.erase(std::unique(list.begin(), list.end(),
                                       [](const Cand& x, const Cand& y) {
                                           return x.m == y.m && x.c == y.c && x.e == y.e;
                                       }),
                           list.end());
                // keep the K best and everything tied with the K-th, so mirrored
                // nodes receive mirrored sets
                const double cut = list[std::min<std::size_t>(K, list.size()) - 1].score;
                int filled = 0;
                for (const Cand& c : list) {
                    if (c.score > cut || filled == slots) break;
                    const int id = scheme.add_direction({c.m, 0, c.c, c.e});
                    if (id < scheme.base_count()) continue;
                    if (id >= Scheme::kEmpty) throw Error("envelope: direction table overflow");
                    cand[p * slots + filled++] = static_cast<std::uint16_t>(id);
                }
            }
        }
    scheme.set_candidates(std::move(cand), slots);
}

struct SweepStats {
    long sweeps = 0;
    double last = 0.0;
};

constexpr long kPolicyRefresh = 8;

SweepStats run_sweeps(const EnvelopeProblem& pb, const Scheme& scheme, GridFunction& u,
                      double tol, long budget, std::vector<std::int32_t>& arg,
                      std::vector<std::uint8_t>& argm) {
    const GridSpec& G = pb.grid;
    SweepStats st;
    if (pb.mode == SweepMode::GaussSeidel) {
        double* d = u.values.data();
        long full = 0;
        for (long s = 0; full < budget; ++s) {
            // every kPolicyRefresh-th sweep re-minimizes; the others reuse the minimizer
            const bool cheap = s % kPolicyRefresh != 0;
            double mx = 0.0;
            for (int k = 1; k < G.nt - 1; ++k)
                for (int i = 0; i < G.nx; ++i) {
                    if (G.dirichlet_x(i)) continue;
                    for (int j = 0; j < G.ny; ++j) {
                        const std::size_t p = G.index(k, i, j);
                        const double b = cheap && arg[p] >= 0
                                             ? scheme.bound_of(d, k, i, j, arg[p], argm[p])
                                             : scheme.bound(d, k, i, j, arg[p], argm[p]);
                        mx = std::max(mx, std::abs(b - d[p]));
                        d[p] = b;
                    }
                }
            if (cheap) continue;
            st.sweeps = ++full;
            st.last = mx;
            if (mx < tol) break;
        }
        return st;
    }

    std::vector<double> next(u.values);
    const int nthreads = std::max(1, std::min(pb.threads, G.nt - 2));
    std::vector<double> part(nthreads);
    for (long s = 0; s < budget; ++s) {
        auto work = [&](int tid) {
            double mx = 0.0;
            for (int k = 1 + tid; k < G.nt - 1; k += nthreads)
                for (int i = 0; i < G.nx; ++i) {
                    if (G.dirichlet_x(i)) continue;
                    for (int j = 0; j < G.ny; ++j) {
                        const std::size_t p = G.index(k, i, j);
                        const double b = scheme.bound(u.values.data(), k, i, j, arg[p], argm[p]);
                        mx = std::max(mx, std::abs(b - u.values[p]));
                        next[p] = b;
                    }
                }
            part[tid] = mx;
        };
        if (nthreads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        u.values.swap(next);
        const double mx = *std::max_element(part.begin(), part.end());
        st.sweeps = s + 1;
        st.last = mx;
        if (mx < tol) break;
    }
    return st;
}

}  // namespace

EnvelopeResult solve_envelope(const EnvelopeProblem& problem) {
    problem.validate();
    return solve_envelope(problem, upper_barrier(problem));
}

EnvelopeResult solve_envelope(const EnvelopeProblem& problem, const GridFunction& start) {
    problem.validate();
    const GridSpec& G = problem.grid;
    if (!(start.grid == G)) throw ValidationError("envelope: start grid mismatch");
    start.require_finite("envelope start");
    const double tol = problem.resolved_tol();

    EnvelopeResult res;
    res.u = start;
    res.u.omega11 = problem.omega11;
    reset_dirichlet(problem, res.u);
    const bool symmetric = problem_is_symmetric(problem);
    res.u.symmetric = symmetric;
    res.active_direction.assign(G.size(), -1);
    res.active_multiple.assign(G.size(), 0);

    Scheme scheme(problem);
    long used = 0;
    for (int phase = 0; phase < problem.phases; ++phase) {
        if (phase > 0) refine_directions(problem, res.u, symmetric, scheme);
        if (used >= problem.max_sweeps)
            throw NonConvergence("envelope: max_sweeps exhausted before phase " + std::to_string(phase + 1),
                                 res.final_update);
        const SweepStats st = run_sweeps(problem, scheme, res.u, tol, problem.max_sweeps - used,
                                         res.active_direction, res.active_multiple);
        used += st.sweeps;
        res.phase_sweeps.push_back(st.sweeps);
        res.final_update = st.last;
        if (st.last >= tol)
            throw NonConvergence("envelope: max_sweeps exhausted (last update " +
                                     std::to_string(st.last) + ")",
                                 st.last);
    }
    res.sweeps_used = used;
    res.direction_table = scheme.directions();
    for (int k = 0; k < G.nt; ++k)
        for (int i = 0; i < G.nx; ++i)
            if (!(k > 0 && k < G.nt - 1 && !G.dirichlet_x(i)))
                for (int j = 0; j < G.ny; ++j) res.active_direction[G.index(k, i, j)] = -1;

    const GridFunction up = upper_barrier(problem);
    const LowerBarrier lo = lower_barrier(problem);
    res.lower_constant = lo.C;
    double viol = 0.0;
    for (int k = 1; k < G.nt - 1; ++k)
        for (int i = 0; i < G.nx; ++i) {
            if (G.dirichlet_x(i)) continue;
            for (int j = 0; j < G.ny; ++j) {
                const std::size_t p = G.index(k, i, j);
                viol = std::max({viol, res.u.values[p] - up.values[p], lo.L.values[p] - res.u.values[p]});
            }
        }
    res.barrier_violation = viol;
    if (G.topology == Topology::Torus && viol > problem.consistency_factor * tol)
        throw ConsistencyError("envelope: solution leaves the barrier sandwich by " +
                               std::to_string(viol));

    const ReducedHessian H = reduced_hessian(res.u, problem.omega11);
    const PshReport psh = is_omega_psh(H, 0.0, true);
    res.hessian_min_eig = psh.min_eig;
    for (int k = 1; k < G.nt - 1; ++k)
        for (int i = 0; i < G.nx; ++i) {
            if (G.dirichlet_x(i)) continue;
            for (int j = 0; j < G.ny; ++j)
                res.max_abs_det = std::max(res.max_abs_det, std::abs(H.det(G.index(k, i, j))));
        }
    return res;
}

double symmetrize_check(const EnvelopeResult& result, const EnvelopeProblem& problem) {
    if (!(result.u.grid == problem.grid)) throw ValidationError("symmetrize_check: grid mismatch");
    return result.u.symmetry_residual();
}

UniquenessProbe uniqueness_probe(const EnvelopeProblem& problem, double bump, double tighten) {
    if (!(bump > 0.0)) throw ValidationError("uniqueness_probe: bump must be positive");
    if (!(tighten > 0.0 && tighten <= 1.0)) throw ValidationError("uniqueness_probe: tighten in (0, 1]");
    EnvelopeProblem pb = problem;
    pb.tol_sweep = problem.resolved_tol() * tighten;
    pb.consistency_factor = problem.consistency_factor / tighten;
    UniquenessProbe out;
    out.bump = bump;
    const GridFunction up = upper_barrier(pb);
    out.from_upper = solve_envelope(pb, up);
    GridFunction low = up;
    for (double& x : low.values) x -= bump;
    out.from_lower = solve_envelope(pb, low);
    for (std::size_t p = 0; p < up.values.size(); ++p)
        out.max_difference = std::max(
            out.max_difference, std::abs(out.from_upper.u.values[p] - out.from_lower.u.values[p]));
    return out;
}

}  // namespace hcma
