#include "miura/glm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include <Eigen/Dense>

#include "fftw_cache.hpp"

namespace miura {

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// One Gelfand-Levitan-Marchenko position: Hankel kernel slice h_m = F(x + m dx)
// (zero beyond the sampled range), trapezoid weights, FFT workspace for the
// correlation y_j = sum_l h_{j+l} u_l.
struct HankelSystem {
    int size = 0;     // number of zeta samples
    double dx = 0.0;
    std::vector<double> h;  // 2*size-1 kernel samples
    std::vector<double> w;  // trapezoid weights
    std::vector<double> sqrtw;
    int fft_size = 0;
    std::vector<cplx> h_fft;
    // scratch
    mutable std::vector<double> pad;
    mutable std::vector<cplx> spec, prod;

    bool trivial() const { return h_max == 0.0; }
    double h_max = 0.0;

    void hankel_apply(std::span<const double> u, std::span<double> out) const {
        pad.assign(fft_size, 0.0);
        std::copy(u.begin(), u.end(), pad.begin());
        fft::r2c(pad, spec);
        prod.resize(h_fft.size());
        for (std::size_t i = 0; i < h_fft.size(); ++i) prod[i] = h_fft[i] * std::conj(spec[i]);
        pad.resize(fft_size);
        fft::c2r(prod, pad);
        double inv = 1.0 / fft_size;
        for (int j = 0; j < size; ++j) out[j] = pad[j] * inv;
    }

    // T u = Hankel(W u)
    void t_apply(std::span<const double> u, std::span<double> out, std::vector<double>& tmp) const {
        tmp.resize(size);
        for (int j = 0; j < size; ++j) tmp[j] = w[j] * u[j];
        hankel_apply(tmp, out);
    }

    // B u = D Hankel (D u), D = diag(sqrt(w)); symmetric.
    void b_apply(std::span<const double> u, std::span<double> out, std::vector<double>& tmp) const {
        tmp.resize(size);
        for (int j = 0; j < size; ++j) tmp[j] = sqrtw[j] * u[j];
        hankel_apply(tmp, out);
        for (int j = 0; j < size; ++j) out[j] *= sqrtw[j];
    }
};

// Sample accessor by lattice offset; out-of-range samples are zero.
struct KernelSlice {
    const RealFunction* f;
    bool mirrored; // mirrored: h_m = f(pos - m dx), else h_m = f(pos + m dx)
    long base;     // lattice index of pos in f's grid (may be out of range)

    double at(long m) const {
        long idx = mirrored ? base - m : base + m;
        if (idx < 0 || idx >= f->grid.count) return 0.0;
        return f->values[static_cast<std::size_t>(idx)];
    }
};

KernelSlice make_slice(const RealFunction& f, double pos, bool mirrored) {
    double j = (pos - f.grid.start) / f.grid.step;
    long ji = std::lround(j);
    if (std::abs(j - ji) > 1e-6)
        throw ValidationError("glm.position", "x is not on the kernel lattice");
    return KernelSlice{&f, mirrored, ji};
}

HankelSystem build_system(const KernelSlice& slice, double dx, int max_size) {
    // Effective support: the Hankel data vanish beyond the sampled range, so
    // the solution vanishes beyond the last nonzero right-hand-side sample.
    long last = -1;
    for (long m = 0; m < 2L * max_size - 1; ++m)
        if (slice.at(m) != 0.0) last = m;
    int size = static_cast<int>(std::min<long>(max_size, last + 2));
    size = std::max(size, 2);

    HankelSystem sys;
    sys.size = size;
    sys.dx = dx;
    sys.h.resize(2 * size - 1);
    for (int m = 0; m < 2 * size - 1; ++m) {
        sys.h[m] = slice.at(m);
        sys.h_max = std::max(sys.h_max, std::abs(sys.h[m]));
    }
    sys.w.assign(size, dx);
    sys.w.front() *= 0.5;
    sys.w.back() *= 0.5;
    sys.sqrtw.resize(size);
    for (int j = 0; j < size; ++j) sys.sqrtw[j] = std::sqrt(sys.w[j]);
    if (!sys.trivial()) {
        sys.fft_size = next_pow2(2 * size - 1);
        sys.pad.assign(sys.fft_size, 0.0);
        std::copy(sys.h.begin(), sys.h.end(), sys.pad.begin());
        fft::r2c(sys.pad, sys.h_fft);
    }
    return sys;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double power_iteration_norm(const HankelSystem& sys, int iters) {
    if (sys.trivial()) return 0.0;
    const int n = sys.size;
    std::vector<double> v(n, 1.0 / std::sqrt(double(n))), bv(n), bbv(n), tmp;
    double est = 0.0;
    for (int it = 0; it < iters; ++it) {
        sys.b_apply(v, bv, tmp);
        sys.b_apply(bv, bbv, tmp);
        double nb = norm2(bbv);
        est = norm2(bv);
        if (nb <= 1e-300) return est;
        for (int j = 0; j < n; ++j) v[j] = bbv[j] / nb;
    }
    return est;
}

struct CgResult {
    int iterations = 0;
    bool converged = false;
};

// CG on (I - B^2) z = rhs; B symmetric with ||B|| < 1 keeps it SPD.
CgResult cg_solve(const HankelSystem& sys, std::span<const double> rhs, std::vector<double>& z,
                  double rel_tol, int max_it) {
    const int n = sys.size;
    z.assign(n, 0.0);
    std::vector<double> r(rhs.begin(), rhs.end()), p(r), ap(n), bu(n), tmp;
    double rr = 0.0, b2 = 0.0;
    for (int j = 0; j < n; ++j) {
        rr += r[j] * r[j];
        b2 += rhs[j] * rhs[j];
    }
    double stop2 = rel_tol * rel_tol * b2;
    CgResult res;
    if (rr <= stop2 || b2 == 0.0) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < max_it; ++it) {
        sys.b_apply(p, bu, tmp);
        sys.b_apply(bu, ap, tmp);
        for (int j = 0; j < n; ++j) ap[j] = p[j] - ap[j];
        double pap = 0.0;
        for (int j = 0; j < n; ++j) pap += p[j] * ap[j];
        if (pap <= 0.0) break; // lost positive definiteness; dense fallback
        double alpha = rr / pap;
        double rr_new = 0.0;
        for (int j = 0; j < n; ++j) {
            z[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
            rr_new += r[j] * r[j];
        }
        res.iterations = it + 1;
        if (rr_new <= stop2) {
            res.converged = true;
            return res;
        }
        double beta = rr_new / rr;
        rr = rr_new;
        for (int j = 0; j < n; ++j) p[j] = r[j] + beta * p[j];
    }
    return res;
}

void dense_solve(const HankelSystem& sys, std::span<const double> rhs, std::vector<double>& gamma) {
    const int n = sys.size;
    Eigen::MatrixXd t(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) t(j, l) = sys.h[j + l] * sys.w[l];
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - t * t;
    Eigen::VectorXd b(n);
    for (int j = 0; j < n; ++j) b(j) = rhs[j];
    Eigen::VectorXd x = a.partialPivLu().solve(b);
    gamma.resize(n);
    for (int j = 0; j < n; ++j) gamma[j] = x(j);
}

GlmSolution solve_right(const KernelSlice& slice, double x, double dx, int max_size,
                        const GlmOptions& opts) {
    HankelSystem sys = build_system(slice, dx, max_size);
    const int n = sys.size;

    GlmSolution sol;
    sol.x = x;
    sol.zeta_grid = Grid(0.0, dx, n);
    sol.gamma12.assign(n, 0.0);
    sol.gamma11.assign(n, 0.0);
    if (sys.trivial()) {
        sol.solvability_margin = 1.0;
        return sol;
    }

    sol.operator_norm_estimate = power_iteration_norm(sys, opts.power_iterations);
    sol.solvability_margin = 1.0 - sol.operator_norm_estimate * sol.operator_norm_estimate;
    // The Fredholm argument keeps I - T^2 invertible even at ||T|| = 1; warn
    // through the margin, attempt the solve regardless.

    std::vector<double> rhs(n);
    for (int j = 0; j < n; ++j) rhs[j] = -sys.h[j]; // -F(x + zeta_j)

    bool dense = opts.force_dense || n <= opts.dense_size_threshold;
    if (!dense) {
        // Symmetrized system: (I - B^2)(D Gamma) = D rhs.
        std::vector<double> srhs(n), z;
        for (int j = 0; j < n; ++j) srhs[j] = sys.sqrtw[j] * rhs[j];
        int max_it = opts.cg_max_iterations > 0 ? opts.cg_max_iterations : 40 * n;
        CgResult cg = cg_solve(sys, srhs, z, opts.cg_rel_tol, max_it);
        sol.iterations = cg.iterations;
        if (cg.converged) {
            for (int j = 0; j < n; ++j) sol.gamma12[j] = z[j] / sys.sqrtw[j];
        } else {
            dense = true;
        }
    }
    if (dense) {
        dense_solve(sys, rhs, sol.gamma12);
        sol.dense_path = true;
    }

    // Backward error of (I - T^2) Gamma12 = rhs.
    std::vector<double> tg(n), ttg(n), tmp;
    sys.t_apply(sol.gamma12, tg, tmp);
    sys.t_apply(tg, ttg, tmp);
    double res = 0.0, scale = std::max(1.0, norm2(rhs));
    for (int j = 0; j < n; ++j) {
        double r = sol.gamma12[j] - ttg[j] - rhs[j];
        res += r * r;
    }
    sol.solver_residual = std::sqrt(res) / scale;
    if (sol.solver_residual > 1e-8)
        throw SolverError("glm.residual", "solve residual " + std::to_string(sol.solver_residual) +
                                              " at x = " + std::to_string(x));

    // Gamma11 = -T Gamma12 (tg already holds T Gamma12).
    for (int j = 0; j < n; ++j) sol.gamma11[j] = -tg[j];
    return sol;
}

void run_parallel(int jobs, int count, const std::function<void(int)>& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

int max_zeta_samples(const Grid& x_grid, const GlmOptions& opts) {
    double lz = opts.zeta_half_width > 0.0 ? opts.zeta_half_width : -x_grid.start;
    return static_cast<int>(std::lround(lz / x_grid.step)) + 1;
}

} // namespace

MarchenkoKernel marchenko_kernels(const ReflectionData& r, const ReflectionData& r_sharp) {
    if (r.class_tag != PotentialClass::generic)
        throw ValidationError("marchenko_kernels.class", "generic-class reflection data required");
    if (!(r.k_grid == r_sharp.k_grid))
        throw ValidationError("marchenko_kernels.grids", "r and r# must share the k grid");

    SampledFunction rs(r.k_grid, Domain::wavenumber, r.r);
    SampledFunction rss(r.k_grid, Domain::wavenumber, r_sharp.r);
    SampledFunction f = inverse_with_pole_correction(rs, KernelSign::plus);
    SampledFunction fs = inverse_with_pole_correction(rss, KernelSign::minus);

    double im = std::max(f.max_imag(), fs.max_imag());
    if (im > 1e-10 * std::max(1.0, std::max(f.max_abs(), fs.max_abs())))
        throw SolverError("marchenko_kernels.real",
                          "kernels acquired imaginary part " + std::to_string(im));

    MarchenkoKernel out;
    out.F = RealFunction(f.grid);
    out.F_sharp = RealFunction(fs.grid);
    for (int j = 0; j < f.grid.count; ++j) out.F.values[j] = f.values[j].real();
    for (int j = 0; j < fs.grid.count; ++j) out.F_sharp.values[j] = fs.values[j].real();
    EdgeReport er = edge_magnitudes(rs);
    EdgeReport ers = edge_magnitudes(rss);
    out.edge_mass_f = std::max(er.left, er.right);
    out.edge_mass_f_sharp = std::max(ers.left, ers.right);
    return out;
}

std::vector<double> apply_kernel_operator(const RealFunction& F, double x,
                                          std::span<const double> psi) {
    const double dx = F.grid.step;
    const int n = static_cast<int>(psi.size());
    KernelSlice slice = make_slice(F, x, false);
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
            double wl = (l == 0 || l == n - 1) ? 0.5 * dx : dx;
            s += psi[l] * slice.at(j + l) * wl;
        }
        out[j] = s;
    }
    return out;
}

GlmSolution solve_glm(const RealFunction& F, double x, Side side, const GlmOptions& opts) {
    const double dx = F.grid.step;
    Grid xg = F.grid;
    int max_size = max_zeta_samples(xg, opts);
    if (side == Side::right) {
        return solve_right(make_slice(F, x, false), x, dx, max_size, opts);
    }
    // Left problem: substituting zeta -> -eta, t -> -tau turns it into the
    // right problem with the reversed kernel slice h_m = F(x - m dx).
    GlmSolution mirrored = solve_right(make_slice(F, x, true), x, dx, max_size, opts);
    GlmSolution sol;
    sol.x = x;
    int n = mirrored.zeta_grid.count;
    sol.zeta_grid = Grid(-(n - 1) * dx, dx, n);
    sol.gamma12.resize(n);
    sol.gamma11.resize(n);
    for (int j = 0; j < n; ++j) {
        sol.gamma12[j] = mirrored.gamma12[n - 1 - j];
        sol.gamma11[j] = mirrored.gamma11[n - 1 - j];
    }
    sol.solver_residual = mirrored.solver_residual;
    sol.operator_norm_estimate = mirrored.operator_norm_estimate;
    sol.solvability_margin = mirrored.solvability_margin;
    sol.iterations = mirrored.iterations;
    sol.dense_path = mirrored.dense_path;
    return sol;
}

double kernel_equation_residual(const RealFunction& F, const GlmSolution& sol) {
    if (sol.zeta_grid.start != 0.0)
        throw ValidationError("kernel_equation_residual", "expects a right-problem solution");
    const int n = sol.zeta_grid.count;
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j) k[j] = sol.gamma11[j] + sol.gamma12[j];
    std::vector<double> tk = apply_kernel_operator(F, sol.x, k);
    KernelSlice slice = make_slice(F, sol.x, false);
    std::vector<double> res(n);
    for (int j = 0; j < n; ++j) res[j] = k[j] + slice.at(j) + tk[j];
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        double wl = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        s += wl * res[j] * res[j];
    }
    return std::sqrt(s * sol.zeta_grid.step);
}

ReconstructionResult reconstruct_riccati(const MarchenkoKernel& kernels, const Grid& x_grid,
                                         const GlmOptions& opts) {
    const int n = x_grid.count;
    const int n0 = x_grid.index_of(0.0);
    ReconstructionResult out;
    out.w_full = RealFunction(x_grid);
    out.w_sharp_full = RealFunction(x_grid);
    out.diagnostics.solver_residual.assign(2 * n, 0.0);
    out.diagnostics.operator_norm.assign(2 * n, 0.0);
    out.diagnostics.iterations.assign(2 * n, 0);

    run_parallel(opts.jobs, 2 * n, [&](int task) {
        bool left = task >= n;
        int j = left ? task - n : task;
        double x = x_grid.point(j);
        GlmSolution sol = solve_glm(left ? kernels.F_sharp : kernels.F, x,
                                    left ? Side::left : Side::right, opts);
        if (left) {
            out.w_sharp_full.values[j] = sol.gamma12.back(); // Gamma12#(x, 0)
        } else {
            out.w_full.values[j] = -sol.gamma12.front(); // -Gamma12(x, 0)
        }
        out.diagnostics.solver_residual[task] = sol.solver_residual;
        out.diagnostics.operator_norm[task] = sol.operator_norm_estimate;
        out.diagnostics.iterations[task] = sol.iterations;
    });

    auto& d = out.diagnostics;
    for (int t = 0; t < 2 * n; ++t) {
        d.max_solver_residual = std::max(d.max_solver_residual, d.solver_residual[t]);
        d.min_solvability_margin =
            std::min(d.min_solvability_margin, 1.0 - d.operator_norm[t] * d.operator_norm[t]);
    }
    const auto& w = out.w_full.values;
    const auto& ws = out.w_sharp_full.values;
    for (int j = 0; j + 1 < n; ++j)
        d.max_jump_w_diff =
            std::max(d.max_jump_w_diff, std::abs((ws[j + 1] - w[j + 1]) - (ws[j] - w[j])));

    // One-sided boundary values at the origin jump.
    double w0_right = 2.0 * w[n0 + 1] - w[n0 + 2];
    double ws0_left = 2.0 * ws[n0 - 1] - ws[n0 - 2];
    double w0_left = 2.0 * w[n0 - 1] - w[n0 - 2];
    double ws0_right = 2.0 * ws[n0 + 1] - ws[n0 + 2];

    // v0 readout: transport (w# - w)(x_j) to the origin through the jump
    // profile identity v(x) = v(0) exp(-int_0^x (u_+ + u_-)); five samples per
    // side, origin cell excluded.
    const double dx = x_grid.step;
    double acc_r = 0.0, acc_l = 0.0, sum = 0.0;
    double prev_r = w0_right + ws0_right, prev_l = w0_left + ws0_left;
    for (int j = 1; j <= 5; ++j) {
        double sr = w[n0 + j] + ws[n0 + j];
        acc_r += 0.5 * dx * (prev_r + sr);
        prev_r = sr;
        sum += (ws[n0 + j] - w[n0 + j]) * std::exp(acc_r);
        double sl = w[n0 - j] + ws[n0 - j];
        acc_l += 0.5 * dx * (prev_l + sl);
        prev_l = sl;
        sum += (ws[n0 - j] - w[n0 - j]) * std::exp(-acc_l);
    }
    double v0 = sum / 10.0;
    if (v0 < -1e-3)
        throw SolverError("reconstruct.v0", "negative jump weight " + std::to_string(v0));
    if (v0 < 0.0) {
        v0 = 0.0;
        d.v0_clamped = true;
    }
    out.v0_readout = v0;

    Grid gp(0.0, dx, n - n0);
    Grid gm(x_grid.start, dx, n0 + 1);
    RealFunction wp(gp), wm(gm);
    wp.values[0] = w0_right;
    for (int j = 1; j < gp.count; ++j) wp.values[j] = w[n0 + j];
    for (int j = 0; j < n0; ++j) wm.values[j] = ws[j];
    wm.values[n0] = ws0_left;
    out.triple = make_triple(std::move(wp), std::move(wm), v0);
    return out;
}

ReconstructedJost reconstructed_jost(const MarchenkoKernel& kernels, double x, const Grid& k_grid,
                                     const GlmOptions& opts) {
    GlmSolution right = solve_glm(kernels.F, x, Side::right, opts);
    GlmSolution left = solve_glm(kernels.F_sharp, x, Side::left, opts);
    const int m = k_grid.count;
    ReconstructedJost out;
    out.f.resize(m);
    out.f_sharp.resize(m);
    const double dz = right.zeta_grid.step;
    for (int j = 0; j < m; ++j) {
        double k = k_grid.point(j);
        cplx acc(0.0);
        for (int l = 0; l < right.zeta_grid.count; ++l) {
            double wl = (l == 0 || l + 1 == right.zeta_grid.count) ? 0.5 * dz : dz;
            double kk = right.gamma11[l] + right.gamma12[l];
            acc += wl * kk * std::polar(1.0, 2.0 * k * right.zeta_grid.point(l));
        }
        out.f[j] = std::polar(1.0, k * x) * (1.0 + acc);
        cplx accs(0.0);
        for (int l = 0; l < left.zeta_grid.count; ++l) {
            double wl = (l == 0 || l + 1 == left.zeta_grid.count) ? 0.5 * dz : dz;
            double kk = left.gamma11[l] + left.gamma12[l];
            accs += wl * kk * std::polar(1.0, -2.0 * k * left.zeta_grid.point(l));
        }
        out.f_sharp[j] = std::polar(1.0, -k * x) * (1.0 + accs);
    }
    return out;
}

CoefficientPair scattering_coefficients_from_reflection(const TransmissionReconstruction& tr,
                                                        const ReflectionData& r_sharp) {
    const int m = tr.k_grid.count;
    CoefficientPair out;
    out.a.resize(m);
    out.b.resize(m);
    for (int j = 0; j < m; ++j) {
        out.a[j] = 1.0 / tr.t[j];
        out.b[j] = r_sharp.r[j] * out.a[j];
    }
    return out;
}

ConsistencyReport consistency_check(const MarchenkoKernel& kernels, const CoefficientPair& ab,
                                    std::span<const double> x_samples, const Grid& k_grid,
                                    const GlmOptions& opts) {
    const int m = k_grid.count;
    ConsistencyReport rep;
    for (int j = 0; j < m; ++j) {
        double dev = std::abs(std::norm(ab.a[j]) - std::norm(ab.b[j]) - 1.0);
        rep.max_unitarity_dev = std::max(rep.max_unitarity_dev, dev);
    }
    for (double x : x_samples) {
        ReconstructedJost rj = reconstructed_jost(kernels, x, k_grid, opts);
        for (int j = 0; j < m; ++j) {
            int jm = m - 1 - j; // index of -k
            double scale = std::max(1.0, std::abs(ab.a[j]));
            cplx r1 = rj.f_sharp[j] - ab.a[j] * rj.f[jm] + ab.b[jm] * rj.f[j];
            cplx r2 = rj.f[j] - ab.a[j] * rj.f_sharp[jm] - ab.b[j] * rj.f_sharp[j];
            rep.max_residual =
                std::max({rep.max_residual, std::abs(r1) / scale, std::abs(r2) / scale});
        }
    }
    return rep;
}

} // namespace miura
