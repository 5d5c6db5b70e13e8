#include "posmech/wavefield.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace posmech {

// ---------------------------------------------------------------------------
// FFT plan cache. Plans are created once per (nx, ny, direction) with
// FFTW_ESTIMATE|FFTW_UNALIGNED so they are deterministic and reusable on any
// buffer; execution via fftw_execute_dft is re-entrant.
// ---------------------------------------------------------------------------

namespace {

struct PlanKey {
    int nx, ny, sign;
    bool operator<(const PlanKey& o) const {
        return std::tie(nx, ny, sign) < std::tie(o.nx, o.ny, o.sign);
    }
};

class FftCache {
  public:
    static FftCache& instance() {
        static FftCache c;
        return c;
    }

    void transform(cplx* data, int nx, int ny, int sign) {
        fftw_plan p;
        {
            std::lock_guard<std::mutex> lock(mu_);
            PlanKey key{nx, ny, sign};
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cplx> buf(static_cast<std::size_t>(nx) * ny);
                fftw_complex* b = reinterpret_cast<fftw_complex*>(buf.data());
                fftw_plan plan = ny > 1 ? fftw_plan_dft_2d(nx, ny, b, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                                        : fftw_plan_dft_1d(nx, b, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
                it = plans_.emplace(key, plan).first;
            }
            p = it->second;
        }
        fftw_complex* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(p, d, d);
    }

  private:
    std::mutex mu_;
    std::map<PlanKey, fftw_plan> plans_;
};

void fft_forward(cplx* data, const GridSpec& g) { FftCache::instance().transform(data, g.n(0), g.n(1), FFTW_FORWARD); }

void fft_backward_scaled(cplx* data, const GridSpec& g) {
    FftCache::instance().transform(data, g.n(0), g.n(1), FFTW_BACKWARD);
    double s = 1.0 / g.size();
    for (int i = 0; i < g.size(); ++i) data[i] *= s;
}

}  // namespace

// ---------------------------------------------------------------------------
// WaveFunction / PotentialSpec
// ---------------------------------------------------------------------------

double WaveFunction::norm() const {
    double s = 0;
    for (const auto& v : amp) s += std::norm(v);
    return s * grid.cell_volume();
}

void WaveFunction::normalize() {
    double n = norm();
    if (!(n > 0)) throw std::runtime_error("WaveFunction: cannot normalize zero state");
    double s = 1.0 / std::sqrt(n);
    for (auto& v : amp) v *= s;
}

PotentialSpec PotentialSpec::harmonic(const GridSpec& g, double omega, double mass) {
    PotentialSpec p;
    p.V = ScalarField(g);
    for (int ix = 0; ix < g.n(0); ++ix)
        for (int iy = 0; iy < g.n(1); ++iy) {
            double r2 = g.coord(0, ix) * g.coord(0, ix);
            if (g.dim == 2) r2 += g.coord(1, iy) * g.coord(1, iy);
            p.V(ix, iy) = 0.5 * mass * omega * omega * r2;
        }
    return p;
}

PotentialSpec PotentialSpec::uniform_B(const GridSpec& g, double bx, double by, double bz) {
    PotentialSpec p;
    double b[3] = {bx, by, bz};
    for (int k = 0; k < 3; ++k) p.B[k] = ScalarField(g, b[k]);
    return p;
}

Vec2 PotentialSpec::force(const GridSpec& g, int ix, int iy) const {
    Vec2 f{0, 0};
    if (!has_V()) return f;
    for (int a = 0; a < g.dim; ++a) f[a] = -deriv4(V.a, g, a, ix, iy);
    return f;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

double param(const PresetParams& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

double require_param(const PresetParams& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("init_wavefunction: missing parameter '" + key + "'");
    return it->second;
}

void check_feature(const GridSpec& g, double width, const std::string& what) {
    double dmax = g.dx(0);
    if (g.dim == 2) dmax = std::max(dmax, g.dx(1));
    if (width < 4.0 * dmax)
        throw std::invalid_argument("init_wavefunction: " + what + " narrower than 4 grid cells");
}

// nearest exactly-periodic wavenumber
double snap_wavenumber(const GridSpec& g, int axis, double k) {
    double base = 2.0 * M_PI / g.extent[axis];
    return base * std::round(k / base);
}

WaveFunction blank_state(const GridSpec& g, const PresetParams& p, int nparticles) {
    WaveFunction w;
    w.grid = g;
    w.hbar = param(p, "hbar", 1.0);
    w.amp.assign(g.size(), cplx{});
    for (int i = 0; i < nparticles; ++i) {
        ParticleMeta m;
        std::string suffix = nparticles == 2 ? std::to_string(i + 1) : "";
        m.mass = param(p, "mass" + suffix, 1.0);
        m.charge = param(p, "charge" + suffix, 0.0);
        m.spin_enabled = param(p, "spin" + suffix, 0.0) != 0.0;
        w.particles.push_back(m);
    }
    return w;
}

void make_spinor(WaveFunction& w, double theta, double phi) {
    int n = w.grid.size();
    w.ncomp = 2;
    w.amp.resize(2 * static_cast<std::size_t>(n));
    cplx up = {std::cos(0.5 * theta), 0.0};
    cplx dn = std::polar(std::sin(0.5 * theta), phi);
    for (int i = 0; i < n; ++i) {
        cplx base = w.amp[i];
        w.amp[i] = base * up;
        w.amp[n + i] = base * dn;
    }
}

}  // namespace

WaveFunction init_wavefunction(const GridSpec& spec, const std::string& preset, const PresetParams& params) {
    spec.validate();

    if (preset == "gaussian") {
        double sigma = param(params, "sigma", 1.0);
        check_feature(spec, sigma, "gaussian width");
        WaveFunction w = blank_state(spec, params, 1);
        double x0 = param(params, "x0", 0.0), y0 = param(params, "y0", 0.0);
        double k0 = param(params, "k0", 0.0), ky = param(params, "ky", 0.0);
        double sy = param(params, "sigma_y", sigma);
        if (spec.dim == 2) check_feature(spec, sy, "gaussian width");
        for (int ix = 0; ix < spec.n(0); ++ix)
            for (int iy = 0; iy < spec.n(1); ++iy) {
                double x = spec.coord(0, ix) - x0;
                double arg = -x * x / (4.0 * sigma * sigma);
                double phase = k0 * spec.coord(0, ix);
                if (spec.dim == 2) {
                    double y = spec.coord(1, iy) - y0;
                    arg += -y * y / (4.0 * sy * sy);
                    phase += ky * spec.coord(1, iy);
                }
                w.amp[spec.idx(ix, iy)] = std::polar(std::exp(arg), phase);
            }
        if (!w.particles.empty() && w.particles[0].spin_enabled)
            make_spinor(w, param(params, "spin_theta", 0.0), param(params, "spin_phi", 0.0));
        w.normalize();
        return w;
    }

    if (preset == "plane_wave") {
        WaveFunction w = blank_state(spec, params, 1);
        double k = snap_wavenumber(spec, 0, require_param(params, "k"));
        double ky = spec.dim == 2 ? snap_wavenumber(spec, 1, param(params, "ky", 0.0)) : 0.0;
        for (int ix = 0; ix < spec.n(0); ++ix)
            for (int iy = 0; iy < spec.n(1); ++iy) {
                double phase = k * spec.coord(0, ix) + (spec.dim == 2 ? ky * spec.coord(1, iy) : 0.0);
                w.amp[spec.idx(ix, iy)] = std::polar(1.0, phase);
            }
        w.normalize();
        return w;
    }

    if (preset == "double_slit_superposition") {
        if (spec.dim != 1) throw std::invalid_argument("double_slit_superposition: 1D preset");
        double sigma = param(params, "sigma", 1.0);
        double d = require_param(params, "separation");
        double k0 = param(params, "k0", 0.0);
        check_feature(spec, sigma, "packet width");
        WaveFunction w = blank_state(spec, params, 1);
        for (int ix = 0; ix < spec.n(0); ++ix) {
            double x = spec.coord(0, ix);
            double gl = std::exp(-(x + 0.5 * d) * (x + 0.5 * d) / (4 * sigma * sigma));
            double gr = std::exp(-(x - 0.5 * d) * (x - 0.5 * d) / (4 * sigma * sigma));
            w.amp[ix] = std::polar(gl + gr, k0 * x);
        }
        w.normalize();
        return w;
    }

    if (preset == "oscillator_coherent") {
        double omega = require_param(params, "omega");
        WaveFunction w = blank_state(spec, params, 1);
        double m = w.particles[0].mass;
        double sigma2 = w.hbar / (2.0 * m * omega);  // ground |psi|^2 variance
        check_feature(spec, std::sqrt(sigma2), "oscillator ground width");
        double x0 = param(params, "x0", 0.0), y0 = param(params, "y0", 0.0);
        double k0 = param(params, "k0", 0.0);
        for (int ix = 0; ix < spec.n(0); ++ix)
            for (int iy = 0; iy < spec.n(1); ++iy) {
                double x = spec.coord(0, ix) - x0;
                double arg = -x * x / (4.0 * sigma2);
                if (spec.dim == 2) {
                    double y = spec.coord(1, iy) - y0;
                    arg += -y * y / (4.0 * sigma2);
                }
                w.amp[spec.idx(ix, iy)] = std::polar(std::exp(arg), k0 * spec.coord(0, ix));
            }
        w.normalize();
        return w;
    }

    if (preset == "angular_eigenstate_2d") {
        if (spec.dim != 2) throw std::invalid_argument("angular_eigenstate_2d: 2D preset");
        int m = static_cast<int>(std::llround(param(params, "m", 1.0)));
        double sigma = param(params, "sigma", 1.0);
        check_feature(spec, sigma, "radial width");
        WaveFunction w = blank_state(spec, params, 1);
        for (int ix = 0; ix < spec.n(0); ++ix)
            for (int iy = 0; iy < spec.n(1); ++iy) {
                double x = spec.coord(0, ix), y = spec.coord(1, iy);
                cplx z{x, y};
                cplx zm{1.0, 0.0};
                for (int k = 0; k < std::abs(m); ++k) zm *= (m >= 0 ? z : std::conj(z));
                w.amp[spec.idx(ix, iy)] = zm * std::exp(-(x * x + y * y) / (4 * sigma * sigma));
            }
        w.normalize();
        return w;
    }

    if (preset == "entangled_pair_1d") {
        if (spec.dim != 2) throw std::invalid_argument("entangled_pair_1d: needs a 2D configuration grid");
        WaveFunction w = blank_state(spec, params, 2);
        int exchange = static_cast<int>(param(params, "exchange", 0.0));  // 0 none, 1 antisym, 2 sym
        if (exchange != 0) {
            double sigma = param(params, "sigma", 1.0);
            double sep = require_param(params, "separation");
            check_feature(spec, sigma, "packet width");
            auto pack = [&](double x, double c) { return std::exp(-(x - c) * (x - c) / (4 * sigma * sigma)); };
            double sign = exchange == 1 ? -1.0 : 1.0;
            for (int ix = 0; ix < spec.n(0); ++ix)
                for (int iy = 0; iy < spec.n(1); ++iy) {
                    double x1 = spec.coord(0, ix), x2 = spec.coord(1, iy);
                    double a = pack(x1, -0.5 * sep) * pack(x2, 0.5 * sep);
                    double b = pack(x1, 0.5 * sep) * pack(x2, -0.5 * sep);
                    w.amp[spec.idx(ix, iy)] = a + sign * b;
                }
        } else {
            bool com_uniform = param(params, "com_uniform", 0.0) != 0.0;
            double su = param(params, "sigma_u", 1.0);
            double sw = param(params, "sigma_w", 0.5);
            check_feature(spec, sw, "relative-mode width");
            if (!com_uniform) check_feature(spec, su, "center-of-mass width");
            for (int ix = 0; ix < spec.n(0); ++ix)
                for (int iy = 0; iy < spec.n(1); ++iy) {
                    double x1 = spec.coord(0, ix), x2 = spec.coord(1, iy);
                    double u = (x1 + x2) * M_SQRT1_2, v = (x1 - x2) * M_SQRT1_2;
                    double arg = -v * v / (4 * sw * sw);
                    if (!com_uniform) arg += -u * u / (4 * su * su);
                    w.amp[spec.idx(ix, iy)] = std::exp(arg);
                }
        }
        w.normalize();
        return w;
    }

    throw std::invalid_argument("init_wavefunction: unknown preset '" + preset + "'");
}

// ---------------------------------------------------------------------------
// Split-step evolution
// ---------------------------------------------------------------------------

namespace {

// Uniform value of an optional vector-potential component; evolve requires A
// constant in space so the kinetic phase can be applied in k-space.
double uniform_A(const PotentialSpec& pot, int axis) {
    if (!pot.has_A() || axis >= pot.A.ncomp) return 0.0;
    const auto& c = pot.A.c[axis];
    double lo = c[0], hi = c[0];
    for (double v : c) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))
        throw std::invalid_argument("evolve: vector potential must be spatially uniform");
    return c[0];
}

struct StepTables {
    std::vector<cplx> kinetic;       // per k-point phase
    std::vector<cplx> pot_scalar;    // per x-point phase (half step)
    // spinor half-step: 2x2 matrix [a b; c d] per point
    std::vector<cplx> m00, m01, m10, m11;
    bool spinor = false;
};

StepTables build_tables(const WaveFunction& psi, const PotentialSpec& pot, double dt) {
    const GridSpec& g = psi.grid;
    StepTables t;
    t.kinetic.resize(g.size());
    double qA[2] = {0, 0};
    for (int a = 0; a < g.dim; ++a) qA[a] = psi.charge_for_axis(a) * uniform_A(pot, a);
    for (int ix = 0; ix < g.n(0); ++ix)
        for (int iy = 0; iy < g.n(1); ++iy) {
            double e = 0;
            double kx = fft_wavenumber(g, 0, ix);
            e += (psi.hbar * kx - qA[0]) * (psi.hbar * kx - qA[0]) / (2.0 * psi.mass_for_axis(0));
            if (g.dim == 2) {
                double ky = fft_wavenumber(g, 1, iy);
                e += (psi.hbar * ky - qA[1]) * (psi.hbar * ky - qA[1]) / (2.0 * psi.mass_for_axis(1));
            }
            t.kinetic[g.idx(ix, iy)] = std::polar(1.0, -e * dt / psi.hbar);
        }

    bool spin = psi.ncomp == 2;
    bool zeeman = spin && pot.has_B();
    t.spinor = spin;
    if (!zeeman) {
        t.pot_scalar.resize(g.size());
        for (int i = 0; i < g.size(); ++i) {
            double v = pot.has_V() ? pot.V.a[i] : 0.0;
            t.pot_scalar[i] = std::polar(1.0, -0.5 * v * dt / psi.hbar);
        }
    } else {
        // half-step exp(-i dt/(2 hbar) (V I + W.sigma)) with
        // W = -(hbar^2 mu / 4) B; spin expectation then precesses at
        // (hbar/2) mu |B|, matching the spin-field equation of motion.
        double m = psi.particles.empty() ? 1.0 : psi.particles[0].mass;
        double q = psi.particles.empty() ? 0.0 : psi.particles[0].charge;
        double mu = pot.g_factor * q / (2.0 * m);
        double wscale = -0.25 * psi.hbar * psi.hbar * mu;
        int n = g.size();
        t.m00.resize(n);
        t.m01.resize(n);
        t.m10.resize(n);
        t.m11.resize(n);
        for (int i = 0; i < n; ++i) {
            double v = pot.has_V() ? pot.V.a[i] : 0.0;
            double w1 = wscale * (pot.B[0].empty() ? 0.0 : pot.B[0].a[i]);
            double w2 = wscale * (pot.B[1].empty() ? 0.0 : pot.B[1].a[i]);
            double w3 = wscale * (pot.B[2].empty() ? 0.0 : pot.B[2].a[i]);
            double wmag = std::sqrt(w1 * w1 + w2 * w2 + w3 * w3);
            double a = 0.5 * dt / psi.hbar;
            cplx ephase = std::polar(1.0, -a * v);
            double cw = std::cos(a * wmag), sw = wmag > 0 ? std::sin(a * wmag) / wmag : a;
            cplx I{0.0, 1.0};
            t.m00[i] = ephase * (cw - I * sw * w3);
            t.m11[i] = ephase * (cw + I * sw * w3);
            t.m01[i] = ephase * (-I * sw * (w1 - I * w2) * 1.0);
            t.m10[i] = ephase * (-I * sw * (w1 + I * w2) * 1.0);
        }
    }
    return t;
}

void apply_potential_half(WaveFunction& psi, const StepTables& t) {
    int n = psi.grid.size();
    if (!t.spinor || t.m00.empty()) {
        for (int c = 0; c < psi.ncomp; ++c)
            for (int i = 0; i < n; ++i) psi.amp[c * n + i] *= t.pot_scalar[i];
        return;
    }
    for (int i = 0; i < n; ++i) {
        cplx up = psi.amp[i], dn = psi.amp[n + i];
        psi.amp[i] = t.m00[i] * up + t.m01[i] * dn;
        psi.amp[n + i] = t.m10[i] * up + t.m11[i] * dn;
    }
}

void apply_kinetic(WaveFunction& psi, const StepTables& t) {
    int n = psi.grid.size();
    for (int c = 0; c < psi.ncomp; ++c) {
        cplx* d = psi.amp.data() + c * static_cast<std::size_t>(n);
        fft_forward(d, psi.grid);
        for (int i = 0; i < n; ++i) d[i] *= t.kinetic[i];
        fft_backward_scaled(d, psi.grid);
    }
}

void check_stability(const WaveFunction& psi, const PotentialSpec& pot, double dt) {
    double vmax = 0;
    if (pot.has_V())
        for (double v : pot.V.a) vmax = std::max(vmax, std::abs(v));
    if (dt * vmax / psi.hbar >= 0.1)
        throw std::invalid_argument("evolve: dt*max|V|/hbar >= 0.1 (stability guard)");
}

}  // namespace

void evolve_with_frames(WaveFunction& psi, const PotentialSpec& pot, double dt, int steps, int every,
                        const std::function<void(const WaveFunction&)>& frame) {
    check_stability(psi, pot, dt);
    StepTables t = build_tables(psi, pot, dt);
    if (frame) frame(psi);
    for (int s = 0; s < steps; ++s) {
        apply_potential_half(psi, t);
        apply_kinetic(psi, t);
        apply_potential_half(psi, t);
        psi.time += dt;
        if (frame && every > 0 && (s + 1) % every == 0) frame(psi);
    }
    if (!std::isfinite(psi.norm())) throw std::runtime_error("evolve: non-finite amplitudes");
}

WaveFunction evolve(const WaveFunction& psi, const PotentialSpec& pot, double dt, int steps) {
    WaveFunction out = psi;
    evolve_with_frames(out, pot, dt, steps, 0, nullptr);
    return out;
}

// ---------------------------------------------------------------------------
// Momentum density and energy
// ---------------------------------------------------------------------------

MomentumDensity fourier_momentum_density(const WaveFunction& psi) {
    const GridSpec& g = psi.grid;
    MomentumDensity md;
    md.dim = g.dim;
    int nx = g.n(0), ny = g.n(1);
    md.dp0 = 2.0 * M_PI * psi.hbar / g.extent[0];
    md.p0.resize(nx);
    for (int i = 0; i < nx; ++i) md.p0[i] = (i - nx / 2) * md.dp0;
    if (g.dim == 2) {
        md.dp1 = 2.0 * M_PI * psi.hbar / g.extent[1];
        md.p1.resize(ny);
        for (int i = 0; i < ny; ++i) md.p1[i] = (i - ny / 2) * md.dp1;
    }

    md.mu.assign(g.size(), 0.0);
    std::vector<cplx> buf(g.size());
    double dv = g.cell_volume();
    double scale = dv * dv / std::pow(2.0 * M_PI * psi.hbar, g.dim);
    for (int c = 0; c < psi.ncomp; ++c) {
        std::copy(psi.amp.begin() + c * g.size(), psi.amp.begin() + (c + 1) * g.size(), buf.begin());
        fft_forward(buf.data(), g);
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                // shift to monotone momentum ordering
                int sx = (ix + nx / 2) % nx;
                int sy = g.dim == 2 ? (iy + ny / 2) % ny : 0;
                md.mu[g.idx(sx, sy)] += scale * std::norm(buf[g.idx(ix, iy)]);
            }
    }
    return md;
}

double energy(const WaveFunction& psi, const PotentialSpec& pot) {
    const GridSpec& g = psi.grid;
    int n = g.size();
    double dv = g.cell_volume();
    double e = 0;

    std::vector<cplx> buf(n);
    double qA[2] = {0, 0};
    for (int a = 0; a < g.dim; ++a) qA[a] = psi.charge_for_axis(a) * uniform_A(pot, a);
    for (int c = 0; c < psi.ncomp; ++c) {
        std::copy(psi.amp.begin() + c * n, psi.amp.begin() + (c + 1) * n, buf.begin());
        fft_forward(buf.data(), g);
        double wsum = 0;
        for (int ix = 0; ix < g.n(0); ++ix)
            for (int iy = 0; iy < g.n(1); ++iy) {
                double ek = 0;
                double kx = fft_wavenumber(g, 0, ix);
                ek += (psi.hbar * kx - qA[0]) * (psi.hbar * kx - qA[0]) / (2 * psi.mass_for_axis(0));
                if (g.dim == 2) {
                    double ky = fft_wavenumber(g, 1, iy);
                    ek += (psi.hbar * ky - qA[1]) * (psi.hbar * ky - qA[1]) / (2 * psi.mass_for_axis(1));
                }
                wsum += ek * std::norm(buf[g.idx(ix, iy)]);
            }
        e += wsum * dv / n;  // Parseval: sum|X|^2 = N sum|psi|^2
    }

    if (pot.has_V())
        for (int i = 0; i < n; ++i) e += pot.V.a[i] * psi.density(i) * dv;

    if (psi.ncomp == 2 && pot.has_B()) {
        double m = psi.particles[0].mass, q = psi.particles[0].charge;
        double mu = pot.g_factor * q / (2.0 * m);
        double wscale = -0.25 * psi.hbar * psi.hbar * mu;
        for (int i = 0; i < n; ++i) {
            cplx up = psi.amp[i], dn = psi.amp[n + i];
            double s1 = 2.0 * std::real(std::conj(up) * dn);
            double s2 = 2.0 * std::imag(std::conj(up) * dn);
            double s3 = std::norm(up) - std::norm(dn);
            double bw = 0;
            if (!pot.B[0].empty()) bw += pot.B[0].a[i] * s1;
            if (!pot.B[1].empty()) bw += pot.B[1].a[i] * s2;
            if (!pot.B[2].empty()) bw += pot.B[2].a[i] * s3;
            e += wscale * bw * dv;
        }
    }
    return e;
}

}  // namespace posmech
