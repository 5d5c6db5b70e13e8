#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "posmech/grid.hpp"

namespace posmech {

using cplx = std::complex<double>;

struct ParticleMeta {
    double mass = 1.0;
    double charge = 0.0;
    bool spin_enabled = false;
};

// Complex amplitude field on a periodic grid. For two 1D particles the grid
// axes are the configuration-space coordinates (x1, x2); `particles` then has
// two entries and axis i belongs to particle i. Spin-1/2 states carry two
// components (component-major storage).
struct WaveFunction {
    GridSpec grid;
    int ncomp = 1;
    std::vector<cplx> amp;
    double time = 0.0;
    double hbar = 1.0;
    std::vector<ParticleMeta> particles;

    cplx& at(int comp, int i) { return amp[comp * grid.size() + i]; }
    cplx at(int comp, int i) const { return amp[comp * grid.size() + i]; }

    double mass_for_axis(int axis) const {
        if (particles.size() == 2) return particles[axis].mass;
        return particles.empty() ? 1.0 : particles[0].mass;
    }
    double charge_for_axis(int axis) const {
        if (particles.size() == 2) return particles[axis].charge;
        return particles.empty() ? 0.0 : particles[0].charge;
    }

    double norm() const;  // sum |psi|^2 dV
    void normalize();
    double density(int i) const {
        double r = std::norm(amp[i]);
        if (ncomp == 2) r += std::norm(amp[grid.size() + i]);
        return r;
    }
};

// Static external fields on the grid. B couples to spin only; A must be
// spatially uniform for `evolve` (the kinetic phase is applied in k-space).
struct PotentialSpec {
    ScalarField V;                    // energy units; empty -> 0
    VectorField A;                    // momentum units per axis; empty -> 0
    std::array<ScalarField, 3> B;     // spin-space components; empty -> 0
    double g_factor = 2.0;

    bool has_V() const { return !V.empty(); }
    bool has_A() const { return !A.empty(); }
    bool has_B() const { return !B[0].empty() || !B[1].empty() || !B[2].empty(); }

    static PotentialSpec free_space() { return {}; }
    static PotentialSpec harmonic(const GridSpec& g, double omega, double mass = 1.0);
    static PotentialSpec uniform_B(const GridSpec& g, double bx, double by, double bz);

    // force F = -grad V at a grid point (4th-order stencil), per axis
    Vec2 force(const GridSpec& g, int ix, int iy) const;
};

using PresetParams = std::map<std::string, double>;

// preset in {gaussian, plane_wave, double_slit_superposition,
// oscillator_coherent, angular_eigenstate_2d, entangled_pair_1d}
WaveFunction init_wavefunction(const GridSpec& spec, const std::string& preset, const PresetParams& params);

// Split-step spectral integrator; norm-preserving, periodic boundaries.
// Precondition dt*max|V|/hbar < 0.1.
WaveFunction evolve(const WaveFunction& psi, const PotentialSpec& pot, double dt, int steps);

// In-place stepping with a frame callback every `every` steps (frame 0 is the
// initial state). Used to build field timelines without storing every state.
void evolve_with_frames(WaveFunction& psi, const PotentialSpec& pot, double dt, int steps, int every,
                        const std::function<void(const WaveFunction&)>& frame);

struct MomentumDensity {
    int dim = 1;
    std::vector<double> p0, p1;  // momentum bin centers per axis (monotone)
    std::vector<double> mu;      // density, sum(mu)*dp = 1
    double dp0 = 0, dp1 = 0;
};

MomentumDensity fourier_momentum_density(const WaveFunction& psi);

// <H> for time-independent potentials; used by the energy-drift check.
double energy(const WaveFunction& psi, const PotentialSpec& pot);

}  // namespace posmech
