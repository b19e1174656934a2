// transfer_matrix.hpp — classical scattering backend for atomic chains
//
// Composes single-atom and free-propagation 2x2 transfer matrices into exact
// reflection/transmission spectra.  Matrices map the field amplitude pair
// (E_R, E_L) on the left of an element to the pair on the right; composition
// therefore runs as a left-fold in order of increasing position.  Every
// element matrix has unit determinant, which pins t = 1/M22 and r = -M21/M22
// for the composed chain.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "atomcav/core.hpp"

namespace atomcav {

enum class PhaseMode {
    exact,   // propagation phases at the probe frequency omega_P
    approx,  // phases frozen at the atomic resonance (e^{i k_A d})
};

// ---------------------------- Single-atom response --------------------------

struct ScatterCoeffs {
    Complex r{0.0, 0.0};
    Complex t{1.0, 0.0};
};

// r1(Delta) = -Gamma_1D / (Gamma - 2 i Delta), t1 = 1 + r1.
// detuning_rate is Delta relative to this atom's own resonance.
inline ScatterCoeffs single_atom_coeffs(double detuning_rate, const PhysicalParams& params) {
    params.validate();
    const Complex denom(params.gamma_total(), -2.0 * detuning_rate);
    ScatterCoeffs c;
    c.r = -params.gamma_1d / denom;
    c.t = 1.0 + c.r;
    return c;
}

// ------------------------------ Transfer matrices ----------------------------

struct TransferMatrix {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();

    TransferMatrix() = default;
    explicit TransferMatrix(const Eigen::Matrix2cd& mat) : m(mat) {}

    // this ∘ other: apply `other` first (other sits to the left).
    TransferMatrix compose_after(const TransferMatrix& other) const {
        return TransferMatrix(m * other.m);
    }
};

// Free propagation over distance d (units of lambda_A) at frequency
// omega_ratio = omega_P / omega_A.  Phase = 2*pi*d*omega_ratio.
inline TransferMatrix propagation_matrix(double d, double omega_ratio = 1.0) {
    if (!(d >= 0.0)) throw std::invalid_argument("propagation_matrix: distance must be >= 0");
    const double phase = kTwoPi * d * omega_ratio;
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::polar(1.0, phase);
    m(1, 1) = std::polar(1.0, -phase);
    return TransferMatrix(m);
}

// Lossy beam-splitter embedding of the (r, t) response; unit determinant.
inline TransferMatrix atom_matrix(const ScatterCoeffs& c) {
    Eigen::Matrix2cd m;
    m(0, 0) = (c.t * c.t - c.r * c.r) / c.t;
    m(0, 1) = c.r / c.t;
    m(1, 0) = -c.r / c.t;
    m(1, 1) = 1.0 / c.t;
    return TransferMatrix(m);
}

namespace detail {

// Product of unit-determinant factors with overflow guarding: the stored
// matrix is the true product times e^{-log_scale}.
struct ScaledMatrix {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    double log_scale = 0.0;

    void apply_left(const Eigen::Matrix2cd& factor) {
        m = factor * m;
        const double a = m.cwiseAbs().maxCoeff();
        if (a > 1e150) {
            m /= a;
            log_scale += std::log(a);
        }
    }

    Complex reflection() const { return -m(1, 0) / m(1, 1); }

    // |t|^2 with the determinant identity det = 1.
    double transmittance() const {
        const double log_t = -log_scale - std::log(std::abs(m(1, 1)));
        return std::exp(2.0 * log_t);
    }

    Complex transmission() const {
        return std::exp(-log_scale) / m(1, 1);
    }
};

}  // namespace detail

// Composed (r, t) of the whole chain for a probe at dimensionless detuning
// delta.  Transparent sites are skipped; per-site detuning offsets shift the
// individual atomic responses.
inline ScatterCoeffs chain_coeffs(const ChainGeometry& geom, const PhysicalParams& params,
                                  double delta, PhaseMode mode) {
    const auto active = geom.active_indices();
    if (active.empty()) throw std::invalid_argument("chain_coeffs: chain has no active sites");
    const double detuning = params.delta_to_rate(delta);
    const double omega_ratio =
        (mode == PhaseMode::exact) ? params.probe_frequency_ratio(detuning) : 1.0;

    detail::ScaledMatrix prod;
    double prev_z = geom.site(active.front()).position;
    for (std::size_t i : active) {
        const Site& s = geom.site(i);
        if (s.position > prev_z)
            prod.apply_left(propagation_matrix(s.position - prev_z, omega_ratio).m);
        prod.apply_left(atom_matrix(single_atom_coeffs(detuning - s.detuning_offset, params)).m);
        prev_z = s.position;
    }
    ScatterCoeffs out;
    out.r = prod.reflection();
    out.t = prod.transmission();
    return out;
}

// ------------------------------- Spectra -------------------------------------

// Detuning-indexed spectra.  R/T/L are always present; Ic/Tc only for
// driven-impurity cavity spectra.
struct SpectrumTable {
    std::vector<double> delta;
    std::vector<double> R, T, L;
    std::vector<double> Ic, Tc;

    bool has_cavity_columns() const { return !Ic.empty(); }
    std::size_t rows() const { return delta.size(); }
};

inline SpectrumTable chain_spectrum(const ChainGeometry& geom, const PhysicalParams& params,
                                    const std::vector<double>& deltas, PhaseMode mode) {
    if (geom.active_indices().empty())
        throw std::invalid_argument("chain_spectrum: chain has no active sites");
    if (deltas.empty()) throw std::invalid_argument("chain_spectrum: empty detuning grid");
    SpectrumTable table;
    table.delta = deltas;
    table.R.resize(deltas.size());
    table.T.resize(deltas.size());
    table.L.resize(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const ScatterCoeffs c = chain_coeffs(geom, params, deltas[i], mode);
        table.R[i] = std::norm(c.r);
        table.T[i] = std::norm(c.t);
        table.L[i] = 1.0 - table.R[i] - table.T[i];
    }
    return table;
}

// Detuning half-width of the infinite-lattice band gap, sqrt(omega_A*Gamma_1D/pi),
// in rate units.
inline double band_gap_halfwidth(const PhysicalParams& params) {
    return std::sqrt(params.omega_a() * params.gamma_1d / kPi);
}

// Effective cavity finesse pi / (1 - R(delta)) of a mirror chain.
inline double finesse(const ChainGeometry& geom, const PhysicalParams& params, double delta,
                      PhaseMode mode = PhaseMode::exact) {
    if (!geom.mirror_only())
        throw std::invalid_argument("finesse: chain must contain only mirror sites");
    const double R = std::norm(chain_coeffs(geom, params, delta, mode).r);
    if (R >= 1.0) return std::numeric_limits<double>::infinity();
    return kPi / (1.0 - R);
}

// --------------------- Driven impurity: analytic cavity ----------------------

namespace detail {

struct CavitySplit {
    ChainGeometry right_block;  // positions measured from its innermost atom
    double d_gap = 0.0;         // impurity -> innermost mirror distance
    std::size_t impurity_index = 0;
    bool has_mirrors = false;
};

// Validate the symmetric single-impurity cavity and extract the right block.
inline CavitySplit split_symmetric_cavity(const ChainGeometry& geom) {
    const auto impurities = geom.indices_with_role(SiteRole::impurity);
    if (impurities.size() != 1)
        throw std::invalid_argument("driven impurity cavity: exactly one impurity required");
    const std::size_t ip = impurities.front();
    const double z0 = geom.site(ip).position;

    std::vector<Site> left, right;
    for (std::size_t i : geom.active_indices()) {
        if (i == ip) continue;
        const Site& s = geom.site(i);
        if (s.position < z0) left.push_back(s);
        else right.push_back(s);
    }
    if (left.size() != right.size())
        throw std::invalid_argument("driven impurity cavity: asymmetric mirror counts");

    CavitySplit split;
    split.impurity_index = ip;
    split.has_mirrors = !right.empty();
    if (split.has_mirrors) {
        // Mirror symmetry of positions about the impurity.
        for (std::size_t k = 0; k < right.size(); ++k) {
            const double zl = z0 - left[left.size() - 1 - k].position;
            const double zr = right[k].position - z0;
            if (std::abs(zl - zr) > 1e-9)
                throw std::invalid_argument("driven impurity cavity: mirrors not symmetric");
        }
        split.d_gap = right.front().position - z0;
        const double z_ref = right.front().position;
        for (Site& s : right) s.position -= z_ref;
        split.right_block = ChainGeometry(std::move(right));
    }
    return split;
}

}  // namespace detail

// Spectrum of a weakly, externally driven impurity between two identical
// atomic mirrors.  Multiple scattering between the mirrors is summed in
// closed form: with rho = r_N e^{2 i k d_I} the round-trip factor, the
// impurity amplitude is c = i E / (Gamma/2 - i Delta_I + Gamma_1D rho/(1-rho))
// and the field just right of the impurity is i sqrt(Gamma_1D/2) c / (1-rho).
//
// Ic is |E_R|^2 at the impurity, Tc the intensity transmitted past one
// mirror; both are normalized to the output of a single resonantly driven
// atom without mirrors.  R/T/L columns give the passive scattering of the
// same chain.
inline SpectrumTable driven_impurity_spectrum_analytic(const ChainGeometry& geom,
                                                       const PhysicalParams& params,
                                                       const std::vector<double>& deltas,
                                                       PhaseMode mode = PhaseMode::approx) {
    if (deltas.empty())
        throw std::invalid_argument("driven_impurity_spectrum_analytic: empty detuning grid");
    params.validate();
    const auto split = detail::split_symmetric_cavity(geom);
    const double gamma = params.gamma_total();
    const double offset = geom.site(split.impurity_index).detuning_offset;
    const Complex i_unit(0.0, 1.0);

    SpectrumTable table;
    table.delta = deltas;
    table.R.resize(deltas.size());
    table.T.resize(deltas.size());
    table.L.resize(deltas.size());
    table.Ic.resize(deltas.size());
    table.Tc.resize(deltas.size());

    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double delta = deltas[i];
        const double detuning = params.delta_to_rate(delta);
        const double omega_ratio =
            (mode == PhaseMode::exact) ? params.probe_frequency_ratio(detuning) : 1.0;

        Complex rho(0.0, 0.0);
        Complex t_mirror(1.0, 0.0);
        if (split.has_mirrors) {
            const ScatterCoeffs mirror = chain_coeffs(split.right_block, params, delta, mode);
            rho = mirror.r * std::polar(1.0, 2.0 * kTwoPi * split.d_gap * omega_ratio);
            t_mirror = mirror.t;
        }

        const Complex denom =
            Complex(0.5 * gamma, -(detuning - offset)) + params.gamma_1d * rho / (1.0 - rho);
        const Complex c_imp = i_unit / denom;
        const Complex e_right = c_imp / (1.0 - rho);  // in units of i sqrt(G1D/2)

        // Single driven atom on resonance emits |c0| = 2/Gamma in the same units.
        const double i0 = 4.0 / (gamma * gamma);
        table.Ic[i] = std::norm(e_right) / i0;
        table.Tc[i] = std::norm(e_right * t_mirror) / i0;

        const ScatterCoeffs full = chain_coeffs(geom, params, delta, mode);
        table.R[i] = std::norm(full.r);
        table.T[i] = std::norm(full.t);
        table.L[i] = 1.0 - table.R[i] - table.T[i];
    }
    return table;
}

// ------------------------------ Grid helpers ---------------------------------

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
    return v;
}

// Default detuning grid used by the cavity-spectrum figures.
inline std::vector<double> default_detuning_grid() { return linspace(-30.0, 30.0, 2001); }

}  // namespace atomcav
