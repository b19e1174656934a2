// core.hpp — physical rate/frequency scales, chain geometry, and unit conventions
//
// Unit system: gamma_prime = 1 fixes the rate unit, the guided-mode group
// velocity v = 1 fixes lengths via the resonant wavelength lambda_A.  All
// positions are stored in units of lambda_A, so the resonant wavevector
// contributes a phase of 2*pi per unit length.  Dimensionless detunings
// follow the convention delta = Delta_A / (Gamma/2) with Gamma the total
// single-atom linewidth.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace atomcav {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Thrown when a solver or integrator produces an unusable result.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------ PhysicalParams ------------------------------

// Rate and frequency scales of the atom-waveguide interface.
//
//   gamma_1d            emission rate into the guided mode
//   gamma_prime         emission rate into free space (the rate unit)
//   omega_a_over_gamma  atomic resonance frequency in units of the total
//                       linewidth; enters only through propagation phases
//                       and the band-gap scale n_gap.
struct PhysicalParams {
    double gamma_1d = 0.25;
    double gamma_prime = 1.0;
    double omega_a_over_gamma = 5.4e7;

    double gamma_total() const { return gamma_1d + gamma_prime; }
    double omega_a() const { return omega_a_over_gamma * gamma_total(); }

    // Atom number above which free-propagation dispersion matters.
    double n_gap() const { return std::sqrt(omega_a() / gamma_1d); }

    // delta = Delta / (Gamma/2)
    double delta_to_rate(double delta) const { return delta * 0.5 * gamma_total(); }
    double rate_to_delta(double rate) const { return rate / (0.5 * gamma_total()); }

    // omega_P / omega_A for a probe detuned by Delta (rate units).
    double probe_frequency_ratio(double detuning_rate) const {
        return 1.0 + detuning_rate / omega_a();
    }

    void validate() const {
        if (!(gamma_1d >= 0.0) || !(gamma_prime >= 0.0))
            throw std::invalid_argument("PhysicalParams: emission rates must be non-negative");
        if (!(gamma_total() > 0.0))
            throw std::invalid_argument("PhysicalParams: total linewidth must be positive");
        if (!(omega_a_over_gamma > 0.0))
            throw std::invalid_argument("PhysicalParams: omega_a_over_gamma must be positive");
    }
};

// ------------------------------ ChainGeometry -------------------------------

enum class SiteRole { mirror, impurity, transparent };

inline std::string to_string(SiteRole role) {
    switch (role) {
        case SiteRole::mirror: return "mirror";
        case SiteRole::impurity: return "impurity";
        case SiteRole::transparent: return "transparent";
    }
    throw std::invalid_argument("unknown SiteRole");
}

inline SiteRole site_role_from_string(const std::string& s) {
    if (s == "mirror") return SiteRole::mirror;
    if (s == "impurity") return SiteRole::impurity;
    if (s == "transparent") return SiteRole::transparent;
    throw std::invalid_argument("unknown site role: " + s);
}

struct Site {
    double position = 0.0;  // units of lambda_A
    SiteRole role = SiteRole::mirror;
    double detuning_offset = 0.0;  // resonance offset relative to omega_A (rate units)
};

// Ordered atomic chain.  Positions are strictly increasing; transparent
// sites are carried for bookkeeping but excluded from every interaction sum.
class ChainGeometry {
public:
    ChainGeometry() = default;

    explicit ChainGeometry(std::vector<Site> sites) : sites_(std::move(sites)) {
        if (sites_.empty())
            throw std::invalid_argument("ChainGeometry: at least one site required");
        for (std::size_t i = 1; i < sites_.size(); ++i) {
            if (!(sites_[i].position > sites_[i - 1].position))
                throw std::invalid_argument("ChainGeometry: positions must be strictly increasing");
        }
    }

    const std::vector<Site>& sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    const Site& site(std::size_t i) const { return sites_.at(i); }

    // Indices of non-transparent sites, in position order.
    std::vector<std::size_t> active_indices() const {
        std::vector<std::size_t> idx;
        idx.reserve(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (sites_[i].role != SiteRole::transparent) idx.push_back(i);
        return idx;
    }

    std::vector<std::size_t> indices_with_role(SiteRole role) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (sites_[i].role == role) idx.push_back(i);
        return idx;
    }

    std::size_t count_role(SiteRole role) const {
        return static_cast<std::size_t>(
            std::count_if(sites_.begin(), sites_.end(),
                          [role](const Site& s) { return s.role == role; }));
    }

    bool mirror_only() const {
        return std::all_of(sites_.begin(), sites_.end(),
                           [](const Site& s) { return s.role == SiteRole::mirror; });
    }

private:
    std::vector<Site> sites_;
};

// ------------------------------- Builders -----------------------------------

// n_m mirror atoms at spacing d_m, first site at z = 0.
inline ChainGeometry build_mirror_chain(std::size_t n_m, double d_m) {
    if (n_m < 1) throw std::invalid_argument("build_mirror_chain: need at least one atom");
    if (!(d_m > 0.0)) throw std::invalid_argument("build_mirror_chain: spacing must be positive");
    std::vector<Site> sites(n_m);
    for (std::size_t j = 0; j < n_m; ++j)
        sites[j] = Site{static_cast<double>(j) * d_m, SiteRole::mirror, 0.0};
    return ChainGeometry(std::move(sites));
}

// Symmetric cavity: n_m_per_side mirror atoms on each side of a single
// impurity at z = 0, mirror spacing d_m, impurity a distance d_i from each
// nearest neighbor.  The impurity resonance may be offset from the mirror
// atoms' by impurity_offset (rate units).
inline ChainGeometry build_cavity_chain(std::size_t n_m_per_side, double d_m, double d_i,
                                        double impurity_offset = 0.0) {
    if (n_m_per_side < 1)
        throw std::invalid_argument("build_cavity_chain: need at least one mirror per side");
    if (!(d_m > 0.0) || !(d_i > 0.0))
        throw std::invalid_argument("build_cavity_chain: spacings must be positive");
    std::vector<Site> sites;
    sites.reserve(2 * n_m_per_side + 1);
    for (std::size_t j = n_m_per_side; j >= 1; --j)
        sites.push_back(Site{-(d_i + static_cast<double>(j - 1) * d_m), SiteRole::mirror, 0.0});
    sites.push_back(Site{0.0, SiteRole::impurity, impurity_offset});
    for (std::size_t j = 1; j <= n_m_per_side; ++j)
        sites.push_back(Site{d_i + static_cast<double>(j - 1) * d_m, SiteRole::mirror, 0.0});
    return ChainGeometry(std::move(sites));
}

// Two impurity atoms p, q sharing the cavity mode formed by the mirror
// blocks exterior to them.  Both impurities sit at anti-nodes of the common
// mode: their separation is an integer number of wavelengths, so they couple
// to the mode with equal sign.  gap_sites transparent sites fill the region
// between them on the lambda_A/2 grid, which forces gap_sites to be even.
inline ChainGeometry build_two_impurity_chain(std::size_t n_m_outer, std::size_t gap_sites) {
    if (n_m_outer < 1)
        throw std::invalid_argument("build_two_impurity_chain: need at least one mirror per side");
    if (gap_sites % 2 != 0)
        throw std::invalid_argument(
            "build_two_impurity_chain: gap_sites must be even to keep an integer-wavelength "
            "impurity separation on the half-wavelength grid");
    const double d_m = 0.5;
    const double d_i = 0.75;
    const double separation = static_cast<double>(gap_sites) / 2.0 + 1.0;  // units of lambda_A

    std::vector<Site> sites;
    sites.reserve(2 * n_m_outer + 2 + gap_sites);
    for (std::size_t j = n_m_outer; j >= 1; --j)
        sites.push_back(Site{-(d_i + static_cast<double>(j - 1) * d_m), SiteRole::mirror, 0.0});
    sites.push_back(Site{0.0, SiteRole::impurity, 0.0});
    for (std::size_t j = 0; j < gap_sites; ++j)
        sites.push_back(Site{d_i + static_cast<double>(j) * d_m, SiteRole::transparent, 0.0});
    sites.push_back(Site{separation, SiteRole::impurity, 0.0});
    for (std::size_t j = 1; j <= n_m_outer; ++j)
        sites.push_back(Site{separation + d_i + static_cast<double>(j - 1) * d_m, SiteRole::mirror, 0.0});
    return ChainGeometry(std::move(sites));
}

// ---------------------------- JSON serialization ----------------------------

// One document holds both the rate scales and the site list:
//   {"gamma_1d": .., "gamma_prime": .., "omega_a_over_gamma": ..,
//    "sites": [{"position": .., "role": "mirror", "detuning_offset": ..}, ...]}
// Doubles round-trip bit-exactly through nlohmann::json.
inline nlohmann::json system_to_json(const PhysicalParams& params, const ChainGeometry& geom) {
    nlohmann::json doc;
    doc["gamma_1d"] = params.gamma_1d;
    doc["gamma_prime"] = params.gamma_prime;
    doc["omega_a_over_gamma"] = params.omega_a_over_gamma;
    doc["sites"] = nlohmann::json::array();
    for (const Site& s : geom.sites()) {
        doc["sites"].push_back({{"position", s.position},
                                {"role", to_string(s.role)},
                                {"detuning_offset", s.detuning_offset}});
    }
    return doc;
}

inline std::pair<PhysicalParams, ChainGeometry> system_from_json(const nlohmann::json& doc) {
    PhysicalParams params;
    params.gamma_1d = doc.at("gamma_1d").get<double>();
    params.gamma_prime = doc.at("gamma_prime").get<double>();
    params.omega_a_over_gamma = doc.at("omega_a_over_gamma").get<double>();
    params.validate();
    std::vector<Site> sites;
    for (const auto& item : doc.at("sites")) {
        Site s;
        s.position = item.at("position").get<double>();
        s.role = site_role_from_string(item.at("role").get<std::string>());
        s.detuning_offset = item.value("detuning_offset", 0.0);
        sites.push_back(s);
    }
    return {params, ChainGeometry(std::move(sites))};
}

}  // namespace atomcav
