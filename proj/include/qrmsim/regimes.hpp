#ifndef QRMSIM_REGIMES_HPP
#define QRMSIM_REGIMES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrmsim/hamiltonian.hpp"

// Classification of (omega0_R, omega_R, g) triples into the coupling-regime
// regions of the configuration space, and grid sweeps over it.
//
// All conditions are ratios, so the classification is scale-invariant.
// "much less" is quantified as ratio < much_less (default 0.1) and "similar"
// as within a factor of 2; both are configurable. Points within a relative
// transition_band of a decisive boundary are reported as transition zones.

namespace qrmsim {

struct RegimeThresholds {
    double much_less = 0.1;       // numeric meaning of "<<"
    double transition_band = 0.2; // relative width of boundary zones

    void validate() const {
        if (!(much_less > 0.0 && much_less < 1.0))
            throw std::invalid_argument("RegimeThresholds: much_less must be in (0,1)");
        if (!(transition_band >= 0.0 && transition_band < 1.0))
            throw std::invalid_argument(
                "RegimeThresholds: transition_band must be in [0,1)");
    }
};

enum class Regime {
    jc,
    ajc,
    dispersive,
    usc,
    dsc,
    decoupling,
    intermediate,
    dirac_line,
    transition
};

inline std::string regime_name(Regime r) {
    switch (r) {
        case Regime::jc: return "JC";
        case Regime::ajc: return "AJC";
        case Regime::dispersive: return "dispersive";
        case Regime::usc: return "USC";
        case Regime::dsc: return "DSC";
        case Regime::decoupling: return "decoupling";
        case Regime::intermediate: return "intermediate";
        case Regime::dirac_line: return "dirac_line";
        case Regime::transition: return "transition";
    }
    return "?";
}

struct RegimeLabel {
    Regime kind = Regime::intermediate;
    // populated only for transition zones: the two regions the point sits between
    Regime zone_a = Regime::intermediate;
    Regime zone_b = Regime::intermediate;

    std::string to_string() const {
        if (kind == Regime::transition)
            return "transition(" + regime_name(zone_a) + "," + regime_name(zone_b) + ")";
        return regime_name(kind);
    }
    friend bool operator==(const RegimeLabel&, const RegimeLabel&) = default;
};

namespace detail {

// Precedence order: dirac_line -> DSC -> USC -> JC -> AJC -> decoupling ->
// dispersive -> intermediate. `widen` scales every boundary multiplicatively,
// so evaluating at 1 -+ transition_band brackets the boundary zones.
inline Regime classify_core(const QRMParams& p, const RegimeThresholds& th,
                            double widen) {
    const double w = std::abs(p.omega_R);
    const double w0 = std::abs(p.omega0_R);
    const double g = std::abs(p.g);
    const double ml = th.much_less;
    auto much_less = [&](double x, double y) { return x < ml * y * widen; };
    auto similar = [&](double x, double y) {
        return x < 2.0 * y * widen && y < 2.0 * x * widen;
    };

    const double scale = std::max({w, w0, g});
    if (scale == 0.0 || w <= 1e-12 * scale) return Regime::dirac_line;
    if (w < g * widen) return Regime::dsc;
    if (w < 10.0 * g * widen) return Regime::usc;

    const double diff = std::abs(p.omega_R - p.omega0_R);
    const double sum = std::abs(p.omega_R + p.omega0_R);
    if (much_less(g, w) && much_less(g, w0)) {
        if (much_less(diff, sum)) return Regime::jc;
        if (much_less(sum, diff)) return Regime::ajc;
    }
    if (much_less(w0, g) && much_less(g, w)) return Regime::decoupling;
    if (g < widen * std::min({w, w0, diff, sum})) return Regime::dispersive;
    if (similar(w0, g) && much_less(g, w)) return Regime::intermediate;
    return Regime::intermediate;
}

}  // namespace detail

inline RegimeLabel classify(const QRMParams& p, const RegimeThresholds& th = {}) {
    th.validate();
    const Regime lo = detail::classify_core(p, th, 1.0 - th.transition_band);
    const Regime hi = detail::classify_core(p, th, 1.0 + th.transition_band);
    if (lo == hi) return RegimeLabel{lo, lo, lo};
    return RegimeLabel{Regime::transition, lo, hi};
}

struct RegimePoint {
    QRMParams params;
    RegimeLabel label;
};

struct GridRange {
    double min = 0.0;
    double max = 0.0;
    int points = 1;

    double at(int i) const {
        if (points <= 1) return min;
        return min + (max - min) * double(i) / double(points - 1);
    }
};

/// Classifies a grid over (omega0_R/g, omega_R/g) at unit coupling; rows are
/// emitted in row-major omega0-then-omega order for deterministic output.
inline std::vector<RegimePoint> regime_map(const GridRange& omega0_over_g,
                                           const GridRange& omega_over_g,
                                           const RegimeThresholds& th = {}) {
    th.validate();
    std::vector<RegimePoint> out;
    out.reserve(size_t(omega0_over_g.points) * size_t(omega_over_g.points));
    for (int i = 0; i < omega0_over_g.points; ++i) {
        for (int j = 0; j < omega_over_g.points; ++j) {
            QRMParams p{omega0_over_g.at(i), omega_over_g.at(j), 1.0};
            out.push_back(RegimePoint{p, classify(p, th)});
        }
    }
    return out;
}

}  // namespace qrmsim

#endif
