#pragma once

// Locally finite, even, non-negative measures on the real line: an optional
// density W(x), optional point masses, and a decay-class tag used when
// integrating against them. Built-ins cover the Lebesgue measure, power
// weights |x|^{2nu+1}, the five 1-level-density weights (U, Sp, O, SO(even),
// SO(odd)) and exponential-decay test measures.

#include <optional>

#include "bandsign/common.hpp"
#include "bandsign/numerics.hpp"

namespace bandsign {

struct Atom {
    double location;
    double mass;
};

struct Measure {
    enum class Kind { Density, DensityAtoms, Power };

    std::string label;
    Kind kind = Kind::Density;
    real_fn density;  // W(x) >= 0
    std::vector<Atom> atoms;
    DecayClass decay = DecayClass::polynomial(2.0);
    bool even = true;

    // W ~ |x|^origin_exponent as x -> 0; negative values trigger panel
    // refinement toward the origin.
    double origin_exponent = 0.0;
    std::optional<double> nu;          // set for Kind::Power
    std::optional<double> sinc_coeff;  // set when W(x) = 1 + coeff*sin(2pi x)/(2pi x)
};

enum class Symmetry { U, Sp, O, SOeven, SOodd };

// sin(2 pi x)/(2 pi x), evaluated by series near the origin.
double sinc_2pi(double x);

Measure katz_sarnak(Symmetry g);
Measure power_weight(double nu);  // d mu = |x|^{2nu+1} dx, nu > -1
Measure lebesgue();
Measure exp_decay_measure(double eps);  // d mu = exp(-eps |x|) dx

// integral of f against mu: integral of f*W plus the atom masses. The decay
// class describes the tail of f*W; by default the measure's own tag is used.
IntegralResult mu_integral(const Measure& mu, const real_fn& f, double tol,
                           std::optional<DecayClass> decay_override = std::nullopt);

// Half the surface area of the unit sphere S^{d-1} for d >= 2; 1 for d = 1.
double lift_factor(int d);

// "lebesgue" | "power:<nu>" | "ks:U|Sp|O|SOeven|SOodd" | "expdecay:<eps>"
Measure parse_measure(const std::string& spec);

std::string measure_to_json(const Measure& m);

}  // namespace bandsign
