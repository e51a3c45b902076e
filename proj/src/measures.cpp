#include "bandsign/measures.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace bandsign {

double sinc_2pi(double x) {
    const double u = 2.0 * pi * x;
    if (std::abs(x) < 1e-3) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
    }
    return std::sin(u) / u;
}

Measure katz_sarnak(Symmetry g) {
    Measure m;
    m.decay = DecayClass::polynomial(2.0);
    switch (g) {
        case Symmetry::U:
            m.label = "ks:U";
            m.kind = Measure::Kind::Density;
            m.density = [](double) { return 1.0; };
            m.sinc_coeff = 0.0;
            break;
        case Symmetry::Sp:
            m.label = "ks:Sp";
            m.kind = Measure::Kind::Density;
            m.density = [](double x) { return 1.0 - sinc_2pi(x); };
            m.sinc_coeff = -1.0;
            break;
        case Symmetry::O:
            m.label = "ks:O";
            m.kind = Measure::Kind::DensityAtoms;
            m.density = [](double) { return 1.0; };
            m.atoms = {{0.0, 0.5}};
            m.sinc_coeff = 0.0;
            break;
        case Symmetry::SOeven:
            m.label = "ks:SOeven";
            m.kind = Measure::Kind::Density;
            m.density = [](double x) { return 1.0 + sinc_2pi(x); };
            m.sinc_coeff = 1.0;
            break;
        case Symmetry::SOodd:
            m.label = "ks:SOodd";
            m.kind = Measure::Kind::DensityAtoms;
            m.density = [](double x) { return 1.0 - sinc_2pi(x); };
            m.atoms = {{0.0, 1.0}};
            m.sinc_coeff = -1.0;
            break;
    }
    return m;
}

Measure power_weight(double nu) {
    if (!(nu > -1.0)) throw DomainError("power_weight: requires nu > -1");
    Measure m;
    m.label = "power:" + std::to_string(nu);
    m.kind = Measure::Kind::Power;
    const double q = 2.0 * nu + 1.0;
    m.density = [q](double x) { return q == 0.0 ? 1.0 : std::pow(std::abs(x), q); };
    m.origin_exponent = q < 0.0 ? q : 0.0;
    m.nu = nu;
    m.decay = DecayClass::polynomial(2.0);
    return m;
}

Measure lebesgue() {
    Measure m;
    m.label = "lebesgue";
    m.kind = Measure::Kind::Density;
    m.density = [](double) { return 1.0; };
    m.sinc_coeff = 0.0;
    m.decay = DecayClass::polynomial(2.0);
    return m;
}

Measure exp_decay_measure(double eps) {
    if (!(eps > 0.0)) throw DomainError("exp_decay_measure: requires eps > 0");
    Measure m;
    std::ostringstream label;
    label << "expdecay:" << eps;
    m.label = label.str();
    m.kind = Measure::Kind::Density;
    m.density = [eps](double x) { return std::exp(-eps * std::abs(x)); };
    m.decay = DecayClass::exponential(eps);
    return m;
}

IntegralResult mu_integral(const Measure& mu, const real_fn& f, double tol,
                           std::optional<DecayClass> decay_override) {
    const DecayClass decay = decay_override.value_or(mu.decay);
    IntegrateOptions opts;
    opts.origin_exponent = mu.origin_exponent;
    IntegralResult res = integrate_weighted(f, mu.density, decay, tol, opts);
    for (const auto& atom : mu.atoms) res.value += atom.mass * f(atom.location);
    return res;
}

double lift_factor(int d) {
    if (d < 1) throw DomainError("lift_factor: requires d >= 1");
    if (d == 1) return 1.0;
    // omega_{d-1}/2 with omega_{d-1} = 2 pi^{d/2} / Gamma(d/2)
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

Measure parse_measure(const std::string& spec) {
    if (spec == "lebesgue") return lebesgue();
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "power") {
        try {
            return power_weight(std::stod(arg));
        } catch (const std::invalid_argument&) {
            throw DomainError("parse_measure: bad power exponent '" + arg + "'");
        }
    }
    if (head == "ks") {
        if (arg == "U") return katz_sarnak(Symmetry::U);
        if (arg == "Sp") return katz_sarnak(Symmetry::Sp);
        if (arg == "O") return katz_sarnak(Symmetry::O);
        if (arg == "SOeven") return katz_sarnak(Symmetry::SOeven);
        if (arg == "SOodd") return katz_sarnak(Symmetry::SOodd);
        throw DomainError("parse_measure: unknown symmetry '" + arg + "'");
    }
    if (head == "expdecay") {
        try {
            return exp_decay_measure(std::stod(arg));
        } catch (const std::invalid_argument&) {
            throw DomainError("parse_measure: bad decay rate '" + arg + "'");
        }
    }
    throw DomainError("parse_measure: unknown measure '" + spec + "'");
}

std::string measure_to_json(const Measure& m) {
    nlohmann::ordered_json j;
    j["label"] = m.label;
    switch (m.kind) {
        case Measure::Kind::Density: j["kind"] = "density"; break;
        case Measure::Kind::DensityAtoms: j["kind"] = "density+atoms"; break;
        case Measure::Kind::Power: j["kind"] = "power"; break;
    }
    if (m.nu) j["nu"] = *m.nu;
    auto atoms = nlohmann::ordered_json::array();
    for (const auto& a : m.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
    j["atoms"] = atoms;
    switch (m.decay.kind) {
        case DecayClass::Kind::Polynomial:
            j["decay"] = {{"kind", "polynomial"}, {"p", m.decay.param}};
            break;
        case DecayClass::Kind::Exponential:
            j["decay"] = {{"kind", "exponential"}, {"eps", m.decay.param}};
            break;
        case DecayClass::Kind::Compact:
            j["decay"] = {{"kind", "compact"}, {"radius", m.decay.param}};
            break;
    }
    return j.dump();
}

}  // namespace bandsign
