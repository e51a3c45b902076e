#include "bandsign/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace bandsign {

// ---------------------------------------------------------------------------
// RealPolynomial
// ---------------------------------------------------------------------------

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    normalize();
}

RealPolynomial RealPolynomial::from_even_coeffs(const std::vector<double>& even_coeffs) {
    std::vector<double> c(even_coeffs.empty() ? 0 : 2 * even_coeffs.size() - 1, 0.0);
    for (std::size_t k = 0; k < even_coeffs.size(); ++k) c[2 * k] = even_coeffs[k];
    return RealPolynomial(std::move(c));
}

void RealPolynomial::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

int RealPolynomial::degree() const {
    return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

double RealPolynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RealPolynomial RealPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return RealPolynomial(std::move(d));
}

RealPolynomial poly_add(const RealPolynomial& p, const RealPolynomial& q) {
    std::vector<double> c(std::max(p.coeffs().size(), q.coeffs().size()), 0.0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[k] += p.coeffs()[k];
    for (std::size_t k = 0; k < q.coeffs().size(); ++k) c[k] += q.coeffs()[k];
    return RealPolynomial(std::move(c));
}

RealPolynomial poly_sub(const RealPolynomial& p, const RealPolynomial& q) {
    std::vector<double> c(std::max(p.coeffs().size(), q.coeffs().size()), 0.0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[k] += p.coeffs()[k];
    for (std::size_t k = 0; k < q.coeffs().size(); ++k) c[k] -= q.coeffs()[k];
    return RealPolynomial(std::move(c));
}

RealPolynomial poly_mul(const RealPolynomial& p, const RealPolynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<double> c(p.coeffs().size() + q.coeffs().size() - 1, 0.0);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        for (std::size_t j = 0; j < q.coeffs().size(); ++j)
            c[i + j] += p.coeffs()[i] * q.coeffs()[j];
    return RealPolynomial(std::move(c));
}

double poly_eval(const RealPolynomial& p, double x) { return p.eval(x); }

PolyDivision poly_divide(const RealPolynomial& p, const RealPolynomial& divisor) {
    if (divisor.is_zero()) throw DomainError("poly_divide: division by zero polynomial");
    std::vector<double> rem = p.coeffs();
    const auto& d = divisor.coeffs();
    const double lead = d.back();
    if (rem.size() < d.size()) return {RealPolynomial{}, p};
    std::vector<double> quot(rem.size() - d.size() + 1, 0.0);
    for (std::size_t k = quot.size(); k-- > 0;) {
        const double factor = rem[k + d.size() - 1] / lead;
        quot[k] = factor;
        for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= factor * d[j];
    }
    return {RealPolynomial(std::move(quot)), RealPolynomial(std::move(rem))};
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15 panel rule
// ---------------------------------------------------------------------------

namespace {

// Nodes/weights of the 15-point Kronrod extension of 7-point Gauss-Legendre
// on [-1, 1] (positive half; the rule is symmetric).
constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct EvalBudget {
    std::int64_t used = 0;
    std::int64_t cap = 0;
    void charge(std::int64_t n) {
        used += n;
        if (cap > 0 && used > cap) throw NonConvergence("integration evaluation budget exhausted");
    }
};

struct PanelResult {
    double value;
    double error;
    double abs_value;
};

PanelResult gk15(const real_fn& f, double a, double b, EvalBudget& budget) {
    budget.charge(15);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kronrod = 0.0, gauss = 0.0, abs_sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double f_hi = f(mid + dx);
        const double f_lo = (i < 7) ? f(mid - dx) : 0.0;
        const double pair = (i < 7) ? f_hi + f_lo : f_hi;
        kronrod += kGK15Weights[i] * pair;
        abs_sum += kGK15Weights[i] * ((i < 7) ? std::abs(f_hi) + std::abs(f_lo) : std::abs(f_hi));
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * pair;
    }
    const double value = kronrod * half;
    const double err = std::abs((kronrod - gauss) * half);
    return {value, err, abs_sum * std::abs(half)};
}

struct AdaptiveAccumulator {
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
};

void adapt(const real_fn& f, double a, double b, double tol, int depth, int max_depth,
           EvalBudget& budget, AdaptiveAccumulator& acc) {
    const PanelResult r = gk15(f, a, b, budget);
    if (r.error <= tol || depth >= max_depth || (b - a) < 1e-15 * (1.0 + std::abs(a))) {
        acc.value += r.value;
        acc.error += r.error;
        acc.abs_value += r.abs_value;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, budget, acc);
    adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, budget, acc);
}

AdaptiveAccumulator integrate_segment(const real_fn& f, double a, double b, double tol,
                                      const IntegrateOptions& opts, EvalBudget& budget) {
    AdaptiveAccumulator acc;
    if (a == b) return acc;
    adapt(f, a, b, tol, 0, opts.max_depth, budget, acc);
    return acc;
}

// Segment that touches the origin where the integrand may carry an
// integrable singularity |x|^q, q in (-1,0): geometric panels toward 0.
AdaptiveAccumulator integrate_toward_origin(const real_fn& f, double outer, double tol,
                                            const IntegrateOptions& opts, EvalBudget& budget) {
    AdaptiveAccumulator acc;
    const double s = std::abs(outer);
    if (s == 0.0) return acc;
    const double sgn = outer > 0 ? 1.0 : -1.0;
    double hi = s;
    for (int k = 0; k < 2000; ++k) {
        const double lo = 0.5 * hi;
        const double a = sgn > 0 ? lo : -hi;
        const double b = sgn > 0 ? hi : -lo;
        AdaptiveAccumulator part =
            integrate_segment(f, a, b, tol / (8.0 * (k + 1) * (k + 1)), opts, budget);
        acc.value += part.value;
        acc.error += part.error;
        acc.abs_value += part.abs_value;
        if (std::abs(part.value) < tol / 10.0 && k >= 4) break;
        hi = lo;
    }
    return acc;
}

}  // namespace

IntegralResult integrate_interval(const real_fn& f, double a, double b, double tol,
                                  const IntegrateOptions& opts) {
    if (tol <= 0) throw DomainError("integrate_interval: tol must be positive");
    EvalBudget budget{0, opts.max_evaluations};
    AdaptiveAccumulator acc;
    if (opts.origin_exponent < 0.0 && a < 0.0 && b > 0.0) {
        auto left = integrate_toward_origin(f, a, tol / 3.0, opts, budget);
        auto right = integrate_toward_origin(f, b, tol / 3.0, opts, budget);
        acc.value = left.value + right.value;
        acc.error = left.error + right.error;
        acc.abs_value = left.abs_value + right.abs_value;
    } else {
        acc = integrate_segment(f, a, b, tol, opts, budget);
    }
    return {acc.value, acc.error, budget.used};
}

namespace {

double shell_tol(double tol, int k) { return tol / (6.0 * (k + 2) * (k + 2)); }

}  // namespace

IntegralResult integrate_weighted(const real_fn& f, const real_fn& weight,
                                  const DecayClass& decay, double tol,
                                  const IntegrateOptions& opts) {
    if (tol <= 0) throw DomainError("integrate_weighted: tol must be positive");
    auto h = [&](double x) { return f(x) * weight(x); };

    if (decay.kind == DecayClass::Kind::Compact) {
        const double radius = decay.param;
        if (radius <= 0) throw DomainError("integrate_weighted: compact radius must be positive");
        return integrate_interval(h, -radius, radius, tol, opts);
    }

    EvalBudget budget{0, opts.max_evaluations};
    const double core = 8.0;

    AdaptiveAccumulator acc;
    if (opts.origin_exponent < 0.0) {
        auto left = integrate_toward_origin(h, -core, tol / 8.0, opts, budget);
        auto right = integrate_toward_origin(h, core, tol / 8.0, opts, budget);
        acc.value = left.value + right.value;
        acc.error = left.error + right.error;
        acc.abs_value = left.abs_value + right.abs_value;
    } else {
        acc = integrate_segment(h, -core, core, tol / 8.0, opts, budget);
    }

    if (decay.kind == DecayClass::Kind::Exponential) {
        // Map the tails through x = tan(theta) and keep doubling the panel
        // edge in x until a panel pair contributes below tol/10.
        auto g = [&](double theta) {
            const double c = std::cos(theta);
            const double x = std::tan(theta);
            return h(x) / (c * c);
        };
        double edge = core;
        double prev_abs = -1.0;
        int quiet = 0, grow = 0;
        for (int k = 0; k < 60; ++k) {
            const double next = edge * 2.0;
            const double t0 = std::atan(edge), t1 = std::atan(next);
            auto right = integrate_segment(g, t0, t1, shell_tol(tol, k), opts, budget);
            auto left = integrate_segment(g, -t1, -t0, shell_tol(tol, k), opts, budget);
            acc.value += right.value + left.value;
            acc.error += right.error + left.error;
            const double contribution = std::abs(right.value) + std::abs(left.value);
            const double abs_mass = right.abs_value + left.abs_value;
            if (edge >= opts.decay_starts_at && prev_abs >= 0.0 && abs_mass > 2.0 * prev_abs &&
                abs_mass > tol) {
                if (++grow >= 2)
                    throw DomainError("integrate_weighted: tail grows under exponential decay tag");
            } else {
                grow = 0;
            }
            prev_abs = abs_mass;
            if (contribution < tol / 10.0) {
                if (++quiet >= 2) {
                    acc.error += contribution;
                    return {acc.value, acc.error, budget.used};
                }
            } else {
                quiet = 0;
            }
            edge = next;
        }
        throw NonConvergence("integrate_weighted: exponential tail did not settle");
    }

    // Polynomial decay: dyadic shells, then extrapolate the partial sums in
    // the declared order (tail(X) ~ X^{1-p}).
    const double p = decay.param;
    if (p <= 1.0) throw DomainError("integrate_weighted: polynomial decay needs p > 1");
    std::vector<double> partial{acc.value};
    double shell_err = acc.error;
    double extrap_prev = acc.value;
    double edge = core;
    double prev_abs = -1.0;
    int grow = 0, settled = 0;
    const int max_shells = 16;
    for (int k = 0; k < max_shells; ++k) {
        const double next = edge * 2.0;
        auto right = integrate_segment(h, edge, next, shell_tol(tol, k), opts, budget);
        auto left = integrate_segment(h, -next, -edge, shell_tol(tol, k), opts, budget);
        partial.push_back(partial.back() + right.value + left.value);
        shell_err += right.error + left.error;
        const double abs_mass = right.abs_value + left.abs_value;
        if (edge >= opts.decay_starts_at && prev_abs >= 0.0 && abs_mass > 2.0 * prev_abs &&
            abs_mass > tol) {
            if (++grow >= 2)
                throw DomainError("integrate_weighted: tail grows under polynomial decay tag");
        } else {
            grow = 0;
        }
        prev_abs = abs_mass;
        if (partial.size() >= 3) {
            double ext_err = 0.0;
            const double extrap = richardson_limit(partial, p - 1.0, &ext_err);
            if (std::abs(extrap - extrap_prev) < tol / 4.0 && ext_err < tol / 2.0) {
                if (++settled >= 2)
                    return {extrap, shell_err + ext_err + std::abs(extrap - extrap_prev),
                            budget.used};
            } else {
                settled = 0;
            }
            extrap_prev = extrap;
        }
        edge = next;
    }
    double ext_err = 0.0;
    const double extrap = richardson_limit(partial, p - 1.0, &ext_err);
    const double total_err = shell_err + ext_err;
    if (total_err > tol)
        throw NonConvergence("integrate_weighted: error estimate above tolerance after budget");
    return {extrap, total_err, budget.used};
}

double richardson_limit(const std::vector<double>& partial_sums, double e0, double* err_est,
                        int max_levels) {
    if (partial_sums.empty()) throw DomainError("richardson_limit: empty sequence");
    std::vector<double> row = partial_sums;
    double last = row.back();
    double prev_diag = row.back();
    int levels = std::min<int>(max_levels, static_cast<int>(partial_sums.size()) - 1);
    for (int j = 0; j < levels; ++j) {
        const double factor = std::pow(2.0, e0 + j) - 1.0;
        std::vector<double> next(row.size() - 1);
        for (std::size_t k = 0; k + 1 < row.size(); ++k)
            next[k] = row[k + 1] + (row[k + 1] - row[k]) / factor;
        prev_diag = last;
        last = next.back();
        row = std::move(next);
    }
    if (err_est) *err_est = std::abs(last - prev_diag);
    return last;
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

double find_root(const real_fn& f, const Interval& bracket, double tol) {
    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw InvalidBracket("find_root: no sign change on bracket");

    // Bisection down to a narrow bracket, then secant with a bracket guard.
    while (b - a > 1e-8) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    double x0 = a, f0 = fa, x1 = b, f1 = fb;
    double best_x = std::abs(fa) < std::abs(fb) ? a : b;
    double best_f = std::min(std::abs(fa), std::abs(fb));
    for (int it = 0; it < 60; ++it) {
        if (f1 == f0) break;
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > a && x2 < b)) x2 = 0.5 * (a + b);
        const double f2 = f(x2);
        if (std::abs(f2) < best_f) {
            best_f = std::abs(f2);
            best_x = x2;
        }
        if (f2 == 0.0) return x2;
        if (fa * f2 < 0.0) {
            b = x2;
            fb = f2;
        } else {
            a = x2;
            fa = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (std::abs(x1 - x0) < tol || (b - a) < tol) break;
    }
    return best_x;
}

}  // namespace bandsign
