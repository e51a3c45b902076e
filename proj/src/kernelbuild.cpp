#include "bandsign/kernelbuild.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bandsign/numerics.hpp"

namespace bandsign {

namespace {

double sinc_real(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

cplx sinc_cplx(cplx u) {
    if (std::abs(u) < 1e-4) {
        const cplx u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

double sinc_prime_real(double u) {
    if (std::abs(u) < 1e-3) {
        const double u2 = u * u;
        return u * (-1.0 / 3.0 + u2 / 30.0 - u2 * u2 / 840.0);
    }
    return (u * std::cos(u) - std::sin(u)) / (u * u);
}

cplx sinc_prime_cplx(cplx u) {
    if (std::abs(u) < 1e-3) {
        const cplx u2 = u * u;
        return u * (-1.0 / 3.0 + u2 / 30.0 - u2 * u2 / 840.0);
    }
    return (u * std::cos(u) - std::sin(u)) / (u * u);
}

}  // namespace

double BuiltKernel::basis(int n, double x) const { return sinc_real(space.tau * x - n * pi); }
cplx BuiltKernel::basis(int n, cplx z) const { return sinc_cplx(space.tau * z - cplx(n * pi)); }
double BuiltKernel::basis_prime(int n, double x) const {
    return space.tau * sinc_prime_real(space.tau * x - n * pi);
}
cplx BuiltKernel::basis_prime(int n, cplx z) const {
    return space.tau * sinc_prime_cplx(space.tau * z - cplx(n * pi));
}

double BuiltKernel::eval(double w, double x) const {
    Eigen::VectorXd sz(dim()), sw(dim());
    for (int n = -N(); n <= N(); ++n) {
        sz(n + N()) = basis(n, x);
        sw(n + N()) = basis(n, w);
    }
    return sz.dot(gram_inverse * sw);
}

cplx BuiltKernel::eval(cplx w, cplx z) const {
    Eigen::VectorXcd sz(dim()), swbar(dim());
    const cplx wbar = std::conj(w);
    for (int n = -N(); n <= N(); ++n) {
        sz(n + N()) = basis(n, z);
        swbar(n + N()) = basis(n, wbar);
    }
    return (sz.transpose() * gram_inverse.cast<cplx>() * swbar)(0);
}

cplx built_kernel_eval(const BuiltKernel& bk, cplx w, cplx z) { return bk.eval(w, z); }

namespace {

// One-dimensional reductions shared by all Gram entries when
// W(x) = 1 + beta sin(2pi x)/(2pi x):
//   I(k) = int sin^2(tau x - k pi)/(tau x - k pi) * g(x) dx   (odd in k)
//   J(k) = int sin^2(tau x - k pi)/(tau x - k pi)^2 * g(x) dx (even in k)
// with g = sin(2pi x)/(2pi x). Products of two basis functions reduce to
// these through sin(tau x - m pi) = +-sin(tau x) and partial fractions.
struct SincCorrections {
    std::vector<double> I;  // index 0..N
    std::vector<double> J;
    double at_I(int k) const { return k >= 0 ? I[k] : -I[-k]; }
    double at_J(int k) const { return J[std::abs(k)]; }
};

SincCorrections compute_corrections(double tau, int N, double tol) {
    SincCorrections c;
    c.I.resize(N + 1);
    c.J.resize(N + 1);
    IntegrateOptions opts;
    // The 1/(tau x - k pi) factor peaks near x = k pi / tau; the declared
    // decay only applies beyond the whole basis range.
    opts.decay_starts_at = (N + 4) * pi / tau;
    for (int k = 0; k <= N; ++k) {
        const double shift = k * pi;
        auto integrand_I = [tau, shift](double x) {
            const double u = tau * x - shift;
            const double s = std::sin(u);
            const double frac = std::abs(u) < 1e-7 ? u : s * s / u;
            return frac * sinc_2pi(x);
        };
        auto integrand_J = [tau, shift](double x) {
            const double u = tau * x - shift;
            const double s = std::sin(u);
            const double frac = std::abs(u) < 1e-7 ? 1.0 - u * u / 3.0 : s * s / (u * u);
            return frac * sinc_2pi(x);
        };
        auto one = [](double) { return 1.0; };
        c.I[k] = k == 0 ? 0.0
                        : integrate_weighted(integrand_I, one, DecayClass::polynomial(2.0), tol,
                                             opts)
                              .value;
        c.J[k] = integrate_weighted(integrand_J, one, DecayClass::polynomial(3.0), tol, opts).value;
    }
    return c;
}

Eigen::MatrixXd assemble_gram(const WeightedPWSpace& space, double tol) {
    const int N = space.basis_size;
    const int dim = 2 * N + 1;
    const double tau = space.tau;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);

    auto s_val = [tau](int n, double x) { return sinc_real(tau * x - n * pi); };

    if (space.mu.sinc_coeff.has_value()) {
        const double beta = *space.mu.sinc_coeff;
        for (int m = -N; m <= N; ++m) G(m + N, m + N) = pi / tau;
        if (beta != 0.0) {
            const SincCorrections corr = compute_corrections(tau, N, std::min(tol, 1e-11));
            for (int m = -N; m <= N; ++m) {
                for (int n = m; n <= N; ++n) {
                    const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
                    double value;
                    if (m == n) {
                        value = beta * corr.at_J(m);
                    } else {
                        value = sign * beta * (corr.at_I(m) - corr.at_I(n)) /
                                (static_cast<double>(m - n) * pi);
                    }
                    G(m + N, n + N) += value;
                    if (m != n) G(n + N, m + N) += value;
                }
            }
        }
    } else {
        // Generic density: one integral per entry, using the symmetries
        // G[m][n] = G[n][m] = G[-m][-n].
        for (int m = -N; m <= N; ++m) {
            for (int n = m; n <= N; ++n) {
                if (G(m + N, n + N) != 0.0) continue;
                auto f = [&](double x) { return s_val(m, x) * s_val(n, x); };
                const double v =
                    mu_integral(space.mu, f, tol, DecayClass::polynomial(2.0)).value;
                G(m + N, n + N) = v;
                G(n + N, m + N) = v;
                G(-m + N, -n + N) = v;
                G(-n + N, -m + N) = v;
            }
        }
        // The atom part is added below for both paths; the generic path must
        // not double-count it, so subtract what mu_integral already added.
        for (const auto& atom : space.mu.atoms) {
            for (int m = -N; m <= N; ++m)
                for (int n = -N; n <= N; ++n)
                    G(m + N, n + N) -= atom.mass * s_val(m, atom.location) * s_val(n, atom.location);
        }
    }

    for (const auto& atom : space.mu.atoms) {
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n)
                G(m + N, n + N) += atom.mass * s_val(m, atom.location) * s_val(n, atom.location);
    }
    return G;
}

}  // namespace

BuiltKernel build_gram(const WeightedPWSpace& space, double tol) {
    if (space.basis_size < 3) throw DomainError("build_gram: basis_size must be >= 3");
    if (!(space.tau > 0)) throw DomainError("build_gram: tau must be positive");

    BuiltKernel bk;
    bk.space = space;
    bk.gram = assemble_gram(space, tol);
    const int dim = bk.dim();

    double reg_used = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bk.gram);
        const double lo = es.eigenvalues()(0);
        const double hi = es.eigenvalues()(dim - 1);
        const double cond = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
        bk.diagnostics.condition_number = cond;
        if (cond <= 1e12) break;
        if (attempt == 1) throw IllConditioned("build_gram: Gram condition number above 1e12");
        reg_used = space.reg > 0 ? space.reg : 1e-12 * bk.gram.trace() / dim;
        bk.gram += reg_used * Eigen::MatrixXd::Identity(dim, dim);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(bk.gram);
    if (ldlt.info() != Eigen::Success)
        throw IllConditioned("build_gram: symmetric factorization failed");
    bk.gram_inverse = ldlt.solve(Eigen::MatrixXd::Identity(dim, dim));

    // Reproducing residual: how well G * (G^{-1} s(w)) returns s(w).
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uw(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double w = uw(rng);
        Eigen::VectorXd sw(dim);
        for (int n = -bk.N(); n <= bk.N(); ++n) sw(n + bk.N()) = bk.basis(n, w);
        const Eigen::VectorXd recon = bk.gram * (bk.gram_inverse * sw);
        for (int m = 0; m < dim; ++m) {
            const double norm = std::sqrt(std::max(bk.gram(m, m), 1e-300));
            worst = std::max(worst, std::abs(recon(m) - sw(m)) / norm);
        }
    }
    bk.diagnostics.reproducing_residual = worst;
    return bk;
}

namespace {

struct BuiltStructure {
    std::shared_ptr<const BuiltKernel> bk;
    Eigen::VectorXd c_re, c_im;  // G^{-1} s(-i)
    double kii;
    double scale;  // sqrt(pi / kii)

    void basis_at(double x, Eigen::VectorXd& s) const {
        for (int n = -bk->N(); n <= bk->N(); ++n) s(n + bk->N()) = bk->basis(n, x);
    }
    void basis_prime_at(double x, Eigen::VectorXd& s) const {
        for (int n = -bk->N(); n <= bk->N(); ++n) s(n + bk->N()) = bk->basis_prime(n, x);
    }
    cplx S(cplx z) const {
        cplx acc = 0.0;
        for (int n = -bk->N(); n <= bk->N(); ++n)
            acc += cplx(c_re(n + bk->N()), c_im(n + bk->N())) * bk->basis(n, z);
        return acc;
    }
    cplx S_prime(cplx z) const {
        cplx acc = 0.0;
        for (int n = -bk->N(); n <= bk->N(); ++n)
            acc += cplx(c_re(n + bk->N()), c_im(n + bk->N())) * bk->basis_prime(n, z);
        return acc;
    }
    cplx D(cplx z) const {
        cplx acc = 0.0;
        for (int n = -bk->N(); n <= bk->N(); ++n)
            acc += cplx(c_re(n + bk->N()), -c_im(n + bk->N())) * bk->basis(n, z);
        return acc;
    }
    cplx D_prime(cplx z) const {
        cplx acc = 0.0;
        for (int n = -bk->N(); n <= bk->N(); ++n)
            acc += cplx(c_re(n + bk->N()), -c_im(n + bk->N())) * bk->basis_prime(n, z);
        return acc;
    }
};

}  // namespace

HermiteBiehler structure_function(const BuiltKernel& bk_in) {
    auto st = std::make_shared<BuiltStructure>();
    st->bk = std::make_shared<BuiltKernel>(bk_in);
    const auto& bk = *st->bk;
    const int dim = bk.dim();

    Eigen::VectorXcd s_minus_i(dim);
    for (int n = -bk.N(); n <= bk.N(); ++n)
        s_minus_i(n + bk.N()) = bk.basis(n, cplx(0.0, -1.0));
    const Eigen::VectorXcd c = bk.gram_inverse.cast<cplx>() * s_minus_i;
    st->c_re = c.real();
    st->c_im = c.imag();
    // K(i,i) = sum_m conj(s(-i))_m c_m, a positive Hermitian form.
    st->kii = s_minus_i.dot(c).real();
    if (!(st->kii > 0.0))
        throw ConstructionFailed("structure_function: K(i,i) not positive");
    st->scale = std::sqrt(pi / st->kii);

    HermiteBiehler hb;
    hb.tau = bk.space.tau;
    std::ostringstream label;
    label << "built(" << bk.space.mu.label << ",tau=" << bk.space.tau << ",N=" << bk.N() << ")";
    hb.label = label.str();

    const double scale = st->scale;
    const cplx I(0.0, 1.0);
    hb.A = [st, scale, I](cplx z) {
        return -I * 0.5 * scale * ((z + I) * st->S(z) - (z - I) * st->D(z));
    };
    hb.B = [st, scale, I](cplx z) {
        return 0.5 * scale * ((z + I) * st->S(z) + (z - I) * st->D(z));
    };
    hb.A_prime = [st, scale, I](cplx z) {
        return -I * 0.5 * scale *
               (st->S(z) + (z + I) * st->S_prime(z) - st->D(z) - (z - I) * st->D_prime(z));
    };
    hb.B_prime = [st, scale, I](cplx z) {
        return 0.5 * scale *
               (st->S(z) + (z + I) * st->S_prime(z) + st->D(z) + (z - I) * st->D_prime(z));
    };
    hb.A_real = [st, scale](double x) {
        Eigen::VectorXd s(st->bk->dim());
        st->basis_at(x, s);
        return scale * (x * st->c_im.dot(s) + st->c_re.dot(s));
    };
    hb.B_real = [st, scale](double x) {
        Eigen::VectorXd s(st->bk->dim());
        st->basis_at(x, s);
        return scale * (x * st->c_re.dot(s) - st->c_im.dot(s));
    };
    hb.A_prime_real = [st, scale](double x) {
        Eigen::VectorXd s(st->bk->dim()), sp(st->bk->dim());
        st->basis_at(x, s);
        st->basis_prime_at(x, sp);
        return scale * (st->c_im.dot(s) + x * st->c_im.dot(sp) + st->c_re.dot(sp));
    };
    hb.B_prime_real = [st, scale](double x) {
        Eigen::VectorXd s(st->bk->dim()), sp(st->bk->dim());
        st->basis_at(x, s);
        st->basis_prime_at(x, sp);
        return scale * (st->c_re.dot(s) + x * st->c_re.dot(sp) - st->c_im.dot(sp));
    };

    // Gate: Hermite-Biehler sampling plus parity and real-zero-freeness spot
    // checks on the real axis.
    const HBReport report = verify_hb(hb, 200, 2027);
    if (!report.pass)
        throw ConstructionFailed("structure_function: |E*| < |E| sampling failed (increase N?)");
    for (double x : {0.13, 0.71, 1.37, 2.9}) {
        if (std::abs(hb.A_real(x) - hb.A_real(-x)) > 1e-8 * (1.0 + std::abs(hb.A_real(x))))
            throw ConstructionFailed("structure_function: A not even on samples");
        if (std::abs(hb.B_real(x) + hb.B_real(-x)) > 1e-8 * (1.0 + std::abs(hb.B_real(x))))
            throw ConstructionFailed("structure_function: B not odd on samples");
        if (!(hb.abs2_E(x) > 0.0))
            throw ConstructionFailed("structure_function: |E| vanishes on the real axis");
    }
    return hb;
}

C4Report validate_c4(const BuiltKernel& bk, const HermiteBiehler& hb, int trials, double tol,
                     std::uint64_t seed) {
    if (trials <= 0) throw DomainError("validate_c4: trials must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const int dim = bk.dim();
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd a(dim);
        for (int m = 0; m < dim; ++m) a(m) = coeff(rng);
        auto U = [&](double x) {
            double acc = 0.0;
            for (int n = -bk.N(); n <= bk.N(); ++n) acc += a(n + bk.N()) * bk.basis(n, x);
            return acc;
        };
        auto F = [&](double x) {
            const double u = U(x);
            return u * u;
        };
        const double scale = a.dot(bk.gram * a);  // mu-norm^2 of U, sets the error scale
        const double tol_int = std::max(1e-9, 1e-8 * scale);
        const double direct = mu_integral(bk.space.mu, F, tol_int, DecayClass::polynomial(2.0)).value;
        auto inv_weight = [&](double x) { return 1.0 / hb.abs2_E(x); };
        const double weighted =
            integrate_weighted(F, inv_weight, DecayClass::polynomial(2.0), tol_int).value;
        const double gap = std::abs(direct - weighted) / std::max({std::abs(direct),
                                                                   std::abs(weighted), 1e-12});
        worst = std::max(worst, gap);
    }
    return {worst < tol, worst, trials, tol};
}

std::string diagnostics_to_json(const BuiltKernel& bk) {
    nlohmann::ordered_json j;
    j["N"] = bk.N();
    j["condition_number"] = bk.diagnostics.condition_number;
    j["reproducing_residual"] = bk.diagnostics.reproducing_residual;
    j["c4_gap"] = bk.diagnostics.c4_gap;
    return j.dump();
}

PipelineResult kernel_pipeline_xi1(const Measure& mu, double tau, int N, double tol) {
    std::vector<int> sizes;
    for (int n : {N / 4, N / 2, N})
        if (n >= 8 && (sizes.empty() || n > sizes.back())) sizes.push_back(n);
    if (sizes.empty()) sizes.push_back(std::max(8, N));

    PipelineResult out;
    std::vector<double> xi;
    const double horizon = 20.0 * pi / tau + 20.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        WeightedPWSpace space{tau, mu, sizes[i], 0.0};
        BuiltKernel bk = build_gram(space, tol);
        HermiteBiehler hb = structure_function(bk);
        xi.push_back(next_t_alpha_zero(hb, 0.5 * pi, 0.0, horizon));
        out.table.emplace_back(sizes[i], xi.back());
        if (i + 1 == sizes.size()) {
            out.hb = std::move(hb);
            out.diagnostics = bk.diagnostics;
        }
    }
    // Successive sizes double, so the O(1/N) truncation bias is removed by
    // Richardson steps with exponents 1, 2.
    if (xi.size() == 3) {
        const double t1a = 2.0 * xi[1] - xi[0];
        const double t1b = 2.0 * xi[2] - xi[1];
        out.xi1 = t1b + (t1b - t1a) / 3.0;
    } else if (xi.size() == 2) {
        out.xi1 = 2.0 * xi[1] - xi[0];
    } else {
        out.xi1 = xi[0];
    }
    return out;
}

}  // namespace bandsign
