#pragma once

// Numerical reproducing kernel for the space of entire functions of
// exponential type at most tau that are square-integrable against a weight,
// built on the cardinal basis s_n(x) = sin(tau x - n pi)/(tau x - n pi),
// and the structure function E derived from that kernel.

#include <memory>

#include <Eigen/Dense>

#include "bandsign/debranges.hpp"
#include "bandsign/measures.hpp"

namespace bandsign {

struct WeightedPWSpace {
    double tau;      // type bound of members
    Measure mu;
    int basis_size;  // N: basis indices run over -N..N
    double reg = 0.0;
};

struct BuiltKernelDiagnostics {
    double condition_number = 0.0;
    double reproducing_residual = 0.0;
    double c4_gap = -1.0;  // filled in by validate_c4
};

class BuiltKernel {
  public:
    WeightedPWSpace space;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd gram_inverse;
    BuiltKernelDiagnostics diagnostics;

    int N() const { return space.basis_size; }
    int dim() const { return 2 * space.basis_size + 1; }

    double basis(int n, double x) const;
    cplx basis(int n, cplx z) const;
    double basis_prime(int n, double x) const;
    cplx basis_prime(int n, cplx z) const;

    // K(w, z) = sum_{m,n} inv(G)[m][n] s_m(z) s_n(conj(w))
    double eval(double w, double x) const;
    cplx eval(cplx w, cplx z) const;
};

// Assembles G[m][n] = mu_integral(mu, s_m s_n) (atoms included), inverts it
// symmetrically and fills the diagnostics. Densities of the form
// 1 + c sin(2pi x)/(2pi x) take a reduced path that shares one family of 1-d
// integrals across all entries; other densities integrate entry by entry.
BuiltKernel build_gram(const WeightedPWSpace& space, double tol);

cplx built_kernel_eval(const BuiltKernel& bk, cplx w, cplx z);

// E(z) = L(i,z)/sqrt(L(i,i)) with L(w,z) = 2 pi i (conj(w) - z) K(w,z).
// Runs the Hermite-Biehler sampling check on the result and throws
// ConstructionFailed when it does not pass (N too small or reg too large).
HermiteBiehler structure_function(const BuiltKernel& bk);

struct C4Report {
    bool pass;
    double max_rel_gap;
    int trials;
    double tol;
};

// For random U in the basis span compares the mu-integral of U^2 with the
// |E|^{-2}-weighted integral.
C4Report validate_c4(const BuiltKernel& bk, const HermiteBiehler& hb, int trials, double tol,
                     std::uint64_t seed = 2024);

std::string diagnostics_to_json(const BuiltKernel& bk);

struct PipelineResult {
    double xi1;  // extrapolated in 1/N
    std::vector<std::pair<int, double>> table;  // (basis size, raw first A-zero)
    HermiteBiehler hb;                          // structure function at the largest N
    BuiltKernelDiagnostics diagnostics;
};

// End-to-end kernel pipeline: builds the Gram at N/4, N/2 and N, extracts the
// first positive zero of A from each structure function and removes the
// O(1/N) cardinal-truncation bias by Richardson extrapolation. The raw values
// are reported in `table` as a convergence record.
PipelineResult kernel_pipeline_xi1(const Measure& mu, double tau, int N, double tol);

}  // namespace bandsign
