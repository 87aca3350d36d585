#pragma once

#include <span>
#include <vector>

namespace fraq {

/// Tridiagonal stencil (-1, 2, -1)/h^2 on M interior nodes of [0,L] with
/// homogeneous Dirichlet boundary.
struct DiscreteLaplacian {
    int grid_m = 1;
    double h = 0.5;

    DiscreteLaplacian() = default;
    DiscreteLaplacian(int m, double length) : grid_m(m), h(length / (m + 1)) {}

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;

    /// lambda_k = (4/h^2) sin^2(k pi h / (2L)), k = 1..M. Test oracle.
    double eigenvalue(int k, double length) const;
};

/// General banded LU with partial pivoting (LAPACK gbtrf storage layout).
class BandedLU {
public:
    BandedLU(int n, int kl, int ku);

    double& at(int row, int col);  // assembly access, |row-col| <= kl/ku
    void factorize();              // throws on zero pivot
    void solve(std::span<double> rhs) const;

private:
    int n_, kl_, ku_, ldab_;
    bool factored_ = false;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

/// One implicit solve of the coupled two-field block system
///   [ lead/tau + d01 (a + A) , -a d02 I ; -a d01 I , lead/tau + d02 (a + A) ]
/// with unknowns interleaved (G1_k, G2_k), bandwidth 2.
class BlockSystem {
public:
    BlockSystem(double d01, double d02, double coupling_a, double tau,
                const DiscreteLaplacian& lap, double bdf_lead);

    /// Solves into g1, g2 (each grid_m long). Const and shareable across
    /// threads once constructed. Debug builds verify the residual against
    /// the stencil form (tolerance 1e-12 * ||rhs||).
    void solve(std::span<const double> rhs1, std::span<const double> rhs2,
               std::span<double> g1, std::span<double> g2) const;

private:
    int m_;
    BandedLU lu_;
    double d01_, d02_, a_, lead_tau_, ih2_;
};

/// The one-shot form shared by all steppers: assemble, factorize, solve.
/// bdf_lead is 1 for BE and the first SBD step, 3/2 for SBD at n >= 2.
void solve_block_system(double d01, double d02, double coupling_a, double tau,
                        const DiscreteLaplacian& lap, std::span<const double> rhs1,
                        std::span<const double> rhs2, std::span<double> g1,
                        std::span<double> g2, double bdf_lead = 1.0);

}  // namespace fraq
