#include "fraq/block_solver.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraq {

void DiscreteLaplacian::apply(std::span<const double> x, std::span<double> y) const {
    const int m = grid_m;
    const double ih2 = 1.0 / (h * h);
    for (int i = 0; i < m; ++i) {
        double v = 2.0 * x[i];
        if (i > 0) v -= x[i - 1];
        if (i + 1 < m) v -= x[i + 1];
        y[i] = v * ih2;
    }
}

double DiscreteLaplacian::eigenvalue(int k, double length) const {
    const double s = std::sin(k * std::numbers::pi * h / (2.0 * length));
    return 4.0 / (h * h) * s * s;
}

// LAPACK-style band storage: ab_[(kl+ku + row - col) + col*ldab], with kl
// extra rows on top for the fill-in produced by pivoting.
BandedLU::BandedLU(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0), piv_(n, 0) {}

double& BandedLU::at(int row, int col) {
    assert(row >= 0 && row < n_ && col >= 0 && col < n_);
    assert(col - row <= ku_ && row - col <= kl_);
    return ab_[static_cast<std::size_t>(col) * ldab_ + (kl_ + ku_ + row - col)];
}

void BandedLU::factorize() {
    // Band LU with partial pivoting; the pivot row can only come from the
    // kl rows below the diagonal.
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
        const int jmax = std::min(n_ - 1, j + kl_);
        int piv = j;
        double pmax = std::abs(ab_[static_cast<std::size_t>(j) * ldab_ + kv]);
        for (int i = j + 1; i <= jmax; ++i) {
            const double v = std::abs(ab_[static_cast<std::size_t>(j) * ldab_ + kv + (i - j)]);
            if (v > pmax) {
                pmax = v;
                piv = i;
            }
        }
        if (pmax == 0.0) throw std::runtime_error("BandedLU: zero pivot (singular system)");
        piv_[j] = piv;
        const int cmax = std::min(n_ - 1, j + kv);
        if (piv != j) {
            for (int c = j; c <= cmax; ++c) {
                const std::size_t base = static_cast<std::size_t>(c) * ldab_ + kv;
                std::swap(ab_[base + (j - c)], ab_[base + (piv - c)]);
            }
        }
        const double dinv = 1.0 / ab_[static_cast<std::size_t>(j) * ldab_ + kv];
        for (int i = j + 1; i <= jmax; ++i) {
            double& lij = ab_[static_cast<std::size_t>(j) * ldab_ + kv + (i - j)];
            lij *= dinv;
            const double l = lij;
            for (int c = j + 1; c <= cmax; ++c) {
                const std::size_t base = static_cast<std::size_t>(c) * ldab_ + kv;
                ab_[base + (i - c)] -= l * ab_[base + (j - c)];
            }
        }
    }
    factored_ = true;
}

void BandedLU::solve(std::span<double> rhs) const {
    if (!factored_) throw std::logic_error("BandedLU::solve before factorize");
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(rhs[j], rhs[piv_[j]]);
        const int imax = std::min(n_ - 1, j + kl_);
        const double xj = rhs[j];
        for (int i = j + 1; i <= imax; ++i)
            rhs[i] -= ab_[static_cast<std::size_t>(j) * ldab_ + kv + (i - j)] * xj;
    }
    for (int j = n_ - 1; j >= 0; --j) {
        double v = rhs[j];
        // row j of U lives in columns j..j+kv
        for (int c = j + 1; c <= std::min(n_ - 1, j + kv); ++c)
            v -= ab_[static_cast<std::size_t>(c) * ldab_ + kv + (j - c)] * rhs[c];
        rhs[j] = v / ab_[static_cast<std::size_t>(j) * ldab_ + kv];
    }
}

BlockSystem::BlockSystem(double d01, double d02, double coupling_a, double tau,
                         const DiscreteLaplacian& lap, double bdf_lead)
    : m_(lap.grid_m), lu_(2 * lap.grid_m, 2, 2), d01_(d01), d02_(d02), a_(coupling_a),
      lead_tau_(bdf_lead / tau), ih2_(1.0 / (lap.h * lap.h)) {
    const double ih2 = ih2_;
    const double a = coupling_a;
    for (int k = 0; k < m_; ++k) {
        const int r1 = 2 * k, r2 = 2 * k + 1;
        lu_.at(r1, r1) = bdf_lead / tau + d01 * (a + 2.0 * ih2);
        lu_.at(r2, r2) = bdf_lead / tau + d02 * (a + 2.0 * ih2);
        lu_.at(r1, r2) = -a * d02;
        lu_.at(r2, r1) = -a * d01;
        if (k > 0) {
            lu_.at(r1, r1 - 2) = -d01 * ih2;
            lu_.at(r2, r2 - 2) = -d02 * ih2;
        }
        if (k + 1 < m_) {
            lu_.at(r1, r1 + 2) = -d01 * ih2;
            lu_.at(r2, r2 + 2) = -d02 * ih2;
        }
    }
    lu_.factorize();
}

void BlockSystem::solve(std::span<const double> rhs1, std::span<const double> rhs2,
                        std::span<double> g1, std::span<double> g2) const {
    std::vector<double> work(2 * static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) {
        work[2 * k] = rhs1[k];
        work[2 * k + 1] = rhs2[k];
    }
    lu_.solve(work);
    for (int k = 0; k < m_; ++k) {
        g1[k] = work[2 * k];
        g2[k] = work[2 * k + 1];
    }
#ifndef NDEBUG
    // residual check against the stencil form of the block operator
    double rnorm = 0.0, bnorm = 0.0;
    for (int k = 0; k < m_; ++k) {
        double ag1 = 2.0 * g1[k], ag2 = 2.0 * g2[k];
        if (k > 0) {
            ag1 -= g1[k - 1];
            ag2 -= g2[k - 1];
        }
        if (k + 1 < m_) {
            ag1 -= g1[k + 1];
            ag2 -= g2[k + 1];
        }
        const double r1 = lead_tau_ * g1[k] + d01_ * (a_ * g1[k] + ag1 * ih2_) - a_ * d02_ * g2[k] -
                          rhs1[k];
        const double r2 = lead_tau_ * g2[k] + d02_ * (a_ * g2[k] + ag2 * ih2_) - a_ * d01_ * g1[k] -
                          rhs2[k];
        rnorm += r1 * r1 + r2 * r2;
        bnorm += rhs1[k] * rhs1[k] + rhs2[k] * rhs2[k];
    }
    assert(rnorm <= 1e-24 * bnorm + 1e-280);
#endif
}

void solve_block_system(double d01, double d02, double coupling_a, double tau,
                        const DiscreteLaplacian& lap, std::span<const double> rhs1,
                        std::span<const double> rhs2, std::span<double> g1,
                        std::span<double> g2, double bdf_lead) {
    BlockSystem sys(d01, d02, coupling_a, tau, lap, bdf_lead);
    sys.solve(rhs1, rhs2, g1, g2);
}

}  // namespace fraq
