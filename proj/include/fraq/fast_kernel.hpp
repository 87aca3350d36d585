#pragma once

#include <span>
#include <vector>

#include "fraq/cq_weights.hpp"

namespace fraq {

/// Compressed BE convolution-quadrature kernel: d_i for i >= 2 is a sum of
/// geometric sequences sum_j node_weights[j] * ratios[j]^(i-2); the first
/// two weights are kept exact.
struct FastKernelBE {
    double alpha = 0.0;
    double tau = 1.0;
    double head[2] = {0.0, 0.0};       // exact d_0, d_1
    std::vector<double> node_weights;  // Gauss-Jacobi weights with prefactor folded in
    std::vector<double> ratios;        // (s_j+1)/2, strictly inside (0,1)

    std::size_t n_points() const { return ratios.size(); }
    double reconstruct(long i) const;  // valid for i >= 2
};

/// Compressed SBD kernel: two geometric families plus an exact head of
/// n_head leading weights. The complex prefactor of family 1 and the
/// principal-branch factor (1+3s)^alpha of family 2 are folded into real
/// node multipliers at build time.
struct FastKernelSBD {
    double alpha = 0.0;
    double tau = 1.0;
    int n_head = 3;
    std::vector<double> head;   // exact d_0 .. d_{n_head-1}
    std::vector<double> mult1;  // family 1: ratio (s+1)/(s+5) in (0,1/3)
    std::vector<double> ratio1;
    std::vector<double> mult2;  // family 2: ratio (s+1)/2 in (0,1)
    std::vector<double> ratio2;

    double reconstruct(long i) const;  // valid for i >= 3
};

/// Per-weight compression errors eps_i = |reconstruct(i) - classical(i)|,
/// zero over the exact head by construction.
struct KernelErrorReport {
    double alpha = 0.0;
    double tau = 1.0;
    long head_len = 0;   // indices below this have eps = 0
    long max_index = 0;
    std::vector<double> eps;  // eps[i], i = 0..max_index
    double max_eps = 0.0;     // over i in [head_len, max_index]
    long argmax = 0;
};

FastKernelBE build_be_kernel(double alpha, double tau, int n_points);
FastKernelSBD build_sbd_kernel(double alpha, double tau, int n_points_1, int n_points_2,
                               int n_head);

/// Default head length per the kernel-error study: 15 for alpha <= 0.5,
/// 17 above.
int default_sbd_head(double alpha);

KernelErrorReport kernel_error_report(const FastKernelBE& k, long n_max);
KernelErrorReport kernel_error_report(const FastKernelSBD& k, long n_max);

/// Kernel sizing for a run of `horizon` steps: grow the point counts
/// (capped by the quadrature rule limit) and then the head length until
/// max eps over [head, horizon] is at or below eps_tol * tau^-alpha, or
/// the caps are hit. The achieved bound is recorded on return.
struct KernelBudget {
    long horizon = 0;
    double eps_tol = 1e-12;   // in units of tau^-alpha
    int max_points = 256;     // per rule
    int max_head = 256;
    double achieved_eps = 0.0;  // absolute, filled by the auto builders
};

FastKernelBE build_be_kernel_auto(double alpha, double tau, KernelBudget& budget);
FastKernelSBD build_sbd_kernel_auto(double alpha, double tau, KernelBudget& budget);

enum class HistoryVariant {
    standalone,  // full CQ sums, oldest term includes G(t_0)
    scheme       // PDE-scheme sums, G(t_0) excluded / bounds shifted by one
};

/// Running history state for the fast BE evaluation. Values are elements
/// of R^dim pushed in time order; the accumulators advance in O(n_points)
/// per step regardless of history length.
class BeHistory {
public:
    BeHistory(const FastKernelBE& kernel, HistoryVariant variant, std::size_t dim);

    void push(std::span<const double> value);  // advance(); append(value)
    void advance();                            // accumulators to the next time level
    void append(std::span<const double> value);

    long level() const { return level_; }       // accumulators represent t_level
    long appended() const { return appended_; }  // number of values stored so far
    std::size_t dim() const { return dim_; }

    /// sum_j of the per-node accumulators at the current level.
    void history_sum(std::span<double> out) const;

    /// d_0 G(t_n) + d_1 G(t_{n-1}) + history sum; n = last pushed index.
    /// Throws if fewer than two values have been pushed.
    void derivative(std::span<double> out) const;

    std::span<const double> lagged(long depth) const;  // value pushed `depth` steps ago

private:
    const FastKernelBE* kernel_;
    long lo_;  // first feedable time index (0 standalone, 1 scheme)
    std::size_t dim_;
    long level_ = 0;
    long appended_ = 0;
    std::vector<double> acc_;   // n_points x dim
    std::vector<double> ring_;  // 2 x dim
};

/// Same mechanics for the SBD kernel: two accumulator families fed with
/// lag n_head, exact head of n_head terms evaluated from the lag ring.
class SbdHistory {
public:
    SbdHistory(const FastKernelSBD& kernel, HistoryVariant variant, std::size_t dim);

    void push(std::span<const double> value);
    void advance();
    void append(std::span<const double> value);

    long level() const { return level_; }
    long appended() const { return appended_; }
    std::size_t dim() const { return dim_; }

    void history_sum(std::span<double> out) const;
    void derivative(std::span<double> out) const;
    std::span<const double> lagged(long depth) const;

private:
    const FastKernelSBD* kernel_;
    long lo_;
    std::size_t dim_;
    long level_ = 0;
    long appended_ = 0;
    std::vector<double> feed1_, feed2_;  // mult * ratio^(n_head-3), per node
    std::vector<double> acc1_, acc2_;
    std::vector<double> ring_;  // n_head x dim (at least 2)
    long ring_cap_;
};

}  // namespace fraq
