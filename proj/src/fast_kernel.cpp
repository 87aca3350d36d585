#include "fraq/fast_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "fraq/gauss_jacobi.hpp"

namespace fraq {

namespace {

void check_kernel_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("fast kernel: alpha must be in (0,1)");
}

// Max |reconstruct(i) - classical(i)| over [i_lo, n_max], walking the node
// powers incrementally so the scan is O((n_max - i_lo) * n_points).
template <class Recon>
std::pair<double, long> scan_eps(const WeightTable& table, long i_lo, long n_max, Recon recon) {
    double worst = 0.0;
    long arg = i_lo;
    for (long i = i_lo; i <= n_max; ++i) {
        const double e = std::abs(recon(i) - table[i]);
        if (e > worst) {
            worst = e;
            arg = i;
        }
    }
    return {worst, arg};
}

}  // namespace

double FastKernelBE::reconstruct(long i) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < ratios.size(); ++j)
        acc += node_weights[j] * std::pow(ratios[j], double(i - 2));
    return acc;
}

double FastKernelSBD::reconstruct(long i) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < ratio1.size(); ++j)
        acc += mult1[j] * std::pow(ratio1[j], double(i - 3));
    for (std::size_t j = 0; j < ratio2.size(); ++j)
        acc += mult2[j] * std::pow(ratio2[j], double(i - 3));
    return acc;
}

FastKernelBE build_be_kernel(double alpha, double tau, int n_points) {
    check_kernel_alpha(alpha);
    if (n_points < 2) throw std::invalid_argument("build_be_kernel: n_points must be >= 2");
    const JacobiRule rule = gauss_jacobi(alpha, 1.0 - alpha, n_points);

    FastKernelBE k;
    k.alpha = alpha;
    k.tau = tau;
    const WeightTable head = be_weights(alpha, tau, 1);
    k.head[0] = head[0];
    k.head[1] = head[1];
    // d_i = -1/(4 tau^a G(1-a) G(a)) * int (1-s)^a (1+s)^(1-a) ((s+1)/2)^(i-2) ds
    const double pref = -inv_gamma_product(alpha) / (4.0 * std::pow(tau, alpha));
    k.node_weights.resize(rule.size());
    k.ratios.resize(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        k.node_weights[j] = pref * rule.weights[j];
        k.ratios[j] = 0.5 * (rule.nodes[j] + 1.0);
    }
    return k;
}

int default_sbd_head(double alpha) { return alpha <= 0.5 ? 15 : 17; }

FastKernelSBD build_sbd_kernel(double alpha, double tau, int n_points_1, int n_points_2,
                               int n_head) {
    check_kernel_alpha(alpha);
    if (n_points_1 < 1 || n_points_2 < 1)
        throw std::invalid_argument("build_sbd_kernel: point counts must be >= 1");
    if (n_head < 3) throw std::invalid_argument("build_sbd_kernel: n_head must be >= 3");

    const JacobiRule r1 = gauss_jacobi(alpha, 2.0 - 2.0 * alpha, n_points_1);
    const JacobiRule r2 = gauss_jacobi(alpha, 2.0 - 2.0 * alpha, n_points_2);

    FastKernelSBD k;
    k.alpha = alpha;
    k.tau = tau;
    k.n_head = n_head;
    k.head = sbd_weights(alpha, tau, n_head - 1).weights;

    const double inv_gg = inv_gamma_product(alpha);
    const double ta = std::pow(tau, alpha);
    // family 1: prefactor -2^(2+2a) (-1)^-a / (tau^a G(1-a) G(a)), with
    // (-1)^-a = exp(-i pi a) on the principal branch; real part kept.
    const std::complex<double> c1 =
        -std::pow(2.0, 2.0 + 2.0 * alpha) *
        std::exp(std::complex<double>(0.0, -std::numbers::pi * alpha)) * inv_gg / ta;
    k.mult1.resize(r1.size());
    k.ratio1.resize(r1.size());
    for (std::size_t j = 0; j < r1.size(); ++j) {
        const double s = r1.nodes[j];
        const double q = 1.0 / (s + 5.0);
        k.mult1[j] = (c1 * r1.weights[j] * (q * q * q * q)).real();
        k.ratio1[j] = (s + 1.0) / (s + 5.0);
    }
    // family 2: real prefactor -2^(-a-3)/(tau^a G(1-a) G(a)); the factor
    // (1+3s)^a goes complex for s < -1/3 (principal branch), real part kept.
    const double c2 = -std::pow(2.0, -alpha - 3.0) * inv_gg / ta;
    k.mult2.resize(r2.size());
    k.ratio2.resize(r2.size());
    for (std::size_t j = 0; j < r2.size(); ++j) {
        const double s = r2.nodes[j];
        const double w = 1.0 + 3.0 * s;
        const double re_pow = w >= 0.0
                                  ? std::pow(w, alpha)
                                  : std::pow(-w, alpha) * std::cos(std::numbers::pi * alpha);
        k.mult2[j] = c2 * r2.weights[j] * re_pow;
        k.ratio2[j] = 0.5 * (s + 1.0);
    }
    return k;
}

KernelErrorReport kernel_error_report(const FastKernelBE& k, long n_max) {
    if (n_max < 2) throw std::invalid_argument("kernel_error_report: n_max too small");
    const WeightTable table = be_weights(k.alpha, k.tau, n_max);
    KernelErrorReport r;
    r.alpha = k.alpha;
    r.tau = k.tau;
    r.head_len = 2;
    r.max_index = n_max;
    r.eps.assign(n_max + 1, 0.0);
    std::vector<double> pw(k.n_points(), 1.0);  // ratios^(i-2)
    for (long i = 2; i <= n_max; ++i) {
        double rec = 0.0;
        for (std::size_t j = 0; j < pw.size(); ++j) {
            rec += k.node_weights[j] * pw[j];
            pw[j] *= k.ratios[j];
        }
        r.eps[i] = std::abs(rec - table[i]);
        if (r.eps[i] > r.max_eps) {
            r.max_eps = r.eps[i];
            r.argmax = i;
        }
    }
    return r;
}

KernelErrorReport kernel_error_report(const FastKernelSBD& k, long n_max) {
    if (n_max < k.n_head) throw std::invalid_argument("kernel_error_report: n_max below head");
    const WeightTable table = sbd_weights(k.alpha, k.tau, n_max);
    KernelErrorReport r;
    r.alpha = k.alpha;
    r.tau = k.tau;
    r.head_len = k.n_head;
    r.max_index = n_max;
    r.eps.assign(n_max + 1, 0.0);
    std::vector<double> p1(k.ratio1.size()), p2(k.ratio2.size());
    for (std::size_t j = 0; j < p1.size(); ++j) p1[j] = std::pow(k.ratio1[j], double(k.n_head - 3));
    for (std::size_t j = 0; j < p2.size(); ++j) p2[j] = std::pow(k.ratio2[j], double(k.n_head - 3));
    for (long i = k.n_head; i <= n_max; ++i) {
        double rec = 0.0;
        for (std::size_t j = 0; j < p1.size(); ++j) {
            rec += k.mult1[j] * p1[j];
            p1[j] *= k.ratio1[j];
        }
        for (std::size_t j = 0; j < p2.size(); ++j) {
            rec += k.mult2[j] * p2[j];
            p2[j] *= k.ratio2[j];
        }
        r.eps[i] = std::abs(rec - table[i]);
        if (r.eps[i] > r.max_eps) {
            r.max_eps = r.eps[i];
            r.argmax = i;
        }
    }
    return r;
}

FastKernelBE build_be_kernel_auto(double alpha, double tau, KernelBudget& budget) {
    if (budget.horizon < 4) budget.horizon = 4;
    const WeightTable table = be_weights(alpha, tau, budget.horizon);
    const double tol = budget.eps_tol * std::pow(tau, -alpha);
    int np = 64;
    FastKernelBE k;
    while (true) {
        np = std::min(np, budget.max_points);
        k = build_be_kernel(alpha, tau, np);
        std::vector<double> pw(k.n_points(), 1.0);
        auto recon = [&](long) {
            double rec = 0.0;
            for (std::size_t j = 0; j < pw.size(); ++j) {
                rec += k.node_weights[j] * pw[j];
                pw[j] *= k.ratios[j];
            }
            return rec;
        };
        auto [worst, arg] = scan_eps(table, 2, budget.horizon, recon);
        budget.achieved_eps = worst;
        if (worst <= tol || np >= budget.max_points) return k;
        np = np + np / 2;
    }
}

FastKernelSBD build_sbd_kernel_auto(double alpha, double tau, KernelBudget& budget) {
    if (budget.horizon < 8) budget.horizon = 8;
    const WeightTable table = sbd_weights(alpha, tau, budget.horizon);
    const double tol = budget.eps_tol * std::pow(tau, -alpha);
    const int head0 = default_sbd_head(alpha);

    auto max_eps_from = [&](const FastKernelSBD& k, int head) {
        std::vector<double> p1(k.ratio1.size()), p2(k.ratio2.size());
        for (std::size_t j = 0; j < p1.size(); ++j) p1[j] = std::pow(k.ratio1[j], double(head - 3));
        for (std::size_t j = 0; j < p2.size(); ++j) p2[j] = std::pow(k.ratio2[j], double(head - 3));
        auto recon = [&](long) {
            double rec = 0.0;
            for (std::size_t j = 0; j < p1.size(); ++j) {
                rec += k.mult1[j] * p1[j];
                p1[j] *= k.ratio1[j];
            }
            for (std::size_t j = 0; j < p2.size(); ++j) {
                rec += k.mult2[j] * p2[j];
                p2[j] *= k.ratio2[j];
            }
            return rec;
        };
        return scan_eps(table, head, budget.horizon, recon);
    };

    // Grow the point counts until the tail (away from the kink-limited low
    // indices) meets the tolerance, then extend the head over whatever low-
    // index range remains above it.
    int np = 41;
    FastKernelSBD k;
    double tail_eps = 0.0;
    while (true) {
        np = std::min(np, budget.max_points);
        k = build_sbd_kernel(alpha, tau, np, np, head0);
        const long tail_from = std::min<long>(budget.horizon, 8L * head0);
        tail_eps = max_eps_from(k, int(std::min<long>(tail_from, budget.horizon))).first;
        if (tail_eps <= tol || np >= budget.max_points) break;
        np = np + np / 2;
    }
    int head = head0;
    auto [worst, arg] = max_eps_from(k, head);
    while (worst > tol && arg < 8L * head0 && head < budget.max_head &&
           head < budget.horizon) {
        head = std::min({head + head / 2, budget.max_head, int(budget.horizon)});
        std::tie(worst, arg) = max_eps_from(k, head);
    }
    budget.achieved_eps = worst;
    if (head != head0) k = build_sbd_kernel(alpha, tau, np, np, head);
    return k;
}

// ---------------------------------------------------------------------------
// History states

BeHistory::BeHistory(const FastKernelBE& kernel, HistoryVariant variant, std::size_t dim)
    : kernel_(&kernel),
      lo_(variant == HistoryVariant::standalone ? 0 : 1),
      dim_(dim),
      acc_(kernel.n_points() * dim, 0.0),
      ring_(2 * dim, 0.0) {}

void BeHistory::advance() {
    const long feed_idx = level_ - 1;  // G(t_{(level+1)-2})
    ++level_;
    const std::size_t np = kernel_->n_points();
    if (feed_idx >= lo_ && feed_idx < appended_ - 2)
        throw std::logic_error("BeHistory::advance: feed value already evicted");
    if (feed_idx >= lo_ && feed_idx <= appended_ - 1) {
        const double* v = &ring_[(feed_idx % 2) * dim_];
        for (std::size_t j = 0; j < np; ++j) {
            const double r = kernel_->ratios[j];
            const double w = kernel_->node_weights[j];
            double* a = &acc_[j * dim_];
            for (std::size_t m = 0; m < dim_; ++m) a[m] = r * a[m] + w * v[m];
        }
    } else {
        for (std::size_t j = 0; j < np; ++j) {
            const double r = kernel_->ratios[j];
            double* a = &acc_[j * dim_];
            for (std::size_t m = 0; m < dim_; ++m) a[m] *= r;
        }
    }
}

void BeHistory::append(std::span<const double> value) {
    if (value.size() != dim_) throw std::invalid_argument("BeHistory::append: wrong dimension");
    std::copy(value.begin(), value.end(), ring_.begin() + (appended_ % 2) * dim_);
    ++appended_;
}

void BeHistory::push(std::span<const double> value) {
    if (appended_ > 0) advance();
    append(value);
}

void BeHistory::history_sum(std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < kernel_->n_points(); ++j) {
        const double* a = &acc_[j * dim_];
        for (std::size_t m = 0; m < dim_; ++m) out[m] += a[m];
    }
}

std::span<const double> BeHistory::lagged(long depth) const {
    const long idx = appended_ - 1 - depth;
    if (idx < 0 || depth < 0 || depth >= 2)
        throw std::out_of_range("BeHistory::lagged: value not retained");
    return {&ring_[(idx % 2) * dim_], dim_};
}

void BeHistory::derivative(std::span<double> out) const {
    if (appended_ < 2)
        throw std::logic_error("BeHistory::derivative: need at least two pushed values");
    history_sum(out);
    const auto gn = lagged(0);
    const auto gnm1 = lagged(1);
    for (std::size_t m = 0; m < dim_; ++m)
        out[m] += kernel_->head[0] * gn[m] + kernel_->head[1] * gnm1[m];
}

SbdHistory::SbdHistory(const FastKernelSBD& kernel, HistoryVariant variant, std::size_t dim)
    : kernel_(&kernel),
      lo_(variant == HistoryVariant::standalone ? 0 : 1),
      dim_(dim),
      feed1_(kernel.ratio1.size()),
      feed2_(kernel.ratio2.size()),
      acc1_(kernel.ratio1.size() * dim, 0.0),
      acc2_(kernel.ratio2.size() * dim, 0.0),
      ring_(std::max<long>(2, kernel.n_head) * dim, 0.0),
      ring_cap_(std::max<long>(2, kernel.n_head)) {
    for (std::size_t j = 0; j < feed1_.size(); ++j)
        feed1_[j] = kernel.mult1[j] * std::pow(kernel.ratio1[j], double(kernel.n_head - 3));
    for (std::size_t j = 0; j < feed2_.size(); ++j)
        feed2_[j] = kernel.mult2[j] * std::pow(kernel.ratio2[j], double(kernel.n_head - 3));
}

void SbdHistory::advance() {
    const long feed_idx = level_ + 1 - kernel_->n_head;  // G(t_{(level+1)-n_head})
    ++level_;
    if (feed_idx >= lo_ && feed_idx < appended_ - ring_cap_)
        throw std::logic_error("SbdHistory::advance: feed value already evicted");
    const bool feed = feed_idx >= lo_ && feed_idx <= appended_ - 1;
    const double* v = feed ? &ring_[(feed_idx % ring_cap_) * dim_] : nullptr;
    auto roll = [&](const std::vector<double>& ratios, const std::vector<double>& feeds,
                    std::vector<double>& acc) {
        for (std::size_t j = 0; j < ratios.size(); ++j) {
            const double r = ratios[j];
            double* a = &acc[j * dim_];
            if (feed) {
                const double w = feeds[j];
                for (std::size_t m = 0; m < dim_; ++m) a[m] = r * a[m] + w * v[m];
            } else {
                for (std::size_t m = 0; m < dim_; ++m) a[m] *= r;
            }
        }
    };
    roll(kernel_->ratio1, feed1_, acc1_);
    roll(kernel_->ratio2, feed2_, acc2_);
}

void SbdHistory::append(std::span<const double> value) {
    if (value.size() != dim_) throw std::invalid_argument("SbdHistory::append: wrong dimension");
    std::copy(value.begin(), value.end(), ring_.begin() + (appended_ % ring_cap_) * dim_);
    ++appended_;
}

void SbdHistory::push(std::span<const double> value) {
    if (appended_ > 0) advance();
    append(value);
}

void SbdHistory::history_sum(std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < kernel_->ratio1.size(); ++j) {
        const double* a = &acc1_[j * dim_];
        for (std::size_t m = 0; m < dim_; ++m) out[m] += a[m];
    }
    for (std::size_t j = 0; j < kernel_->ratio2.size(); ++j) {
        const double* a = &acc2_[j * dim_];
        for (std::size_t m = 0; m < dim_; ++m) out[m] += a[m];
    }
}

std::span<const double> SbdHistory::lagged(long depth) const {
    const long idx = appended_ - 1 - depth;
    if (idx < 0 || depth < 0 || depth >= ring_cap_)
        throw std::out_of_range("SbdHistory::lagged: value not retained");
    return {&ring_[(idx % ring_cap_) * dim_], dim_};
}

void SbdHistory::derivative(std::span<double> out) const {
    if (appended_ < 1)
        throw std::logic_error("SbdHistory::derivative: no values pushed");
    history_sum(out);
    const long n = appended_ - 1;
    const long bound = (lo_ == 0) ? n : n - 1;  // standalone vs scheme head range
    const long top = std::min<long>(kernel_->n_head - 1, bound);
    for (long i = 0; i <= top; ++i) {
        const auto g = lagged(i);
        const double d = kernel_->head[i];
        for (std::size_t m = 0; m < dim_; ++m) out[m] += d * g[m];
    }
}

}  // namespace fraq
