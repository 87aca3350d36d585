#include "fraq/fpfp.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fraq {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

Scheme scheme_from_name(const std::string& name) {
    if (name == "be") return Scheme::BE;
    if (name == "fastbe" || name == "fbe") return Scheme::FastBE;
    if (name == "sbd") return Scheme::SBD;
    if (name == "fastsbd" || name == "fsbd") return Scheme::FastSBD;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::BE: return "be";
        case Scheme::FastBE: return "fastbe";
        case Scheme::SBD: return "sbd";
        case Scheme::FastSBD: return "fastsbd";
    }
    return "?";
}

bool scheme_is_fast(Scheme s) { return s == Scheme::FastBE || s == Scheme::FastSBD; }
bool scheme_is_sbd(Scheme s) { return s == Scheme::SBD || s == Scheme::FastSBD; }

StateField initial_field(const ProblemSpec& spec) {
    StateField f;
    f.step = 0;
    const int m = spec.grid_m;
    f.g1.resize(m);
    f.g2.resize(m);
    const double h = spec.h();
    switch (spec.initial) {
        case InitialData::poly_sin:
            for (int j = 0; j < m; ++j) {
                const double x = (j + 1) * h;
                f.g1[j] = x * (1.0 - x);
                f.g2[j] = std::sin(x);
            }
            break;
        case InitialData::indicator:
            for (int j = 0; j < m; ++j) {
                const double x = (j + 1) * h;
                f.g1[j] = x > 0.5 ? 1.0 - x : 0.0;  // (1-x) on (1/2,1), open at 1/2
                f.g2[j] = x < 0.5 ? x : 0.0;        // x on (0,1/2)
            }
            break;
        case InitialData::custom:
            if (int(spec.custom_g1.size()) != m || int(spec.custom_g2.size()) != m)
                throw std::invalid_argument("initial_field: custom samples must have grid_m entries");
            f.g1 = spec.custom_g1;
            f.g2 = spec.custom_g2;
            break;
    }
    return f;
}

double l2_norm(std::span<const double> v, double h) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(h * s);
}

// ---------------------------------------------------------------------------
// Classical steppers (full-history baseline)

ClassicalStepper::ClassicalStepper(const ProblemSpec& spec, bool sbd)
    : spec_(spec), sbd_(sbd), lap_(spec.grid_m, spec.length) {
    const double tau = spec_.tau();
    const double o1 = 1.0 - spec_.alpha1, o2 = 1.0 - spec_.alpha2;
    d1_ = sbd_ ? sbd_weights(o1, tau, spec_.n_steps) : be_weights(o1, tau, spec_.n_steps);
    d2_ = sbd_ ? sbd_weights(o2, tau, spec_.n_steps) : be_weights(o2, tau, spec_.n_steps);
    if (sbd_) {
        sys_first_.emplace(2.0 / 3.0 * d1_[0], 2.0 / 3.0 * d2_[0], spec_.coupling_a, tau, lap_, 1.0);
        sys_.emplace(d1_[0], d2_[0], spec_.coupling_a, tau, lap_, 1.5);
    } else {
        sys_.emplace(d1_[0], d2_[0], spec_.coupling_a, tau, lap_, 1.0);
    }
    state_ = initial_field(spec_);
    hist1_.reserve(spec_.n_steps + 1);
    hist2_.reserve(spec_.n_steps + 1);
    hist1_.push_back(state_.g1);
    hist2_.push_back(state_.g2);
}

void ClassicalStepper::step() {
    if (sbd_)
        step_sbd();
    else
        step_be();
    hist1_.push_back(state_.g1);
    hist2_.push_back(state_.g2);
}

void ClassicalStepper::step_be() {
    const long n = state_.step + 1;
    const int m = spec_.grid_m;
    const double tau = spec_.tau(), a = spec_.coupling_a;
    std::vector<double> s1(m, 0.0), s2(m, 0.0), as(m), rhs1(m), rhs2(m);
    for (long i = 1; i <= n - 1; ++i) {
        const double w1 = d1_[i], w2 = d2_[i];
        const auto& u = hist1_[n - i];
        const auto& v = hist2_[n - i];
        for (int k = 0; k < m; ++k) {
            s1[k] += w1 * u[k];
            s2[k] += w2 * v[k];
        }
    }
    lap_.apply(s1, as);
    for (int k = 0; k < m; ++k) rhs1[k] = hist1_[n - 1][k] / tau - a * s1[k] - as[k] + a * s2[k];
    lap_.apply(s2, as);
    for (int k = 0; k < m; ++k) rhs2[k] = hist2_[n - 1][k] / tau - a * s2[k] - as[k] + a * s1[k];
    sys_->solve(rhs1, rhs2, state_.g1, state_.g2);
    state_.step = n;
}

void ClassicalStepper::step_sbd() {
    const long n = state_.step + 1;
    const int m = spec_.grid_m;
    const double tau = spec_.tau(), a = spec_.coupling_a;
    std::vector<double> rhs1(m), rhs2(m), as(m);
    if (n == 1) {
        std::vector<double> w1(m), w2(m);
        lap_.apply(hist1_[0], as);
        for (int k = 0; k < m; ++k)
            rhs1[k] = hist1_[0][k] / tau - (d1_[0] / 3.0) * (a * hist1_[0][k] + as[k]) +
                      (a * d2_[0] / 3.0) * hist2_[0][k];
        lap_.apply(hist2_[0], as);
        for (int k = 0; k < m; ++k)
            rhs2[k] = hist2_[0][k] / tau - (d2_[0] / 3.0) * (a * hist2_[0][k] + as[k]) +
                      (a * d1_[0] / 3.0) * hist1_[0][k];
        sys_first_->solve(rhs1, rhs2, state_.g1, state_.g2);
        state_.step = n;
        return;
    }
    // CQ sums i = 1..n-1 plus the (1/2) d_{2,n-1} G^0 correction folded in.
    std::vector<double> s1(m), s2(m);
    for (int k = 0; k < m; ++k) {
        s1[k] = 0.5 * d1_[n - 1] * hist1_[0][k];
        s2[k] = 0.5 * d2_[n - 1] * hist2_[0][k];
    }
    for (long i = 1; i <= n - 1; ++i) {
        const double w1 = d1_[i], w2 = d2_[i];
        const auto& u = hist1_[n - i];
        const auto& v = hist2_[n - i];
        for (int k = 0; k < m; ++k) {
            s1[k] += w1 * u[k];
            s2[k] += w2 * v[k];
        }
    }
    lap_.apply(s1, as);
    for (int k = 0; k < m; ++k)
        rhs1[k] = (2.0 * hist1_[n - 1][k] - 0.5 * hist1_[n - 2][k]) / tau - a * s1[k] - as[k] +
                  a * s2[k];
    lap_.apply(s2, as);
    for (int k = 0; k < m; ++k)
        rhs2[k] = (2.0 * hist2_[n - 1][k] - 0.5 * hist2_[n - 2][k]) / tau - a * s2[k] - as[k] +
                  a * s1[k];
    sys_->solve(rhs1, rhs2, state_.g1, state_.g2);
    state_.step = n;
}

// ---------------------------------------------------------------------------
// Fast steppers

FastStepper::FastStepper(const ProblemSpec& spec, bool sbd, const KernelConfig& kconf)
    : spec_(spec), sbd_(sbd), lap_(spec.grid_m, spec.length) {
    const double tau = spec_.tau();
    const double o1 = 1.0 - spec_.alpha1, o2 = 1.0 - spec_.alpha2;
    const std::size_t m = spec_.grid_m;
    if (sbd_) {
        if (kconf.auto_size) {
            KernelBudget b1{spec_.n_steps, kconf.eps_tol};
            KernelBudget b2{spec_.n_steps, kconf.eps_tol};
            sk1_ = build_sbd_kernel_auto(o1, tau, b1);
            sk2_ = build_sbd_kernel_auto(o2, tau, b2);
            eps1_ = b1.achieved_eps;
            eps2_ = b2.achieved_eps;
        } else {
            const int h1 = kconf.sbd_head > 0 ? kconf.sbd_head : default_sbd_head(o1);
            const int h2 = kconf.sbd_head > 0 ? kconf.sbd_head : default_sbd_head(o2);
            sk1_ = build_sbd_kernel(o1, tau, kconf.sbd_points_1, kconf.sbd_points_2, h1);
            sk2_ = build_sbd_kernel(o2, tau, kconf.sbd_points_1, kconf.sbd_points_2, h2);
            eps1_ = kernel_error_report(*sk1_, spec_.n_steps > 8 ? spec_.n_steps : 8).max_eps;
            eps2_ = kernel_error_report(*sk2_, spec_.n_steps > 8 ? spec_.n_steps : 8).max_eps;
        }
        sh1_.emplace(*sk1_, HistoryVariant::scheme, m);
        sh2_.emplace(*sk2_, HistoryVariant::scheme, m);
        corr1_.p1.assign(sk1_->ratio1.size(), 1.0);
        corr1_.p2.assign(sk1_->ratio2.size(), 1.0);
        corr2_.p1.assign(sk2_->ratio1.size(), 1.0);
        corr2_.p2.assign(sk2_->ratio2.size(), 1.0);
        sys_first_.emplace(2.0 / 3.0 * sk1_->head[0], 2.0 / 3.0 * sk2_->head[0], spec_.coupling_a,
                           tau, lap_, 1.0);
        sys_.emplace(sk1_->head[0], sk2_->head[0], spec_.coupling_a, tau, lap_, 1.5);
    } else {
        if (kconf.auto_size) {
            KernelBudget b1{spec_.n_steps, kconf.eps_tol};
            KernelBudget b2{spec_.n_steps, kconf.eps_tol};
            bk1_ = build_be_kernel_auto(o1, tau, b1);
            bk2_ = build_be_kernel_auto(o2, tau, b2);
            eps1_ = b1.achieved_eps;
            eps2_ = b2.achieved_eps;
        } else {
            bk1_ = build_be_kernel(o1, tau, kconf.be_points);
            bk2_ = build_be_kernel(o2, tau, kconf.be_points);
            eps1_ = kernel_error_report(*bk1_, spec_.n_steps > 2 ? spec_.n_steps : 2).max_eps;
            eps2_ = kernel_error_report(*bk2_, spec_.n_steps > 2 ? spec_.n_steps : 2).max_eps;
        }
        bh1_.emplace(*bk1_, HistoryVariant::scheme, m);
        bh2_.emplace(*bk2_, HistoryVariant::scheme, m);
        sys_.emplace(bk1_->head[0], bk2_->head[0], spec_.coupling_a, tau, lap_, 1.0);
    }
    state_ = initial_field(spec_);
    if (sbd_) {
        init_g1_ = state_.g1;
        init_g2_ = state_.g2;
        sh1_->append(state_.g1);
        sh2_->append(state_.g2);
    } else {
        bh1_->append(state_.g1);
        bh2_->append(state_.g2);
    }
}

double FastStepper::CorrPowers::value_at(const FastKernelSBD& k, long e) {
    while (exponent < e) {
        for (std::size_t j = 0; j < p1.size(); ++j) p1[j] *= k.ratio1[j];
        for (std::size_t j = 0; j < p2.size(); ++j) p2[j] *= k.ratio2[j];
        ++exponent;
    }
    double v = 0.0;
    for (std::size_t j = 0; j < p1.size(); ++j) v += k.mult1[j] * p1[j];
    for (std::size_t j = 0; j < p2.size(); ++j) v += k.mult2[j] * p2[j];
    return v;
}

void FastStepper::step() {
    if (sbd_)
        step_sbd();
    else
        step_be();
}

void FastStepper::step_be() {
    const long n = state_.step + 1;
    const int m = spec_.grid_m;
    const double tau = spec_.tau(), a = spec_.coupling_a;
    bh1_->advance();  // accumulators now at level n
    bh2_->advance();
    std::vector<double> s1(m), s2(m), as(m), rhs1(m), rhs2(m);
    bh1_->history_sum(s1);
    bh2_->history_sum(s2);
    const auto g1p = bh1_->lagged(0);  // G^{n-1}
    const auto g2p = bh2_->lagged(0);
    if (n >= 2) {
        for (int k = 0; k < m; ++k) {
            s1[k] += bk1_->head[1] * g1p[k];
            s2[k] += bk2_->head[1] * g2p[k];
        }
    }
    lap_.apply(s1, as);
    for (int k = 0; k < m; ++k) rhs1[k] = g1p[k] / tau - a * s1[k] - as[k] + a * s2[k];
    lap_.apply(s2, as);
    for (int k = 0; k < m; ++k) rhs2[k] = g2p[k] / tau - a * s2[k] - as[k] + a * s1[k];
    sys_->solve(rhs1, rhs2, state_.g1, state_.g2);
    state_.step = n;
    bh1_->append(state_.g1);
    bh2_->append(state_.g2);
}

void FastStepper::step_sbd() {
    const long n = state_.step + 1;
    const int m = spec_.grid_m;
    const double tau = spec_.tau(), a = spec_.coupling_a;
    std::vector<double> rhs1(m), rhs2(m), as(m);
    sh1_->advance();
    sh2_->advance();
    if (n == 1) {
        const auto u0 = sh1_->lagged(0);
        const auto v0 = sh2_->lagged(0);
        const double d10 = sk1_->head[0], d20 = sk2_->head[0];
        lap_.apply(u0, as);
        for (int k = 0; k < m; ++k)
            rhs1[k] = u0[k] / tau - (d10 / 3.0) * (a * u0[k] + as[k]) + (a * d20 / 3.0) * v0[k];
        lap_.apply(v0, as);
        for (int k = 0; k < m; ++k)
            rhs2[k] = v0[k] / tau - (d20 / 3.0) * (a * v0[k] + as[k]) + (a * d10 / 3.0) * u0[k];
        sys_first_->solve(rhs1, rhs2, state_.g1, state_.g2);
        state_.step = n;
        sh1_->append(state_.g1);
        sh2_->append(state_.g2);
        return;
    }
    std::vector<double> s1(m), s2(m);
    sh1_->history_sum(s1);  // i = n_head .. n-1
    sh2_->history_sum(s2);
    // exact head terms i = 1..min(n_head-1, n-1), read from the lag ring
    const long top1 = std::min<long>(sk1_->n_head - 1, n - 1);
    for (long i = 1; i <= top1; ++i) {
        const auto u = sh1_->lagged(i - 1);  // G^{n-i}
        const double w = sk1_->head[i];
        for (int k = 0; k < m; ++k) s1[k] += w * u[k];
    }
    const long top2 = std::min<long>(sk2_->n_head - 1, n - 1);
    for (long i = 1; i <= top2; ++i) {
        const auto v = sh2_->lagged(i - 1);
        const double w = sk2_->head[i];
        for (int k = 0; k < m; ++k) s2[k] += w * v[k];
    }
    // (1/2) d_{2,n-1} G^0 correction; exact inside the head, reconstructed
    // (running geometric powers at exponent n-4) beyond it
    const double c1 =
        (n - 1 < sk1_->n_head) ? sk1_->head[n - 1] : corr1_.value_at(*sk1_, n - 4);
    const double c2 =
        (n - 1 < sk2_->n_head) ? sk2_->head[n - 1] : corr2_.value_at(*sk2_, n - 4);
    for (int k = 0; k < m; ++k) {
        s1[k] += 0.5 * c1 * init_g1_[k];
        s2[k] += 0.5 * c2 * init_g2_[k];
    }
    const auto g1p = sh1_->lagged(0);   // G^{n-1}
    const auto g1pp = sh1_->lagged(1);  // G^{n-2}
    const auto g2p = sh2_->lagged(0);
    const auto g2pp = sh2_->lagged(1);
    lap_.apply(s1, as);
    for (int k = 0; k < m; ++k)
        rhs1[k] = (2.0 * g1p[k] - 0.5 * g1pp[k]) / tau - a * s1[k] - as[k] + a * s2[k];
    lap_.apply(s2, as);
    for (int k = 0; k < m; ++k)
        rhs2[k] = (2.0 * g2p[k] - 0.5 * g2pp[k]) / tau - a * s2[k] - as[k] + a * s1[k];
    sys_->solve(rhs1, rhs2, state_.g1, state_.g2);
    state_.step = n;
    sh1_->append(state_.g1);
    sh2_->append(state_.g2);
}

RunResult run(const ProblemSpec& spec, Scheme scheme, const KernelConfig& kconf,
              const std::function<void(long, const StateField&)>& observer) {
    RunResult out;
    const auto t0 = clock_type::now();
    if (scheme_is_fast(scheme)) {
        FastStepper st(spec, scheme_is_sbd(scheme), kconf);
        out.setup_seconds = seconds_since(t0);
        out.kernel_eps1 = st.kernel_eps1();
        out.kernel_eps2 = st.kernel_eps2();
        if (observer) observer(0, st.state());
        const auto t1 = clock_type::now();
        for (long n = 1; n <= spec.n_steps; ++n) {
            st.step();
            if (observer) observer(n, st.state());
        }
        out.loop_seconds = seconds_since(t1);
        out.final_state = st.state();
    } else {
        ClassicalStepper st(spec, scheme_is_sbd(scheme));
        out.setup_seconds = seconds_since(t0);
        if (observer) observer(0, st.state());
        const auto t1 = clock_type::now();
        for (long n = 1; n <= spec.n_steps; ++n) {
            st.step();
            if (observer) observer(n, st.state());
        }
        out.loop_seconds = seconds_since(t1);
        out.final_state = st.state();
    }
    return out;
}

}  // namespace fraq
