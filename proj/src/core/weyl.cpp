#include "weyl.hpp"

#include "quadrature.hpp"
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace wk {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

double abs_integral(const Profile& p, double x0, double x1) {
    if (p.is_zero() || p.is_atomic()) return 0.0;
    if (p.nonnegative()) return p.integral(x0, x1);
    double total = 0.0;
    std::vector<double> cuts{x0};
    for (double bp : p.breakpoints(x0, x1)) cuts.push_back(bp);
    cuts.push_back(x1);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) total += std::abs(p.integral(cuts[i], cuts[i + 1]));
    return total;
}

} // namespace

OdeModel make_model(const Problem& p) {
    OdeModel m;
    m.b = p.b;
    auto w = std::make_shared<Profile>(p.w);
    auto r = std::make_shared<Profile>(p.r);
    auto q = std::make_shared<Profile>(p.q);
    m.coeffs = [w, r, q](double x, const double*, double& R, double& W, double& Q) {
        R = r->value(x);
        W = w->value(x);
        Q = q->value(x);
    };
    m.breakpoints = [w, r, q](double lo, double hi) {
        std::vector<double> out;
        for (const auto* prof : {w.get(), r.get(), q.get()}) {
            auto bp = prof->breakpoints(lo, hi);
            out.insert(out.end(), bp.begin(), bp.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    m.singular_at_zero = p.w.singular_at_zero() || p.r.singular_at_zero() || p.q.singular_at_zero();
    m.singular_at_b = p.b < kInf && (p.w.singular_at(p.b) || p.r.singular_at(p.b) || p.q.singular_at(p.b));
    m.increments = [w, r, q](double x0, double x1, double& dR, double& dW, double& dQ) {
        dR = r->is_atomic() ? 0.0 : r->integral(x0, x1);
        dW = w->is_atomic() ? 0.0 : w->integral(x0, x1);
        dQ = abs_integral(*q, x0, x1);
    };
    if (p.r.is_atomic()) m.atom_r = p.r.atomic_mass();
    if (p.w.is_atomic()) m.atom_w = p.w.atomic_mass();
    return m;
}

// The same equation in tau = -log(1 - x/b), so a limit-point end at finite b moves to infinity.
// Coefficients pick up the factor dx/dtau = b e^-tau; c, s and m are unchanged.
OdeModel make_log_model(const Problem& p) {
    if (!(p.b < kInf)) throw Error(ErrorKind::Domain, "the logarithmic variable needs a finite b");
    OdeModel m;
    m.b = kInf;
    const double b = p.b;
    auto w = std::make_shared<Profile>(p.w);
    auto r = std::make_shared<Profile>(p.r);
    auto q = std::make_shared<Profile>(p.q);
    auto value = [b](const Profile& f, double tau) {
        const double dist = b * std::exp(-tau);
        if (dist == 0.0) throw Error(ErrorKind::Numeric, "resolution limit reached at the finite endpoint");
        if (f.is_zero()) return 0.0;
        // Close to b, x = b - dist loses digits; take the exact power at b instead.
        if (dist < 1e-6 * b) {
            const auto lead = f.leading(End::Infinity, b);
            if (lead) return lead->c * std::pow(dist, lead->a) * dist;
        }
        return f.value(-b * std::expm1(-tau)) * dist;
    };
    m.coeffs = [w, r, q, value](double tau, const double*, double& R, double& W, double& Q) {
        R = value(*r, tau);
        W = value(*w, tau);
        Q = value(*q, tau);
    };
    m.breakpoints = [w, r, q, b](double lo, double hi) {
        const double xlo = -b * std::expm1(-lo), xhi = hi == kInf ? b : -b * std::expm1(-hi);
        std::vector<double> out;
        for (const auto* prof : {w.get(), r.get(), q.get()})
            for (double x : prof->breakpoints(xlo, xhi)) {
                const double t = -std::log1p(-x / b);
                if (t > lo && t < hi) out.push_back(t);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    m.singular_at_zero = p.w.singular_at_zero() || p.r.singular_at_zero() || p.q.singular_at_zero();
    m.increments = [w, r, q, b](double t0, double t1, double& dR, double& dW, double& dQ) {
        const double x0 = -b * std::expm1(-t0), x1 = -b * std::expm1(-t1);
        dR = r->is_atomic() ? 0.0 : r->integral(x0, x1);
        dW = w->is_atomic() ? 0.0 : w->integral(x0, x1);
        dQ = abs_integral(*q, x0, x1);
    };
    if (p.r.is_atomic()) m.atom_r = p.r.atomic_mass();
    if (p.w.is_atomic()) m.atom_w = p.w.atomic_mass();
    return m;
}

// ---- Shooter ----

namespace {

struct Rhs {
    const OdeModel* model;
    cplx lambda;
    double seg_end;

    void operator()(const State& y, State& dy, double x) const {
        // At the right end of a piece use the left limit of the coefficients.
        const double xe = x >= seg_end ? std::nextafter(seg_end, 0.0) : x;
        const double* aux = y.size() > 8 ? y.data() + 8 : nullptr;
        double r, w, q;
        model->coeffs(xe, aux, r, w, q);
        const cplx k = q - lambda * w;
        const cplx c(y[0], y[1]), c1(y[2], y[3]), s(y[4], y[5]), s1(y[6], y[7]);
        const cplx dc = r * c1, dc1 = k * c, ds = r * s1, ds1 = k * s;
        dy[0] = dc.real();
        dy[1] = dc.imag();
        dy[2] = dc1.real();
        dy[3] = dc1.imag();
        dy[4] = ds.real();
        dy[5] = ds.imag();
        dy[6] = ds1.real();
        dy[7] = ds1.imag();
        if (aux) model->aux_rhs(xe, aux, dy.data() + 8);
    }
};

// Largest d <= d0 whose Picard step on [x0, x0 + d] (or [x0 - d, x0]) has second-order terms below 1e-12.
double picard_width(const OdeModel& m, cplx lambda, double x0, double d0, bool leftward) {
    double d = d0;
    for (int i = 0; i < 400; ++i) {
        double dR, dW, dQ;
        if (leftward)
            m.increments(x0 - d, x0, dR, dW, dQ);
        else
            m.increments(x0, x0 + d, dR, dW, dQ);
        if ((std::abs(lambda) * dW + dQ) * dR <= 1e-12 && (std::abs(lambda) * dW + dQ) <= 1e-3 && dR <= 1e3) return d;
        d *= 0.5;
    }
    throw Error(ErrorKind::Numeric, "no Picard start width satisfies the accuracy bound");
}

} // namespace

Shooter::Shooter(const OdeModel& model, cplx lambda, const WeylOptions& opt)
    : model_(model), lambda_(lambda), opt_(opt) {
    y_.assign(8 + model.aux0.size(), 0.0);
    y_[0] = 1.0; // c
    y_[6] = 1.0; // s1
    std::copy(model.aux0.begin(), model.aux0.end(), y_.begin() + 8);
    aux_ = model.aux0;
    if (model.atom_r > 0.0) y_[4] += model.atom_r; // s(0+) = a s1(0)
    if (model.atom_w > 0.0) {
        const cplx jump = -lambda * model.atom_w; // c1(0+) = -lambda a c(0)
        y_[2] += jump.real();
        y_[3] += jump.imag();
    }
    if (model.singular_at_zero) {
        double d0 = 1e-2;
        if (model.b < kInf) d0 = std::min(d0, 0.25 * model.b);
        const auto bps = model.breakpoints(0.0, d0 * 4.0);
        if (!bps.empty()) d0 = std::min(d0, 0.5 * bps.front());
        picard(0.0, picard_width(model, lambda, 0.0, d0, false));
    }
}

void Shooter::picard(double x0, double x1) {
    double dR, dW, dQ;
    model_.increments(x0, x1, dR, dW, dQ);
    const cplx k = dQ - lambda_ * dW;
    for (int col = 0; col < 2; ++col) {
        const int o = 4 * col;
        const cplx u1(y_[o], y_[o + 1]), u2(y_[o + 2], y_[o + 3]);
        const cplx n1 = u1 + dR * u2, n2 = u2 + k * u1;
        y_[o] = n1.real();
        y_[o + 1] = n1.imag();
        y_[o + 2] = n2.real();
        y_[o + 3] = n2.imag();
    }
    x_ = x1;
    track_drift();
}

void Shooter::renormalise() {
    double mx = 0.0;
    for (int i = 0; i < 8; ++i) mx = std::max(mx, std::abs(y_[i]));
    if (mx <= opt_.rescale_at) return;
    const int e = std::ilogb(mx);
    for (int i = 0; i < 8; ++i) y_[i] = std::ldexp(y_[i], -e);
    log_scale_ += e * std::log(2.0);
}

void Shooter::track_drift() {
    const cplx c(y_[0], y_[1]), c1(y_[2], y_[3]), s(y_[4], y_[5]), s1(y_[6], y_[7]);
    const double unit = std::exp(-2.0 * log_scale_);
    const double denom = std::max(unit, std::abs(c * s1) + std::abs(s * c1));
    drift_ = std::max(drift_, std::abs(c * s1 - s * c1 - unit) / denom);
}

void Shooter::advance(double x_target, const std::function<bool()>& on_step) {
    if (model_.b < kInf) x_target = std::min(x_target, model_.b);
    auto stepper = odeint::make_controlled(opt_.ode_atol, opt_.ode_rtol, odeint::runge_kutta_dopri5<State>());
    State dxdt(y_.size());
    while (x_ < x_target) {
        const auto bps = model_.breakpoints(x_, x_target);
        const double seg_end = bps.empty() ? x_target : bps.front();
        Rhs rhs{&model_, lambda_, seg_end};
        rhs(y_, dxdt, x_);
        while (x_ < seg_end) {
            double dt = std::min(dt_, seg_end - x_);
            const bool to_end = x_ + dt >= seg_end;
            if (to_end) dt = seg_end - x_;
            double t = x_;
            const auto res = stepper.try_step(rhs, y_, dxdt, t, dt);
            if (res == odeint::fail) {
                dt_ = dt;
                if (dt_ < 1e-15 * std::max(1e-290, std::abs(x_)))
                    throw Error(ErrorKind::Numeric, "step collapse at x = " + num(x_));
                continue;
            }
            x_ = to_end ? seg_end : t;
            if (!to_end || dt > dt_) dt_ = dt;
            if (++steps_ > opt_.max_steps) throw Error(ErrorKind::Numeric, "step budget exhausted at x = " + num(x_));
            const double before = log_scale_;
            renormalise();
            if (log_scale_ != before) rhs(y_, dxdt, x_);
            track_drift();
            if (!aux_.empty()) std::copy(y_.begin() + 8, y_.end(), aux_.begin());
            if (on_step && on_step()) return;
        }
    }
}

void Shooter::close_at_b() {
    if (model_.b == kInf || x_ >= model_.b) return;
    picard(x_, model_.b);
}

SolutionPair Shooter::solution() const {
    SolutionPair p;
    p.x = x_;
    p.c = cplx(y_[0], y_[1]);
    p.c1 = cplx(y_[2], y_[3]);
    p.s = cplx(y_[4], y_[5]);
    p.s1 = cplx(y_[6], y_[7]);
    p.log_scale = log_scale_;
    p.drift = drift_;
    p.steps = steps_;
    return p;
}

double Shooter::log_radius() const {
    const cplx c(y_[0], y_[1]), c1(y_[2], y_[3]);
    const cplx D = c * std::conj(c1) - c1 * std::conj(c);
    return -2.0 * log_scale_ - std::log(std::abs(D));
}

WeylDisk Shooter::disk() const {
    const cplx c(y_[0], y_[1]), c1(y_[2], y_[3]), s(y_[4], y_[5]), s1(y_[6], y_[7]);
    const cplx D = c * std::conj(c1) - c1 * std::conj(c);
    WeylDisk d;
    d.x = x_;
    if (std::abs(D) == 0.0) return d;
    d.center = (s * std::conj(c1) - s1 * std::conj(c)) / D;
    d.radius = std::exp(log_radius());
    return d;
}

SolutionPair integrate_fundamental(const Problem& p, cplx lambda, double x, const WeylOptions& opt) {
    p.validate();
    if (x < 0.0 || x > p.b || (x == p.b && p.b == kInf))
        throw Error(ErrorKind::Domain, "integration point must lie in [0, b)");
    const OdeModel model = make_model(p);
    Shooter sh(model, lambda, opt);
    if (x < sh.x()) throw Error(ErrorKind::Domain, "point lies inside the Picard start interval");
    sh.advance(x);
    return sh.solution();
}

WeylDisk weyl_disk(const Problem& p, cplx lambda, double x, const WeylOptions& opt) {
    if (lambda.imag() == 0.0) throw Error(ErrorKind::Domain, "Weyl disk needs nonreal lambda");
    p.validate();
    const OdeModel model = make_model(p);
    Shooter sh(model, lambda, opt);
    sh.advance(x);
    WeylDisk d = sh.disk();
    if (!std::isfinite(d.radius)) throw Error(ErrorKind::Numeric, "degenerate truncation: zero disk denominator");
    return d;
}

// ---- classification ----

namespace {

// Decide convergence of a tail integral from increments over doubling windows toward b.
Tri numeric_tail(const std::function<double(double, double)>& piece, double b) {
    std::vector<double> d;
    double x0 = b == kInf ? 1.0 : 0.5 * b;
    for (int k = 1; k <= 40; ++k) {
        const double x1 = b == kInf ? std::ldexp(1.0, k) : b - b * std::ldexp(1.0, -(k + 1));
        d.push_back(piece(x0, x1));
        x0 = x1;
    }
    const size_t n = d.size();
    bool shrinking = true, flat = true;
    for (size_t i = n - 6; i < n; ++i) {
        const double ratio = d[i] / d[i - 1];
        if (!(ratio < 0.9)) shrinking = false;
        if (!(ratio > 0.98)) flat = false;
    }
    if (shrinking) return Tri::Yes;
    if (flat) return Tri::No;
    return Tri::Unknown;
}

bool bounded_below(const Profile& q, double b) {
    if (q.is_zero()) return true;
    const auto L = q.leading(End::Infinity, b);
    if (!L) return false;
    return L->c >= 0.0 || (b == kInf ? L->a <= 0.0 : L->a >= 0.0);
}

} // namespace

Classification limit_point_classify(const Problem& p) {
    Classification out;
    if (p.endpoint != EndpointClass::Auto) {
        out.cls = p.endpoint;
        out.trail.push_back(std::string("endpoint class given: ") + to_string(p.endpoint));
        return out;
    }
    const double b = p.b;
    const Tri w_int = p.w.integrable_at(b);
    const Tri r_int = p.r.integrable_at(b);
    const Tri q_int = p.q.is_zero() ? Tri::Yes : p.q.integrable_at(b);
    if (b < kInf && w_int == Tri::Yes && r_int == Tri::Yes && q_int == Tri::Yes) {
        out.cls = EndpointClass::Regular;
        out.trail.push_back("b finite with w, r, q integrable: regular endpoint");
        return out;
    }
    if (!p.q.is_zero()) {
        if (!bounded_below(p.q, b))
            throw Error(ErrorKind::Classification, "cannot classify b: potential is not bounded below near b");
        out.trail.push_back("potential bounded below near b: classified as for q = 0");
    }
    if (w_int == Tri::No) {
        out.cls = EndpointClass::LimitPoint;
        out.trail.push_back("w not integrable at b: limit point");
        return out;
    }
    if (w_int == Tri::Unknown) throw Error(ErrorKind::Classification, "integrability of w at b is undecided");
    if (r_int == Tri::Yes) {
        out.cls = EndpointClass::LimitCircle;
        out.trail.push_back("w and r integrable at b: R bounded, R in L^2_w, limit circle");
        return out;
    }
    // w in L^1, R unbounded: limit point iff R is not in L^2_w near b.
    Tri finite = Tri::Unknown;
    const auto lw = p.w.leading(End::Infinity, b);
    const Growth gR = p.r.cumulative_growth(End::Infinity, b);
    if (lw && lw->c <= 0.0) {
        finite = Tri::Yes;
    } else if (lw) {
        if (b == kInf) {
            if (gR.kind == Growth::Kind::Power) {
                const double e = 2.0 * gR.index + lw->a;
                if (e < -1.0) finite = Tri::Yes;
                if (e > -1.0) finite = Tri::No;
            } else if (gR.kind == Growth::Kind::Slow && lw->a < -1.0) {
                finite = Tri::Yes;
            }
        } else {
            if (gR.kind == Growth::Kind::Power) {
                const double e = lw->a - 2.0 * gR.index;
                if (e > -1.0) finite = Tri::Yes;
                if (e < -1.0) finite = Tri::No;
            } else if (gR.kind == Growth::Kind::Slow && lw->a > -1.0) {
                finite = Tri::Yes;
            }
        }
        if (finite != Tri::Unknown) out.trail.push_back("R^2 w tail decided from leading powers");
    }
    if (finite == Tri::Unknown) {
        const Profile& w = p.w;
        const Profile& r = p.r;
        auto piece = [&](double x0, double x1) {
            auto f = [&](double x) {
                const double R = r.cumulative(x);
                return R * R * w.value(x);
            };
            return integrate_gk(f, x0, x1, 10, 1e-10);
        };
        finite = numeric_tail(piece, b);
        out.trail.push_back("R^2 w tail decided numerically from doubling windows");
    }
    if (finite == Tri::Unknown) throw Error(ErrorKind::Classification, "tail test of R^2 w is ambiguous");
    out.cls = finite == Tri::Yes ? EndpointClass::LimitCircle : EndpointClass::LimitPoint;
    out.trail.push_back(finite == Tri::Yes ? "w integrable and R in L^2_w: limit circle"
                                           : "R not in L^2_w: limit point");
    return out;
}

// ---- m-functions ----

bool atomic_closed_form(const Problem& p, cplx lambda, cplx* m) {
    double c = 0.0;
    if (!p.r.is_atomic() || !p.q.is_zero() || !p.w.is_constant(&c) || c != 1.0) return false;
    const double a = p.r.atomic_mass();
    if (p.b == kInf || p.boundary == Boundary::Dirichlet)
        *m = a;
    else
        *m = a - 1.0 / (lambda * p.b);
    return true;
}

namespace {

cplx quotient(const SolutionPair& sp, Boundary bc) {
    return bc == Boundary::Neumann ? sp.s1 / sp.c1 : sp.s / sp.c;
}

MSample eval_regular(const OdeModel& model, Boundary bc, cplx lambda, const WeylOptions& opt) {
    Shooter sh(model, lambda, opt);
    if (model.singular_at_b) {
        const double d = picard_width(model, lambda, model.b, std::min(1e-2, 0.25 * model.b), true);
        sh.advance(model.b - d);
        sh.close_at_b();
    } else {
        sh.advance(model.b);
    }
    const SolutionPair sp = sh.solution();
    MSample out;
    out.lambda = lambda;
    out.m = quotient(sp, bc);
    if (!std::isfinite(out.m.real()) || !std::isfinite(out.m.imag()))
        throw Error(ErrorKind::Numeric, "lambda is an eigenvalue of the truncated problem");
    // Heuristic: ODE tolerance amplified by the step count, floored at 1e-7 relative.
    out.enclosure = std::abs(out.m) * std::max({1e-7, 100.0 * sp.drift, 1e3 * opt.ode_rtol});
    out.method = "limit-circle-boundary";
    out.x_trunc = model.b;
    out.drift = sp.drift;
    out.steps = sp.steps;
    return out;
}

double checkpoint(double b, int k) { return b == kInf ? std::ldexp(1.0, k) : b - b * std::ldexp(1.0, -(k + 1)); }

bool past_cap(double b, double x, const WeylOptions& opt) {
    return b == kInf ? x >= opt.x_cap : (b - x) <= b / opt.x_cap;
}

MSample eval_limit_circle(const OdeModel& model, Boundary bc, cplx lambda, const WeylOptions& opt) {
    Shooter sh(model, lambda, opt);
    std::vector<cplx> qs;
    for (int k = 0;; ++k) {
        const double target = checkpoint(model.b, k);
        if (target <= sh.x()) continue;
        sh.advance(target);
        qs.push_back(quotient(sh.solution(), bc));
        const size_t n = qs.size();
        if (n >= 3) {
            const double d1 = std::abs(qs[n - 1] - qs[n - 2]), d0 = std::abs(qs[n - 2] - qs[n - 3]);
            const double tol = std::max(opt.disk_atol, opt.disk_rtol * std::abs(qs[n - 1]));
            if (d1 <= tol && d0 <= 10.0 * tol) {
                const SolutionPair sp = sh.solution();
                MSample out;
                out.lambda = lambda;
                out.m = qs.back();
                out.enclosure = std::max(2.0 * d1, 1e-12 * std::abs(out.m));
                out.method = "limit-circle-boundary";
                out.x_trunc = sh.x();
                out.drift = sp.drift;
                out.steps = sp.steps;
                return out;
            }
        }
        if (past_cap(model.b, sh.x(), opt))
            throw Error(ErrorKind::Numeric, "limit-circle quotient did not settle before the truncation cap");
    }
}

MSample eval_disk(const OdeModel& model, cplx lambda, const WeylOptions& opt) {
    Shooter sh(model, lambda, opt);
    bool done = false;
    auto on_step = [&] {
        const double lr = sh.log_radius();
        if (!std::isfinite(lr)) return false;
        const WeylDisk d = sh.disk();
        if (lr <= std::log(std::max(opt.disk_atol, opt.disk_rtol * std::abs(d.center)))) {
            done = true;
            return true;
        }
        return false;
    };
    std::vector<double> cp;
    for (int k = 0; !done; ++k) {
        const double target = checkpoint(model.b, k);
        if (target <= sh.x()) continue;
        sh.advance(target, on_step);
        if (done) break;
        cp.push_back(sh.log_radius());
        const size_t n = cp.size();
        if (n >= 4 && cp[n - 1] - cp[n - 4] > std::log(0.999))
            throw Error(ErrorKind::Numeric, "truncation stall: Weyl disk radius plateaued at " +
                                                num(std::exp(cp.back())) + " by x = " + num(sh.x()));
        if (past_cap(model.b, sh.x(), opt))
            throw Error(ErrorKind::Numeric, "truncation cap reached with disk radius " + num(std::exp(cp.back())));
    }
    const WeylDisk d = sh.disk();
    const SolutionPair sp = sh.solution();
    MSample out;
    out.lambda = lambda;
    out.m = d.center;
    out.enclosure = d.radius;
    out.method = "disk-contraction";
    out.x_trunc = sh.x();
    out.drift = sp.drift;
    out.steps = sp.steps;
    return out;
}

// Neville extrapolation of samples (h_i, v_i) to h = 0.
cplx neville0(std::vector<double> h, std::vector<cplx> v) {
    const size_t n = h.size();
    for (size_t k = 1; k < n; ++k)
        for (size_t i = 0; i + k < n; ++i) v[i] = (h[i] * v[i + 1] - h[i + k] * v[i]) / (h[i] - h[i + k]);
    return v[0];
}

} // namespace

MSample m_eval_model(const OdeModel& model, EndpointClass cls, Boundary bc, cplx lambda, const WeylOptions& opt) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw Error(ErrorKind::Domain, "lambda must be finite");
    if (lambda.imag() == 0.0 && lambda.real() >= 0.0)
        throw Error(ErrorKind::Domain, "lambda must lie off the closed positive half-line");
    if (cls == EndpointClass::Auto) throw Error(ErrorKind::Classification, "endpoint class must be resolved first");
    if (lambda.imag() < 0.0) {
        MSample s = m_eval_model(model, cls, bc, std::conj(lambda), opt);
        s.lambda = lambda;
        s.m = std::conj(s.m);
        return s;
    }
    if (cls == EndpointClass::Regular) return eval_regular(model, bc, lambda, opt);
    if (cls == EndpointClass::LimitCircle) return eval_limit_circle(model, bc, lambda, opt);
    if (lambda.imag() > 0.0) return eval_disk(model, lambda, opt);

    // Negative real lambda in the limit-point case: shift off the axis and extrapolate.
    const std::vector<double> eps{1e-4, 1e-5, 1e-6};
    std::vector<cplx> vals;
    double enc = 0.0, drift = 0.0;
    long steps = 0;
    double x_trunc = 0.0;
    for (double e : eps) {
        const MSample s = eval_disk(model, cplx(lambda.real(), e), opt);
        vals.push_back(s.m);
        enc = std::max(enc, s.enclosure);
        drift = std::max(drift, s.drift);
        steps += s.steps;
        x_trunc = std::max(x_trunc, s.x_trunc);
    }
    const cplx m3 = neville0(eps, vals);
    const cplx m2 = neville0({eps[1], eps[2]}, {vals[1], vals[2]});
    MSample out;
    out.lambda = lambda;
    out.m = cplx(m3.real(), 0.0);
    out.enclosure = enc + std::abs(m3 - m2) + std::abs(m3.imag());
    out.method = "disk-contraction";
    out.x_trunc = x_trunc;
    out.drift = drift;
    out.steps = steps;
    return out;
}

namespace {

// Segment of f covering (x, b) just left of b.
const Segment* segment_at(const Profile& f, double b) {
    if (f.family() != Profile::Family::PowerLog && f.family() != Profile::Family::Piecewise) return nullptr;
    for (const Segment& s : f.segments())
        if (s.from < b && s.to >= b) return &s;
    return nullptr;
}

// w = c (b - x)^-2, r = rho and q = 0 on [x0, b): the Weyl solution there is (b - x)^s with
// s^2 - s + rho c lambda = 0 and Re s > 1/2.
bool euler_tail(const Problem& p, double* x0, double* c, double* rho) {
    if (!(p.b < kInf)) return false;
    const Segment* w = segment_at(p.w, p.b);
    const Segment* r = segment_at(p.r, p.b);
    if (!w || !r || w->center != p.b || w->a != -2.0 || w->p != 0.0 || !(w->c > 0.0)) return false;
    if (!(r->a == 0.0 && r->p == 0.0 && r->c > 0.0)) return false;
    double start = std::max(w->from, r->from);
    if (!p.q.is_zero()) {
        const Segment* q = segment_at(p.q, p.b);
        if (!q || q->c != 0.0) return false;
        start = std::max(start, q->from);
    }
    *x0 = start > 0.0 ? start : 0.5 * p.b;
    *c = w->c;
    *rho = r->c;
    return true;
}

MSample eval_euler_tail(const Problem& p, double x0, double c, double rho, cplx lambda, const WeylOptions& opt) {
    const cplx lam = lambda.imag() < 0.0 ? std::conj(lambda) : lambda;
    const cplx s = 0.5 + std::sqrt(0.25 - rho * c * lam);
    // psi^[1] / psi at x0
    const cplx h = -s / (rho * (p.b - x0));
    const OdeModel model = make_model(p);
    Shooter sh(model, lam, opt);
    sh.advance(x0);
    const SolutionPair sp = sh.solution();
    MSample out;
    out.lambda = lambda;
    out.m = (sp.s1 - sp.s * h) / (sp.c1 - sp.c * h);
    if (lambda.imag() < 0.0) out.m = std::conj(out.m);
    if (!std::isfinite(out.m.real()) || !std::isfinite(out.m.imag()))
        throw Error(ErrorKind::Numeric, "lambda is an eigenvalue of the problem");
    out.enclosure = std::abs(out.m) * std::max({1e-7, 100.0 * sp.drift, 1e3 * opt.ode_rtol});
    out.method = "exact-tail";
    out.x_trunc = x0;
    out.drift = sp.drift;
    out.steps = sp.steps;
    return out;
}

} // namespace

MSample m_eval(const Problem& p, cplx lambda, const WeylOptions& opt) {
    p.validate();
    if (lambda.imag() == 0.0 && lambda.real() >= 0.0)
        throw Error(ErrorKind::Domain, "lambda must lie off the closed positive half-line");
    cplx m;
    if (atomic_closed_form(p, lambda, &m)) {
        MSample s;
        s.lambda = lambda;
        s.m = m;
        s.enclosure = 0.0;
        s.method = "closed-form";
        return s;
    }
    const EndpointClass cls = limit_point_classify(p).cls;
    double x0 = 0.0, c = 0.0, rho = 0.0;
    const bool tail = cls == EndpointClass::LimitPoint && euler_tail(p, &x0, &c, &rho);
    const OdeModel model =
        tail ? OdeModel{} : cls == EndpointClass::LimitPoint && p.b < kInf ? make_log_model(p) : make_model(p);
    auto run = [&](const WeylOptions& o) {
        return tail ? eval_euler_tail(p, x0, c, rho, lambda, o) : m_eval_model(model, cls, p.boundary, lambda, o);
    };
    MSample s = run(opt);
    if (s.drift > opt.drift_tol && opt.ode_rtol > 1e-13) {
        // Long runs near the real axis accumulate drift roughly in proportion to ode_rtol.
        WeylOptions tight = opt;
        tight.ode_rtol /= 10.0;
        tight.ode_atol /= 10.0;
        const long before = s.steps;
        s = run(tight);
        s.steps += before;
    }
    return s;
}

DualResidual m_dual_identity(const Problem& p, cplx lambda, const WeylOptions& opt) {
    DualResidual d;
    d.lambda = lambda;
    Problem base = p;
    base.boundary = Boundary::Neumann;
    d.m = m_eval(base, lambda, opt);
    d.m_dual = m_eval(base.swapped_dirichlet(), lambda, opt);
    const cplx rhs = -1.0 / (lambda * d.m_dual.m);
    d.residual = std::abs(d.m.m - rhs);
    d.bound = d.m.enclosure + d.m_dual.enclosure / (std::abs(lambda) * std::norm(d.m_dual.m)) +
              1e-12 * std::abs(d.m.m);
    d.ok = d.residual <= d.bound;
    return d;
}

StieltjesReport stieltjes_check(const Problem& p, std::vector<double> grid, const WeylOptions& opt) {
    StieltjesReport rep;
    std::sort(grid.begin(), grid.end());
    for (double x : grid)
        if (!(x < 0.0)) throw Error(ErrorKind::Domain, "Stieltjes grid must lie in (-inf, 0)");
    for (double x : grid) {
        double mv = NAN, enc = kInf;
        try {
            const MSample s = m_eval(p, cplx(x, 0.0), opt);
            mv = s.m.real();
            enc = s.enclosure;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Numeric) throw;
        }
        rep.samples.emplace_back(x, mv);
        rep.enclosures.push_back(enc);
    }
    // Numeric failures are skipped: a pole of m on the negative axis also shows up as a sign change.
    std::vector<size_t> ok;
    for (size_t i = 0; i < rep.samples.size(); ++i) {
        if (std::isfinite(rep.samples[i].second))
            ok.push_back(i);
        else
            ++rep.unresolved;
    }
    if (ok.size() * 2 < rep.samples.size()) {
        rep.pass = false;
        rep.violation = "m unresolved at " + std::to_string(rep.unresolved) + " of " + std::to_string(rep.samples.size()) +
                        " sample points";
        return rep;
    }
    for (size_t k = 0; k < ok.size(); ++k) {
        const size_t i = ok[k];
        const auto [x, mv] = rep.samples[i];
        if (mv < -rep.enclosures[i]) {
            rep.pass = false;
            rep.violation = "m(" + num(x) + ") = " + num(mv) + " is negative";
            return rep;
        }
        if (k > 0) {
            const size_t j = ok[k - 1];
            const auto [x0, m0] = rep.samples[j];
            if (mv < m0 - rep.enclosures[i] - rep.enclosures[j]) {
                rep.pass = false;
                rep.violation = "m decreases between lambda = " + num(x0) + " and " + num(x);
                return rep;
            }
        }
    }
    return rep;
}

} // namespace wk
