#include "blindhd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "blindhd/rng.hpp"

namespace blindhd {

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

struct Pair {
    Eigen::VectorXd s, y;  // y in minimisation convention
    double rho;
};

// Two-loop recursion for the minimisation direction -H q.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& grad_min,
                                const std::deque<Pair>& hist) {
    Eigen::VectorXd q = grad_min;
    std::vector<double> alpha(hist.size());
    for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
        alpha[i] = hist[i].rho * hist[i].s.dot(q);
        q -= alpha[i] * hist[i].y;
    }
    if (!hist.empty()) {
        const Pair& last = hist.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (size_t i = 0; i < hist.size(); ++i) {
        const double beta = hist[i].rho * hist[i].y.dot(q);
        q += (alpha[i] - beta) * hist[i].s;
    }
    return -q;
}

// Zero the components that push an active bound further outward; the
// remaining coordinates form the free subspace the step explores.
Eigen::VectorXd mask_active(const Eigen::VectorXd& g_ascent,
                            const Eigen::VectorXd& x,
                            const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
    Eigen::VectorXd masked = g_ascent;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if ((x(i) <= lo(i) && g_ascent(i) < 0.0) ||
            (x(i) >= hi(i) && g_ascent(i) > 0.0))
            masked(i) = 0.0;
    }
    return masked;
}

OptResult single_run(const Objective& f, const Gradient& grad,
                     const Eigen::VectorXd& x0, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi, const OptConfig& cfg) {
    constexpr double armijo_c1 = 1e-4;
    constexpr int max_halvings = 60;

    OptResult res;
    Eigen::VectorXd x = clip(x0, lo, hi);
    double fx = f(x);
    if (!std::isfinite(fx))
        throw NonFiniteObjective("maximize: objective non-finite at start");
    res.objective_trace.push_back(fx);

    Eigen::VectorXd g = grad(x);
    std::deque<Pair> hist;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // minimise phi = -f on the free subspace
        const Eigen::VectorXd gm = mask_active(g, x, lo, hi);
        Eigen::VectorXd d = lbfgs_direction(-gm, hist);
        d = mask_active(d, x, lo, hi);
        if (d.dot(gm) <= 0.0) {  // not an ascent direction: reset
            hist.clear();
            d = gm;
        }
        if (d.cwiseAbs().maxCoeff() == 0.0) {
            res.converged = true;  // projected gradient vanished
            break;
        }

        double step = hist.empty()
                          ? 1.0 / std::max(1.0, d.cwiseAbs().maxCoeff())
                          : 1.0;
        Eigen::VectorXd x_new;
        double fx_new = 0.0;
        bool accepted = false;
        bool saw_finite = true;
        for (int h = 0; h < max_halvings; ++h) {
            x_new = clip(x + step * d, lo, hi);
            if ((x_new - x).cwiseAbs().maxCoeff() == 0.0) break;
            fx_new = f(x_new);
            saw_finite = std::isfinite(fx_new);
            // sufficient increase where the linear model predicts one,
            // plain monotonicity where projection bent the step
            const double rise = g.dot(x_new - x);
            if (saw_finite &&
                fx_new >= fx + armijo_c1 * std::max(rise, 0.0)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!saw_finite)
                throw NonFiniteObjective(
                    "maximize: step halving could not restore a finite "
                    "objective");
            res.converged = true;  // no improving feasible step remains
            break;
        }

        Eigen::VectorXd g_new = grad(x_new);
        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g - g_new;  // = grad(phi)_new - grad(phi)_old
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            hist.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(hist.size()) > std::max(1, cfg.memory))
                hist.pop_front();
        }

        const double rel_change =
            std::abs(fx_new - fx) / std::max(1.0, std::abs(fx_new));
        x = x_new;
        fx = fx_new;
        g = std::move(g_new);
        res.objective_trace.push_back(fx);
        if (rel_change < cfg.convergence_tol) {
            res.converged = true;
            break;
        }
    }

    res.x = x;
    res.final_objective = fx;
    res.iterations = static_cast<int>(res.objective_trace.size()) - 1;
    return res;
}

} // namespace

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                            double step) {
    if (!(step > 0.0)) throw Error("fd_gradient: step must be positive");
    Eigen::VectorXd grad(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x(i);
        probe(i) = xi + step;
        const double fp = f(probe);
        probe(i) = xi - step;
        const double fm = f(probe);
        probe(i) = xi;
        grad(i) = (fp - fm) / (2.0 * step);
    }
    return grad;
}

OptResult maximize(const Objective& f, const std::optional<Gradient>& grad,
                   const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper, const OptConfig& cfg,
                   std::uint64_t seed) {
    const auto n = x0.size();
    if (lower.size() != n || upper.size() != n)
        throw DimensionMismatch("maximize: box does not match dimension");
    if ((lower.array() > upper.array()).any())
        throw Error("maximize: box bounds out of order");
    if (cfg.memory < 1) throw Error("maximize: memory must be >= 1");
    if (!(cfg.fd_step > 0.0)) throw Error("maximize: fd_step must be > 0");

    Gradient effective_grad;
    if (cfg.gradient_mode == GradientMode::analytic) {
        if (!grad) throw Error("maximize: analytic mode needs a gradient");
        effective_grad = *grad;
    } else {
        const double step = cfg.fd_step;
        effective_grad = [&f, step](const Eigen::VectorXd& x) {
            return fd_gradient(f, x, step);
        };
    }

    OptResult best = single_run(f, effective_grad, x0, lower, upper, cfg);
    for (int r = 1; r <= cfg.restarts; ++r) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(r)));
        Eigen::VectorXd jittered(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double span = upper(i) - lower(i);
            jittered(i) = x0(i) + 0.25 * span * rng.normal();
        }
        try {
            OptResult candidate =
                single_run(f, effective_grad, clip(jittered, lower, upper),
                           lower, upper, cfg);
            if (candidate.final_objective > best.final_objective)
                best = std::move(candidate);
        } catch (const NonFiniteObjective&) {
            // a bad restart point loses; the base run already succeeded
        }
    }
    return best;
}

double gradient_check(const Objective& f, const Gradient& grad,
                      const Eigen::VectorXd& point, double fd_step) {
    const Eigen::VectorXd ga = grad(point);
    const Eigen::VectorXd gf = fd_gradient(f, point, fd_step);
    const double scale = std::max(
        {1.0, ga.cwiseAbs().maxCoeff(), gf.cwiseAbs().maxCoeff()});
    return (ga - gf).cwiseAbs().maxCoeff() / scale;
}

} // namespace blindhd
