//! Single source of truth for the closed-form limit objects: the RLM
//! curves `f_beta` of both patterns, the excursion `phi_beta`, the logistic
//! density pair, and their cumulative and inverse functions.
//!
//! Everything is evaluated in log-sum form so that `beta` up to several
//! hundred stays finite: `log(1 + e^b - e^{bx})` is computed as
//! `b + log(e^{-b} + 1 - e^{b(x-1)})` and friends. All functions take
//! `beta > 0`; the callers own the `beta <= 0` degenerate cases.

/// `log(1 + e^a)`, stable for any `a`.
pub fn softplus(a: f64) -> f64 {
    a.max(0.0) + (-a.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-a})`, stable for any `a`.
pub fn logistic(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}

/// The 231 limit RLM curve `f(x) = 1 - (1/b) log(1 + e^b - e^{bx})`.
pub fn f231(beta: f64, x: f64) -> f64 {
    debug_assert!(beta > 0.0);
    if beta < 1e-6 {
        // expm1 form avoids the cancellation of e^b - e^{bx} for tiny b
        return 1.0 - ((beta).exp_m1() - (beta * x).exp_m1()).ln_1p() / beta;
    }
    // log(1 + e^b - e^{bx}) = b + log(e^{-b} + (1 - e^{b(x-1)})), with the
    // parenthesized difference through expm1 so x near 1 keeps precision
    let inner = (-beta).exp() - (beta * (x - 1.0)).exp_m1();
    1.0 - (beta + inner.ln()) / beta
}

/// `f231'(x) = e^{bx} / (1 + e^b - e^{bx})`, evaluated as an exponential of
/// stable logs.
pub fn f231_prime(beta: f64, x: f64) -> f64 {
    let inner = (-beta).exp() - (beta * (x - 1.0)).exp_m1();
    let log_denominator = beta + inner.ln();
    (beta * x - log_denominator).exp()
}

/// Inverse of the 231 curve via its antidiagonal symmetry
/// `f^{-1}(y) = 1 - f(1 - y)`.
pub fn f231_inv(beta: f64, y: f64) -> f64 {
    1.0 - f231(beta, 1.0 - y)
}

/// The tangency abscissa `x* = (log(1 + e^b) - log 2)/b` where
/// `f231'(x*) = 1`.
pub fn x_star(beta: f64) -> f64 {
    (softplus(beta) - std::f64::consts::LN_2) / beta
}

/// The 321 limit RLM curve
/// `f(x) = 1/2 + (1/b) log((e^{bx} + e^{b/2}) / (1 + e^{b/2} + e^b - e^{bx}))`.
pub fn f321(beta: f64, x: f64) -> f64 {
    debug_assert!(beta > 0.0);
    let a = beta * x;
    let h = beta / 2.0;
    let log_num = a.max(h) + (-(a - h).abs()).exp().ln_1p();
    // 1 + e^{b/2} + e^b - e^{bx} = e^b (e^{-b} + e^{-b/2} + (1 - e^{b(x-1)}))
    let inner = (-beta).exp() + (-h).exp() - (beta * (x - 1.0)).exp_m1();
    let log_den = beta + inner.ln();
    0.5 + (log_num - log_den) / beta
}

/// Inverse of the 321 curve by monotone bisection.
pub fn f321_inv(beta: f64, y: f64) -> f64 {
    bisect_increasing(|x| f321(beta, x), y)
}

/// The 231 limit excursion
/// `phi(t) = (1/b) log((1 + e^b)/(1 + e^{b(1-2t)})) - t`.
pub fn phi231(beta: f64, t: f64) -> f64 {
    debug_assert!(beta > 0.0);
    (softplus(beta) - softplus(beta * (1.0 - 2.0 * t))) / beta - t
}

/// `phi'(t) = (e^{b(1-2t)} - 1)/(e^{b(1-2t)} + 1) = tanh(b(1-2t)/2)`.
pub fn phi231_prime(beta: f64, t: f64) -> f64 {
    (beta * (1.0 - 2.0 * t) / 2.0).tanh()
}

/// The logistic density pair of the 321 minimizer:
/// `rho1(x) = 1/(1 + e^{b(1/2-x)})` and `rho2(x) = rho1(1-x) = 1 - rho1(x)`.
pub fn rho_pair(beta: f64, x: f64) -> (f64, f64) {
    let r1 = logistic(beta * (x - 0.5));
    (r1, 1.0 - r1)
}

/// CDF of `rho1`: `(1/b)(log(1+e^{b(x-1/2)}) - log(1+e^{-b/2}))`.
pub fn rho1_cdf(beta: f64, x: f64) -> f64 {
    (softplus(beta * (x - 0.5)) - softplus(-beta / 2.0)) / beta
}

/// CDF of `rho2`: `(1/b)(log(1+e^{b/2}) - log(1+e^{b(1/2-x)}))`.
pub fn rho2_cdf(beta: f64, x: f64) -> f64 {
    (softplus(beta / 2.0) - softplus(beta * (0.5 - x))) / beta
}

/// Solves `g(x) = y` for increasing `g` on `[0, 1]` by bisection to f64
/// resolution.
pub fn bisect_increasing(g: impl Fn(f64) -> f64, y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if y <= g(lo) {
        return lo;
    }
    if y >= g(hi) {
        return hi;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
