#![allow(dead_code, clippy::excessive_precision)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const KRONROD_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * KRONROD_NODES[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth - 1) + adapt(f, mid, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod (7/15) integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol, 50)
}

/// `γ(a, b)` by adaptive quadrature. For `a < 1` the substitution `t = u^(1/a)`
/// removes the endpoint singularity.
pub fn gamma_oracle(a: f64, b: f64) -> f64 {
    if a < 1.0 {
        integrate(|u: f64| (-u.powf(1.0 / a)).exp() / a, 0.0, b.powf(a), 1e-15)
    } else {
        integrate(|t: f64| t.powf(a - 1.0) * (-t).exp(), 0.0, b, 1e-15)
    }
}

const FRAC_BITS: u32 = 512;
const EULER: f64 = 0.577_215_664_901_532_9;

fn to_fixed(x: f64) -> BigInt {
    let bits = x.abs().to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = (bits & ((1 << 52) - 1)) | (1 << 52);
    let shift = exp - 1075 + FRAC_BITS as i64;
    assert!(exp > 0 && shift >= 0, "value out of fixed-point range");
    let v = BigInt::from(mantissa) << shift as usize;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn from_fixed(v: &BigInt) -> f64 {
    let one = BigInt::from(1) << FRAC_BITS as usize;
    let int = v / &one;
    let frac = v - &int * &one;
    int.to_f64().unwrap() + frac.to_f64().unwrap() / 2f64.powi(FRAC_BITS as i32)
}

/// `Σ_{k≥1} x^k / (k·k!)` summed exactly in 512-bit fixed point.
pub fn ei_series_tail(x: f64) -> f64 {
    let xf = to_fixed(x);
    let mut term = BigInt::from(1) << FRAC_BITS as usize;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        term = (&term * &xf) >> FRAC_BITS as usize;
        term /= k;
        sum += &term / k;
        if term.is_zero() || (k as f64 > x.abs() && term.abs() < BigInt::from(2)) {
            break;
        }
        k += 1;
    }
    from_fixed(&sum)
}

/// `Ei(x) = γ_E + ln|x| + Σ x^k/(k·k!)` for `x < 0`.
pub fn ei_oracle(x: f64) -> f64 {
    EULER + x.abs().ln() + ei_series_tail(x)
}
