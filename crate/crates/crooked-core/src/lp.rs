//! Feasibility of small linear inequality systems in three variables by
//! exact Fourier–Motzkin elimination.
//!
//! Strictness is handled before elimination: a strict inequality
//! `a·x < b` enters as `a·x ≤ b − margin`, a non-strict one may be relaxed
//! to `a·x ≤ b + margin`. The folded system is then converted to integer
//! rows (every finite `f64` is a dyadic rational, so the conversion is
//! exact) and eliminated in arbitrary precision. Floating-point elimination
//! is not an option here: sector cones of crooked halfspaces can approach
//! each other asymptotically, and certifying the gap needs more than the
//! 53-bit significand.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;

/// One inequality `a·x ≤ b` over `x ∈ R³`.
#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub a: [f64; 3],
    pub b: f64,
}

/// Integer row `a·x ≤ b` (after clearing the common power of two).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    a: [BigInt; 3],
    b: BigInt,
}

/// Exact mantissa/exponent decomposition: `x = m · 2^e` with `m` odd or 0.
fn to_mant_exp(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some((0, 0));
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
    let (mut m, mut e) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), exp_bits - 1075)
    };
    while m & 1 == 0 {
        m >>= 1;
        e += 1;
    }
    Some((sign * m, e))
}

/// Convert a constraint into an exact integer row.
fn to_row(c: &Constraint) -> Option<Row> {
    let parts = [
        to_mant_exp(c.a[0])?,
        to_mant_exp(c.a[1])?,
        to_mant_exp(c.a[2])?,
        to_mant_exp(c.b)?,
    ];
    let min_e = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| *e)
        .min()
        .unwrap_or(0);
    let lift = |(m, e): (i64, i64)| -> BigInt {
        if m == 0 {
            BigInt::from(0)
        } else {
            BigInt::from(m) << (e - min_e) as usize
        }
    };
    Some(Row {
        a: [lift(parts[0]), lift(parts[1]), lift(parts[2])],
        b: lift(parts[3]),
    })
}

fn is_zero(x: &BigInt) -> bool {
    *x == BigInt::from(0)
}

fn is_negative(x: &BigInt) -> bool {
    *x < BigInt::from(0)
}

/// Decide whether `{x ∈ R³ : a_i·x ≤ b_i}` is nonempty, exactly.
pub(crate) fn feasible(constraints: &[Constraint]) -> bool {
    let mut rows: Vec<Row> = Vec::with_capacity(constraints.len());
    for c in constraints {
        match to_row(c) {
            Some(r) => rows.push(r),
            None => return false, // non-finite input: treat as empty
        }
    }
    for var in (0..3).rev() {
        let mut lower: Vec<Row> = Vec::new();
        let mut upper: Vec<Row> = Vec::new();
        let mut rest: BTreeSet<Row> = BTreeSet::new();
        for r in rows {
            if is_zero(&r.a[var]) {
                if r.a.iter().all(is_zero) {
                    if is_negative(&r.b) {
                        return false;
                    }
                } else {
                    rest.insert(r);
                }
            } else if is_negative(&r.a[var]) {
                lower.push(r);
            } else {
                upper.push(r);
            }
        }
        for lo in &lower {
            for up in &upper {
                // Positive multipliers up.a[var] and −lo.a[var] cancel x_var.
                let lo_mul = up.a[var].clone();
                let up_mul = -lo.a[var].clone();
                let mut a = [BigInt::from(0), BigInt::from(0), BigInt::from(0)];
                for k in 0..3 {
                    if k != var {
                        a[k] = &lo.a[k] * &lo_mul + &up.a[k] * &up_mul;
                    }
                }
                let b = &lo.b * &lo_mul + &up.b * &up_mul;
                if a.iter().all(is_zero) {
                    if is_negative(&b) {
                        return false;
                    }
                } else {
                    rest.insert(Row { a, b });
                }
            }
        }
        rows = rest.into_iter().collect();
    }
    rows.iter().all(|r| !is_negative(&r.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: [f64; 3], b: f64) -> Constraint {
        Constraint { a, b }
    }

    #[test]
    fn mantissa_exponent_round_trip() {
        for x in [1.0, -3.5, 0.1, 1e-300, 2.2e16, -0.0, 0.0] {
            let (m, e) = to_mant_exp(x).unwrap();
            let back = m as f64 * 2f64.powi(e as i32);
            assert_eq!(back, x, "round trip failed for {x}");
        }
        assert!(to_mant_exp(f64::NAN).is_none());
        assert!(to_mant_exp(f64::INFINITY).is_none());
    }

    #[test]
    fn box_is_feasible() {
        let sys = [
            c([1.0, 0.0, 0.0], 1.0),
            c([-1.0, 0.0, 0.0], 1.0),
            c([0.0, 1.0, 0.0], 1.0),
            c([0.0, -1.0, 0.0], 1.0),
            c([0.0, 0.0, 1.0], 1.0),
            c([0.0, 0.0, -1.0], 1.0),
        ];
        assert!(feasible(&sys));
    }

    #[test]
    fn contradictory_halfspaces_are_infeasible() {
        let sys = [c([1.0, 0.0, 0.0], -1.0), c([-1.0, 0.0, 0.0], -1.0)];
        assert!(!feasible(&sys));
    }

    #[test]
    fn unbounded_cone_is_feasible() {
        let sys = [
            c([-1.0, 0.0, 0.0], 0.0),
            c([0.0, -1.0, 0.0], 0.0),
            c([0.0, 0.0, -1.0], -1.0), // z ≥ 1
        ];
        assert!(feasible(&sys));
    }

    #[test]
    fn exact_boundary_cases() {
        // x ≤ 1 and x ≥ 1 is feasible (x = 1); the slightest push kills it.
        assert!(feasible(&[c([1.0, 0.0, 0.0], 1.0), c([-1.0, 0.0, 0.0], -1.0)]));
        assert!(!feasible(&[
            c([1.0, 0.0, 0.0], 1.0),
            c([-1.0, 0.0, 0.0], -1.0 - 1e-15)
        ]));
    }

    #[test]
    fn mixed_three_dimensional_system() {
        // Simplex x+y+z ≤ 1, x,y,z ≥ 0 intersected with x+y+z ≥ 2: empty.
        let sys = [
            c([1.0, 1.0, 1.0], 1.0),
            c([-1.0, 0.0, 0.0], 0.0),
            c([0.0, -1.0, 0.0], 0.0),
            c([0.0, 0.0, -1.0], 0.0),
            c([-1.0, -1.0, -1.0], -2.0),
        ];
        assert!(!feasible(&sys));
    }

    #[test]
    fn asymptotically_near_systems_are_decided() {
        // Two wedges approaching within a constant gap at huge coordinates:
        // y ≥ (1+δ)x + 1 and y ≤ x requires δx ≤ −1 with x ≥ 0 forced.
        let delta = 1e-12;
        let sys = [
            c([1.0 + delta, -1.0, 0.0], -1.0), // y ≥ (1+δ)x + 1
            c([-1.0, 1.0, 0.0], 0.0),          // y ≤ x
            c([-1.0, 0.0, 0.0], 0.0),          // x ≥ 0
        ];
        assert!(!feasible(&sys));
        // Remove the gap and it touches.
        let sys2 = [
            c([1.0, -1.0, 0.0], 0.0),
            c([-1.0, 1.0, 0.0], 0.0),
            c([-1.0, 0.0, 0.0], 0.0),
        ];
        assert!(feasible(&sys2));
    }
}
