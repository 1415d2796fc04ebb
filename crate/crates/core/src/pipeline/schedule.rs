use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use super::{Mode, PipelineParams};

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - u64::from((n - 1).leading_zeros())
    }
}

/// `m0 = 100 ceil(log N)` and `ℓ = 10 + ceil(log ceil(log N))`.
pub fn faithful_constants(n: u64) -> (u64, u64) {
    let lg = ceil_log2(n);
    (100 * lg, 10 + ceil_log2(lg))
}

/// One row of the level table. Exponents are of `Q`; `mu_exponent` is the
/// power of the base mixing bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleRow {
    pub i: u64,
    /// `"3"`, `"m0"`, `"m0+2"`.
    pub label: String,
    pub x_vertices: u64,
    pub x_degree_exp: u64,
    pub g_vertices_exp: u64,
    pub g_degree_exp: u64,
    pub mu_exp: u64,
    pub x_degree: String,
    pub g_vertices: String,
    pub g_degree: String,
    pub mu_bound: String,
    /// Concrete values, desk mode only.
    pub x_degree_value: Option<BigInt>,
    pub g_degree_value: Option<BigInt>,
    pub mu_value: Option<BigRational>,
}

/// Exact verdicts for `16^4 N^2 < (3/2)^m0` and `N^2 < (8/7)^(2^ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamInequalities {
    pub a: bool,
    pub b: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineSchedule {
    pub mode: Mode,
    pub n: u64,
    pub m0: u64,
    pub ell: u64,
    pub rows: Vec<ScheduleRow>,
    pub inequalities: Option<ParamInequalities>,
}

impl PipelineSchedule {
    pub fn m1(&self) -> u64 {
        self.m0 + self.ell
    }

    pub fn row(&self, i: u64) -> Option<&ScheduleRow> {
        self.rows.get(usize::try_from(i.checked_sub(1)?).ok()?)
    }
}

fn q_pow(e: u64) -> String {
    if e == 1 {
        String::from("Q")
    } else {
        format!("Q^{{{e}}}")
    }
}

fn q_pow_m0(off: u64) -> String {
    if off == 0 {
        String::from("Q^{m0}")
    } else {
        format!("Q^{{m0+{off}}}")
    }
}

fn mu_pow(base: &str, e: u64) -> String {
    if e == 1 {
        String::from(base)
    } else {
        format!("({base})^{{{e}}}")
    }
}

fn inequalities(n: u64, m0: u64, ell: u64) -> ParamInequalities {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let m0 = m0 as u32;
    let a = BigInt::from(16u32).pow(4u32) * &n2 * BigInt::from(2u32).pow(m0) < BigInt::from(3u32).pow(m0);
    let e = 1u32 << ell;
    let b = &n2 * BigInt::from(7u32).pow(e) < BigInt::from(8u32).pow(e);
    ParamInequalities { a, b }
}

/// Level table for `X_1 .. X_{m0+ℓ}` on `N` vertices. Row `i` describes
/// `X_i` and the `G_i` used to build `X_{i+1}`. Faithful mode writes
/// degrees symbolically and checks the two integer inequalities; desk mode
/// also evaluates them with the desk `Q` and `mu_target`.
pub fn compute_schedule(params: &PipelineParams, n: u64) -> PipelineSchedule {
    let (m0, ell) = match params.mode {
        Mode::Faithful => faithful_constants(n),
        Mode::Desk => (u64::from(params.m0), u64::from(params.ell)),
    };
    let desk = params.mode == Mode::Desk;
    let q = BigInt::from(params.variant.degree() as u64).pow(params.q);
    let base = match params.mode {
        Mode::Faithful => String::from("1/100"),
        Mode::Desk => format!("{}", params.mu_target),
    };
    let mut rows = Vec::new();
    for i in 1..=m0 + ell {
        let (label, xe, ge, gd, mu, xs, gs, gds) = if i <= m0 {
            let lab = if i == m0 { String::from("m0") } else { format!("{i}") };
            let sym = if i == m0 { q_pow_m0(0) } else { q_pow(i) };
            (lab, i, i, 1, 1, sym.clone(), sym, q_pow(1))
        } else {
            let j = i - m0;
            let p = 1u64 << j;
            let xe = m0 + p - 1;
            (format!("m0+{j}"), xe, xe, p, p, q_pow_m0(p - 1), q_pow_m0(p - 1), q_pow(p))
        };
        rows.push(ScheduleRow {
            i,
            label,
            x_vertices: n,
            x_degree_exp: xe,
            g_vertices_exp: ge,
            g_degree_exp: gd,
            mu_exp: mu,
            x_degree: xs,
            g_vertices: gs,
            g_degree: gds,
            mu_bound: mu_pow(&base, mu),
            x_degree_value: desk.then(|| Pow::pow(&q, xe as u32)),
            g_degree_value: desk.then(|| Pow::pow(&q, gd as u32)),
            mu_value: desk.then(|| Pow::pow(params.mu_target.clone(), mu as u32)),
        });
    }
    let inequalities = (params.mode == Mode::Faithful).then(|| inequalities(n, m0, ell));
    PipelineSchedule { mode: params.mode, n, m0, ell, rows, inequalities }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(faithful_constants(6), (300, 12));
        assert_eq!(faithful_constants(2), (100, 10));
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn faithful_rows() {
        let s = compute_schedule(&PipelineParams::faithful(), 6);
        let r2 = s.row(2).unwrap();
        assert_eq!((r2.x_degree.as_str(), r2.g_degree.as_str(), r2.mu_bound.as_str()), ("Q^{2}", "Q", "1/100"));
        let r = s.row(303).unwrap();
        assert_eq!(
            (r.x_degree.as_str(), r.g_degree.as_str(), r.mu_bound.as_str()),
            ("Q^{m0+7}", "Q^{8}", "(1/100)^{8}")
        );
        assert_eq!(s.inequalities, Some(ParamInequalities { a: true, b: true }));
    }
}
