//! Explicit error bounds for the c = 10 (and c = 6) main terms, the
//! crossover search, the root-of-unity identities behind the inequality
//! theorems, and exact inequality verification.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{frac, Fraction};
use crate::error::{invalid, Error, Result};
use crate::expsums::delta_terms;
use crate::hp::Real;
use crate::qseries::{class_vector, GroupRingElt, RankTable};

/// Σ_{r≥1} e^{π√r − π·scale·r}, the bound used for the coefficient sums
/// Σ|a_j(r)|e^{−π·scale·r} given |a_j(r)| ≤ e^{π√r}.
///
/// Summation stops once the geometric tail bound falls below 2^{−prec}
/// of the running total.
pub fn coeff_sum(scale: &Fraction, prec: usize) -> Result<Real> {
    if !scale.is_positive() {
        return Err(invalid("coefficient-sum scale must be positive"));
    }
    let wp = prec + 16;
    let pi = Real::pi(wp);
    let s = Real::from_ratio(scale, wp);
    let s64 = s.to_f64();
    // terms decrease once √r > 1/(2·scale)
    let peak = (1.0 / (2.0 * s64)).powi(2).ceil() as u64;
    let mut total = Real::zero(wp);
    let mut r = 1u64;
    loop {
        let rr = Real::from_i64(r as i64, wp);
        let t = (&pi * rr.sqrt() - &pi * &s * &rr).exp();
        total = total + &t;
        if r > peak + 1 {
            // t_{j+1}/t_j ≤ e^{π/(2√r) − π·scale} =: q < 1 beyond the peak
            let q = (std::f64::consts::PI / (2.0 * (r as f64).sqrt()) - std::f64::consts::PI * s64).exp();
            if q < 1.0 {
                let tail = t.to_f64() * q / (1.0 - q);
                if tail < total.to_f64() * 2f64.powi(-(prec.min(1000) as i32)) {
                    break;
                }
            }
        }
        r += 1;
    }
    Ok(total.with_precision(prec))
}

/// Bound components for one side (one residue pair of k).
#[derive(Clone, Debug)]
pub struct SideBounds {
    pub a: i64,
    pub residues: Vec<i64>,
    /// Named components, in assembly order.
    pub components: Vec<(&'static str, Real)>,
}

impl SideBounds {
    pub fn total(&self) -> Real {
        self.components.iter().fold(Real::zero(64), |acc, (_, v)| acc + v)
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub c: i64,
    pub n: u64,
    pub main: Real,
    pub sides: Vec<SideBounds>,
    pub total: Real,
    pub dominated: bool,
}

impl BoundReport {
    pub fn components(&self) -> BTreeMap<String, Real> {
        let mut out = BTreeMap::new();
        for s in &self.sides {
            for (name, v) in &s.components {
                out.insert(format!("a={}:{name}", s.a), v.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sides: Vec<serde_json::Value> = self
            .sides
            .iter()
            .map(|s| {
                let comps: serde_json::Map<String, serde_json::Value> =
                    s.components.iter().map(|(k, v)| (k.to_string(), v.to_decimal(12).into())).collect();
                serde_json::json!({ "a": s.a, "residues": s.residues, "components": comps })
            })
            .collect();
        serde_json::json!({
            "c": self.c,
            "n": self.n,
            "main": self.main.to_decimal(12),
            "total": self.total.to_decimal(12),
            "dominated": self.dominated,
            "sides": sides,
            "bound_assembly": bound_assembly(self.c).unwrap_or_default(),
        })
    }
}

/// One tail residue r₀ of k = c·j + r₀ and the first index j of the sum.
struct TailResidue {
    r0: i64,
    first_j: i64,
}

struct Side {
    a: i64,
    tails: Vec<TailResidue>,
}

struct Template {
    sides: Vec<Side>,
    /// weight the tail by √j (the displayed index) rather than √k
    index_weight: bool,
    coeff_scale: Fraction,
}

fn template(c: i64) -> Result<Template> {
    match c {
        10 => Ok(Template {
            sides: vec![
                Side { a: 1, tails: vec![TailResidue { r0: 1, first_j: 2 }, TailResidue { r0: 9, first_j: 1 }] },
                Side { a: 3, tails: vec![TailResidue { r0: 3, first_j: 1 }, TailResidue { r0: 7, first_j: 1 }] },
            ],
            index_weight: true,
            coeff_scale: frac(1, 50),
        }),
        6 => Ok(Template {
            sides: vec![Side {
                a: 1,
                tails: vec![TailResidue { r0: 1, first_j: 1 }, TailResidue { r0: 5, first_j: 0 }],
            }],
            index_weight: false,
            coeff_scale: frac(1, 18),
        }),
        _ => Err(invalid(format!("explicit bounds are available for c = 10 and c = 6, not c = {c}"))),
    }
}

/// Human-readable description of how the per-side components are combined.
pub fn bound_assembly(c: i64) -> Result<String> {
    let t = template(c)?;
    let sides: Vec<String> = t
        .sides
        .iter()
        .map(|s| {
            let res: Vec<String> = s.tails.iter().map(|r| r.r0.to_string()).collect();
            format!("a={} (k = {} mod {})", s.a, res.join(","), c)
        })
        .collect();
    Ok(format!(
        "dominated iff main > sum over sides [{}] of tail + coeff_U + sym_path + small_arc + O_series + O_half + \
         mordell_odd + mordell_even; coefficient sums at scale 1 (O_series) and {} (coeff_U, O_half); \
         k-sums truncated at N = floor(sqrt n); tail weight {}",
        sides.join("; "),
        t.coeff_scale,
        if t.index_weight { "sqrt(index j) as displayed" } else { "sqrt(k)" }
    ))
}

/// (2/√n)·tan(π/c)·sinh(4π√(δn)) with δ = δ_{c,1,0}: the k = 1 term.
pub fn main_bound_term(c: i64, n: u64, prec: usize) -> Result<Real> {
    let delta = leading_delta(c)?;
    let n_r = Real::from_i64(n as i64, prec);
    let arg = Real::from_i64(4, prec) * Real::pi(prec) * (Real::from_ratio(&delta, prec) * &n_r).sqrt();
    Ok(Real::from_i64(2, prec) / n_r.sqrt() * Real::tan_pi(&frac(1, c), prec) * arg.sinh())
}

fn leading_delta(c: i64) -> Result<Fraction> {
    delta_terms(1, c, 1, false)?
        .into_iter()
        .next()
        .map(|t| t.delta)
        .ok_or_else(|| invalid(format!("no growing term for c = {c}")))
}

fn rpow(x: i64, num: i64, den: i64, prec: usize) -> Real {
    Real::from_i64(x, prec).pow(&Real::from_ratio(&frac(num, den), prec))
}

/// n-independent constants of the bound suite for one modulus.
struct Constants {
    c: i64,
    prec: usize,
    template: Template,
    c1: Real,
    c_scaled: Real,
    delta: Fraction,
    /// k-sums per (side, N = ⌊√n⌋); they do not depend on n otherwise
    sums: RefCell<HashMap<(usize, i64), Rc<SideSums>>>,
}

struct SideSums {
    s_mhalf: Real,
    s_half: Real,
    s_one: Real,
    mordell_odd: Real,
    mordell_even: Real,
}

impl Constants {
    fn new(c: i64, prec: usize) -> Result<Self> {
        let template = template(c)?;
        let c1 = coeff_sum(&frac(1, 1), prec)?;
        let c_scaled = coeff_sum(&template.coeff_scale, prec)?;
        Ok(Constants { c, prec, template, c1, c_scaled, delta: leading_delta(c)?, sums: RefCell::default() })
    }

    fn side_sums(&self, side: usize, big_n: i64) -> Rc<SideSums> {
        if let Some(s) = self.sums.borrow().get(&(side, big_n)) {
            return s.clone();
        }
        let (c, p) = (self.c, self.prec);
        let sd = &self.template.sides[side];
        let ks: Vec<i64> = (1..=big_n).filter(|k| sd.tails.iter().any(|r| r.r0 == k % c)).collect();
        let sum = |f: &dyn Fn(i64) -> Real| ks.iter().fold(Real::zero(p), |acc, &k| acc + f(k));
        let frac_ac = frac(sd.a, c);
        // Mordell-integral sums; 1/(4k) shift for odd k, none for even k
        let mut odd = Real::zero(p);
        for k in (1..=big_n).step_by(2) {
            let inner = (1..=k).fold(Real::zero(p), |acc, nu| {
                acc + Real::one(p) / min_dist(&frac(4 * nu - 1, 4 * k), &frac_ac, p)
            });
            odd = odd + rpow(k, -3, 2, p) * inner;
        }
        let mut even = Real::zero(p);
        for k in (2..=big_n).step_by(2).filter(|&k| !gcd_hits(k, c)) {
            let inner = (1..=k).fold(Real::zero(p), |acc, nu| acc + Real::one(p) / min_dist(&frac(nu, k), &frac_ac, p));
            even = even + rpow(k, -3, 2, p) * inner;
        }
        let out = Rc::new(SideSums {
            s_mhalf: sum(&|k| rpow(k, -1, 2, p)),
            s_half: sum(&|k| Real::from_i64(k, p).sqrt()),
            s_one: sum(&|k| Real::from_i64(k, p)),
            mordell_odd: odd,
            mordell_even: even,
        });
        self.sums.borrow_mut().insert((side, big_n), out.clone());
        out
    }
}

/// Every bound component at n for modulus c ∈ {10, 6}.
pub fn bound_report_c(c: i64, n: u64, prec: usize) -> Result<BoundReport> {
    report_with(&Constants::new(c, prec)?, n)
}

fn report_with(consts: &Constants, n: u64) -> Result<BoundReport> {
    if n == 0 {
        return Err(invalid("bounds need n >= 1"));
    }
    let (c, p, t) = (consts.c, consts.prec, &consts.template);
    let big_n = n.sqrt() as i64;
    let ni = n as i64;
    let pi = Real::pi(p);
    let sqrt_n = Real::from_i64(ni, p).sqrt();
    let e2pi = (Real::from_i64(2, p) * &pi).exp();
    let (c1, c_scaled, delta) = (&consts.c1, &consts.c_scaled, &consts.delta);
    let growth = Real::from_i64(4, p) * &pi * (Real::from_ratio(delta, p) * Real::from_i64(ni, p)).sqrt();
    let sqrt_c = Real::from_i64(c, p).sqrt();
    let four_over_sqrt_n = Real::from_i64(4, p) / &sqrt_n;
    let two = Real::from_i64(2, p);
    let five = Real::from_i64(5, p);

    // shared k-sums that do not depend on the side
    let small_k: Vec<i64> = (1..=big_n / c).collect();
    let s_small: Real = small_k.iter().fold(Real::zero(p), |acc, &k| acc + rpow(k, -1, 2, p));

    let mut sides = Vec::new();
    for (si, side) in t.sides.iter().enumerate() {
        let residues: Vec<i64> = side.tails.iter().map(|r| r.r0).collect();

        let mut tail = Real::zero(p);
        for tr in &side.tails {
            let mut j = tr.first_j;
            while c * j + tr.r0 <= big_n {
                let k = c * j + tr.r0;
                let w = if t.index_weight { Real::from_i64(j, p).sqrt() } else { Real::from_i64(k, p).sqrt() };
                tail = tail + &four_over_sqrt_n * w * (&growth / Real::from_i64(k, p)).sinh();
                j += 1;
            }
        }
        let sums = consts.side_sums(si, big_n);
        let (s_mhalf, s_half, s_one) = (&sums.s_mhalf, &sums.s_half, &sums.s_one);

        let coeff_u = two.sqrt() * &e2pi * c_scaled * s_mhalf * &two;
        let sym = &two * (&two * &pi + &pi / Real::from_i64(8, p)).exp() / &sqrt_n * s_half;
        let arc = Real::from_i64(8, p) * &pi * (&two * &pi + &pi / Real::from_i64(16, p)).exp()
            / rpow(ni, 3, 4, p)
            * s_one;
        let o_series = &two * &e2pi / &sqrt_c * &s_small * (Real::one(p) + c1);
        let o_half = &two * &e2pi * c_scaled * s_mhalf;

        let mordell_odd = &two * &e2pi * pi.sqrt() / &five * &sums.mordell_odd;
        let extra = &s_small / (Real::from_i64(c, p) * &sqrt_c);
        let mordell_even = &two * &e2pi * (&two * &pi).sqrt() / &five * (&sums.mordell_even + extra);

        sides.push(SideBounds {
            a: side.a,
            residues,
            components: vec![
                ("tail", tail),
                ("coeff_U", coeff_u),
                ("sym_path", sym),
                ("small_arc", arc),
                ("O_series", o_series),
                ("O_half", o_half),
                ("mordell_odd", mordell_odd),
                ("mordell_even", mordell_even),
            ],
        });
    }
    let total = sides.iter().fold(Real::zero(p), |acc, s| acc + s.total());
    let main = main_bound_term(c, n, p)?;
    let dominated = main.cmp_value(&total).is_gt();
    Ok(BoundReport { c, n, main, sides, total, dominated })
}

/// Even k sharing the odd prime factor of c (5 | k for c = 10, 3 | k for
/// c = 6) put a pole into the even Mordell sum and are excluded.
fn gcd_hits(k: i64, c: i64) -> bool {
    let odd = {
        let mut m = c;
        while m % 2 == 0 {
            m /= 2;
        }
        m
    };
    odd > 1 && k % odd == 0
}

/// min(|x + y|, |x − y|) as a real.
fn min_dist(x: &Fraction, y: &Fraction, prec: usize) -> Real {
    let d1 = (x + y).abs();
    let d2 = (x - y).abs();
    Real::from_ratio(if d1 < d2 { &d1 } else { &d2 }, prec)
}

/// c = 10 bound report (both sides a = 1 and a = 3).
pub fn bound_report(n: u64, prec: usize) -> Result<BoundReport> {
    bound_report_c(10, n, prec)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossoverReport {
    pub c: i64,
    pub crossover: u64,
    /// Points in [n₀, 4n₀] re-checked for dominance.
    pub sampled: Vec<u64>,
    pub bound_assembly: String,
}

/// Hard cap for the crossover search.
pub const CROSSOVER_CAP: u64 = 1_000_000;

/// Smallest n₀ with dominance at n₀ and at every sampled point of [n₀, 4n₀]
/// while n₀ − 1 is not dominated.
pub fn crossover_c(c: i64, prec: usize) -> Result<CrossoverReport> {
    let consts = Constants::new(c, prec)?;
    let dominated = |n: u64| -> Result<bool> { Ok(report_with(&consts, n)?.dominated) };
    let mut n = 1u64;
    while n <= CROSSOVER_CAP {
        if !dominated(n)? {
            n += 1;
            continue;
        }
        let mut sampled: Vec<u64> = (0..=32).map(|i| n + i * 3 * n / 32).collect();
        sampled.dedup();
        let mut failed = None;
        for &s in &sampled {
            if !dominated(s)? {
                failed = Some(s);
                break;
            }
        }
        match failed {
            None => {
                return Ok(CrossoverReport { c, crossover: n, sampled, bound_assembly: bound_assembly(c)? });
            }
            Some(s) => n = s + 1,
        }
    }
    Err(Error::Consistency(format!("no crossover found for c = {c} below {CROSSOVER_CAP}")))
}

pub fn crossover(prec: usize) -> Result<CrossoverReport> {
    crossover_c(10, prec)
}

/// Outcome of a coefficient-wise identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub witness: Option<usize>,
}

fn check_all(n_max: usize, t: &RankTable, mut ok_at: impl FnMut(usize) -> Result<bool>) -> Result<IdentityCheck> {
    t.check(n_max)?;
    for n in 0..=n_max {
        if !ok_at(n)? {
            return Ok(IdentityCheck { holds: false, witness: Some(n) });
        }
    }
    Ok(IdentityCheck { holds: true, witness: None })
}

/// O(ζ^a; q)[n] as a group-ring element over Z/c.
fn o_element(a: i64, c: i64, classes: &[BigInt]) -> GroupRingElt {
    let mut e = GroupRingElt::zero(c as usize);
    for (j, v) in classes.iter().enumerate() {
        e.add_term(a * j as i64, v);
    }
    e
}

/// O(ζ₁₀^a; q) = Σ(N̄(0)+N̄(1)−N̄(4)−N̄(5))qⁿ + (ζ^{2a} − ζ^{3a})·Σ(N̄(1)+N̄(2)−N̄(3)−N̄(4))qⁿ
/// for a ∈ {1,3,7,9}, checked exactly in Q(ζ₁₀) for n ≤ n_max.
pub fn zeta_relation_10(a: i64, n_max: usize, t: &RankTable) -> Result<IdentityCheck> {
    if ![1, 3, 7, 9].contains(&a) {
        return Err(invalid(format!("a = {a} must be odd and prime to 5, in 1..10")));
    }
    check_all(n_max, t, |n| {
        let v = class_vector(10, n, t)?;
        let lhs = o_element(a, 10, &v);
        let mut rhs = GroupRingElt::zero(10);
        rhs.add_term(0, &(&v[0] + &v[1] - &v[4] - &v[5]));
        let d = &v[1] + &v[2] - &v[3] - &v[4];
        rhs.add_term(2 * a, &d);
        rhs.add_term(3 * a, &-d);
        Ok(lhs.same_value(&rhs))
    })
}

/// O(ζ₆^a; q) = Σ(N̄(0,6,n)+N̄(1,6,n)−N̄(2,6,n)−N̄(3,6,n))qⁿ for a ∈ {1,5}.
pub fn zeta_relation_6(a: i64, n_max: usize, t: &RankTable) -> Result<IdentityCheck> {
    if ![1, 5].contains(&a) {
        return Err(invalid(format!("a = {a} must be 1 or 5")));
    }
    check_all(n_max, t, |n| {
        let v = class_vector(6, n, t)?;
        let lhs = o_element(a, 6, &v);
        let mut rhs = GroupRingElt::zero(6);
        rhs.add_term(0, &(&v[0] + &v[1] - &v[2] - &v[3]));
        Ok(lhs.same_value(&rhs))
    })
}

/// Weights of O(1), O(ζ₆), O(ζ₆²), O(ζ₆³) in 6·Σ N̄(j,6,n)qⁿ, j = 0..3.
pub const MAO_WEIGHTS: [[i64; 4]; 4] = [[1, 2, 2, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -2, 2, -1]];

/// All four mod-6 class decompositions, exactly in Q(ζ₆), for n ≤ n_max.
pub fn mao_decomposition(n_max: usize, t: &RankTable) -> Result<IdentityCheck> {
    check_all(n_max, t, |n| mao_row(n, t).map(|rows| rows.iter().all(|&(ok, _)| ok)))
}

/// Per class j = 0..3: whether 6·N̄(j,6,n) matches its decomposition, and
/// the decomposition's rational value (when it reduces to one).
pub fn mao_row(n: usize, t: &RankTable) -> Result<Vec<(bool, Option<BigInt>)>> {
    let v = class_vector(6, n, t)?;
    let o: Vec<GroupRingElt> = (0..4).map(|i| o_element(i, 6, &v)).collect();
    let mut out = Vec::new();
    for (j, w) in MAO_WEIGHTS.iter().enumerate() {
        let mut rhs = GroupRingElt::zero(6);
        for (oi, &wi) in o.iter().zip(w) {
            rhs = &rhs + &oi.scale(&BigInt::from(wi));
        }
        let mut lhs = GroupRingElt::zero(6);
        lhs.add_term(0, &(&v[j] * 6));
        let red = rhs.cyclotomic_reduce();
        let rational = red.iter().skip(1).all(Zero::is_zero).then(|| red[0].clone() / 6);
        out.push((lhs.same_value(&rhs), rational));
    }
    Ok(out)
}

/// Coefficient of qⁿ in O(−1; q) = Σ_m (−1)^m N̄(m,n).
pub fn minus_one_coefficient(n: usize, t: &RankTable) -> Result<BigInt> {
    let v = class_vector(2, n, t)?;
    Ok(&v[0] - &v[1])
}

/// Which rank classes an inequality compares.
#[derive(Clone, Copy, Debug)]
enum Shape {
    /// N(i)+N(j) ≥ N(k)+N(l)  (or ≤ when reversed)
    Pairs([usize; 4], bool),
    /// N(0,3) ≥ N(1,3) = N(2,3)  (≤ when reversed)
    Thirds(bool),
    /// non-increasing chain of single classes
    Chain(&'static [usize]),
    /// N(0) ≥ N(1) = N(3) ≥ N(2)
    WeiEq,
}

#[derive(Clone, Copy, Debug)]
struct Ineq {
    id: &'static str,
    aliases: &'static [&'static str],
    c: i64,
    residue3: Option<usize>,
    /// smallest index j of the argument 3j+i (the c = 6 chains hold for j ≥ 11)
    min_index: usize,
    shape: Shape,
    text: &'static str,
}

const INEQUALITIES: &[Ineq] = &[
    Ineq { id: "eq:1234", aliases: &[], c: 10, residue3: None, min_index: 0, shape: Shape::Pairs([1, 2, 3, 4], false), text: "N(1,10,n)+N(2,10,n) >= N(3,10,n)+N(4,10,n)" },
    Ineq { id: "eq:0325", aliases: &[], c: 10, residue3: None, min_index: 0, shape: Shape::Pairs([0, 3, 2, 5], false), text: "N(0,10,n)+N(3,10,n) >= N(2,10,n)+N(5,10,n)" },
    Ineq { id: "eq:0145", aliases: &[], c: 10, residue3: None, min_index: 0, shape: Shape::Pairs([0, 1, 4, 5], false), text: "N(0,10,n)+N(1,10,n) >= N(4,10,n)+N(5,10,n)" },
    Ineq { id: "eq:0123", aliases: &[], c: 6, residue3: None, min_index: 0, shape: Shape::Pairs([0, 1, 2, 3], false), text: "N(0,6,n)+N(1,6,n) >= N(2,6,n)+N(3,6,n)" },
    Ineq { id: "eq:0312", aliases: &[], c: 6, residue3: Some(0), min_index: 0, shape: Shape::Pairs([0, 3, 1, 2], false), text: "N(0,6,3n)+N(3,6,3n) >= N(1,6,3n)+N(2,6,3n)" },
    Ineq { id: "eq:0312'", aliases: &["eq:0312prime"], c: 6, residue3: Some(1), min_index: 0, shape: Shape::Pairs([0, 3, 1, 2], false), text: "N(0,6,3n+1)+N(3,6,3n+1) >= N(1,6,3n+1)+N(2,6,3n+1)" },
    Ineq { id: "eq:0312''", aliases: &["eq:0312primeprime", "eq:0312\""], c: 6, residue3: Some(2), min_index: 0, shape: Shape::Pairs([0, 3, 1, 2], true), text: "N(0,6,3n+2)+N(3,6,3n+2) <= N(1,6,3n+2)+N(2,6,3n+2)" },
    Ineq { id: "SolvedWei11", aliases: &[], c: 3, residue3: Some(0), min_index: 0, shape: Shape::Thirds(false), text: "N(0,3,3n) >= N(1,3,3n) = N(2,3,3n)" },
    Ineq { id: "SolvedWei22", aliases: &[], c: 3, residue3: Some(1), min_index: 0, shape: Shape::Thirds(false), text: "N(0,3,3n+1) >= N(1,3,3n+1) = N(2,3,3n+1)" },
    Ineq { id: "SolvedWei33", aliases: &[], c: 3, residue3: Some(2), min_index: 0, shape: Shape::Thirds(true), text: "N(0,3,3n+2) <= N(1,3,3n+2) = N(2,3,3n+2)" },
    Ineq { id: "SolvedWei1", aliases: &[], c: 6, residue3: Some(0), min_index: 11, shape: Shape::Chain(&[0, 1, 2]), text: "N(0,6,3n) >= N(1,6,3n) >= N(2,6,3n), n >= 11" },
    Ineq { id: "SolvedWei2", aliases: &[], c: 6, residue3: Some(1), min_index: 11, shape: Shape::Chain(&[0, 1, 2]), text: "N(0,6,3n+1) >= N(1,6,3n+1) >= N(2,6,3n+1), n >= 11" },
    Ineq { id: "SolvedWei3", aliases: &["Wei3"], c: 6, residue3: Some(2), min_index: 11, shape: Shape::Chain(&[1, 2, 0, 3]), text: "N(1,6,3n+2) >= N(2,6,3n+2) >= N(0,6,3n+2) >= N(3,6,3n+2), n >= 11" },
    Ineq { id: "Wei1", aliases: &[], c: 6, residue3: Some(0), min_index: 11, shape: Shape::WeiEq, text: "N(0,6,3n) >= N(1,6,3n) = N(3,6,3n) >= N(2,6,3n), n >= 11" },
    Ineq { id: "Wei2", aliases: &[], c: 6, residue3: Some(1), min_index: 11, shape: Shape::WeiEq, text: "N(0,6,3n+1) >= N(1,6,3n+1) = N(3,6,3n+1) >= N(2,6,3n+1), n >= 11" },
];

/// Canonical identifiers accepted by [`verify_inequality`].
pub fn inequality_ids() -> Vec<&'static str> {
    INEQUALITIES.iter().map(|i| i.id).collect()
}

pub fn inequality_statement(id: &str) -> Result<&'static str> {
    Ok(lookup(id)?.text)
}

fn lookup(id: &str) -> Result<&'static Ineq> {
    INEQUALITIES
        .iter()
        .find(|i| i.id == id || i.aliases.contains(&id))
        .ok_or_else(|| Error::UnknownInequality(id.to_string()))
}

fn holds(shape: Shape, v: &[BigInt]) -> bool {
    match shape {
        Shape::Pairs([i, j, k, l], reversed) => {
            let lhs = &v[i] + &v[j];
            let rhs = &v[k] + &v[l];
            if reversed {
                lhs <= rhs
            } else {
                lhs >= rhs
            }
        }
        Shape::Thirds(reversed) => {
            v[1] == v[2] && if reversed { v[0] <= v[1] } else { v[0] >= v[1] }
        }
        Shape::Chain(order) => order.windows(2).all(|w| v[w[0]] >= v[w[1]]),
        Shape::WeiEq => v[0] >= v[1] && v[1] == v[3] && v[3] >= v[2],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub id: String,
    pub statement: String,
    /// Inclusive range of arguments n of N̄(·,·,n).
    pub range: [usize; 2],
    /// Arguments inside the range the statement applies to.
    pub checked: usize,
    pub violations: Vec<usize>,
    /// Crossover of the explicit bounds backing the statement for large n,
    /// when one is implemented for its modulus.
    pub crossover_used: Option<u64>,
    pub bound_assembly: Option<String>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Modulus of the explicit bounds that cover an inequality for large n, if
/// any are implemented: c = 10 for the tenths inequalities, c = 6 for eq:0123.
pub fn bound_modulus(id: &str) -> Result<Option<i64>> {
    let ineq = lookup(id)?;
    Ok(match ineq.c {
        10 => Some(10),
        6 if matches!(ineq.shape, Shape::Pairs(_, _)) && ineq.residue3.is_none() => Some(6),
        _ => None,
    })
}

/// Exact check of an inequality for every applicable argument in [n_lo, n_hi].
pub fn verify_inequality(id: &str, n_lo: usize, n_hi: usize, t: &RankTable) -> Result<InequalityReport> {
    verify_inequality_with(id, n_lo, n_hi, t, None)
}

/// As [`verify_inequality`], reusing an already computed crossover.
pub fn verify_inequality_with(
    id: &str,
    n_lo: usize,
    n_hi: usize,
    t: &RankTable,
    crossover: Option<&CrossoverReport>,
) -> Result<InequalityReport> {
    let ineq = lookup(id)?;
    if n_lo > n_hi {
        return Err(invalid(format!("empty range {n_lo}..={n_hi}")));
    }
    t.check(n_hi)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for n in n_lo..=n_hi {
        if let Some(r) = ineq.residue3 {
            if n % 3 != r || n / 3 < ineq.min_index {
                continue;
            }
        }
        checked += 1;
        let v = class_vector(ineq.c, n, t)?;
        if !holds(ineq.shape, &v) {
            violations.push(n);
        }
    }
    let (crossover_used, bound_assembly) = match bound_modulus(id)? {
        Some(c) => {
            let x = match crossover {
                Some(x) if x.c == c => x.clone(),
                _ => crossover_c(c, 64)?,
            };
            (Some(x.crossover), Some(x.bound_assembly))
        }
        None => (None, None),
    };
    Ok(InequalityReport {
        id: ineq.id.to_string(),
        statement: ineq.text.to_string(),
        range: [n_lo, n_hi],
        checked,
        violations,
        crossover_used,
        bound_assembly,
    })
}
