//! Exact verification of the identities satisfied by `alpha_n(t)`,
//! `beta_n(t)` and `r_n(t)` for even multiplicity `gamma = 2K`.
//!
//! Every identity is written once as a residual `lhs - rhs` over a generic
//! [`IdentityScalar`]. Over [`RatFn`] the residual is reduced and passes
//! exactly when its numerator is the zero polynomial; over [`Rational`] the
//! same formula gives pointwise witnesses at probe values of `t`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, RatFn, Rational};
use crate::error::{Error, Result};
use crate::ortho::RecurrenceTable;

/// Field operations needed to state an identity.
pub trait IdentityScalar: Clone {
    fn constant(c: Rational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;

    fn int(v: i64) -> Self {
        Self::constant(Rational::from(v))
    }

    fn scale(&self, c: Rational) -> Self {
        self.mul(&Self::constant(c))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }
}

impl IdentityScalar for RatFn {
    fn constant(c: Rational) -> Self {
        RatFn::constant(c)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
}

impl IdentityScalar for Rational {
    fn constant(c: Rational) -> Self {
        c
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    S1Diff,
    S2Diff,
    TodaBeta,
    TodaAlpha,
    TodaMolecule,
    RSum,
    RSquare,
    RBackstep,
    RFlow,
    RElim,
    Piv,
    PivCanonical,
    LadderA,
    LadderB,
}

impl IdentityId {
    pub const ALL: [IdentityId; 14] = [
        IdentityId::S1Diff,
        IdentityId::S2Diff,
        IdentityId::TodaBeta,
        IdentityId::TodaAlpha,
        IdentityId::TodaMolecule,
        IdentityId::RSum,
        IdentityId::RSquare,
        IdentityId::RBackstep,
        IdentityId::RFlow,
        IdentityId::RElim,
        IdentityId::Piv,
        IdentityId::PivCanonical,
        IdentityId::LadderA,
        IdentityId::LadderB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::S1Diff => "S1_DIFF",
            IdentityId::S2Diff => "S2_DIFF",
            IdentityId::TodaBeta => "TODA_BETA",
            IdentityId::TodaAlpha => "TODA_ALPHA",
            IdentityId::TodaMolecule => "TODA_MOLECULE",
            IdentityId::RSum => "R_SUM",
            IdentityId::RSquare => "R_SQUARE",
            IdentityId::RBackstep => "R_BACKSTEP",
            IdentityId::RFlow => "R_FLOW",
            IdentityId::RElim => "R_ELIM",
            IdentityId::Piv => "PIV",
            IdentityId::PivCanonical => "PIV_CANONICAL",
            IdentityId::LadderA => "LADDER_A",
            IdentityId::LadderB => "LADDER_B",
        }
    }

    /// The relation being checked, in plain notation.
    pub fn relation(self) -> &'static str {
        match self {
            IdentityId::S1Diff => "beta[n+1] + beta[n] = n + 1/2 + gamma/2 + alpha[n] (t - alpha[n])",
            IdentityId::S2Diff => {
                "(t - alpha[n]) (beta[n+1] - beta[n] - 1/2) = beta[n+1] alpha[n+1] - beta[n] alpha[n-1]"
            }
            IdentityId::TodaBeta => "d/dt beta[n] = 2 beta[n] (alpha[n-1] - alpha[n])",
            IdentityId::TodaAlpha => "d/dt alpha[n] = 2 (beta[n] - beta[n+1]) + 1",
            IdentityId::TodaMolecule => "(d/dt)^2 log D[n] = 4 D[n+1] D[n-1] / D[n]^2 - 2n",
            IdentityId::RSum => "(r[n+1] + r[n]) / 2 = (t - alpha[n]) alpha[n]",
            IdentityId::RSquare => "r[n]^2 = 2 (n + r[n] + gamma/2) alpha[n] alpha[n-1] + gamma^2/4",
            IdentityId::RBackstep => "alpha[n-1] = alpha[n] + (d/dt r[n]) / (2 (n + r[n] + gamma/2))",
            IdentityId::RFlow => "d/dt alpha[n] = r[n] - r[n+1]",
            IdentityId::RElim => "r[n] = alpha[n] (t - alpha[n]) + (d/dt alpha[n]) / 2",
            IdentityId::Piv => {
                "a'' = a'^2/(2a) + 6a^3 - 8t a^2 + 2(t^2 - gamma - 2n - 1) a - gamma^2/(2a), a = alpha[n]"
            }
            IdentityId::PivCanonical => {
                "y'' = y'^2/(2y) + 3/2 y^3 + 4s y^2 + 2(s^2 - a) y + b/y, y(s) = 2 alpha[n](-s), a = 2n+1+gamma, b = -2 gamma^2"
            }
            IdentityId::LadderA => {
                "a_n(z) ~ 2alpha/z + (gamma + 2t alpha)/z^2 + (gamma t + gamma alpha + 2t^2 alpha)/z^3"
            }
            IdentityId::LadderB => {
                "b_n(z) ~ (2beta - n)/z + t(2beta - n)/z^2 + (gamma beta + t^2 (2beta - n))/z^3"
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The identity does not apply at this index (recorded, not a failure).
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t0: Rational,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub relation: String,
    #[serde(rename = "K")]
    pub k: u32,
    pub n: usize,
    pub status: Status,
    /// Numerator of the reduced residual; zero exactly when the check passes.
    pub residual: Poly,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    fn from_residual(identity: IdentityId, k: u32, n: usize, residual: Poly) -> Self {
        let status = if residual.is_zero() { Status::Pass } else { Status::Fail };
        VerificationReport {
            identity,
            relation: identity.relation().to_string(),
            k,
            n,
            status,
            residual,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn skipped(identity: IdentityId, k: u32, n: usize, note: impl Into<String>) -> Self {
        VerificationReport {
            identity,
            relation: identity.relation().to_string(),
            k,
            n,
            status: Status::Skipped,
            residual: Poly::zero(),
            witnesses: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Largest `|value|` among the witnesses, if any were computed.
    pub fn max_abs_witness(&self) -> Option<Rational> {
        self.witnesses.iter().map(|w| w.value.abs()).max()
    }
}

/// Values of the recurrence data (and their `t`-derivatives) in some field.
#[derive(Debug, Clone)]
pub struct Snapshot<F> {
    pub t: F,
    pub alpha: Vec<F>,
    pub dalpha: Vec<F>,
    pub ddalpha: Vec<F>,
    pub beta: Vec<F>,
    pub dbeta: Vec<F>,
    pub r: Vec<F>,
    pub dr: Vec<F>,
    pub dhat: Vec<F>,
    pub ddhat: Vec<F>,
    pub dddhat: Vec<F>,
    /// `y(s) = 2 alpha_n(-s)` and its first two derivatives in `s`.
    pub y: Vec<F>,
    pub dy: Vec<F>,
    pub ddy: Vec<F>,
}

impl Snapshot<RatFn> {
    pub fn symbolic(tbl: &RecurrenceTable) -> Self {
        let derive = |v: &[RatFn]| v.iter().map(RatFn::derivative).collect::<Vec<_>>();
        let dalpha = derive(&tbl.alpha);
        let ddalpha = derive(&dalpha);
        let dhat: Vec<RatFn> = tbl.dhat.iter().cloned().map(RatFn::from).collect();
        let ddhat = derive(&dhat);
        let dddhat = derive(&ddhat);
        let y: Vec<RatFn> = tbl.alpha.iter().map(|a| a.reflect().scale(&Rational::from(2))).collect();
        let dy = derive(&y);
        let ddy = derive(&dy);
        Snapshot {
            t: RatFn::var(),
            dbeta: derive(&tbl.beta),
            dr: derive(&tbl.r),
            alpha: tbl.alpha.clone(),
            dalpha,
            ddalpha,
            beta: tbl.beta.clone(),
            r: tbl.r.clone(),
            dhat,
            ddhat,
            dddhat,
            y,
            dy,
            ddy,
        }
    }

    /// Pointwise values at `t0`; fails if any entry has a pole there.
    pub fn at(&self, t0: &Rational) -> Result<Snapshot<Rational>> {
        let ev = |v: &[RatFn]| v.iter().map(|f| f.eval(t0)).collect::<Result<Vec<_>>>();
        Ok(Snapshot {
            t: t0.clone(),
            alpha: ev(&self.alpha)?,
            dalpha: ev(&self.dalpha)?,
            ddalpha: ev(&self.ddalpha)?,
            beta: ev(&self.beta)?,
            dbeta: ev(&self.dbeta)?,
            r: ev(&self.r)?,
            dr: ev(&self.dr)?,
            dhat: ev(&self.dhat)?,
            ddhat: ev(&self.ddhat)?,
            dddhat: ev(&self.dddhat)?,
            y: ev(&self.y)?,
            dy: ev(&self.dy)?,
            ddy: ev(&self.ddy)?,
        })
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// `lhs - rhs` of the identity `id` at degree `n` (not the ladder checks).
pub fn residual<F: IdentityScalar>(id: IdentityId, s: &Snapshot<F>, k: u32, n: usize) -> Result<F> {
    let gamma = F::int(2 * k as i64);
    let nn = F::int(n as i64);
    let a = |i: usize| &s.alpha[i];
    let b = |i: usize| &s.beta[i];
    let r = |i: usize| &s.r[i];
    match id {
        IdentityId::S1Diff => {
            let lhs = b(n + 1).add(b(n));
            let rhs = nn.add(&F::constant(half())).add(&gamma.scale(half())).add(&a(n).mul(&s.t.sub(a(n))));
            Ok(lhs.sub(&rhs))
        }
        IdentityId::S2Diff => {
            let lhs = s.t.sub(a(n)).mul(&b(n + 1).sub(b(n)).sub(&F::constant(half())));
            let rhs = b(n + 1).mul(a(n + 1)).sub(&b(n).mul(a(n - 1)));
            Ok(lhs.sub(&rhs))
        }
        IdentityId::TodaBeta => {
            let rhs = b(n).mul(&a(n - 1).sub(a(n))).scale(Rational::from(2));
            Ok(s.dbeta[n].sub(&rhs))
        }
        IdentityId::TodaAlpha => {
            let rhs = b(n).sub(b(n + 1)).scale(Rational::from(2)).add(&F::int(1));
            Ok(s.dalpha[n].sub(&rhs))
        }
        IdentityId::TodaMolecule => {
            let (d, d1, d2) = (&s.dhat[n], &s.ddhat[n], &s.dddhat[n]);
            let lhs = d2.mul(d).sub(&d1.square()).div(&d.square())?;
            let rhs = s.dhat[n + 1]
                .mul(&s.dhat[n - 1])
                .scale(Rational::from(4))
                .div(&d.square())?
                .sub(&nn.scale(Rational::from(2)));
            Ok(lhs.sub(&rhs))
        }
        IdentityId::RSum => {
            let lhs = r(n + 1).add(r(n)).scale(half());
            Ok(lhs.sub(&s.t.sub(a(n)).mul(a(n))))
        }
        IdentityId::RSquare => {
            let factor = nn.add(r(n)).add(&gamma.scale(half())).scale(Rational::from(2));
            let rhs = factor.mul(a(n)).mul(a(n - 1)).add(&gamma.square().scale(Rational::new(1, 4)));
            Ok(r(n).square().sub(&rhs))
        }
        IdentityId::RBackstep => {
            let denom = nn.add(r(n)).add(&gamma.scale(half())).scale(Rational::from(2));
            let rhs = a(n).add(&s.dr[n].div(&denom)?);
            Ok(a(n - 1).sub(&rhs))
        }
        IdentityId::RFlow => Ok(s.dalpha[n].sub(&r(n).sub(r(n + 1)))),
        IdentityId::RElim => {
            let rhs = a(n).mul(&s.t.sub(a(n))).add(&s.dalpha[n].scale(half()));
            Ok(r(n).sub(&rhs))
        }
        IdentityId::Piv => piv_residual(a(n), &s.dalpha[n], &s.ddalpha[n], &s.t, &gamma, n),
        IdentityId::PivCanonical => {
            let (y, y1, y2) = (&s.y[n], &s.dy[n], &s.ddy[n]);
            if y.is_zero() {
                return Err(Error::PivUndefined);
            }
            let s_var = s.t.clone();
            let a_param = F::int(2 * n as i64 + 1).add(&gamma);
            let b_param = gamma.square().scale(Rational::from(-2));
            let rhs = y1
                .square()
                .div(&y.scale(Rational::from(2)))?
                .add(&y.square().mul(y).scale(Rational::new(3, 2)))
                .add(&s_var.mul(&y.square()).scale(Rational::from(4)))
                .add(&s_var.square().sub(&a_param).mul(y).scale(Rational::from(2)))
                .add(&b_param.div(y)?);
            Ok(y2.sub(&rhs))
        }
        IdentityId::LadderA | IdentityId::LadderB => Err(Error::InvalidArgument(
            "ladder expansions are checked coefficient-wise, not as a single residual".into(),
        )),
    }
}

/// Residual of the fourth Painleve equation satisfied by `alpha_n`, given
/// the value and derivatives of `alpha_n` and the parameters `gamma`, `n`.
pub fn piv_residual<F: IdentityScalar>(alpha: &F, dalpha: &F, ddalpha: &F, t: &F, gamma: &F, n: usize) -> Result<F> {
    if alpha.is_zero() {
        return Err(Error::PivUndefined);
    }
    let two_alpha = alpha.scale(Rational::from(2));
    let coef = t.square().sub(gamma).sub(&F::int(2 * n as i64 + 1));
    let rhs = dalpha
        .square()
        .div(&two_alpha)?
        .add(&alpha.square().mul(alpha).scale(Rational::from(6)))
        .sub(&t.mul(&alpha.square()).scale(Rational::from(8)))
        .add(&coef.mul(alpha).scale(Rational::from(2)))
        .sub(&gamma.square().div(&two_alpha)?);
    Ok(ddalpha.sub(&rhs))
}

/// Exact verifier bound to one recurrence table.
pub struct Verifier<'a> {
    tbl: &'a RecurrenceTable,
    symbolic: Snapshot<RatFn>,
}

/// Default probe points for witnesses.
pub fn default_probes() -> Vec<Rational> {
    vec![Rational::new(-3, 2), Rational::new(-1, 2), Rational::new(1, 3), Rational::one(), Rational::new(5, 2)]
}

impl<'a> Verifier<'a> {
    pub fn new(tbl: &'a RecurrenceTable) -> Self {
        Verifier { tbl, symbolic: Snapshot::symbolic(tbl) }
    }

    pub fn table(&self) -> &RecurrenceTable {
        self.tbl
    }

    fn need(&self, n: usize, top: usize) -> Result<()> {
        if top > self.tbl.n_max {
            return Err(Error::IndexOutOfRange { index: top, max: self.tbl.n_max });
        }
        let _ = n;
        Ok(())
    }

    fn need_positive(&self, id: IdentityId, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument(format!("{} references index n-1 and needs n >= 1", id.name())));
        }
        Ok(())
    }

    fn check(&self, id: IdentityId, n: usize) -> Result<VerificationReport> {
        let res = residual(id, &self.symbolic, self.tbl.k, n)?;
        Ok(VerificationReport::from_residual(id, self.tbl.k, n, res.num().clone()))
    }

    pub fn s1(&self, n: usize) -> Result<VerificationReport> {
        self.need(n, n + 1)?;
        self.check(IdentityId::S1Diff, n)
    }

    pub fn s2(&self, n: usize) -> Result<VerificationReport> {
        self.need_positive(IdentityId::S2Diff, n)?;
        self.need(n, n + 1)?;
        self.check(IdentityId::S2Diff, n)
    }

    pub fn toda_beta(&self, n: usize) -> Result<VerificationReport> {
        self.need_positive(IdentityId::TodaBeta, n)?;
        self.need(n, n)?;
        self.check(IdentityId::TodaBeta, n)
    }

    pub fn toda_alpha(&self, n: usize) -> Result<VerificationReport> {
        self.need(n, n + 1)?;
        self.check(IdentityId::TodaAlpha, n)
    }

    /// Both Toda flows at `n`; the beta flow is recorded as skipped at `n = 0`.
    pub fn toda(&self, n: usize) -> Result<Vec<VerificationReport>> {
        let beta = if n == 0 {
            VerificationReport::skipped(IdentityId::TodaBeta, self.tbl.k, 0, "needs alpha[n-1]; starts at n = 1")
        } else {
            self.toda_beta(n)?
        };
        Ok(vec![beta, self.toda_alpha(n)?])
    }

    pub fn toda_molecule(&self, n: usize) -> Result<VerificationReport> {
        self.need_positive(IdentityId::TodaMolecule, n)?;
        self.need(n, n)?;
        self.check(IdentityId::TodaMolecule, n)
    }

    /// The five relations for `r_n`. At `n = 0` the two relations that
    /// involve `alpha[n-1]` are recorded as skipped.
    pub fn r_chain(&self, n: usize) -> Result<Vec<VerificationReport>> {
        self.need(n, n + 1)?;
        let k = self.tbl.k;
        let mut out = vec![self.check(IdentityId::RSum, n)?];
        if n == 0 {
            out.push(VerificationReport::skipped(IdentityId::RSquare, k, 0, "needs alpha[n-1]; starts at n = 1"));
            out.push(VerificationReport::skipped(IdentityId::RBackstep, k, 0, "n + r[n] + gamma/2 vanishes at n = 0"));
        } else {
            out.push(self.check(IdentityId::RSquare, n)?);
            out.push(self.r_backstep(n)?);
        }
        out.push(self.check(IdentityId::RFlow, n)?);
        out.push(self.check(IdentityId::RElim, n)?);
        Ok(out)
    }

    pub fn r_backstep(&self, n: usize) -> Result<VerificationReport> {
        self.need(n, n)?;
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        self.check(IdentityId::RBackstep, n)
    }

    pub fn piv(&self, n: usize) -> Result<VerificationReport> {
        self.need(n, n)?;
        self.check(IdentityId::Piv, n)
    }

    /// The canonical form; the report note carries the parameters `(a, b)`.
    pub fn piv_canonical(&self, n: usize) -> Result<VerificationReport> {
        self.need(n, n)?;
        let mut rep = self.check(IdentityId::PivCanonical, n)?;
        let (a, b) = canonical_piv_params(self.tbl.k, n);
        rep.note = Some(format!("a = {a}, b = {b}"));
        Ok(rep)
    }

    /// Compares the first three Laurent coefficients of `a_n`, `b_n` with
    /// their closed forms. The residual is the first mismatching
    /// coefficient difference (zero when all agree).
    pub fn ladder(&self, n: usize) -> Result<Vec<VerificationReport>> {
        self.need(n, n)?;
        let (expect_a, expect_b) = self.ladder_closed_forms(n);
        let lc = self.tbl.ladder_coeffs(n, 3)?;
        let k = self.tbl.k;
        let compare = |id: IdentityId, got: &[RatFn], expect: &[RatFn]| {
            let mut residual = Poly::zero();
            let mut bad = Vec::new();
            for (j, (g, e)) in got.iter().zip(expect).enumerate() {
                let d = g - e;
                if !d.is_zero() {
                    if residual.is_zero() {
                        residual = d.num().clone();
                    }
                    bad.push(j + 1);
                }
            }
            let mut rep = VerificationReport::from_residual(id, k, n, residual);
            if !bad.is_empty() {
                rep.note = Some(format!("mismatch at z^-{bad:?}"));
            }
            rep
        };
        Ok(vec![
            compare(IdentityId::LadderA, &lc.a_coeffs, &expect_a),
            compare(IdentityId::LadderB, &lc.b_coeffs, &expect_b),
        ])
    }

    fn ladder_closed_forms(&self, n: usize) -> (Vec<RatFn>, Vec<RatFn>) {
        let t = RatFn::var();
        let gamma = RatFn::constant(Rational::from(self.tbl.gamma() as i64));
        let a = &self.tbl.alpha[n];
        let b = &self.tbl.beta[n];
        let two = Rational::from(2);
        let t2 = &t * &t;
        let a_forms = vec![
            a.scale(&two),
            &gamma + &(&t * a).scale(&two),
            &(&(&gamma * &t) + &(&gamma * a)) + &(&t2 * a).scale(&two),
        ];
        let c = &b.scale(&two) - &RatFn::constant(Rational::from(n as i64));
        let b_forms = vec![c.clone(), &t * &c, &(&gamma * b) + &(&t2 * &c)];
        (a_forms, b_forms)
    }

    /// Evaluates the residual of `id` pointwise at each probe, skipping
    /// probes where an input has a pole.
    pub fn witnesses(&self, id: IdentityId, n: usize, probes: &[Rational]) -> Vec<Witness> {
        let ladder = match id {
            IdentityId::LadderA | IdentityId::LadderB => match self.ladder_pairs(id, n) {
                Ok(pairs) => Some(pairs),
                Err(_) => return Vec::new(),
            },
            _ => None,
        };
        probes
            .iter()
            .filter_map(|t0| {
                let value = match &ladder {
                    Some(pairs) => ladder_witness(pairs, t0),
                    None => self.symbolic.at(t0).and_then(|s| residual(id, &s, self.tbl.k, n)),
                };
                value.ok().map(|value| Witness { t0: t0.clone(), value })
            })
            .collect()
    }

    /// Computed and closed-form Laurent coefficients, paired.
    fn ladder_pairs(&self, id: IdentityId, n: usize) -> Result<Vec<(RatFn, RatFn)>> {
        let lc = self.tbl.ladder_coeffs(n, 3)?;
        let (ea, eb) = self.ladder_closed_forms(n);
        let (got, expect) = if id == IdentityId::LadderA { (lc.a_coeffs, ea) } else { (lc.b_coeffs, eb) };
        Ok(got.into_iter().zip(expect).collect())
    }

    /// Runs every identity that applies at `n`, recording boundary cases as
    /// skipped. Indices past the table's range are omitted.
    pub fn all_at(&self, n: usize) -> Result<Vec<VerificationReport>> {
        let k = self.tbl.k;
        let top = self.tbl.n_max;
        let mut out = Vec::new();
        let boundary = |id: IdentityId| VerificationReport::skipped(id, k, n, "references index n-1; starts at n = 1");

        if n < top {
            out.push(self.s1(n)?);
            out.push(if n == 0 { boundary(IdentityId::S2Diff) } else { self.s2(n)? });
            out.extend(self.toda(n)?);
            out.extend(self.r_chain(n)?);
        }
        if n <= top {
            out.push(if n == 0 { boundary(IdentityId::TodaMolecule) } else { self.toda_molecule(n)? });
            if k == 0 {
                out.push(VerificationReport::skipped(
                    IdentityId::Piv,
                    k,
                    n,
                    "alpha vanishes identically for gamma = 0",
                ));
                out.push(VerificationReport::skipped(
                    IdentityId::PivCanonical,
                    k,
                    n,
                    "alpha vanishes identically for gamma = 0",
                ));
            } else {
                out.push(self.piv(n)?);
                out.push(self.piv_canonical(n)?);
            }
            out.extend(self.ladder(n)?);
        }
        Ok(out)
    }
}

fn ladder_witness(pairs: &[(RatFn, RatFn)], t0: &Rational) -> Result<Rational> {
    let mut worst = Rational::zero();
    for (g, e) in pairs {
        let d = (&g.eval(t0)? - &e.eval(t0)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// `(a, b) = (2n + 1 + 2K, -8K^2)`.
pub fn canonical_piv_params(k: u32, n: usize) -> (i64, i64) {
    let k = k as i64;
    (2 * n as i64 + 1 + 2 * k, -8 * k * k)
}

pub fn verify_s1(tbl: &RecurrenceTable, n: usize) -> Result<VerificationReport> {
    Verifier::new(tbl).s1(n)
}

pub fn verify_s2(tbl: &RecurrenceTable, n: usize) -> Result<VerificationReport> {
    Verifier::new(tbl).s2(n)
}

pub fn verify_toda(tbl: &RecurrenceTable, n: usize) -> Result<Vec<VerificationReport>> {
    Verifier::new(tbl).toda(n)
}

pub fn verify_toda_molecule(tbl: &RecurrenceTable, n: usize) -> Result<VerificationReport> {
    Verifier::new(tbl).toda_molecule(n)
}

pub fn verify_r_chain(tbl: &RecurrenceTable, n: usize) -> Result<Vec<VerificationReport>> {
    Verifier::new(tbl).r_chain(n)
}

pub fn verify_piv(tbl: &RecurrenceTable, n: usize) -> Result<VerificationReport> {
    Verifier::new(tbl).piv(n)
}

pub fn verify_piv_canonical(tbl: &RecurrenceTable, n: usize) -> Result<VerificationReport> {
    Verifier::new(tbl).piv_canonical(n)
}

pub fn verify_ladder_expansions(tbl: &RecurrenceTable, n: usize) -> Result<Vec<VerificationReport>> {
    Verifier::new(tbl).ladder(n)
}

/// Every identity for every `n` the table supports.
pub fn verify_table(tbl: &RecurrenceTable) -> Result<Vec<VerificationReport>> {
    let v = Verifier::new(tbl);
    let mut out = Vec::new();
    for n in 0..=tbl.n_max {
        out.extend(v.all_at(n)?);
    }
    out.sort_by_key(|r| (r.identity, r.k, r.n));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::recurrence_table;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn s1_k1_n0() {
        let tbl = recurrence_table(1, 1).unwrap();
        let rep = verify_s1(&tbl, 0).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(verify_s1(&tbl, 1).is_err());
    }

    #[test]
    fn s2_rejects_n0() {
        let tbl = recurrence_table(1, 2).unwrap();
        assert!(verify_s2(&tbl, 0).is_err());
        assert!(verify_s2(&tbl, 1).unwrap().passed());
    }

    #[test]
    fn toda_alpha_k1_n0_hand_value() {
        let tbl = recurrence_table(1, 1).unwrap();
        let expect = RatFn::new(Poly::from_ints(&[-2, 0, 4]), Poly::from_ints(&[1, 0, 2]).pow(2)).unwrap();
        assert_eq!(tbl.alpha[0].derivative(), expect);
        let one_minus = &RatFn::one() - &tbl.beta[1].scale(&Rational::from(2));
        assert_eq!(expect, one_minus);
        let reps = verify_toda(&tbl, 0).unwrap();
        assert_eq!(reps[0].status, Status::Skipped);
        assert!(reps[1].passed());
    }

    #[test]
    fn r_sum_k1_n0_hand_value() {
        let tbl = recurrence_table(1, 1).unwrap();
        let sum = (&tbl.r[1] + &tbl.r[0]).scale(&q(1, 2));
        // -2t^2 (3 + 2t^2) / (1 + 2t^2)^2
        let expect = RatFn::new(Poly::from_ints(&[0, 0, -6, 0, -4]), Poly::from_ints(&[1, 0, 2]).pow(2)).unwrap();
        assert_eq!(sum, expect);
        let reps = verify_r_chain(&tbl, 0).unwrap();
        assert_eq!(reps.len(), 5);
        assert!(reps.iter().all(|r| r.status != Status::Fail));
    }

    #[test]
    fn piv_k1_n0_spot_value() {
        let tbl = recurrence_table(1, 1).unwrap();
        let v = Verifier::new(&tbl);
        let s = v.symbolic.at(&q(1, 1)).unwrap();
        assert_eq!(s.ddalpha[0], q(8, 27));
        let rep = v.piv(0).unwrap();
        assert!(rep.passed());
        let w = v.witnesses(IdentityId::Piv, 0, &default_probes());
        assert_eq!(w.len(), 5);
        assert!(w.iter().all(|w| w.value.is_zero()));
    }

    #[test]
    fn piv_undefined_for_gamma_zero() {
        let tbl = recurrence_table(0, 2).unwrap();
        assert_eq!(verify_piv(&tbl, 1), Err(Error::PivUndefined));
        assert_eq!(verify_piv_canonical(&tbl, 1), Err(Error::PivUndefined));
    }

    #[test]
    fn canonical_parameters() {
        assert_eq!(canonical_piv_params(1, 0), (3, -8));
        assert_eq!(canonical_piv_params(2, 1), (7, -32));
        let tbl = recurrence_table(2, 1).unwrap();
        let rep = verify_piv_canonical(&tbl, 1).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.note.as_deref(), Some("a = 7, b = -32"));
    }

    #[test]
    fn hermite_analog() {
        let tbl = recurrence_table(0, 4).unwrap();
        let reps = verify_table(&tbl).unwrap();
        assert!(reps.iter().all(|r| !r.failed()), "{reps:#?}");
        assert!(reps.iter().any(|r| r.passed()));
    }

    #[test]
    fn perturbed_data_fails() {
        let mut tbl = recurrence_table(1, 3).unwrap();
        tbl.beta[2] = &tbl.beta[2] + &RatFn::constant(q(1, 100));
        let v = Verifier::new(&tbl);
        assert!(v.s1(1).unwrap().failed());
        assert!(v.s1(2).unwrap().failed());
        assert!(v.s1(0).unwrap().passed());
    }

    #[test]
    fn report_serializes_with_identity_names() {
        let tbl = recurrence_table(1, 1).unwrap();
        let rep = verify_s1(&tbl, 0).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["identity"], "S1_DIFF");
        assert_eq!(json["status"], "pass");
        assert_eq!(json["residual"], serde_json::json!([]));
    }
}
