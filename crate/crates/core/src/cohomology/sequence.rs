//! The long exact sequence attached to column `p` of `E_1`:
//!
//! ```text
//! 0 → H^0 → E_1^{p,p} → 0 → H^1 → E_1^{p,p+1} → H^0 → H^2 → …
//!   → C^{n-p} → E_1^{p,n} → C^{n-p-1} → H^{n+p+1} → 0
//! ```
//!
//! with `φ: [ω] ↦ [⊤^p ω]`, `ψ: [x] ↦ [η]` where `⊤^{p+1} η = dx`,
//! `τ: [η] ↦ [⊤η]` between rows, and `[η] ↦ [⊤^{p+1} η]` at the right end.

use num_traits::Zero;
use rand::Rng;

use super::{c_space, random_element, DeRham};
use crate::algebra::{Form, LinearSolver, Matrix, Quotient, Rational};
use crate::error::{Error, Result};
use crate::ops::OperatorSet;
use crate::spectral::SpectralSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceNode {
    pub label: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    /// The composite of the incoming and outgoing maps vanishes.
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceMap {
    pub label: String,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub p: usize,
    pub nodes: Vec<SequenceNode>,
    pub maps: Vec<SequenceMap>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn first_inexact(&self) -> Option<&SequenceNode> {
        self.nodes.iter().find(|n| !n.exact)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Space {
    Zero,
    H(usize),
    C(usize),
    E(isize, isize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Zero,
    Phi,
    Psi,
    Tau,
    TauEnd,
}

/// The column-`p` sequence, ready to be evaluated.
pub struct ColumnSequence<'a> {
    ops: &'a OperatorSet,
    de_rham: &'a DeRham,
    ss: &'a SpectralSequence<'a>,
    p: usize,
    c_spaces: Vec<Quotient>,
    nodes: Vec<Space>,
    kinds: Vec<Kind>,
}

impl<'a> ColumnSequence<'a> {
    pub fn new(
        ops: &'a OperatorSet,
        de_rham: &'a DeRham,
        ss: &'a SpectralSequence<'a>,
        p: usize,
    ) -> Result<Self> {
        let m = ops.model().dim();
        let n = ops.model().half_dim();
        if p > n {
            return Err(Error::Precondition(format!("column {p} exceeds n = {n}")));
        }
        let c_spaces = (0..=m)
            .map(|k| c_space(ops, de_rham, k))
            .collect::<Result<_>>()?;
        let h = |k: isize| {
            if k < 0 || k as usize > m {
                Space::Zero
            } else {
                Space::H(k as usize)
            }
        };
        let c = |k: isize| {
            if k < 0 {
                Space::Zero
            } else {
                Space::C(k as usize)
            }
        };
        let (pi, ni) = (p as isize, n as isize);
        let mut nodes = vec![Space::Zero];
        let mut kinds = vec![Kind::Zero];
        for q in pi..=ni {
            if q > pi {
                kinds.push(Kind::Tau);
            }
            let (src, tgt) = if q < ni {
                (h(q - pi), h(q - pi - 1))
            } else {
                (c(ni - pi), c(ni - pi - 1))
            };
            nodes.extend([src, Space::E(pi, q), tgt]);
            kinds.extend([Kind::Phi, Kind::Psi]);
        }
        nodes.extend([h(ni + pi + 1), Space::Zero]);
        kinds.extend([Kind::TauEnd, Kind::Zero]);
        debug_assert_eq!(nodes.len(), kinds.len() + 1);
        Ok(ColumnSequence {
            ops,
            de_rham,
            ss,
            p,
            c_spaces,
            nodes,
            kinds,
        })
    }

    fn quotient(&self, s: Space) -> Option<&Quotient> {
        match s {
            Space::Zero => None,
            Space::H(k) => self.de_rham.group(k as isize),
            Space::C(k) => self.c_spaces.get(k),
            Space::E(p, q) => self
                .ss
                .page(1)
                .and_then(|page| page.entry(p, q))
                .map(|e| e.quotient()),
        }
    }

    fn degree(s: Space) -> Option<usize> {
        match s {
            Space::Zero => None,
            Space::H(k) | Space::C(k) => Some(k),
            Space::E(p, q) => Some((p + q) as usize),
        }
    }

    fn label(s: Space) -> String {
        match s {
            Space::Zero => "0".into(),
            Space::H(k) => format!("H^{k}"),
            Space::C(k) => format!("C^{k}"),
            Space::E(p, q) => format!("E_1^{{{p},{q}}}"),
        }
    }

    fn map_label(&self, i: usize) -> String {
        let p = self.p;
        match (self.kinds[i], self.nodes[i], self.nodes[i + 1]) {
            (Kind::Phi, _, Space::E(_, q)) | (Kind::Psi, Space::E(_, q), _) => {
                let symbol = if self.kinds[i] == Kind::Phi {
                    "φ"
                } else {
                    "ψ"
                };
                format!("{symbol}_{{{p},{q}}}")
            }
            (Kind::Tau, _, _) => "τ".into(),
            (Kind::TauEnd, _, _) => format!("τ^{}", p + 1),
            _ => "0".into(),
        }
    }

    fn apply(&self, kind: Kind, source: Space, x: &Form) -> Result<Form> {
        let m = self.ops.model().dim();
        let p = self.p;
        Ok(match kind {
            Kind::Zero => Form::zero(m, 0),
            Kind::Phi => self.ops.top_power(p).apply(x),
            Kind::Tau => self.ops.top(x),
            Kind::TauEnd => self.ops.top_power(p + 1).apply(x),
            Kind::Psi => {
                let dx = self.ops.model().differential(x);
                let k = Self::degree(source).expect("ψ starts at E_1") as isize;
                let j = k + 1 - 2 * (p as isize + 1);
                if j < 0 {
                    if !dx.is_zero() {
                        return Err(Error::Invariant(format!(
                            "ψ: d{x} = {dx} is nonzero but must lie in ⊤^{}Λ^{j}",
                            p + 1
                        )));
                    }
                    return Ok(Form::zero(m, 0));
                }
                let block = self.ops.top_power(p + 1).block(j);
                let eta = LinearSolver::new(&block)
                    .solve(&dx.to_vector())
                    .ok_or_else(|| {
                        Error::Invariant(format!("ψ: ⊤^{}η = {dx} has no solution", p + 1))
                    })?;
                Form::from_vector(m, j as usize, &eta)
            }
        })
    }

    /// Coordinates of the image of `x` under map `i`.
    fn image_coords(&self, i: usize, x: &Form) -> Result<Vec<Rational>> {
        let (source, target) = (self.nodes[i], self.nodes[i + 1]);
        let y = self.apply(self.kinds[i], source, x)?;
        match self.quotient(target) {
            Some(q) => {
                let coords = (Self::degree(target) == Some(y.degree()))
                    .then(|| q.coords(&y.to_vector()))
                    .flatten();
                coords.ok_or_else(|| {
                    Error::Invariant(format!(
                        "{}: image {y} of {x} does not lie in {}",
                        self.map_label(i),
                        Self::label(target)
                    ))
                })
            }
            None if y.is_zero() => Ok(Vec::new()),
            None => Err(Error::Invariant(format!(
                "{}: image {y} of {x} should vanish",
                self.map_label(i)
            ))),
        }
    }

    fn dim(&self, s: Space) -> usize {
        self.quotient(s).map_or(0, Quotient::dim)
    }

    /// Matrix of map `i`, after checking that the source's denominator maps to zero.
    pub fn map_matrix(&self, i: usize) -> Result<Matrix> {
        let m = self.ops.model().dim();
        let (source, target) = (self.nodes[i], self.nodes[i + 1]);
        let rows = self.dim(target);
        let Some(src) = self.quotient(source) else {
            return Ok(Matrix::zeros(rows, 0));
        };
        for b in src.denominator().basis_forms(m) {
            if self.image_coords(i, &b)?.iter().any(|c| !c.is_zero()) {
                return Err(Error::Invariant(format!(
                    "{} depends on the representative: {b} ↦ nonzero class",
                    self.map_label(i)
                )));
            }
        }
        let columns: Vec<Vec<Rational>> = src
            .rep_forms(m)
            .iter()
            .map(|x| self.image_coords(i, x))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(rows, &columns))
    }

    pub fn report(&self) -> Result<ExactnessReport> {
        let maps: Vec<SequenceMap> = (0..self.kinds.len())
            .map(|i| {
                Ok(SequenceMap {
                    label: self.map_label(i),
                    matrix: self.map_matrix(i)?,
                })
            })
            .collect::<Result<_>>()?;
        let last = self.nodes.len() - 1;
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let dim = self.dim(s);
                let incoming = (i > 0).then(|| &maps[i - 1].matrix);
                let outgoing = (i < last).then(|| &maps[i].matrix);
                let rank_in = incoming.map_or(0, Matrix::rank);
                let rank_out = outgoing.map_or(0, Matrix::rank);
                let composite_zero = match (incoming, outgoing) {
                    (Some(a), Some(b)) => b.mul(a).is_zero(),
                    _ => true,
                };
                SequenceNode {
                    label: Self::label(s),
                    dim,
                    rank_in,
                    rank_out,
                    composite_zero,
                    exact: composite_zero && rank_in + rank_out == dim,
                }
            })
            .collect();
        Ok(ExactnessReport {
            p: self.p,
            nodes,
            maps,
        })
    }

    /// Re-evaluates every map on representatives perturbed by random
    /// elements of the source denominator (exact forms for `H` and `C`,
    /// boundaries for `E_1`) and compares with the matrix. Returns one line
    /// per mismatch.
    pub fn perturbation_failures<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        trials: usize,
    ) -> Result<Vec<String>> {
        let m = self.ops.model().dim();
        let mut failures = Vec::new();
        for i in 0..self.kinds.len() {
            let Some(src) = self.quotient(self.nodes[i]) else {
                continue;
            };
            if src.dim() == 0 {
                continue;
            }
            let matrix = self.map_matrix(i)?;
            let degree = Self::degree(self.nodes[i]).expect("nonzero space");
            for _ in 0..trials {
                let coords: Vec<Rational> = (0..src.dim())
                    .map(|_| {
                        crate::algebra::ratio(rng.random_range(-5..=5), rng.random_range(1..=3))
                    })
                    .collect();
                let base = Form::from_vector(m, degree, &src.lift(&coords));
                let noise = random_element(rng, m, src.denominator());
                let x = &base + &noise;
                let got = self.image_coords(i, &x)?;
                let expected = matrix.mul_vec(&coords);
                if got != expected {
                    failures.push(format!(
                        "{} on {} differs after adding {noise}",
                        self.map_label(i),
                        Self::label(self.nodes[i])
                    ));
                }
            }
        }
        Ok(failures)
    }
}

pub fn verify_sequence(
    ops: &OperatorSet,
    de_rham: &DeRham,
    ss: &SpectralSequence<'_>,
    p: usize,
) -> Result<ExactnessReport> {
    ColumnSequence::new(ops, de_rham, ss, p)?.report()
}
