//! Representation expressions over a product of simple factors and circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::spin::build_spin;
use super::{build_g2, so, sp, su, Chirality, MatrixRep, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I};

/// One factor of a product group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorSpec {
    Su(usize),
    So(usize),
    Sp(usize),
    Spin(usize, Chirality),
    G2,
    /// A circle; weights are given per top-level summand of the module.
    Circle(Vec<i64>),
    /// A circle; weights are given per coordinate slot.
    CircleSlots(Vec<i64>),
}

impl FactorSpec {
    fn is_circle(&self) -> bool {
        matches!(self, FactorSpec::Circle(_) | FactorSpec::CircleSlots(_))
    }

    fn tag(&self) -> String {
        match self {
            FactorSpec::Su(n) => format!("su{n}"),
            FactorSpec::So(n) => format!("so{n}"),
            FactorSpec::Sp(n) => format!("sp{n}"),
            FactorSpec::Spin(m, _) => format!("spin{m}"),
            FactorSpec::G2 => "g2".into(),
            FactorSpec::Circle(_) | FactorSpec::CircleSlots(_) => "u1".into(),
        }
    }

    /// The module the factor acts on when referenced as `def(i)`.
    pub fn defining(&self) -> Result<MatrixRep> {
        match self {
            FactorSpec::Su(n) => su(*n),
            FactorSpec::So(n) => so(*n),
            FactorSpec::Sp(n) => sp(*n),
            FactorSpec::Spin(m, c) => build_spin(*m, *c),
            FactorSpec::G2 => build_g2(),
            FactorSpec::Circle(_) | FactorSpec::CircleSlots(_) => Err(Error::InvalidRep(
                "a circle factor has no defining module; give it weights instead".into(),
            )),
        }
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[i64]| w.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
        match self {
            FactorSpec::Su(n) => write!(f, "su {n}"),
            FactorSpec::So(n) => write!(f, "so {n}"),
            FactorSpec::Sp(n) => write!(f, "sp {n}"),
            FactorSpec::Spin(m, c) => write!(f, "spin {m} {c}"),
            FactorSpec::G2 => write!(f, "g2"),
            FactorSpec::Circle(w) => write!(f, "u1 {}", join(w)),
            FactorSpec::CircleSlots(w) => write!(f, "u1 slots: {}", join(w)),
        }
    }
}

impl FromStr for FactorSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a positive integer"));
        let weights = |t: &str| -> std::result::Result<Vec<i64>, String> {
            t.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<i64>().map_err(|_| format!("`{x}` is not an integer weight")))
                .collect()
        };
        match head {
            "su" => Ok(FactorSpec::Su(int(rest)?)),
            "so" => Ok(FactorSpec::So(int(rest)?)),
            "sp" => Ok(FactorSpec::Sp(int(rest)?)),
            "g2" if rest.is_empty() => Ok(FactorSpec::G2),
            "spin" => {
                let mut parts = rest.split_whitespace();
                let m = int(parts.next().ok_or("spin needs a parameter")?)?;
                let c = match parts.next() {
                    Some(c) => c.parse::<Chirality>().map_err(|e| e.to_string())?,
                    None => Chirality::Full,
                };
                Ok(FactorSpec::Spin(m, c))
            }
            "u1" => {
                let (slots, w) = match rest.strip_prefix("slots:") {
                    Some(w) => (true, weights(w)?),
                    None => (false, weights(rest)?),
                };
                if w.is_empty() {
                    return Err("u1 needs at least one weight".into());
                }
                Ok(if slots { FactorSpec::CircleSlots(w) } else { FactorSpec::Circle(w) })
            }
            other => Err(format!("unknown factor family `{other}`")),
        }
    }
}

/// A product group: simple factors and circles in order. Basis elements of
/// the product algebra concatenate the factor bases.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupSpec {
    pub factors: Vec<FactorSpec>,
}

impl GroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Self {
        Self { factors }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Expression tree for a module of a [`GroupSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepExpr {
    /// Defining module of factor `i`.
    Def(usize),
    /// Trivial module of the given dimension.
    Trivial(usize),
    Dual(Box<RepExpr>),
    Sum(Vec<RepExpr>),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    Exterior(Box<RepExpr>, usize),
    Symmetric(Box<RepExpr>, usize),
    /// Complement of `omega ∧ Λ^{k-2}` in `Λ^k`, for a module carrying a
    /// unique invariant 2-form `omega`.
    Primitive(Box<RepExpr>, usize),
}

impl RepExpr {
    pub fn def(i: usize) -> Self {
        RepExpr::Def(i)
    }
    pub fn dual(e: RepExpr) -> Self {
        RepExpr::Dual(Box::new(e))
    }
    pub fn ext(e: RepExpr, k: usize) -> Self {
        RepExpr::Exterior(Box::new(e), k)
    }
    pub fn sym(e: RepExpr, k: usize) -> Self {
        RepExpr::Symmetric(Box::new(e), k)
    }
    pub fn prim(e: RepExpr, k: usize) -> Self {
        RepExpr::Primitive(Box::new(e), k)
    }
    pub fn tensor(a: RepExpr, b: RepExpr) -> Self {
        RepExpr::Tensor(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for RepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepExpr::Def(i) => write!(f, "def({i})"),
            RepExpr::Trivial(d) => write!(f, "triv({d})"),
            RepExpr::Dual(e) => write!(f, "dual({e})"),
            RepExpr::Sum(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                write!(f, "sum({})", parts.join(", "))
            }
            RepExpr::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            RepExpr::Exterior(e, k) => write!(f, "ext({e}, {k})"),
            RepExpr::Symmetric(e, k) => write!(f, "sym({e}, {k})"),
            RepExpr::Primitive(e, k) => write!(f, "prim({e}, {k})"),
        }
    }
}

/// Parse error with a byte offset into the expression text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl FromStr for RepExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> std::result::Result<Self, ExprError> {
        let mut p = ExprParser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, m: &str) -> ExprError {
        ExprError {
            offset: self.pos,
            message: m.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> std::result::Result<(), ExprError> {
        self.ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> std::result::Result<String, ExprError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an operator name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> std::result::Result<usize, ExprError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ExprError {
                offset: start,
                message: "expected a non-negative integer".into(),
            })
    }

    fn expr(&mut self) -> std::result::Result<RepExpr, ExprError> {
        let start = self.pos;
        let name = self.ident()?;
        self.eat(b'(')?;
        let e = match name.as_str() {
            "def" => RepExpr::Def(self.number()?),
            "triv" => RepExpr::Trivial(self.number()?),
            "dual" => RepExpr::dual(self.expr()?),
            "sum" => {
                let mut items = vec![self.expr()?];
                loop {
                    self.ws();
                    if self.src.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                        items.push(self.expr()?);
                    } else {
                        break;
                    }
                }
                RepExpr::Sum(items)
            }
            "tensor" => {
                let a = self.expr()?;
                self.eat(b',')?;
                RepExpr::tensor(a, self.expr()?)
            }
            "ext" | "sym" | "prim" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let k = self.number()?;
                match name.as_str() {
                    "ext" => RepExpr::ext(a, k),
                    "sym" => RepExpr::sym(a, k),
                    _ => RepExpr::prim(a, k),
                }
            }
            _ => {
                return Err(ExprError {
                    offset: start,
                    message: format!("unknown operator `{name}`"),
                })
            }
        };
        self.eat(b')')?;
        Ok(e)
    }
}

/// Matrices of every product-algebra generator on one module.
struct Module {
    dim: usize,
    mats: Vec<CMat>,
}

struct Ctx {
    offsets: Vec<usize>,
    reps: Vec<Option<MatrixRep>>,
    total: usize,
}

/// Evaluate `expr` to a representation of the product algebra of `group`.
pub fn eval_rep_expr(group: &GroupSpec, expr: &RepExpr) -> Result<MatrixRep> {
    if group.factors.is_empty() {
        return Err(Error::InvalidRep("group has no factors".into()));
    }
    let mut offsets = Vec::with_capacity(group.factors.len());
    let mut reps = Vec::with_capacity(group.factors.len());
    let mut total = 0;
    let mut structure: Option<StructureConstants> = None;
    let mut labels = Vec::new();
    for (fi, f) in group.factors.iter().enumerate() {
        offsets.push(total);
        let (sc, rep) = if f.is_circle() {
            labels.push(format!("{}.{}.t", fi, f.tag()));
            (StructureConstants::zeros(1), None)
        } else {
            let r = f.defining()?;
            labels.extend(r.labels().iter().map(|l| format!("{}.{}.{}", fi, f.tag(), l)));
            (r.structure().clone(), Some(r))
        };
        total += sc.dim();
        structure = Some(match structure {
            None => sc,
            Some(prev) => prev.direct_sum(&sc),
        });
        reps.push(rep);
    }
    let ctx = Ctx { offsets, reps, total };
    let mut module = eval(&ctx, expr)?;
    let summands: Vec<usize> = match expr {
        RepExpr::Sum(items) => items.iter().map(|e| module_dim(&ctx, e)).collect::<Result<_>>()?,
        _ => vec![module.dim],
    };
    for (fi, f) in group.factors.iter().enumerate() {
        let slots: Vec<i64> = match f {
            FactorSpec::Circle(w) => {
                if w.len() != summands.len() {
                    return Err(Error::InvalidRep(format!(
                        "circle factor {fi} has {} weights but the module has {} summands",
                        w.len(),
                        summands.len()
                    )));
                }
                w.iter().zip(&summands).flat_map(|(&wt, &d)| std::iter::repeat_n(wt, d)).collect()
            }
            FactorSpec::CircleSlots(w) => {
                if w.len() != module.dim {
                    return Err(Error::InvalidRep(format!(
                        "circle factor {fi} has {} slot weights but the module has dimension {}",
                        w.len(),
                        module.dim
                    )));
                }
                w.clone()
            }
            _ => continue,
        };
        if slots.iter().all(|&w| w == 0) {
            return Err(Error::InvalidRep(format!("circle factor {fi} has all weights zero")));
        }
        let diag = nalgebra::DVector::from_iterator(slots.len(), slots.iter().map(|&w| I * w as f64));
        let c = CMat::from_diagonal(&diag);
        let worst = module
            .mats
            .iter()
            .map(|x| linalg::frobenius(&linalg::commutator(&c, x)))
            .fold(0.0, f64::max);
        if worst > 1e-12 {
            return Err(Error::CircleNotCentral(worst));
        }
        module.mats[ctx.offsets[fi]] = c;
    }
    let structure = structure.expect("at least one factor");
    MatrixRep::from_parts(module.mats, labels, structure)
}

fn module_dim(ctx: &Ctx, e: &RepExpr) -> Result<usize> {
    Ok(match e {
        RepExpr::Def(i) => match ctx.reps.get(*i) {
            Some(Some(r)) => r.dim_v(),
            Some(None) => return Err(Error::InvalidRep(format!("factor {i} is a circle and has no defining module"))),
            None => return Err(Error::InvalidRep(format!("no factor with index {i}"))),
        },
        RepExpr::Trivial(d) => *d,
        RepExpr::Dual(x) => module_dim(ctx, x)?,
        RepExpr::Sum(xs) => xs.iter().map(|x| module_dim(ctx, x)).sum::<Result<usize>>()?,
        RepExpr::Tensor(a, b) => module_dim(ctx, a)? * module_dim(ctx, b)?,
        RepExpr::Exterior(x, k) => binom(module_dim(ctx, x)?, *k),
        RepExpr::Symmetric(x, k) => binom(module_dim(ctx, x)? + k - 1, *k),
        RepExpr::Primitive(x, k) => {
            let d = module_dim(ctx, x)?;
            binom(d, *k) - if *k >= 2 { binom(d, k - 2) } else { 0 }
        }
    })
}

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn eval(ctx: &Ctx, e: &RepExpr) -> Result<Module> {
    match e {
        RepExpr::Def(i) => {
            let rep = match ctx.reps.get(*i) {
                Some(Some(r)) => r,
                Some(None) => return Err(Error::InvalidRep(format!("factor {i} is a circle and has no defining module"))),
                None => return Err(Error::InvalidRep(format!("no factor with index {i}"))),
            };
            let d = rep.dim_v();
            let mut mats = vec![CMat::zeros(d, d); ctx.total];
            for (k, x) in rep.basis().iter().enumerate() {
                mats[ctx.offsets[*i] + k] = x.clone();
            }
            Ok(Module { dim: d, mats })
        }
        RepExpr::Trivial(d) => {
            if *d == 0 {
                return Err(Error::InvalidRep("trivial module must have positive dimension".into()));
            }
            Ok(Module {
                dim: *d,
                mats: vec![CMat::zeros(*d, *d); ctx.total],
            })
        }
        RepExpr::Dual(x) => {
            let m = eval(ctx, x)?;
            Ok(Module {
                dim: m.dim,
                mats: m.mats.iter().map(|a| -a.transpose()).collect(),
            })
        }
        RepExpr::Sum(xs) => {
            if xs.is_empty() {
                return Err(Error::InvalidRep("empty direct sum".into()));
            }
            let parts = xs.iter().map(|x| eval(ctx, x)).collect::<Result<Vec<_>>>()?;
            let dim: usize = parts.iter().map(|p| p.dim).sum();
            let mats = (0..ctx.total)
                .map(|g| {
                    let mut m = CMat::zeros(dim, dim);
                    let mut off = 0;
                    for p in &parts {
                        m.view_mut((off, off), (p.dim, p.dim)).copy_from(&p.mats[g]);
                        off += p.dim;
                    }
                    m
                })
                .collect();
            Ok(Module { dim, mats })
        }
        RepExpr::Tensor(a, b) => {
            let (ma, mb) = (eval(ctx, a)?, eval(ctx, b)?);
            let (ia, ib) = (CMat::identity(ma.dim, ma.dim), CMat::identity(mb.dim, mb.dim));
            let mats = ma
                .mats
                .iter()
                .zip(&mb.mats)
                .map(|(x, y)| x.kronecker(&ib) + ia.kronecker(y))
                .collect();
            Ok(Module {
                dim: ma.dim * mb.dim,
                mats,
            })
        }
        RepExpr::Exterior(x, k) => {
            let m = eval(ctx, x)?;
            if *k > m.dim {
                return Err(Error::DegreeTooLarge { degree: *k, dim: m.dim });
            }
            let basis = ExteriorBasis::new(m.dim, *k);
            Ok(Module {
                dim: basis.len(),
                mats: m.mats.iter().map(|a| basis.induced(a)).collect(),
            })
        }
        RepExpr::Symmetric(x, k) => {
            let m = eval(ctx, x)?;
            if *k == 0 {
                return Err(Error::InvalidRep("symmetric power needs degree >= 1".into()));
            }
            let basis = SymmetricBasis::new(m.dim, *k);
            Ok(Module {
                dim: basis.len(),
                mats: m.mats.iter().map(|a| basis.induced(a)).collect(),
            })
        }
        RepExpr::Primitive(x, k) => {
            let m = eval(ctx, x)?;
            if *k > m.dim {
                return Err(Error::DegreeTooLarge { degree: *k, dim: m.dim });
            }
            if *k < 2 {
                return Err(Error::InvalidRep("primitive part needs degree >= 2".into()));
            }
            primitive_part(&m, *k)
        }
    }
}

/// Strictly increasing index tuples of length `k` in lexicographic order.
#[derive(Debug, Clone)]
pub struct ExteriorBasis {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ExteriorBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let tuples = combinations(n, k);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { tuples, index }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Position of `e_{t_1} ∧ ... ∧ e_{t_k}` (0-based, any order) with the
    /// sign of the sorting permutation; `None` if an index repeats.
    pub fn position(&self, t: &[usize]) -> Option<(usize, f64)> {
        let mut v = t.to_vec();
        let sign = sort_sign(&mut v)?;
        self.index.get(&v).map(|&p| (p, sign))
    }

    /// Derivation action of `a` on `Λ^k`.
    pub fn induced(&self, a: &CMat) -> CMat {
        let n = self.len();
        let mut out = CMat::zeros(n, n);
        let nz: Vec<(usize, usize, Complex64)> = nonzeros(a);
        for (col, t) in self.tuples.iter().enumerate() {
            for p in 0..t.len() {
                for &(j, i, z) in &nz {
                    if i != t[p] {
                        continue;
                    }
                    let mut u = t.clone();
                    u[p] = j;
                    if let Some((row, s)) = self.position(&u) {
                        out[(row, col)] += z * s;
                    }
                }
            }
        }
        out
    }
}

fn nonzeros(a: &CMat) -> Vec<(usize, usize, Complex64)> {
    let mut v = Vec::new();
    for j in 0..a.nrows() {
        for i in 0..a.ncols() {
            let z = a[(j, i)];
            if z != Complex64::new(0.0, 0.0) {
                v.push((j, i, z));
            }
        }
    }
    v
}

/// Sort in place, returning the permutation sign, or `None` on a repeat.
fn sort_sign(v: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(sign)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing index tuples, lexicographic; coordinates are the
/// orthonormal monomials `x^alpha / sqrt(alpha!)`.
#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    norms: Vec<f64>,
}

impl SymmetricBasis {
    pub fn new(n: usize, k: usize) -> Self {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i, n, k, cur, out);
                cur.pop();
            }
        }
        let mut tuples = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut tuples);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let norms = tuples
            .iter()
            .map(|t| {
                let mut counts: HashMap<usize, u32> = HashMap::new();
                for &i in t {
                    *counts.entry(i).or_default() += 1;
                }
                counts.values().map(|&m| (1..=m).product::<u32>() as f64).product::<f64>().sqrt()
            })
            .collect();
        Self { tuples, index, norms }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        let mut v = t.to_vec();
        v.sort_unstable();
        self.index.get(&v).copied()
    }

    pub fn induced(&self, a: &CMat) -> CMat {
        let n = self.len();
        let mut out = CMat::zeros(n, n);
        let nz = nonzeros(a);
        for (col, t) in self.tuples.iter().enumerate() {
            for p in 0..t.len() {
                for &(j, i, z) in &nz {
                    if i != t[p] {
                        continue;
                    }
                    let mut u = t.clone();
                    u[p] = j;
                    let row = self.position(&u).expect("tuple in basis");
                    out[(row, col)] += z;
                }
            }
        }
        // polynomial basis -> orthonormal basis: M'_{ab} = M_{ab} * |x^a| / |x^b|
        for r in 0..n {
            for c in 0..n {
                if out[(r, c)] != Complex64::new(0.0, 0.0) {
                    out[(r, c)] *= self.norms[r] / self.norms[c];
                }
            }
        }
        out
    }
}

fn primitive_part(m: &Module, k: usize) -> Result<Module> {
    let two = ExteriorBasis::new(m.dim, 2);
    let stacked = {
        let blocks: Vec<CMat> = m.mats.iter().map(|a| two.induced(a)).collect();
        let rows = blocks.len() * two.len();
        let mut s = CMat::zeros(rows, two.len());
        for (i, b) in blocks.iter().enumerate() {
            s.view_mut((i * two.len(), 0), (two.len(), two.len())).copy_from(b);
        }
        s
    };
    let inv = linalg::complex_null_space(&stacked, 1e-10);
    if inv.ncols() != 1 {
        return Err(Error::InvalidRep(format!(
            "primitive part needs a unique invariant 2-form; found {}",
            inv.ncols()
        )));
    }
    let omega = inv.column(0).into_owned();
    let top = ExteriorBasis::new(m.dim, k);
    let low = ExteriorBasis::new(m.dim, k - 2);
    let mut image = CMat::zeros(top.len(), low.len().max(1));
    for (c, t) in low.tuples().iter().enumerate() {
        for (p, pair) in two.tuples().iter().enumerate() {
            let w = omega[p];
            if w.norm() < 1e-15 {
                continue;
            }
            let mut u = pair.clone();
            u.extend_from_slice(t);
            if let Some((row, s)) = top.position(&u) {
                image[(row, c)] += w * s;
            }
        }
    }
    let q = linalg::complex_null_space(&image.adjoint(), 1e-10);
    let mats: Vec<CMat> = m.mats.iter().map(|a| {
        let big = top.induced(a);
        q.adjoint() * big * &q
    }).collect();
    // the subspace must be invariant: (1 - QQ^H) X Q = 0
    let proj = CMat::identity(top.len(), top.len()) - &q * q.adjoint();
    for a in &m.mats {
        let leak = linalg::frobenius(&(&proj * top.induced(a) * &q));
        if leak > 1e-9 {
            return Err(Error::InvalidRep(format!("primitive subspace is not invariant (leak {leak:e})")));
        }
    }
    Ok(Module { dim: q.ncols(), mats })
}
