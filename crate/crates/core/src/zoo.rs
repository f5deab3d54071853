//! Example coalgebras, extensions and comodules.

use std::sync::Arc;

use crate::coalgebra::{Coalgebra, CoalgebraData, CoalgebraMorphism, SparseTensor};
use crate::comodule::{Comodule, Side};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;

fn positive(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

/// `K[S]` for `|S| = n`: every basis element grouplike.
pub fn grouplike(field: FieldSpec, n: usize) -> Result<Coalgebra> {
    positive("set size", n)?;
    let mut delta = SparseTensor::new();
    for i in 0..n {
        delta.set(i, i, i, field.one());
    }
    Coalgebra::new(CoalgebraData {
        field,
        dim: n,
        delta,
        counit: vec![field.one(); n],
        labels: Some((0..n).map(|i| format!("g{i}")).collect()),
    })
}

/// Matrix coalgebra `M^c(n)`: `Δ e_ij = Σ_k e_ik ⊗ e_kj`, `ε(e_ij) = δ_ij`; basis index
/// `i * n + j`.
pub fn matrix_coalgebra(field: FieldSpec, n: usize) -> Result<Coalgebra> {
    positive("matrix size", n)?;
    let mut delta = SparseTensor::new();
    let mut counit = vec![field.zero(); n * n];
    for i in 0..n {
        counit[i * n + i] = field.one();
        for j in 0..n {
            for k in 0..n {
                delta.set(i * n + j, i * n + k, k * n + j, field.one());
            }
        }
    }
    let labels = (0..n * n).map(|x| format!("e{}{}", x / n, x % n)).collect();
    Coalgebra::new(CoalgebraData { field, dim: n * n, delta, counit, labels: Some(labels) })
}

/// Dual of `K[x_1, .., x_m]/(x)²`: basis `g, x_1, .., x_m` with `g` grouplike and
/// `Δ x_i = g ⊗ x_i + x_i ⊗ g`.
pub fn square_zero_local(field: FieldSpec, m: usize) -> Result<Coalgebra> {
    positive("variable count", m)?;
    let mut delta = SparseTensor::new();
    delta.set(0, 0, 0, field.one());
    for i in 1..=m {
        delta.set(i, 0, i, field.one());
        delta.set(i, i, 0, field.one());
    }
    let mut counit = vec![field.zero(); m + 1];
    counit[0] = field.one();
    let mut labels = vec!["g".to_string()];
    if m == 1 {
        labels.push("x".into());
    } else {
        labels.extend((1..=m).map(|i| format!("x{i}")));
    }
    Coalgebra::new(CoalgebraData { field, dim: m + 1, delta, counit, labels: Some(labels) })
}

/// The coalgebra `{g, x}` with `Δ x = g ⊗ x + x ⊗ g`, dual to `K[x]/(x²)`.
pub fn dual_numbers(field: FieldSpec) -> Coalgebra {
    square_zero_local(field, 1).expect("one variable")
}

/// `(C, K, ε_C)`.
pub fn trivial_extension(c: Arc<Coalgebra>) -> CoalgebraMorphism {
    CoalgebraMorphism::counit_of(c)
}

pub fn identity_extension(c: Arc<Coalgebra>) -> CoalgebraMorphism {
    CoalgebraMorphism::identity(c)
}

/// `K[S] → K[T]` induced by `f: S → T`, with `S = {0, .., f.len() - 1}`.
pub fn set_map_extension(field: FieldSpec, f: &[usize], t: usize) -> Result<CoalgebraMorphism> {
    if let Some(&bad) = f.iter().find(|&&v| v >= t) {
        return Err(Error::InvalidParameter(format!("set map value {bad} outside a target of size {t}")));
    }
    let s = Arc::new(grouplike(field, f.len())?);
    let target = Arc::new(grouplike(field, t)?);
    let mut m = Matrix::zeros(field, t, f.len());
    for (i, &v) in f.iter().enumerate() {
        m.set(v, i, field.one());
    }
    CoalgebraMorphism::new(s, target, m)
}

/// The grouplike `K → {g, x}`, `1 ↦ g`. Its dual `K[x]/(x²) → K` is not a Frobenius
/// extension although both hom-dimension tests pass.
pub fn grouplike_into_dual_numbers(field: FieldSpec) -> CoalgebraMorphism {
    let source = Arc::new(grouplike(field, 1).expect("one point"));
    let target = Arc::new(dual_numbers(field));
    let m = Matrix::column_vector(field, vec![field.one(), field.zero()]);
    CoalgebraMorphism::new(source, target, m).expect("grouplike to grouplike")
}

/// `C = D^(n)` with `Δ(σ_i(d)) = σ_i(d_1) ⊗ σ_i(d_2)`, `ε(σ_i(d)) = ε(d)` and the fold
/// `λ(Σ σ_i(d_i)) = Σ d_i`. Basis index of `σ_i(e_x)` is `i * dim D + x`.
#[derive(Clone, Debug)]
pub struct DirectSumCoring {
    pub base: Arc<Coalgebra>,
    pub coalgebra: Arc<Coalgebra>,
    pub lambda: CoalgebraMorphism,
    /// `σ_i: D → C`.
    pub sections: Vec<Matrix>,
    /// `p_i: C → D`.
    pub projections: Vec<Matrix>,
}

pub fn direct_sum_coring(d: Arc<Coalgebra>, n: usize) -> Result<DirectSumCoring> {
    positive("index count", n)?;
    let field = d.field();
    let k = d.dim();
    let mut delta = SparseTensor::new();
    let mut counit = Vec::with_capacity(n * k);
    for i in 0..n {
        for ((x, y, z), s) in d.delta().iter() {
            delta.set(i * k + x, i * k + y, i * k + z, s.clone());
        }
        counit.extend(d.counit_values().iter().cloned());
    }
    let labels = d.labels().map(|l| {
        (0..n).flat_map(|i| l.iter().map(move |name| format!("{name}_{i}"))).collect()
    });
    let c = Arc::new(Coalgebra::new(CoalgebraData { field, dim: n * k, delta, counit, labels })?);
    let mut fold = Matrix::zeros(field, k, n * k);
    let mut sections = Vec::with_capacity(n);
    let mut projections = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = Matrix::zeros(field, n * k, k);
        for x in 0..k {
            fold.set(x, i * k + x, field.one());
            s.set(i * k + x, x, field.one());
        }
        projections.push(s.transpose());
        sections.push(s);
    }
    let lambda = CoalgebraMorphism::new(c.clone(), d.clone(), fold)?;
    Ok(DirectSumCoring { base: d, coalgebra: c, lambda, sections, projections })
}

impl DirectSumCoring {
    /// The right `C`-comodule `⊕ M_i` with `ρ(m) = m_0 ⊗ σ_i(m_1)` for `m ∈ M_i`.
    pub fn component_comodule(&self, parts: &[Comodule]) -> Result<Comodule> {
        if parts.len() != self.sections.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} components, got {}",
                self.sections.len(),
                parts.len()
            )));
        }
        let k = self.base.dim();
        let mut tensor = SparseTensor::new();
        let mut offset = 0;
        for (i, part) in parts.iter().enumerate() {
            if part.side() != Side::Right || **part.over() != *self.base {
                return Err(Error::CoalgebraMismatch("components must be right D-comodules".into()));
            }
            for ((a, b, x), s) in part.coaction_tensor().iter() {
                tensor.set(offset + a, offset + b, i * k + x, s.clone());
            }
            offset += part.dim();
        }
        Comodule::from_tensor(Side::Right, self.coalgebra.clone(), offset, &tensor)
    }
}

/// Small comodules on one side: the zero comodule, simples at grouplike basis elements,
/// the regular comodule, cofree comodules and pairwise direct sums, all of dimension at
/// most `max_dim`.
pub fn standard_comodules(c: Arc<Coalgebra>, side: Side, max_dim: usize) -> Vec<Comodule> {
    let mut base = Vec::new();
    for g in 0..c.dim() {
        if let Ok(m) = Comodule::grouplike_simple(side, c.clone(), g) {
            base.push(m);
        }
    }
    for rank in 1.. {
        if rank * c.dim() > max_dim {
            break;
        }
        base.push(Comodule::cofree(side, rank, c.clone()));
    }
    let mut out = vec![Comodule::zero(side, c.clone())];
    out.extend(base.iter().cloned());
    for i in 0..base.len() {
        for j in i..base.len() {
            if base[i].dim() + base[j].dim() <= max_dim {
                if let Ok(sum) = base[i].direct_sum(&base[j]) {
                    out.push(sum);
                }
            }
        }
    }
    out
}

/// What a preset expression builds.
#[derive(Clone, Debug)]
pub enum Built {
    Coalgebra(Arc<Coalgebra>),
    Extension(CoalgebraMorphism),
}

/// Parses and builds a preset expression such as `grouplike(3)`, `dual_numbers`,
/// `trivial_extension(dual_of_square_zero_local(2))`, `set_map_extension([0,0,1],2)` or
/// `direct_sum_coring(grouplike(2),3)`.
pub fn build(expr: &str, field: FieldSpec) -> Result<Built> {
    let mut p = Parser { s: expr.as_bytes(), pos: 0 };
    let b = p.preset(field)?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("trailing input"));
    }
    Ok(b)
}

pub const PRESET_NAMES: &[&str] = &[
    "grouplike(n)",
    "matrix_coalgebra(n)",
    "dual_numbers",
    "dual_of_square_zero_local(m)",
    "trivial",
    "trivial_extension(C)",
    "identity_extension(C)",
    "set_map_extension([f0,f1,..],t)",
    "direct_sum_coring(D,n)",
    "grouplike_into_dual_numbers",
];

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("preset expression, column {}: {what}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a preset name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected a non-negative integer"))
    }

    fn coalgebra(&mut self, field: FieldSpec) -> Result<Arc<Coalgebra>> {
        match self.preset(field)? {
            Built::Coalgebra(c) => Ok(c),
            Built::Extension(_) => Err(self.error("expected a coalgebra, found an extension")),
        }
    }

    fn preset(&mut self, field: FieldSpec) -> Result<Built> {
        let name = self.ident()?;
        let coalgebra = |c: Coalgebra| Ok(Built::Coalgebra(Arc::new(c)));
        match name.as_str() {
            "grouplike" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                coalgebra(grouplike(field, n)?)
            }
            "matrix_coalgebra" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                coalgebra(matrix_coalgebra(field, n)?)
            }
            "dual_numbers" => coalgebra(dual_numbers(field)),
            "trivial" => coalgebra(Coalgebra::trivial(field)),
            "dual_of_square_zero_local" => {
                self.expect(b'(')?;
                let m = self.number()?;
                self.expect(b')')?;
                coalgebra(square_zero_local(field, m)?)
            }
            "trivial_extension" | "identity_extension" => {
                self.expect(b'(')?;
                let c = self.coalgebra(field)?;
                self.expect(b')')?;
                Ok(Built::Extension(if name == "trivial_extension" {
                    trivial_extension(c)
                } else {
                    identity_extension(c)
                }))
            }
            "set_map_extension" => {
                self.expect(b'(')?;
                self.expect(b'[')?;
                let mut f = Vec::new();
                if !self.eat(b']') {
                    loop {
                        f.push(self.number()?);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                self.expect(b',')?;
                let t = self.number()?;
                self.expect(b')')?;
                Ok(Built::Extension(set_map_extension(field, &f, t)?))
            }
            "direct_sum_coring" => {
                self.expect(b'(')?;
                let d = self.coalgebra(field)?;
                self.expect(b',')?;
                let n = self.number()?;
                self.expect(b')')?;
                Ok(Built::Extension(direct_sum_coring(d, n)?.lambda))
            }
            "grouplike_into_dual_numbers" => Ok(Built::Extension(grouplike_into_dual_numbers(field))),
            other => Err(Error::Parse(format!("unknown preset '{other}'"))),
        }
    }
}

/// Coalgebras used across the test suites.
pub fn coalgebras(field: FieldSpec) -> Vec<(String, Arc<Coalgebra>)> {
    vec![
        ("trivial".into(), Arc::new(Coalgebra::trivial(field))),
        ("grouplike(2)".into(), Arc::new(grouplike(field, 2).unwrap())),
        ("grouplike(3)".into(), Arc::new(grouplike(field, 3).unwrap())),
        ("matrix_coalgebra(2)".into(), Arc::new(matrix_coalgebra(field, 2).unwrap())),
        ("dual_numbers".into(), Arc::new(dual_numbers(field))),
        ("dual_of_square_zero_local(2)".into(), Arc::new(square_zero_local(field, 2).unwrap())),
    ]
}

/// Extensions used across the test suites, with a label each.
pub fn extensions(field: FieldSpec) -> Vec<(String, CoalgebraMorphism)> {
    let mut out = Vec::new();
    for (name, c) in coalgebras(field) {
        out.push((format!("identity_extension({name})"), identity_extension(c.clone())));
        out.push((format!("trivial_extension({name})"), trivial_extension(c)));
    }
    for (f, t) in [(vec![0, 0], 1), (vec![0, 1, 1], 2), (vec![0], 2), (vec![1, 0], 2)] {
        let label = format!("set_map_extension({f:?},{t})").replace(' ', "");
        out.push((label, set_map_extension(field, &f, t).unwrap()));
    }
    for d in ["grouplike(2)", "dual_numbers"] {
        for n in 1..=3 {
            let expr = format!("direct_sum_coring({d},{n})");
            if let Built::Extension(e) = build(&expr, field).unwrap() {
                out.push((expr, e));
            }
        }
    }
    out.push(("grouplike_into_dual_numbers".into(), grouplike_into_dual_numbers(field)));
    out
}
