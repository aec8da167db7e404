use std::collections::BTreeMap;
use std::fmt::Write as _;

use exactalg::rational;
use exactalg::{MultiPoly, Rat, RingMatrix};

use crate::error::DslError;

/// A free parameter placement for Laurent propagation: at resonance `level`
/// (in units of t), the parameter enters through variable `var` with
/// coefficient `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pin {
    pub level: Rat,
    pub var: String,
    pub scale: Rat,
}

/// Optional naming hints for the Laurent analysis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PainleveHints {
    /// Names given to free parameters, in order of appearance.
    pub params: Vec<String>,
    pub pins: Vec<Pin>,
    /// Prefix for invariant values, e.g. `b` gives `b1, b2, ...`.
    pub prefix: Option<String>,
}

/// Lax pencil `A(h) = sum A_k h^k`, `B(h) = sum B_k h^k` over the system's
/// phase variables, with `dA/dt = [A, B]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilSpec {
    pub name: String,
    pub dim: usize,
    pub a: BTreeMap<i32, RingMatrix<MultiPoly>>,
    pub b: BTreeMap<i32, RingMatrix<MultiPoly>>,
}

impl PencilSpec {
    pub fn new(name: &str, dim: usize) -> Self {
        PencilSpec { name: name.to_string(), dim, a: BTreeMap::new(), b: BTreeMap::new() }
    }

    /// Smallest and largest h-exponent carrying a coefficient of A.
    pub fn h_range(&self) -> Option<(i32, i32)> {
        Some((*self.a.keys().next()?, *self.a.keys().next_back()?))
    }

    fn slot(&mut self, which: char, k: i32) -> &mut RingMatrix<MultiPoly> {
        let n = self.dim;
        let map = if which == 'A' { &mut self.a } else { &mut self.b };
        map.entry(k).or_insert_with(|| RingMatrix::zeros(n, n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldSystem {
    name: String,
    vars: Vec<String>,
    consts: Vec<String>,
    symbols: Vec<String>,
    equations: Vec<MultiPoly>,
    invariants: Vec<(String, MultiPoly)>,
    hamiltonian: Option<String>,
    casimirs: Vec<String>,
    involutions: Vec<(String, String)>,
    poisson: Option<RingMatrix<MultiPoly>>,
    painleve: PainleveHints,
    pencils: Vec<PencilSpec>,
}

impl VectorFieldSystem {
    /// A system with right-hand sides `equations[i]` for `vars[i]`. All
    /// polynomials must only involve `vars` and `consts`.
    pub fn new(
        name: &str,
        vars: Vec<String>,
        consts: Vec<String>,
        equations: Vec<MultiPoly>,
    ) -> Result<Self, DslError> {
        if equations.len() != vars.len() {
            return Err(DslError::Dimension(format!(
                "{} equations for {} variables",
                equations.len(),
                vars.len()
            )));
        }
        let symbols: Vec<String> = vars.iter().chain(&consts).cloned().collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(DslError::Invalid { line: 0, msg: format!("symbol `{s}` declared twice") });
            }
        }
        let mut sys = VectorFieldSystem {
            name: name.to_string(),
            vars,
            consts,
            symbols,
            equations: Vec::new(),
            invariants: Vec::new(),
            hamiltonian: None,
            casimirs: Vec::new(),
            involutions: Vec::new(),
            poisson: None,
            painleve: PainleveHints::default(),
            pencils: Vec::new(),
        };
        sys.equations = equations.iter().map(|p| sys.adopt(p)).collect::<Result<_, _>>()?;
        Ok(sys)
    }

    /// Re-expresses `p` over the system's symbol list.
    fn adopt(&self, p: &MultiPoly) -> Result<MultiPoly, DslError> {
        p.with_vars(&self.symbols).map_err(|_| {
            let bad = p.used_vars().into_iter().find(|v| !self.symbols.contains(v)).unwrap_or_default();
            DslError::Undeclared { line: 0, col: 0, name: bad }
        })
    }

    pub fn with_invariant(mut self, name: &str, p: &MultiPoly) -> Result<Self, DslError> {
        if self.invariant(name).is_some() {
            return Err(DslError::Invalid { line: 0, msg: format!("invariant `{name}` declared twice") });
        }
        let p = self.adopt(p)?;
        self.invariants.push((name.to_string(), p));
        Ok(self)
    }

    /// Installs a Poisson matrix after checking it is square, of the right
    /// size and skew-symmetric as a polynomial matrix.
    pub fn with_poisson(mut self, j: RingMatrix<MultiPoly>) -> Result<Self, DslError> {
        let m = self.vars.len();
        if j.rows() != m || j.cols() != m {
            return Err(DslError::Dimension(format!("poisson matrix is {}x{}, expected {m}x{m}", j.rows(), j.cols())));
        }
        for r in 0..m {
            for c in r..m {
                if !(j.get(r, c) + j.get(c, r)).is_zero() {
                    return Err(DslError::NonSkew { i: r + 1, j: c + 1 });
                }
            }
        }
        let j = j.map(|p| self.adopt(p).unwrap_or_else(|_| p.clone()));
        for r in 0..m {
            for c in 0..m {
                self.adopt(j.get(r, c))?;
            }
        }
        self.poisson = Some(j);
        Ok(self)
    }

    pub fn with_hamiltonian(mut self, name: &str) -> Result<Self, DslError> {
        self.require_invariant(name)?;
        self.hamiltonian = Some(name.to_string());
        Ok(self)
    }

    pub fn with_casimir(mut self, name: &str) -> Result<Self, DslError> {
        self.require_invariant(name)?;
        self.casimirs.push(name.to_string());
        Ok(self)
    }

    pub fn with_involution(mut self, f: &str, g: &str) -> Result<Self, DslError> {
        self.require_invariant(f)?;
        self.require_invariant(g)?;
        self.involutions.push((f.to_string(), g.to_string()));
        Ok(self)
    }

    pub fn with_hints(mut self, hints: PainleveHints) -> Result<Self, DslError> {
        for pin in &hints.pins {
            if !self.vars.contains(&pin.var) {
                return Err(DslError::Undeclared { line: 0, col: 0, name: pin.var.clone() });
            }
        }
        self.painleve = hints;
        Ok(self)
    }

    pub fn with_pencil(mut self, p: PencilSpec) -> Result<Self, DslError> {
        for m in p.a.values().chain(p.b.values()) {
            if m.rows() != p.dim || m.cols() != p.dim {
                return Err(DslError::Dimension(format!("pencil `{}` has a block of the wrong size", p.name)));
            }
        }
        let p = PencilSpec {
            a: p.a.iter().map(|(k, m)| (*k, m.map(|e| self.adopt(e).unwrap_or_else(|_| e.clone())))).collect(),
            b: p.b.iter().map(|(k, m)| (*k, m.map(|e| self.adopt(e).unwrap_or_else(|_| e.clone())))).collect(),
            ..p
        };
        for m in p.a.values().chain(p.b.values()) {
            for r in 0..p.dim {
                for c in 0..p.dim {
                    self.adopt(m.get(r, c))?;
                }
            }
        }
        self.pencils.push(p);
        Ok(self)
    }

    fn require_invariant(&self, name: &str) -> Result<&MultiPoly, DslError> {
        self.invariant(name).ok_or_else(|| DslError::UnknownInvariant(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn consts(&self) -> &[String] {
        &self.consts
    }

    /// Variables followed by constants; every polynomial of the system is
    /// expressed over this list.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    pub fn invariants(&self) -> &[(String, MultiPoly)] {
        &self.invariants
    }

    pub fn invariant(&self, name: &str) -> Option<&MultiPoly> {
        self.invariants.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn hamiltonian(&self) -> Option<&str> {
        self.hamiltonian.as_deref()
    }

    pub fn casimirs(&self) -> &[String] {
        &self.casimirs
    }

    pub fn involutions(&self) -> &[(String, String)] {
        &self.involutions
    }

    pub fn poisson(&self) -> Option<&RingMatrix<MultiPoly>> {
        self.poisson.as_ref()
    }

    pub fn hints(&self) -> &PainleveHints {
        &self.painleve
    }

    pub fn pencils(&self) -> &[PencilSpec] {
        &self.pencils
    }

    pub fn pencil(&self, name: &str) -> Option<&PencilSpec> {
        self.pencils.iter().find(|p| p.name == name)
    }

    /// Gradient of `f` with respect to the phase variables.
    pub fn gradient(&self, f: &MultiPoly) -> Vec<MultiPoly> {
        self.vars.iter().map(|v| f.derivative(v).with_vars(&self.symbols).unwrap_or_else(|_| f.derivative(v))).collect()
    }

    /// `J grad f` as expanded polynomials.
    pub fn hamiltonian_field_of(&self, f: &MultiPoly) -> Result<Vec<MultiPoly>, DslError> {
        let j = self.poisson.as_ref().ok_or_else(|| DslError::MissingPoisson(self.name.clone()))?;
        let g = self.gradient(f);
        Ok(j.apply(&g).expect("poisson matrix matches the variable count"))
    }

    /// `J grad H` for a named invariant.
    pub fn hamiltonian_vector_field(&self, name: &str) -> Result<Vec<MultiPoly>, DslError> {
        let h = self.require_invariant(name)?.clone();
        self.hamiltonian_field_of(&h)
    }

    /// `<grad f, J grad g>` as an expanded polynomial.
    pub fn bracket(&self, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, DslError> {
        let jg = self.hamiltonian_field_of(g)?;
        let mut acc = MultiPoly::zero_over(&self.symbols);
        for (df, x) in self.gradient(f).iter().zip(&jg) {
            acc = acc + df * x;
        }
        Ok(acc)
    }

    /// Lie derivative of `f` along the vector field.
    pub fn time_derivative(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero_over(&self.symbols);
        for (df, rhs) in self.gradient(f).iter().zip(&self.equations) {
            acc = acc + df * rhs;
        }
        acc
    }

    /// Replaces a symbolic constant by a rational value everywhere.
    pub fn bind(&self, name: &str, value: &Rat) -> Result<Self, DslError> {
        if !self.consts.iter().any(|c| c == name) {
            return Err(DslError::UnknownConstant(name.to_string()));
        }
        let consts: Vec<String> = self.consts.iter().filter(|c| *c != name).cloned().collect();
        let symbols: Vec<String> = self.vars.iter().chain(&consts).cloned().collect();
        let v = MultiPoly::constant(value.clone());
        let sub = |p: &MultiPoly| -> MultiPoly {
            p.substitute_one(name, &v).compact().with_vars(&symbols).expect("bound constant removed")
        };
        Ok(VectorFieldSystem {
            name: self.name.clone(),
            vars: self.vars.clone(),
            consts,
            symbols: symbols.clone(),
            equations: self.equations.iter().map(sub).collect(),
            invariants: self.invariants.iter().map(|(n, p)| (n.clone(), sub(p))).collect(),
            hamiltonian: self.hamiltonian.clone(),
            casimirs: self.casimirs.clone(),
            involutions: self.involutions.clone(),
            poisson: self.poisson.as_ref().map(|j| j.map(sub)),
            painleve: self.painleve.clone(),
            pencils: self
                .pencils
                .iter()
                .map(|p| PencilSpec {
                    name: p.name.clone(),
                    dim: p.dim,
                    a: p.a.iter().map(|(k, m)| (*k, m.map(sub))).collect(),
                    b: p.b.iter().map(|(k, m)| (*k, m.map(sub))).collect(),
                })
                .collect(),
        })
    }

    /// Canonical text form; `parse_system(&sys.to_ivf())` gives back `sys`.
    pub fn to_ivf(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "system {}", self.name);
        let _ = writeln!(s, "vars {}", self.vars.join(" "));
        if !self.consts.is_empty() {
            let _ = writeln!(s, "consts {}", self.consts.join(" "));
        }
        for (v, p) in self.vars.iter().zip(&self.equations) {
            let _ = writeln!(s, "eq {v} = {p}");
        }
        for (n, p) in &self.invariants {
            let _ = writeln!(s, "invariant {n} = {p}");
        }
        if let Some(h) = &self.hamiltonian {
            let _ = writeln!(s, "hamiltonian {h}");
        }
        for c in &self.casimirs {
            let _ = writeln!(s, "casimir {c}");
        }
        for (f, g) in &self.involutions {
            let _ = writeln!(s, "involution {f} {g}");
        }
        if let Some(j) = &self.poisson {
            let mut any = false;
            for r in 0..j.rows() {
                for c in r + 1..j.cols() {
                    if !j.get(r, c).is_zero() {
                        let _ = writeln!(s, "poisson {} {} = {}", r + 1, c + 1, j.get(r, c));
                        any = true;
                    }
                }
            }
            if !any {
                let _ = writeln!(s, "poisson zero");
            }
        }
        let h = &self.painleve;
        if !h.params.is_empty() {
            let _ = writeln!(s, "painleve params {}", h.params.join(" "));
        }
        for p in &h.pins {
            let _ = writeln!(s, "painleve pin {} {} {}", rational::fmt(&p.level), p.var, rational::fmt(&p.scale));
        }
        if let Some(p) = &h.prefix {
            let _ = writeln!(s, "painleve prefix {p}");
        }
        for p in &self.pencils {
            let _ = writeln!(s, "pencil {} dim {}", p.name, p.dim);
            for (which, map) in [("A", &p.a), ("B", &p.b)] {
                for (k, m) in map {
                    for r in 0..p.dim {
                        for c in 0..p.dim {
                            if !m.get(r, c).is_zero() {
                                let _ = writeln!(s, "pencil {} {which} {k} {} {} = {}", p.name, r + 1, c + 1, m.get(r, c));
                            }
                        }
                    }
                }
            }
        }
        s
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn words(&self) -> Vec<&str> {
        self.text.split_whitespace().collect()
    }

    fn invalid(&self, msg: impl Into<String>) -> DslError {
        DslError::Invalid { line: self.no, msg: msg.into() }
    }

    /// Splits `lhs = rhs`, returning the rhs with its 1-based column.
    fn split_eq(&self) -> Result<(&str, &str, usize), DslError> {
        let idx = self
            .text
            .find('=')
            .ok_or_else(|| DslError::syntax(self.no, self.text.chars().count() + 1, "expected `=`"))?;
        let rhs = &self.text[idx + 1..];
        let col = self.text[..idx + 1].chars().count() + 1;
        Ok((&self.text[..idx], rhs, col))
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_alphabetic() || ch == '_') && c.all(|ch| ch.is_alphanumeric() || ch == '_')
}

/// Parses a `.ivf` document.
///
/// ```text
/// system kvm5
/// vars x1 x2 x3 x4 x5
/// eq x1 = x1*(x5 - x2)
/// invariant H2 = x1 + x2 + x3 + x4 + x5
/// poisson 1 2 = x1*x2
/// ```
///
/// Declarations (`system`, `vars`, `consts`) may appear anywhere; every other
/// line is resolved against them. `#` starts a comment.
pub fn parse_system(text: &str) -> Result<VectorFieldSystem, DslError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line { no: i + 1, text: l.split('#').next().unwrap_or("") })
        .filter(|l| !l.text.trim().is_empty())
        .collect();

    let mut name = None;
    let mut vars: Option<Vec<String>> = None;
    let mut consts: Vec<String> = Vec::new();
    for l in &lines {
        let w = l.words();
        match w[0] {
            "system" => {
                if w.len() != 2 || !is_ident(w[1]) {
                    return Err(l.invalid("expected `system NAME`"));
                }
                if name.replace(w[1].to_string()).is_some() {
                    return Err(l.invalid("duplicate `system` line"));
                }
            }
            "vars" | "consts" => {
                for s in &w[1..] {
                    if !is_ident(s) {
                        return Err(l.invalid(format!("`{s}` is not a valid symbol name")));
                    }
                }
                let list: Vec<String> = w[1..].iter().map(|s| s.to_string()).collect();
                if w[0] == "vars" {
                    if vars.replace(list).is_some() {
                        return Err(l.invalid("duplicate `vars` line"));
                    }
                } else {
                    consts.extend(list);
                }
            }
            _ => {}
        }
    }
    let name = name.ok_or(DslError::Invalid { line: 1, msg: "missing `system` line".into() })?;
    let vars = vars.ok_or(DslError::Invalid { line: 1, msg: "missing `vars` line".into() })?;
    if vars.is_empty() {
        return Err(DslError::Dimension("no variables declared".into()));
    }
    let symbols: Vec<String> = vars.iter().chain(&consts).cloned().collect();
    for (i, s) in symbols.iter().enumerate() {
        if symbols[..i].contains(s) {
            return Err(DslError::Invalid { line: 1, msg: format!("symbol `{s}` declared twice") });
        }
    }
    let m = vars.len();
    let var_index = |l: &Line, s: &str| -> Result<usize, DslError> {
        if let Ok(k) = s.parse::<usize>() {
            if k == 0 || k > m {
                return Err(DslError::Dimension(format!("line {}: index {k} outside 1..={m}", l.no)));
            }
            return Ok(k - 1);
        }
        vars.iter().position(|v| v == s).ok_or_else(|| l.invalid(format!("`{s}` is not a variable")))
    };
    let expr = |l: &Line| -> Result<MultiPoly, DslError> {
        let (_, rhs, col) = l.split_eq()?;
        crate::expr::parse_expr(rhs, &symbols, l.no, col)
    };

    let mut eqs: Vec<Option<MultiPoly>> = vec![None; m];
    let mut invariants: Vec<(String, MultiPoly)> = Vec::new();
    let mut marks: Vec<(&Line, Vec<String>)> = Vec::new();
    let mut poisson: Option<RingMatrix<MultiPoly>> = None;
    let mut given = vec![vec![false; m]; m];
    let mut hints = PainleveHints::default();
    let mut pencils: Vec<PencilSpec> = Vec::new();

    for l in &lines {
        let w = l.words();
        match w[0] {
            "system" | "vars" | "consts" => {}
            "eq" => {
                let (lhs, _, _) = l.split_eq()?;
                let lw: Vec<&str> = lhs.split_whitespace().collect();
                if lw.len() != 2 {
                    return Err(l.invalid("expected `eq VAR = expr`"));
                }
                let i = vars.iter().position(|v| v == lw[1]).ok_or_else(|| DslError::Undeclared {
                    line: l.no,
                    col: l.text.find(lw[1]).unwrap_or(0) + 1,
                    name: lw[1].to_string(),
                })?;
                if eqs[i].replace(expr(l)?).is_some() {
                    return Err(l.invalid(format!("second equation for `{}`", lw[1])));
                }
            }
            "invariant" => {
                let (lhs, _, _) = l.split_eq()?;
                let lw: Vec<&str> = lhs.split_whitespace().collect();
                if lw.len() != 2 || !is_ident(lw[1]) {
                    return Err(l.invalid("expected `invariant NAME = expr`"));
                }
                if invariants.iter().any(|(n, _)| n == lw[1]) {
                    return Err(l.invalid(format!("invariant `{}` declared twice", lw[1])));
                }
                invariants.push((lw[1].to_string(), expr(l)?));
            }
            "hamiltonian" | "casimir" | "involution" => {
                let want = if w[0] == "involution" { 3 } else { 2 };
                if w.len() != want {
                    return Err(l.invalid(format!("malformed `{}` line", w[0])));
                }
                marks.push((l, w.iter().map(|s| s.to_string()).collect()));
            }
            "poisson" => {
                let j = poisson.get_or_insert_with(|| RingMatrix::zeros(m, m));
                if w.len() == 2 && w[1] == "zero" {
                    continue;
                }
                let (lhs, _, _) = l.split_eq()?;
                let lw: Vec<&str> = lhs.split_whitespace().collect();
                if lw.len() != 3 {
                    return Err(l.invalid("expected `poisson I J = expr`"));
                }
                let (r, c) = (var_index(l, lw[1])?, var_index(l, lw[2])?);
                let p = expr(l)?;
                if r == c {
                    if !p.is_zero() {
                        return Err(DslError::NonSkew { i: r + 1, j: c + 1 });
                    }
                    continue;
                }
                if given[r][c] {
                    return Err(l.invalid(format!("poisson entry ({}, {}) given twice", r + 1, c + 1)));
                }
                if given[c][r] {
                    if !(j.get(c, r) + &p).is_zero() {
                        return Err(DslError::NonSkew { i: r.min(c) + 1, j: r.max(c) + 1 });
                    }
                } else {
                    j.set(c, r, -p.clone());
                }
                j.set(r, c, p);
                given[r][c] = true;
            }
            "painleve" => match w.get(1).copied() {
                Some("params") => {
                    if w[2..].iter().any(|s| !is_ident(s) || symbols.iter().any(|v| v == s)) {
                        return Err(l.invalid("parameter names must be fresh identifiers"));
                    }
                    hints.params = w[2..].iter().map(|s| s.to_string()).collect();
                }
                Some("pin") if w.len() == 4 || w.len() == 5 => {
                    let level = rational::parse(w[2]).ok_or_else(|| l.invalid(format!("bad level `{}`", w[2])))?;
                    let var = vars[var_index(l, w[3])?].clone();
                    let scale = match w.get(4) {
                        Some(s) => rational::parse(s).ok_or_else(|| l.invalid(format!("bad scale `{s}`")))?,
                        None => rational::int(1),
                    };
                    if num_traits::Zero::is_zero(&scale) {
                        return Err(l.invalid("pin scale must be nonzero"));
                    }
                    hints.pins.push(Pin { level, var, scale });
                }
                Some("prefix") if w.len() == 3 && is_ident(w[2]) => hints.prefix = Some(w[2].to_string()),
                _ => return Err(l.invalid("expected `painleve params|pin|prefix ...`")),
            },
            "pencil" => {
                if w.len() == 4 && w[2] == "dim" {
                    let n: usize = w[3].parse().map_err(|_| l.invalid("bad pencil dimension"))?;
                    if n == 0 || pencils.iter().any(|p| p.name == w[1]) {
                        return Err(l.invalid("pencil dimension must be positive and declared once"));
                    }
                    pencils.push(PencilSpec::new(w[1], n));
                    continue;
                }
                let (lhs, _, _) = l.split_eq()?;
                let lw: Vec<&str> = lhs.split_whitespace().collect();
                if lw.len() != 6 || (lw[2] != "A" && lw[2] != "B") {
                    return Err(l.invalid("expected `pencil NAME A|B K I J = expr`"));
                }
                let p = expr(l)?;
                let spec = pencils
                    .iter_mut()
                    .find(|p| p.name == lw[1])
                    .ok_or_else(|| l.invalid(format!("pencil `{}` used before `dim` line", lw[1])))?;
                let k: i32 = lw[3].parse().map_err(|_| l.invalid("bad h-exponent"))?;
                let (r, c): (usize, usize) = match (lw[4].parse(), lw[5].parse()) {
                    (Ok(r), Ok(c)) if (1..=spec.dim).contains(&r) && (1..=spec.dim).contains(&c) => (r, c),
                    _ => return Err(DslError::Dimension(format!("line {}: entry outside the pencil", l.no))),
                };
                let which = lw[2].chars().next().unwrap_or('A');
                let slot = spec.slot(which, k);
                let cur = slot.get(r - 1, c - 1).clone();
                slot.set(r - 1, c - 1, cur + p);
            }
            other => return Err(DslError::syntax(l.no, 1, format!("unknown keyword `{other}`"))),
        }
    }

    let equations: Vec<MultiPoly> = eqs
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| DslError::Dimension(format!("no equation for `{}`", vars[i]))))
        .collect::<Result<_, _>>()?;
    let mut sys = VectorFieldSystem::new(&name, vars.clone(), consts, equations)?;
    for (n, p) in &invariants {
        sys = sys.with_invariant(n, p)?;
    }
    for (l, w) in marks {
        let lookup = |n: &str| {
            if invariants.iter().any(|(k, _)| k == n) {
                Ok(())
            } else {
                Err(DslError::UnknownInvariant(format!("{n} (line {})", l.no)))
            }
        };
        for n in &w[1..] {
            lookup(n)?;
        }
        sys = match w[0].as_str() {
            "hamiltonian" => {
                if sys.hamiltonian.is_some() {
                    return Err(l.invalid("duplicate `hamiltonian` line"));
                }
                sys.with_hamiltonian(&w[1])?
            }
            "casimir" => sys.with_casimir(&w[1])?,
            _ => sys.with_involution(&w[1], &w[2])?,
        };
    }
    if let Some(j) = poisson {
        sys = sys.with_poisson(j)?;
    }
    sys = sys.with_hints(hints)?;
    for p in pencils {
        sys = sys.with_pencil(p)?;
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OSC: &str = "
system oscillator
vars z1 z2
eq z1 = z2
eq z2 = -z1
invariant H = 1/2*(z1^2 + z2^2)
hamiltonian H
poisson 1 2 = 1
";

    #[test]
    fn oscillator() {
        let s = parse_system(OSC).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.hamiltonian_vector_field("H").unwrap(), s.equations().to_vec());
        assert_eq!(s.poisson().unwrap().get(1, 0), &MultiPoly::from_int(-1));
    }

    #[test]
    fn non_skew_rejected() {
        let src = "system bad\nvars z1 z2\neq z1 = 0\neq z2 = 0\npoisson 1 2 = z1\npoisson 2 1 = z1\n";
        assert_eq!(parse_system(src), Err(DslError::NonSkew { i: 1, j: 2 }));
        let src = "system bad\nvars z1 z2\neq z1 = 0\neq z2 = 0\npoisson 1 1 = z1\n";
        assert_eq!(parse_system(src), Err(DslError::NonSkew { i: 1, j: 1 }));
        let ok = "system ok\nvars z1 z2\neq z1 = 0\neq z2 = 0\npoisson 1 2 = z1\npoisson z2 z1 = -z1\n";
        assert!(parse_system(ok).is_ok());
    }

    #[test]
    fn declaration_errors() {
        let src = "system s\nvars x\neq x = x + y\n";
        assert_eq!(parse_system(src), Err(DslError::Undeclared { line: 3, col: 12, name: "y".into() }));
        let src = "system s\nvars x y\neq x = y\n";
        assert!(matches!(parse_system(src), Err(DslError::Dimension(_))));
        let src = "system s\nvars x\neq x = x\nhamiltonian H\n";
        assert!(matches!(parse_system(src), Err(DslError::UnknownInvariant(_))));
        let src = "system s\nvars x\neq x = x\nfrobnicate\n";
        assert!(matches!(parse_system(src), Err(DslError::Syntax { line: 4, col: 1, .. })));
        let src = "system s\nvars x x\neq x = x\n";
        assert!(matches!(parse_system(src), Err(DslError::Invalid { .. })));
    }

    #[test]
    fn binding_constants() {
        let src = "system s\nvars x\nconsts A\neq x = A*x^2 - A^2\n";
        let s = parse_system(src).unwrap().bind("A", &rational::int(2)).unwrap();
        assert!(s.consts().is_empty());
        assert_eq!(s.equations()[0].to_string(), "2*x^2 - 4");
        assert!(matches!(s.bind("B", &rational::int(1)), Err(DslError::UnknownConstant(_))));
    }

    #[test]
    fn pencils_and_hints_round_trip() {
        let src = "
system toda2
vars a1 b1 b2
eq a1 = a1*(b2 - b1)
eq b1 = 2*a1^2
eq b2 = -2*a1^2
painleve params u v
painleve pin 1/2 b1 -1
painleve prefix c
pencil lax dim 2
pencil lax A 0 1 1 = b1
pencil lax A 0 2 2 = b2
pencil lax A 0 1 2 = a1
pencil lax A 0 2 1 = a1
pencil lax B -1 1 2 = a1
";
        let s = parse_system(src).unwrap();
        let p = s.pencil("lax").unwrap();
        assert_eq!(p.h_range(), Some((0, 0)));
        assert_eq!(p.b[&-1].get(0, 1), &MultiPoly::var("a1"));
        assert_eq!(s.hints().pins[0].scale, rational::int(-1));
        let again = parse_system(&s.to_ivf()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_ivf(), s.to_ivf());
    }
}
