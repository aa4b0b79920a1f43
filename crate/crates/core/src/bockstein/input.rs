//! Input documents: generators with monomial relations, or an explicit basis, plus differentials.
//!
//! In polynomial mode the basis is every monomial of the box outside the relation ideal, and
//! differentials on generators extend by the Leibniz rule. A monomial is `Z2` exactly when all of
//! its generators are.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{BocksteinError, Class, ClosedComplex, DifferentialEntry, Torsion};
use crate::cta::DegreeBox;
use crate::grading::TriDegree;

pub const KQ_DATASET_JSON: &str = include_str!("../../data/kq.json");
pub const SCHEMA_JSON: &str = include_str!("../../data/bockstein-input.schema.json");

const EXPONENT_CAP: u32 = 64;
const MONOMIAL_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub degree: [i64; 3],
    pub torsion: Torsion,
}

impl GeneratorSpec {
    pub fn degree(&self) -> TriDegree {
        TriDegree::new(self.degree[0], self.degree[1], self.degree[2])
    }
}

/// `d_page(source) = target`, the target an integer combination of monomials or basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpec {
    pub page: u32,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinInput {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    /// Monomials that vanish; polynomial mode only.
    #[serde(default)]
    pub relations: Vec<String>,
    /// When present, the basis is exactly this list and no products are formed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<GeneratorSpec>>,
    #[serde(default)]
    pub differentials: Vec<DifferentialSpec>,
}

/// The bundled `kq` transcription.
pub fn kq_dataset() -> BocksteinInput {
    BocksteinInput::from_json(KQ_DATASET_JSON).expect("bundled dataset parses")
}

type Mono = Vec<u32>;
type Poly = BTreeMap<Mono, BigInt>;

/// Integer combination of products of symbols, as `(coefficient, exponents)` terms.
fn parse_combination(s: &str, symbols: &HashMap<&str, usize>) -> Result<Vec<(BigInt, Mono)>, BocksteinError> {
    let n = symbols.len();
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let mut pieces = Vec::new();
    for ch in s.chars() {
        if ch == '+' || ch == '-' {
            if !current.trim().is_empty() {
                pieces.push((sign, std::mem::take(&mut current)));
            } else if !pieces.is_empty() || !current.trim().is_empty() {
                return Err(BocksteinError::Parse(s.to_string()));
            }
            current.clear();
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            current.push(ch);
        }
    }
    if current.trim().is_empty() {
        return Err(BocksteinError::Parse(s.to_string()));
    }
    pieces.push((sign, current));
    for (sign, piece) in pieces {
        let mut coeff = BigInt::from(sign);
        let mut mono = vec![0u32; n];
        for (i, tok) in piece.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()).enumerate() {
            if i == 0 {
                if let Ok(k) = tok.parse::<i64>() {
                    coeff *= k;
                    continue;
                }
            }
            let (base, e) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| BocksteinError::Parse(tok.to_string()))?),
                None => (tok, 1),
            };
            if base == "1" {
                continue;
            }
            let idx = *symbols.get(base).ok_or_else(|| BocksteinError::UnknownSymbol(base.to_string()))?;
            mono[idx] += e;
        }
        terms.push((coeff, mono));
    }
    Ok(terms)
}

struct Algebra<'a> {
    gens: &'a [GeneratorSpec],
    relations: Vec<Mono>,
    /// `(page, generator) -> d_page(generator)`.
    diffs: HashMap<(u32, usize), Poly>,
}

impl Algebra<'_> {
    fn degree(&self, m: &[u32]) -> TriDegree {
        m.iter().zip(self.gens).fold(TriDegree::ZERO, |acc, (&e, g)| acc + (e as i64) * g.degree())
    }

    fn torsion(&self, m: &[u32]) -> Torsion {
        if m.iter().zip(self.gens).any(|(&e, g)| e > 0 && g.torsion == Torsion::F2) {
            Torsion::F2
        } else {
            Torsion::Z2
        }
    }

    fn vanishes(&self, m: &[u32]) -> bool {
        self.relations.iter().any(|r| r.iter().zip(m).all(|(a, b)| a <= b))
    }

    fn label(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(self.gens)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, g)| if e == 1 { g.label.clone() } else { format!("{}^{e}", g.label) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn add_term(&self, out: &mut Poly, m: Mono, c: BigInt) {
        let e = out.entry(m.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if self.torsion(&m) == Torsion::F2 {
            *e = e.mod_floor(&BigInt::from(2));
        }
        if e.is_zero() {
            out.remove(&m);
        }
    }

    fn times_mono(&self, p: &Poly, m: &[u32], sign: i64) -> Poly {
        let mut out = Poly::new();
        for (pm, c) in p {
            let prod: Mono = pm.iter().zip(m).map(|(a, b)| a + b).collect();
            self.add_term(&mut out, prod, c * sign);
        }
        out
    }

    fn koszul(&self, m: &[u32]) -> i64 {
        if self.degree(m).p.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// `d_page(m)` in the free algebra, splitting off the first or the last generator.
    fn derivation(&self, page: u32, m: &[u32], first: bool, memo: &mut HashMap<(u32, Mono, bool), Poly>) -> Poly {
        if let Some(p) = memo.get(&(page, m.to_vec(), first)) {
            return p.clone();
        }
        let support: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
        let out = match (if first { support.first() } else { support.last() }).copied() {
            None => Poly::new(),
            Some(g) => {
                let mut rest = m.to_vec();
                rest[g] -= 1;
                let mut gm = vec![0; m.len()];
                gm[g] = 1;
                let dg = self.diffs.get(&(page, g)).cloned().unwrap_or_default();
                let drest = self.derivation(page, &rest, first, memo);
                // first: d(g rest) = d(g) rest + (-1)^|g| g d(rest); last: d(rest g) = d(rest) g + (-1)^|rest| rest d(g).
                let (a, b) = if first {
                    (self.times_mono(&dg, &rest, 1), self.times_mono(&drest, &gm, self.koszul(&gm)))
                } else {
                    (self.times_mono(&drest, &gm, 1), self.times_mono(&dg, &rest, self.koszul(&rest)))
                };
                let mut sum = a;
                for (k, c) in b {
                    self.add_term(&mut sum, k, c);
                }
                sum
            }
        };
        memo.insert((page, m.to_vec(), first), out.clone());
        out
    }

    fn reduce(&self, p: Poly) -> Poly {
        p.into_iter().filter(|(m, _)| !self.vanishes(m)).collect()
    }

    fn enumerate(&self, bounds: &DegreeBox) -> Result<Vec<Mono>, BocksteinError> {
        let n = self.gens.len();
        // Reachable ranges of the remaining generators, per coordinate.
        let mut tail_min = vec![[0i64; 3]; n + 1];
        let mut tail_max = vec![[0i64; 3]; n + 1];
        for i in (0..n).rev() {
            let d = self.gens[i].degree().as_array();
            for c in 0..3 {
                let x = d[c] * EXPONENT_CAP as i64;
                tail_min[i][c] = tail_min[i + 1][c] + x.min(0);
                tail_max[i][c] = tail_max[i + 1][c] + x.max(0);
            }
        }
        let lo = [bounds.p.0, bounds.q.0, bounds.w.0];
        let hi = [bounds.p.1, bounds.q.1, bounds.w.1];
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        self.dfs(0, [0; 3], &mut cur, &tail_min, &tail_max, &lo, &hi, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        deg: [i64; 3],
        cur: &mut Vec<u32>,
        tmin: &[[i64; 3]],
        tmax: &[[i64; 3]],
        lo: &[i64; 3],
        hi: &[i64; 3],
        out: &mut Vec<Mono>,
    ) -> Result<(), BocksteinError> {
        if (0..3).any(|c| deg[c] + tmin[i][c] > hi[c] || deg[c] + tmax[i][c] < lo[c]) {
            return Ok(());
        }
        if self.vanishes(cur) {
            return Ok(());
        }
        if i == self.gens.len() {
            if (0..3).all(|c| lo[c] <= deg[c] && deg[c] <= hi[c]) {
                if out.len() >= MONOMIAL_LIMIT {
                    return Err(BocksteinError::BoxTooLarge(MONOMIAL_LIMIT));
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        let d = self.gens[i].degree().as_array();
        for e in 0..=EXPONENT_CAP {
            cur[i] = e;
            let nd = [deg[0] + d[0] * e as i64, deg[1] + d[1] * e as i64, deg[2] + d[2] * e as i64];
            self.dfs(i + 1, nd, cur, tmin, tmax, lo, hi, out)?;
            if self.vanishes(cur) {
                break;
            }
        }
        cur[i] = 0;
        Ok(())
    }
}

fn check_pages(specs: &[DifferentialSpec]) -> Result<(), BocksteinError> {
    match specs.iter().find(|d| d.page == 0) {
        Some(_) => Err(BocksteinError::BadPage(0)),
        None => Ok(()),
    }
}

fn to_i64(c: &BigInt) -> Result<i64, BocksteinError> {
    c.to_i64().ok_or_else(|| BocksteinError::Invalid(format!("coefficient {c} out of range")))
}

impl BocksteinInput {
    pub fn from_json(s: &str) -> Result<Self, BocksteinError> {
        serde_json::from_str(s).map_err(|e| BocksteinError::Invalid(e.to_string()))
    }

    /// Expands the basis over `bounds` and closes the differentials.
    pub fn close(&self, bounds: DegreeBox) -> Result<ClosedComplex, BocksteinError> {
        check_pages(&self.differentials)?;
        match &self.basis {
            Some(basis) => self.close_explicit(basis, bounds),
            None => self.close_polynomial(bounds),
        }
    }

    fn close_explicit(&self, basis: &[GeneratorSpec], bounds: DegreeBox) -> Result<ClosedComplex, BocksteinError> {
        let symbols: HashMap<&str, usize> = basis.iter().enumerate().map(|(i, g)| (g.label.as_str(), i)).collect();
        if symbols.len() != basis.len() {
            let mut seen = BTreeSet::new();
            let dup = basis.iter().find(|g| !seen.insert(g.label.as_str())).unwrap();
            return Err(BocksteinError::DuplicateLabel(dup.label.clone()));
        }
        let kept: Vec<usize> = (0..basis.len()).filter(|&i| bounds.contains(basis[i].degree())).collect();
        let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let classes: Vec<Class> =
            kept.iter().map(|&i| Class { label: basis[i].label.clone(), degree: basis[i].degree(), torsion: basis[i].torsion }).collect();
        let mut entries = Vec::new();
        for d in &self.differentials {
            let src = *symbols.get(d.source.as_str()).ok_or_else(|| BocksteinError::UnknownSymbol(d.source.clone()))?;
            let expected = basis[src].degree() + TriDegree::new(-1, 0, d.page as i64);
            for (c, m) in parse_combination(&d.target, &symbols)? {
                let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
                if nz.len() != 1 || m[nz[0]] != 1 {
                    return Err(BocksteinError::Parse(format!("`{}` is not a combination of basis classes", d.target)));
                }
                let tgt = nz[0];
                if basis[tgt].degree() != expected {
                    return Err(BocksteinError::InhomogeneousDifferential {
                        page: d.page,
                        source_label: d.source.clone(),
                        term: basis[tgt].label.clone(),
                        found: basis[tgt].degree(),
                        expected,
                    });
                }
                if let (Some(&s), Some(&t)) = (new_index.get(&src), new_index.get(&tgt)) {
                    entries.push(DifferentialEntry { page: d.page, source: s, target: t, coeff: to_i64(&c)? });
                }
            }
        }
        ClosedComplex::new(bounds, classes, entries)
    }

    fn close_polynomial(&self, bounds: DegreeBox) -> Result<ClosedComplex, BocksteinError> {
        let gens = &self.generators;
        let symbols: HashMap<&str, usize> = gens.iter().enumerate().map(|(i, g)| (g.label.as_str(), i)).collect();
        if symbols.len() != gens.len() {
            let mut seen = BTreeSet::new();
            let dup = gens.iter().find(|g| !seen.insert(g.label.as_str())).unwrap();
            return Err(BocksteinError::DuplicateLabel(dup.label.clone()));
        }
        if let Some(g) = gens.iter().find(|g| g.torsion == Torsion::Z2 && g.degree[0].rem_euclid(2) == 1) {
            return Err(BocksteinError::UnsupportedSign(g.label.clone()));
        }
        let mut relations = Vec::new();
        for r in &self.relations {
            match parse_combination(r, &symbols)?.as_slice() {
                [(c, m)] if *c == BigInt::from(1) => relations.push(m.clone()),
                _ => return Err(BocksteinError::Parse(format!("relation `{r}` must be a single monomial"))),
            }
        }
        let mut alg = Algebra { gens, relations, diffs: HashMap::new() };
        for d in &self.differentials {
            let src = *symbols.get(d.source.as_str()).ok_or_else(|| BocksteinError::UnknownSymbol(d.source.clone()))?;
            let expected = gens[src].degree() + TriDegree::new(-1, 0, d.page as i64);
            let mut poly = Poly::new();
            for (c, m) in parse_combination(&d.target, &symbols)? {
                let found = alg.degree(&m);
                if found != expected {
                    return Err(BocksteinError::InhomogeneousDifferential {
                        page: d.page,
                        source_label: d.source.clone(),
                        term: alg.label(&m),
                        found,
                        expected,
                    });
                }
                alg.add_term(&mut poly, m, c);
            }
            let slot = alg.diffs.entry((d.page, src)).or_default();
            for (m, c) in poly {
                let e = slot.entry(m).or_insert_with(BigInt::zero);
                *e += c;
            }
        }
        let pages: BTreeSet<u32> = self.differentials.iter().map(|d| d.page).collect();
        let mut memo = HashMap::new();
        // The relation ideal must be stable under every d_r.
        for r in &alg.relations {
            for &page in &pages {
                let d = alg.reduce(alg.derivation(page, r, true, &mut memo));
                if !d.is_empty() {
                    return Err(BocksteinError::LeibnizContradiction(format!(
                        "d_{page}({}) = {} does not lie in the relation ideal",
                        alg.label(r),
                        render(&alg, &d)
                    )));
                }
            }
        }
        let monos = alg.enumerate(&bounds)?;
        let index: HashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let classes: Vec<Class> =
            monos.iter().map(|m| Class { label: alg.label(m), degree: alg.degree(m), torsion: alg.torsion(m) }).collect();
        let mut entries = Vec::new();
        for (i, m) in monos.iter().enumerate() {
            for &page in &pages {
                let a = alg.reduce(alg.derivation(page, m, true, &mut memo));
                let b = alg.reduce(alg.derivation(page, m, false, &mut memo));
                if a != b {
                    return Err(BocksteinError::LeibnizContradiction(format!(
                        "d_{page}({}) depends on the factorization: {} vs {}",
                        alg.label(m),
                        render(&alg, &a),
                        render(&alg, &b)
                    )));
                }
                for (t, c) in a {
                    if let Some(&j) = index.get(&t) {
                        entries.push(DifferentialEntry { page, source: i, target: j, coeff: to_i64(&c)? });
                    }
                }
            }
        }
        ClosedComplex::new(bounds, classes, entries)
    }
}

fn render(alg: &Algebra, p: &Poly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter().map(|(m, c)| format!("{c}*{}", alg.label(m))).collect::<Vec<_>>().join(" + ")
}
