//! Structure maps of `(BP_*, BP_*BP)` at p = 2 with Hazewinkel generators, truncated at `v_n, t_n`.

use num_bigint::BigInt;

use super::poly::{Poly, VarLayout};
use super::CobarError;

/// `eta_R(v_i)` in `Z[v][t(1)]` and `Delta(t_i)` in `Z[v][t(1), t(2)]`, all coefficients on the left.
#[derive(Clone, Debug)]
pub struct BPPresentation {
    pub n: usize,
    pub max_degree: i64,
    /// `eta_r[i - 1]`, layout with one tensor factor.
    pub eta_r: Vec<Poly<i128>>,
    /// `delta[i - 1]`, layout with two tensor factors.
    pub delta: Vec<Poly<i128>>,
}

pub fn generator_degree(i: usize) -> i64 {
    2 * ((1i64 << i) - 1)
}

fn two_pow(k: usize) -> BigInt {
    BigInt::from(1) << k
}

/// Builds the presentation on `v_1..v_n`, `t_1..t_n`; requires `|v_n| <= max_degree`.
pub fn build_presentation(n: usize, max_degree: i64) -> Result<BPPresentation, CobarError> {
    if n == 0 || generator_degree(n) > max_degree {
        return Err(CobarError::CapTooSmall { n, max_degree });
    }
    let l1 = VarLayout::new(n, 1);
    let l2 = VarLayout::new(n, 2);
    let one1 = Poly::<BigInt>::constant(&l1, BigInt::from(1));
    let one2 = Poly::<BigInt>::constant(&l2, BigInt::from(1));

    // M_k = 2^k m_k, integral in v; M_k = sum_{i<k} 2^{k-1-i} M_i v_{k-i}^{2^i}.
    let mut big_m: Vec<Poly<BigInt>> = vec![one1.clone()];
    for k in 1..=n {
        let mut acc = Poly::zero();
        for (i, mi) in big_m.iter().enumerate() {
            let v = Poly::var(&l1, l1.v(k - i)).pow(&l1, 1 << i);
            acc = acc.add(&mi.mul(&v).scale(&two_pow(k - 1 - i)));
        }
        big_m.push(acc);
    }

    let t1 = |j: usize| -> Poly<BigInt> { if j == 0 { one1.clone() } else { Poly::var(&l1, l1.t(1, j)) } };

    // eta_R(M_k) = sum_{i+j=k} 2^j M_i t_j^{2^i}.
    let eta_m: Vec<Poly<BigInt>> = (0..=n)
        .map(|k| {
            let mut acc = Poly::zero();
            for i in 0..=k {
                let j = k - i;
                acc = acc.add(&big_m[i].mul(&t1(j).pow(&l1, 1 << i)).scale(&two_pow(j)));
            }
            acc
        })
        .collect();

    // 2^k eta_R(v_k) = 2 eta_R(M_k) - sum_{i=1}^{k-1} 2^{k-i} eta_R(M_i) eta_R(v_{k-i})^{2^i}.
    let mut eta_v: Vec<Poly<BigInt>> = Vec::new();
    for k in 1..=n {
        let mut acc = eta_m[k].scale(&BigInt::from(2));
        for i in 1..k {
            let term = eta_m[i].mul(&eta_v[k - i - 1].pow(&l1, 1 << i)).scale(&two_pow(k - i));
            acc = acc.sub(&term);
        }
        let ev = acc.div_exact(&two_pow(k)).ok_or(CobarError::Internal("eta_R(v) not integral"))?;
        eta_v.push(ev);
    }

    // Relayout M_i into two factors (v part only).
    let m2: Vec<Poly<BigInt>> = big_m.iter().map(|p| p.relayout(&l2, |k| k)).collect();
    let tt = |f: usize, j: usize| -> Poly<BigInt> { if j == 0 { one2.clone() } else { Poly::var(&l2, l2.t(f, j)) } };

    // sum_{i+j=k} 2^{k-i} M_i Delta(t_j)^{2^i} = sum_{i+j+l=k} 2^{k-i} M_i t'_j^{2^i} t''_l^{2^{i+j}}.
    let mut delta: Vec<Poly<BigInt>> = vec![one2.clone()];
    for k in 1..=n {
        let mut rhs = Poly::zero();
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                let term = m2[i].mul(&tt(1, j).pow(&l2, 1 << i)).mul(&tt(2, l).pow(&l2, 1 << (i + j)));
                rhs = rhs.add(&term.scale(&two_pow(k - i)));
            }
        }
        for i in 1..=k {
            let term = m2[i].mul(&delta[k - i].pow(&l2, 1 << i)).scale(&two_pow(k - i));
            rhs = rhs.sub(&term);
        }
        let d = rhs.div_exact(&two_pow(k)).ok_or(CobarError::Internal("Delta(t) not integral"))?;
        delta.push(d);
    }

    let conv = |p: &Poly<BigInt>| p.to_i128().ok_or(CobarError::Internal("structure constant exceeds 128 bits"));
    let pres = BPPresentation {
        n,
        max_degree,
        eta_r: eta_v.iter().map(conv).collect::<Result<_, _>>()?,
        delta: delta[1..].iter().map(conv).collect::<Result<_, _>>()?,
    };
    pres.check_invariants()?;
    Ok(pres)
}

impl BPPresentation {
    pub fn layout1(&self) -> VarLayout {
        VarLayout::new(self.n, 1)
    }

    pub fn layout2(&self) -> VarLayout {
        VarLayout::new(self.n, 2)
    }

    /// Homogeneity and the counit identities; coassociativity is checked by `d^2 = 0`.
    pub fn check_invariants(&self) -> Result<(), CobarError> {
        let l1 = self.layout1();
        let l2 = self.layout2();
        for i in 1..=self.n {
            let d = generator_degree(i);
            let eta = &self.eta_r[i - 1];
            let delta = &self.delta[i - 1];
            if !eta.is_homogeneous_of(&l1, d) || !delta.is_homogeneous_of(&l2, d) {
                return Err(CobarError::Internal("inhomogeneous structure map"));
            }
            // epsilon(eta_R(v_i)) = v_i: drop terms involving t.
            let mut eps_eta = Poly::<i128>::zero();
            for (m, c) in eta.terms() {
                if l1.factor(m, 1).iter().all(|&e| e == 0) {
                    eps_eta.add_term(m.clone(), *c);
                }
            }
            if eps_eta != Poly::var(&l1, l1.v(i)) {
                return Err(CobarError::Internal("counit fails on eta_R"));
            }
            // (epsilon x 1) Delta(t_i) = t_i = (1 x epsilon) Delta(t_i).
            for (kill, keep) in [(1usize, 2usize), (2, 1)] {
                let mut side = Poly::<i128>::zero();
                for (m, c) in delta.terms() {
                    if l2.factor(m, kill).iter().all(|&e| e == 0) {
                        side.add_term(m.clone(), *c);
                    }
                }
                if side != Poly::var(&l2, l2.t(keep, i)) {
                    return Err(CobarError::Internal("counit fails on Delta"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_structure_maps() {
        let p = build_presentation(2, 6).unwrap();
        let l1 = p.layout1();
        assert_eq!(p.eta_r[0].display(&l1), "2 t(1)1 + v1");
        let l2 = p.layout2();
        assert_eq!(p.delta[0].display(&l2), "t(2)1 + t(1)1");
        let eta2 = p.eta_r[1].display(&l1);
        assert!(eta2.contains("2 t(1)2"), "{eta2}");
        assert!(eta2.contains("v2"), "{eta2}");
    }

    #[test]
    fn cap_too_small() {
        assert!(matches!(build_presentation(3, 12), Err(CobarError::CapTooSmall { .. })));
        assert!(build_presentation(3, 14).is_ok());
    }
}
