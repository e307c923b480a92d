//! Mode action of affine currents on the vacuum module, used as an oracle
//! for the Sugawara central charge.

use std::collections::BTreeMap;

use crate::coeff::Coeff;
use crate::error::Result;
use crate::liealg::LieAlgebraData;

/// J^{a₁}_{(n₁)} ⋯ J^{a_r}_{(n_r)}|0⟩ with every n_i < 0, in application order.
type State = BTreeMap<Vec<(usize, i64)>, Coeff>;

fn add(s: &mut State, w: Vec<(usize, i64)>, c: Coeff) {
    if c.is_zero() {
        return;
    }
    let e = s.entry(w.clone()).or_insert_with(Coeff::zero);
    *e = &*e + &c;
    if e.is_zero() {
        s.remove(&w);
    }
}

struct Modes<'a> {
    l: &'a LieAlgebraData,
    k: Coeff,
}

impl Modes<'_> {
    fn apply_word(&self, a: usize, m: i64, w: &[(usize, i64)]) -> State {
        let mut out = State::new();
        if m < 0 {
            let mut v = vec![(a, m)];
            v.extend_from_slice(w);
            out.insert(v, Coeff::one());
            return out;
        }
        let Some((&(b, n), rest)) = w.split_first() else {
            return out;
        };
        // [J^a_(m), J^b_(n)] = [a,b]_(m+n) + m k (a|b) δ_{m+n,0}
        for (c, f) in self.l.structure[a][b].iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (w2, x) in self.apply_word(c, m + n, rest) {
                add(&mut out, w2, &x * f);
            }
        }
        if m + n == 0 {
            let c = &(&self.k * &self.l.form[a][b]) * &Coeff::int(m);
            add(&mut out, rest.to_vec(), c);
        }
        for (w2, x) in self.apply_word(a, m, rest) {
            let mut v = vec![(b, n)];
            v.extend(w2);
            add(&mut out, v, x);
        }
        out
    }

    fn apply(&self, a: &[Coeff], m: i64, s: &State) -> State {
        let mut out = State::new();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (w, c) in s {
                for (w2, x) in self.apply_word(i, m, w) {
                    add(&mut out, w2, &(&x * c) * ai);
                }
            }
        }
        out
    }

    fn grade(s: &State) -> i64 {
        s.keys()
            .map(|w| w.iter().map(|(_, n)| -n).sum())
            .max()
            .unwrap_or(0)
    }

    /// (:ab:)_(n) = Σ_{j<0} a_(j) b_(n−j−1) + Σ_{j≥0} b_(n−j−1) a_(j).
    fn normal_ordered(&self, a: &[Coeff], b: &[Coeff], n: i64, s: &State) -> State {
        let g = Self::grade(s);
        let mut out = State::new();
        for j in (n - 1 - g)..0 {
            let t = self.apply(a, j, &self.apply(b, n - j - 1, s));
            for (w, c) in t {
                add(&mut out, w, c);
            }
        }
        for j in 0..=g {
            let t = self.apply(b, n - j - 1, &self.apply(a, j, s));
            for (w, c) in t {
                add(&mut out, w, c);
            }
        }
        out
    }

    fn sugawara_mode(&self, norm: &Coeff, n: i64, s: &State) -> Result<State> {
        let (units, duals) = self.l.dual_bases()?;
        let mut out = State::new();
        for (a, b) in units.iter().zip(&duals) {
            for (w, c) in self.normal_ordered(a, b, n, s) {
                add(&mut out, w, &c * norm);
            }
        }
        Ok(out)
    }
}

/// 2⟨0|L₂L₋₂|0⟩ for the Sugawara vector at level k, computed with modes.
pub fn sugawara_charge_from_modes(l: &LieAlgebraData, k: &Coeff) -> Result<Coeff> {
    let hv = super::sugawara_dual_coxeter(l)?;
    let norm = (&(k + &hv) * &Coeff::int(2))
        .inv()
        .ok_or_else(|| crate::error::Error::Singular("k + h∨ vanishes".into()))?;
    let m = Modes { l, k: k.clone() };
    let mut vac = State::new();
    vac.insert(Vec::new(), Coeff::one());
    // L_n = L_(n+1)
    let s = m.sugawara_mode(&norm, -1, &vac)?;
    let s = m.sugawara_mode(&norm, 3, &s)?;
    let v = s.get(&Vec::new()).cloned().unwrap_or_else(Coeff::zero);
    Ok(&v * &Coeff::int(2))
}
