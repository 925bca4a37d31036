//! Finite functions between initial segments `{1, .., n}` of the positive
//! integers.
//!
//! Everything downstream reduces cardinality bookkeeping to these maps: a
//! function is stored as its value sequence, fibres are presented in
//! increasing order, and restricting a function to a fibre of another is a
//! pure coordinate computation.  All element values are 1-based.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FinError {
    #[error("value {value} at position {position} is outside 1..={cod}")]
    ValueOutOfRange {
        position: usize,
        value: usize,
        cod: usize,
    },
    #[error("functions {outer} and {inner} are not composable")]
    NotComposable { outer: String, inner: String },
    #[error("index {index} is outside 1..={cod}")]
    IndexOutOfRange { index: usize, cod: usize },
}

/// A function `{1, .., dom} -> {1, .., cod}` given by its value sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinFunction {
    cod: usize,
    values: Vec<usize>,
}

impl FinFunction {
    /// Builds a function into `{1, .., cod}`; the domain size is the length
    /// of `values`.
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self, FinError> {
        for (k, &v) in values.iter().enumerate() {
            if v < 1 || v > cod {
                return Err(FinError::ValueOutOfRange {
                    position: k + 1,
                    value: v,
                    cod,
                });
            }
        }
        Ok(FinFunction { cod, values })
    }

    pub fn identity(n: usize) -> Self {
        FinFunction {
            cod: n,
            values: (1..=n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.values.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Value at the 1-based element `j` of the domain.
    pub fn apply(&self, j: usize) -> usize {
        self.values[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.dom() == self.cod && self.values.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom() != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &v in &self.values {
            if seen[v - 1] {
                return false;
            }
            seen[v - 1] = true;
        }
        true
    }

    /// `outer` after `inner`: defined when `inner.cod == outer.dom`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, FinError> {
        if inner.cod != outer.dom() {
            return Err(FinError::NotComposable {
                outer: outer.to_string(),
                inner: inner.to_string(),
            });
        }
        Ok(FinFunction {
            cod: outer.cod,
            values: inner.values.iter().map(|&j| outer.apply(j)).collect(),
        })
    }

    /// Preimages of every codomain element, each listed in increasing order.
    pub fn fibres(&self) -> FibreData {
        let mut embeds: Vec<Vec<usize>> = vec![Vec::new(); self.cod];
        for (k, &v) in self.values.iter().enumerate() {
            embeds[v - 1].push(k + 1);
        }
        FibreData { embeds }
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}>{}[{}]", self.dom(), self.cod, vals.join(" "))
    }
}

/// Fibres of a [`FinFunction`], in the canonical coordinates used everywhere
/// in this crate: the fibre over `i` is the ordinal `{1, .., card(i)}`, and
/// `embed(i)` is the increasing enumeration of the actual preimage.
/// Concatenating the embeddings in order of `i` is a bijection onto the
/// domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FibreData {
    embeds: Vec<Vec<usize>>,
}

impl FibreData {
    pub fn cod(&self) -> usize {
        self.embeds.len()
    }

    /// Size of the fibre over the 1-based codomain element `i`.
    pub fn card(&self, i: usize) -> usize {
        self.embeds[i - 1].len()
    }

    /// Increasing enumeration of the preimage of `i`.
    pub fn embed(&self, i: usize) -> &[usize] {
        &self.embeds[i - 1]
    }

    /// Domain element at position `t` (1-based) of fibre `i`.
    pub fn element(&self, i: usize, t: usize) -> usize {
        self.embeds[i - 1][t - 1]
    }

    /// Position (1-based) of the domain element `x` within fibre `i`, if it
    /// lies there.
    pub fn position(&self, i: usize, x: usize) -> Option<usize> {
        self.embeds[i - 1]
            .binary_search(&x)
            .ok()
            .map(|p| p + 1)
    }

    pub fn cards(&self) -> Vec<usize> {
        self.embeds.iter().map(Vec::len).collect()
    }
}

/// Restriction of a function to a fibre of a composite.
///
/// For composable `f : a -> b` and `g : b -> c` and `i` in `{1, .., c}`, the
/// composite `g . f` maps the fibre over `i` into the fibre of `g` over `i`;
/// this returns that induced map in canonical fibre coordinates.
pub fn fibre_restrict(f: &FinFunction, g: &FinFunction, i: usize) -> Result<FinFunction, FinError> {
    if f.cod() != g.dom() {
        return Err(FinError::NotComposable {
            outer: g.to_string(),
            inner: f.to_string(),
        });
    }
    if i < 1 || i > g.cod() {
        return Err(FinError::IndexOutOfRange { index: i, cod: g.cod() });
    }
    let gf = FinFunction::compose(g, f)?;
    let gf_fibres = gf.fibres();
    let g_fibres = g.fibres();
    let values = gf_fibres
        .embed(i)
        .iter()
        .map(|&x| {
            g_fibres
                .position(i, f.apply(x))
                .expect("image of a composite-fibre element lies in the outer fibre")
        })
        .collect();
    Ok(FinFunction {
        cod: g_fibres.card(i),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(cod: usize, values: &[usize]) -> FinFunction {
        FinFunction::new(cod, values.to_vec()).unwrap()
    }

    #[test]
    fn fibre_data_of_a_three_to_two_map() {
        let f = ff(2, &[1, 1, 2]);
        let d = f.fibres();
        assert_eq!(d.cards(), vec![2, 1]);
        assert_eq!(d.embed(1), &[1, 2]);
        assert_eq!(d.embed(2), &[3]);
    }

    #[test]
    fn fibre_data_of_empty_domain() {
        let f = ff(2, &[]);
        let d = f.fibres();
        assert_eq!(d.cards(), vec![0, 0]);
        assert_eq!(d.embed(1), &[] as &[usize]);
    }

    #[test]
    fn value_out_of_range_is_rejected() {
        assert_eq!(
            FinFunction::new(2, vec![1, 3]),
            Err(FinError::ValueOutOfRange {
                position: 2,
                value: 3,
                cod: 2
            })
        );
        assert_eq!(
            FinFunction::new(1, vec![0]),
            Err(FinError::ValueOutOfRange {
                position: 1,
                value: 0,
                cod: 1
            })
        );
    }

    #[test]
    fn restricting_swap_along_the_collapse_gives_the_swap() {
        let swap = ff(2, &[2, 1]);
        let bang = ff(1, &[1, 1]);
        let r = fibre_restrict(&swap, &bang, 1).unwrap();
        assert_eq!(r, ff(2, &[2, 1]));
    }

    #[test]
    fn restricting_along_a_collapse_returns_the_function_itself() {
        let f = ff(2, &[1, 1, 2]);
        let bang = ff(1, &[1, 1]);
        let r = fibre_restrict(&f, &bang, 1).unwrap();
        assert_eq!(r, f);
    }

    #[test]
    fn restricting_to_an_empty_fibre_gives_the_empty_function() {
        // g : 2 -> 2 constant at 1, so fibre 2 is empty.
        let f = ff(2, &[1, 2]);
        let g = ff(2, &[1, 1]);
        let r = fibre_restrict(&f, &g, 2).unwrap();
        assert_eq!(r.dom(), 0);
        assert_eq!(r.cod(), 0);
    }

    #[test]
    fn composition_and_identity() {
        let f = ff(3, &[2, 3]);
        let g = ff(2, &[1, 1, 2]);
        let gf = FinFunction::compose(&g, &f).unwrap();
        assert_eq!(gf, ff(2, &[1, 2]));
        assert_eq!(
            FinFunction::compose(&FinFunction::identity(3), &f).unwrap(),
            f
        );
        assert_eq!(
            FinFunction::compose(&f, &FinFunction::identity(2)).unwrap(),
            f
        );
        assert!(FinFunction::compose(&g, &g).is_err());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(ff(2, &[2, 1]).to_string(), "2>2[2 1]");
        assert_eq!(ff(2, &[]).to_string(), "0>2[]");
    }

    #[test]
    fn fibre_position_is_inverse_to_element() {
        let f = ff(3, &[2, 1, 2, 2]);
        let d = f.fibres();
        for i in 1..=3 {
            for t in 1..=d.card(i) {
                assert_eq!(d.position(i, d.element(i, t)), Some(t));
            }
        }
        assert_eq!(d.position(2, 2), None);
    }
}
