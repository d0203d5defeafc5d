//! Decomposition of one-row parabolic elements into transvections.
//!
//! For `p` in `I`, a one-row element has `a_pp = a_{-p,-p} = 1` and agrees
//! with `e` outside row `-p` and column `p`. It factors as
//! `prod_j T_{-p,j}(a_{-p,j}) T_{-p,-j}(a_{-p,-j})` (over `j = 1..n`,
//! `j != |p|`, ascending) followed by a long transvection `T_{-p,p}(alpha)`.

use crate::error::{Error, Result};
use crate::index::eps;
use crate::net::FormNet;
use crate::subgroups::{row_length, GeneratorWord};
use crate::symplectic::{SympMatrix, TransvectionSpec};

/// The first entry breaking the one-row shape, if any.
pub fn shape_defect(a: &SympMatrix, p: i32) -> Result<Option<(i32, i32)>> {
    let s = a.index_set();
    s.check(p)?;
    if a.get(p, p) != 1 % a.ring().modulus() {
        return Ok(Some((p, p)));
    }
    if a.get(-p, -p) != 1 % a.ring().modulus() {
        return Ok(Some((-p, -p)));
    }
    for i in s.indices().filter(|&i| i != -p) {
        for j in s.indices().filter(|&j| j != p) {
            if a.get(i, j) != u64::from(i == j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn shape_check(a: &SympMatrix, p: i32) -> Result<bool> {
    Ok(shape_defect(a, p)?.is_none())
}

/// The long parameter making the product exact:
/// `alpha = a_{-p,p} - eps_{-p} sum_{j > 0, j != |p|} a_{-p,j} a_{-p,-j}`.
pub fn long_parameter(a: &SympMatrix, p: i32) -> u64 {
    let ring = a.ring();
    let cross = a
        .index_set()
        .positives()
        .filter(|&j| j != p.abs())
        .fold(0, |acc, j| ring.add(acc, ring.mul(a.get(-p, j), a.get(-p, -j))));
    ring.sub(a.get(-p, p), ring.signed(eps(-p), cross))
}

/// Transvections whose product, in order, is `a`.
pub fn decompose_one_row(a: &SympMatrix, p: i32) -> Result<Vec<TransvectionSpec>> {
    if let Some((row, col)) = shape_defect(a, p)? {
        return Err(Error::NotOneRow { p, row, col });
    }
    let ring = a.ring();
    let mut out = Vec::with_capacity(2 * a.index_set().n() - 1);
    for j in a.index_set().positives().filter(|&j| j != p.abs()) {
        out.push(TransvectionSpec::short(-p, j, ring.elem(a.get(-p, j) as i64))?);
        out.push(TransvectionSpec::short(-p, -j, ring.elem(a.get(-p, -j) as i64))?);
    }
    out.push(TransvectionSpec::long(-p, ring.elem(long_parameter(a, p) as i64))?);
    Ok(out)
}

/// Whether the trailing long parameter coincides with `S_{-p,p}(a)`.
pub fn long_parameter_is_row_length(a: &SympMatrix, p: i32) -> bool {
    long_parameter(a, p) == row_length(a, -p).value()
}

/// The first decomposition factor outside its net level.
pub fn level_extraction_witness(
    a: &SympMatrix,
    p: i32,
    net: &FormNet,
) -> Result<Option<TransvectionSpec>> {
    net.ring().check_same(a.ring())?;
    let word = GeneratorWord { specs: decompose_one_row(a, p)?, seed: 0 };
    Ok(word.level_violation(net))
}

pub fn level_extraction_check(a: &SympMatrix, p: i32, net: &FormNet) -> Result<bool> {
    Ok(level_extraction_witness(a, p, net)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexSet;
    use crate::symplectic::{transvection, word_product};
    use crate::zmod::ModRing;

    fn zm(m: u64) -> ModRing {
        ModRing::new(m).unwrap()
    }

    fn iset(n: usize) -> IndexSet {
        IndexSet::new(n).unwrap()
    }

    #[test]
    fn shape_examples() {
        let (r, s) = (zm(4), iset(3));
        assert!(s.indices().all(|p| shape_check(&SympMatrix::identity(r, s), p).unwrap()));
        let t = transvection(&TransvectionSpec::short(-1, 2, r.elem(3)).unwrap(), s).unwrap();
        assert!(shape_check(&t, 1).unwrap());
        let u = transvection(&TransvectionSpec::short(2, 3, r.one()).unwrap(), s).unwrap();
        assert!(!shape_check(&u, 1).unwrap());
        assert!(matches!(decompose_one_row(&u, 1), Err(Error::NotOneRow { p: 1, .. })));
        assert!(shape_check(&t, 4).is_err());
    }

    #[test]
    fn decompose_examples() {
        let (r, s) = (zm(4), iset(3));
        let e = SympMatrix::identity(r, s);
        let d = decompose_one_row(&e, 1).unwrap();
        assert_eq!(d.len(), 5);
        assert!(d.iter().all(|t| t.param().is_zero()));

        let xi = r.elem(3);
        let t = transvection(&TransvectionSpec::short(-1, 2, xi).unwrap(), s).unwrap();
        let expected = vec![
            TransvectionSpec::short(-1, 2, xi).unwrap(),
            TransvectionSpec::short(-1, -2, r.zero()).unwrap(),
            TransvectionSpec::short(-1, 3, r.zero()).unwrap(),
            TransvectionSpec::short(-1, -3, r.zero()).unwrap(),
            TransvectionSpec::long(-1, r.zero()).unwrap(),
        ];
        assert_eq!(decompose_one_row(&t, 1).unwrap(), expected);
        assert!(row_length(&t, -1).is_zero());

        let alpha = r.elem(2);
        let l = transvection(&TransvectionSpec::long(-1, alpha).unwrap(), s).unwrap();
        let d = decompose_one_row(&l, 1).unwrap();
        assert_eq!(*d.last().unwrap(), TransvectionSpec::long(-1, alpha).unwrap());
        assert_eq!(row_length(&l, -1), alpha);
    }

    #[test]
    fn round_trip_on_shuffled_products() {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let mut rng = crate::subgroups::word_rng(11);
        for m in [3u64, 4, 5, 8, 9] {
            let r = zm(m);
            for n in 1..=4 {
                let s = iset(n);
                for p in s.indices() {
                    for _ in 0..20 {
                        let mut specs: Vec<_> = s
                            .positives()
                            .filter(|&j| j != p.abs())
                            .flat_map(|j| [j, -j])
                            .map(|j| TransvectionSpec::short(-p, j, r.elem(rng.random_range(0..m as i64))).unwrap())
                            .collect();
                        specs.push(TransvectionSpec::long(-p, r.elem(rng.random_range(0..m as i64))).unwrap());
                        specs.shuffle(&mut rng);
                        let a = word_product(&specs, r, s).unwrap();
                        let d = decompose_one_row(&a, p).unwrap();
                        assert_eq!(word_product(&d, r, s).unwrap(), a);
                        if p > 0 {
                            assert!(long_parameter_is_row_length(&a, p));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_extraction() {
        let r = zm(8);
        let s = iset(3);
        let nu = crate::index::EquivRel::full(s);
        let mut net = FormNet::nu_net(&nu, r);
        for i in s.indices() {
            for j in s.indices() {
                if i != j {
                    net.set_sigma(i, j, r.ideal(2).unwrap());
                }
            }
            net.set_gamma(i, r.ideal(4).unwrap());
        }
        assert!(net.validate(false).is_valid());
        let specs = vec![
            TransvectionSpec::short(-1, 2, r.elem(2)).unwrap(),
            TransvectionSpec::short(-1, -3, r.elem(6)).unwrap(),
            TransvectionSpec::long(-1, r.elem(4)).unwrap(),
        ];
        let a = word_product(&specs, r, s).unwrap();
        assert!(level_extraction_check(&a, 1, &net).unwrap());
        assert!(level_extraction_check(&SympMatrix::identity(r, s), 1, &net).unwrap());
        let bad = word_product(&[TransvectionSpec::short(-1, 2, r.one()).unwrap()], r, s).unwrap();
        let w = level_extraction_witness(&bad, 1, &net).unwrap().unwrap();
        assert_eq!((w.i(), w.j()), (-1, 2));
    }
}
