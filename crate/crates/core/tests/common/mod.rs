#![allow(dead_code)]

use std::collections::BTreeMap;

use liehopf_core::envelope::Envelope;
use liehopf_core::{EnvElement, Field, FpElement, FreeProduct, LiePresentation, PbwMonomial, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn small_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3i64..=3);
    }
    field.from_i64(c)
}

/// A random element of `Q(L)` with up to `terms` PBW terms of degree <= `d`.
pub fn random_env(env: &Envelope, d: usize, terms: usize, rng: &mut ChaCha8Rng) -> EnvElement {
    let basis = env.pbw_basis(d);
    let n = rng.gen_range(1..=terms);
    (0..n)
        .map(|_| (basis.choose(rng).unwrap().clone(), small_scalar(env.field(), rng)))
        .collect()
}

/// A random element of `A` with up to `terms` words of degree <= `d`.
pub fn random_fp(fp: &FreeProduct, d: usize, terms: usize, rng: &mut ChaCha8Rng) -> FpElement {
    let basis = fp.basis(d);
    let n = rng.gen_range(1..=terms);
    (0..n)
        .map(|_| (basis.choose(rng).unwrap().clone(), small_scalar(fp.field(), rng)))
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of exponent vectors in `{0..p-1}^n` with sum <= d, by
/// inclusion-exclusion over coordinates forced to be >= p.
pub fn bounded_count(n: u64, d: u64, p: u64) -> u64 {
    let mut total: i64 = 0;
    for k in 0..=n {
        if k * p > d {
            break;
        }
        let term = (binomial(n, k) * binomial(n + d - k * p, n)) as i64;
        total += if k % 2 == 0 { term } else { -term };
    }
    total as u64
}

/// Words in the free associative algebra on the Lie basis.
type Word = Vec<usize>;
type Poly = BTreeMap<Word, Scalar>;

fn add_term(p: &mut Poly, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(w.clone()).or_insert_with(|| c.field().zero());
    *e = &*e + &c;
    if e.is_zero() {
        p.remove(&w);
    }
}

/// Monomial order on words: degree first, then lexicographic.
fn key(w: &Word) -> (usize, Word) {
    (w.len(), w.clone())
}

/// `Q(L)` up to filtration degree `D` built as `T(L)_{<=D}` modulo the
/// span of `u·r·v`, where `r` runs over `e_i e_j - e_j e_i - [e_i,e_j]`
/// (and `e_i^p - e_i^[p]` in restricted mode) and `deg u + deg r + deg v
/// <= D`. Membership is decided by a leading-term echelon form.
pub struct IdealOracle {
    field: Field,
    pivots: BTreeMap<(usize, Word), Poly>,
    pub words: usize,
}

impl IdealOracle {
    pub fn new(pres: &LiePresentation, restricted: bool, max_deg: usize) -> Self {
        let field = pres.field();
        let n = pres.dim();
        let mut rels: Vec<Poly> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut r = Poly::new();
                add_term(&mut r, vec![i, j], field.one());
                add_term(&mut r, vec![j, i], -field.one());
                let b = pres.bracket_basis(i, j);
                for (k, c) in b.support() {
                    add_term(&mut r, vec![k], -c.clone());
                }
                rels.push(r);
            }
        }
        if restricted {
            let p = field.characteristic() as usize;
            let pmap = pres.pmap().expect("restricted oracle needs a p-map");
            for (i, v) in pmap.iter().enumerate() {
                let mut r = Poly::new();
                add_term(&mut r, vec![i; p], field.one());
                for (k, c) in v.support() {
                    add_term(&mut r, vec![k], -c.clone());
                }
                rels.push(r);
            }
        }
        let all_words = |len: usize| -> Vec<Word> {
            let mut out = vec![Vec::new()];
            for _ in 0..len {
                out = out
                    .into_iter()
                    .flat_map(|w| {
                        (0..n).map(move |i| {
                            let mut w2 = w.clone();
                            w2.push(i);
                            w2
                        })
                    })
                    .collect();
            }
            out
        };
        let mut oracle = Self {
            field,
            pivots: BTreeMap::new(),
            words: (0..=max_deg).map(|k| n.pow(k as u32)).sum(),
        };
        for r in &rels {
            let dr = r.keys().map(Vec::len).max().unwrap();
            for lu in 0..=max_deg - dr {
                for lv in 0..=max_deg - dr - lu {
                    for u in all_words(lu) {
                        for v in all_words(lv) {
                            let mut t = Poly::new();
                            for (w, c) in r {
                                let mut full = u.clone();
                                full.extend(w);
                                full.extend(&v);
                                add_term(&mut t, full, c.clone());
                            }
                            oracle.insert(t);
                        }
                    }
                }
            }
        }
        oracle
    }

    fn reduce(&self, mut v: Poly) -> Poly {
        loop {
            let lead = match v.keys().max_by_key(|w| key(w)) {
                Some(w) => w.clone(),
                None => return v,
            };
            let Some(row) = self.pivots.get(&key(&lead)) else {
                return v;
            };
            let f = -v[&lead].clone();
            for (w, c) in row {
                add_term(&mut v, w.clone(), &f * c);
            }
        }
    }

    fn insert(&mut self, v: Poly) {
        let r = self.reduce(v);
        let Some(lead) = r.keys().max_by_key(|w| key(w)).cloned() else {
            return;
        };
        let inv = r[&lead].inv().unwrap();
        let row: Poly = r.into_iter().map(|(w, c)| (w, &c * &inv)).collect();
        self.pivots.insert(key(&lead), row);
    }

    /// Dimension of the ideal's degree-`<= D` part.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// True if `u·v - Σ c_m word(m)` lies in the ideal, i.e. the
    /// engine's product of PBW monomials agrees with the quotient.
    pub fn agrees(&self, u: &PbwMonomial, v: &PbwMonomial, product: &EnvElement) -> bool {
        let mut t = Poly::new();
        let mut uv = u.word();
        uv.extend(v.word());
        add_term(&mut t, uv, self.field.one());
        for (m, c) in product.iter() {
            add_term(&mut t, m.word(), -c.clone());
        }
        self.reduce(t).is_empty()
    }
}
