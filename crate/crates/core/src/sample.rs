//! Seeded random generators for the law suites: potentials, polyvectors,
//! operators, and Rees elements. Everything is deterministic in the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GradedElement, Monomial, OpTerm, Operator};
use crate::dcrit::PolySpec;
use crate::polyvect::Polyvectors;
use crate::scalars::{LaurentTrunc, Rat, Ring};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rat(&mut self) -> Rat {
        Rat::new(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=3))
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Random potential in m variables of total degree at most `max_deg`.
    pub fn potential(&mut self, m: usize, max_deg: u32) -> PolySpec {
        let terms = self.rng.gen_range(1..=4usize);
        let mut spec = Vec::new();
        for _ in 0..terms {
            let deg = self.rng.gen_range(1..=max_deg);
            let mut exps = vec![0u32; m];
            for _ in 0..deg {
                exps[self.rng.gen_range(0..m)] += 1;
            }
            spec.push((exps, self.nonzero_rat()));
        }
        spec
    }

    /// Random monomial in the polyvector algebra with bounded dual count and
    /// base degree.
    pub fn pol_monomial(&mut self, pol: &Polyvectors, max_duals: u32, max_base: u32) -> Monomial {
        let alg = pol.algebra();
        let n_base = pol.base_len();
        loop {
            let mut exps: Vec<(u32, u32)> = Vec::new();
            let duals = self.rng.gen_range(0..=max_duals);
            let base = self.rng.gen_range(0..=max_base);
            for _ in 0..duals {
                let g = n_base + self.rng.gen_range(0..n_base);
                push_exp(&mut exps, g as u32);
            }
            for _ in 0..base {
                let g = self.rng.gen_range(0..n_base);
                push_exp(&mut exps, g as u32);
            }
            let mono = Monomial::from_exps(exps);
            // reject odd squares
            let ok = mono
                .exps()
                .iter()
                .all(|&(g, e)| !alg.gen(g as usize).is_odd() || e <= 1);
            if ok {
                return mono;
            }
        }
    }

    /// Random nonzero homogeneous polyvector: a handful of monomials of one
    /// common degree, found by rejection.
    pub fn homogeneous_pol_element(
        &mut self,
        pol: &Polyvectors,
        max_duals: u32,
        max_base: u32,
    ) -> GradedElement<Rat> {
        loop {
            let alg = pol.algebra().clone();
            let first = self.pol_monomial(pol, max_duals, max_base);
            let degree = first.degree(&alg);
            let mut out = GradedElement::from_monomial(&alg, first, self.nonzero_rat());
            for _ in 0..self.rng.gen_range(0..3u32) {
                for _ in 0..32 {
                    let m = self.pol_monomial(pol, max_duals, max_base);
                    if m.degree(&alg) == degree {
                        out.add_term(m, self.nonzero_rat());
                        break;
                    }
                }
            }
            if !out.is_zero() {
                return out;
            }
        }
    }

    /// Random inhomogeneous polyvector.
    pub fn pol_element(
        &mut self,
        pol: &Polyvectors,
        max_duals: u32,
        max_base: u32,
        terms: u32,
    ) -> GradedElement<Rat> {
        let alg = pol.algebra().clone();
        let mut out = GradedElement::zero(&alg);
        for _ in 0..terms {
            out.add_term(self.pol_monomial(pol, max_duals, max_base), self.rat());
        }
        out
    }

    /// Random element of an arbitrary algebra with bounded total exponent.
    pub fn element<K: Ring>(
        &mut self,
        alg: &crate::algebra::Algebra,
        max_deg: u32,
        terms: u32,
    ) -> GradedElement<K> {
        let n = alg.len();
        let mut out = GradedElement::zero(alg);
        for _ in 0..terms {
            let mut exps: Vec<(u32, u32)> = Vec::new();
            for _ in 0..self.rng.gen_range(0..=max_deg) {
                push_exp(&mut exps, self.rng.gen_range(0..n) as u32);
            }
            let mono = Monomial::from_exps(exps);
            let ok = mono
                .exps()
                .iter()
                .all(|&(g, e)| !alg.gen(g as usize).is_odd() || e <= 1);
            if ok {
                out.add_term(mono, K::from_rat(&self.rat()));
            }
        }
        out
    }

    /// Random normal-ordered operator with bounded multiplication degree,
    /// derivation order, and h-power range.
    pub fn operator(
        &mut self,
        alg: &crate::algebra::Algebra,
        max_mul: u32,
        max_der: u32,
        h_range: std::ops::RangeInclusive<i64>,
        terms: u32,
    ) -> Operator<LaurentTrunc> {
        let n = alg.len();
        let mut out = Operator::zero(alg);
        for _ in 0..terms {
            let mut mul_exps: Vec<(u32, u32)> = Vec::new();
            for _ in 0..self.rng.gen_range(0..=max_mul) {
                push_exp(&mut mul_exps, self.rng.gen_range(0..n) as u32);
            }
            let mut der_exps: Vec<(u32, u32)> = Vec::new();
            for _ in 0..self.rng.gen_range(0..=max_der) {
                push_exp(&mut der_exps, self.rng.gen_range(0..n) as u32);
            }
            let mul = Monomial::from_exps(mul_exps);
            let der = Monomial::from_exps(der_exps);
            let valid = |m: &Monomial| {
                m.exps()
                    .iter()
                    .all(|&(g, e)| !alg.gen(g as usize).is_odd() || e <= 1)
            };
            if !valid(&mul) || !valid(&der) {
                continue;
            }
            let power = self.rng.gen_range(h_range.clone());
            out.add_term(
                OpTerm { mul, der },
                LaurentTrunc::monomial(self.nonzero_rat(), power, 64),
            );
        }
        out
    }

    /// Random homogeneous-degree operator (single term).
    pub fn operator_term(
        &mut self,
        alg: &crate::algebra::Algebra,
        max_mul: u32,
        max_der: u32,
        h_range: std::ops::RangeInclusive<i64>,
    ) -> Operator<LaurentTrunc> {
        loop {
            let op = self.operator(alg, max_mul, max_der, h_range.clone(), 1);
            if !op.is_zero() {
                return op;
            }
        }
    }

    /// Random cumulative-flavor Rees element in `F~^p`: weights bounded by
    /// the h-power of each coefficient.
    pub fn rees_element_in_f(
        &mut self,
        pol: &Polyvectors,
        p: i64,
        order: i64,
        terms: u32,
    ) -> GradedElement<LaurentTrunc> {
        let alg = pol.algebra().clone();
        let mut out = GradedElement::zero(&alg);
        for _ in 0..terms {
            let mono = self.pol_monomial(pol, 3, 2);
            let w = pol.weight_of(&mono);
            let n_min = (p - 1).max(w);
            if n_min >= order {
                continue;
            }
            let n = self.rng.gen_range(n_min..order.min(n_min + 4));
            out.add_term(mono, LaurentTrunc::monomial(self.nonzero_rat(), n, order));
        }
        out
    }

    /// Random element of the intersection `F~^q cap h L~` (cumulative
    /// flavor): every term has h-power at least `max(q-1, weight+1)`.
    pub fn rees_element_in_intersection(
        &mut self,
        pol: &Polyvectors,
        q: i64,
        order: i64,
        terms: u32,
    ) -> GradedElement<LaurentTrunc> {
        let alg = pol.algebra().clone();
        let mut out = GradedElement::zero(&alg);
        for _ in 0..terms {
            let mono = self.pol_monomial(pol, 3, 2);
            let w = pol.weight_of(&mono);
            let n_min = (q - 1).max(w + 1);
            if n_min >= order {
                continue;
            }
            let n = self.rng.gen_range(n_min..order.min(n_min + 4));
            out.add_term(mono, LaurentTrunc::monomial(self.nonzero_rat(), n, order));
        }
        out
    }
}

fn push_exp(exps: &mut Vec<(u32, u32)>, g: u32) {
    if let Some(entry) = exps.iter_mut().find(|(gi, _)| *gi == g) {
        entry.1 += 1;
    } else {
        exps.push((g, 1));
    }
}
