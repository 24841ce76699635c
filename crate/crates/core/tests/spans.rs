mod common;

use std::collections::BTreeSet;

use common::additive_closure;
use ordpsr::howell::Solver;
use ordpsr::{Span, Zmod};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Setup {
    zm: Zmod,
    dim: usize,
    rng: ChaCha8Rng,
}

impl Setup {
    fn new(seed: u64) -> Setup {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, k, dim) = [(3, 1, 4), (3, 2, 3), (5, 1, 3), (5, 2, 2), (7, 1, 3), (3, 3, 2)][rng.gen_range(0..6)];
        Setup { zm: Zmod::new(p, k).unwrap(), dim, rng }
    }

    /// A few vectors, often with entries divisible by p.
    fn rows(&mut self) -> Vec<Vec<u64>> {
        let (q, p) = (self.zm.modulus(), self.zm.p());
        let n = self.rng.gen_range(0..=3);
        (0..n)
            .map(|_| {
                let scale = if self.rng.gen_bool(0.4) { p } else { 1 };
                (0..self.dim).map(|_| self.rng.gen_range(0..q) * scale % q).collect()
            })
            .collect()
    }

    fn span(&self, rows: &[Vec<u64>]) -> Span {
        Span::from_rows(self.zm, self.dim, rows.iter().cloned())
    }

    fn closure(&self, rows: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        additive_closure(self.zm.modulus(), rows, self.dim)
    }
}

fn set(s: &Span) -> BTreeSet<Vec<u64>> {
    s.elements().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn span_is_the_additive_closure(seed in any::<u64>()) {
        let mut s = Setup::new(seed);
        let rows = s.rows();
        let span = s.span(&rows);
        let brute = s.closure(&rows);
        prop_assert_eq!(set(&span), brute.clone());
        prop_assert_eq!((s.zm.p() as usize).pow(span.log_size()), brute.len());
        let v: Vec<u64> = (0..s.dim).map(|_| s.rng.gen_range(0..s.zm.modulus())).collect();
        prop_assert_eq!(span.contains(&v), brute.contains(&v));
    }

    #[test]
    fn join_and_intersection_match_sets(seed in any::<u64>()) {
        let mut s = Setup::new(seed);
        let (ra, rb) = (s.rows(), s.rows());
        let (a, b) = (s.span(&ra), s.span(&rb));
        let both: Vec<Vec<u64>> = ra.iter().chain(&rb).cloned().collect();
        prop_assert_eq!(set(&a.join(&b)), s.closure(&both));
        let meet: BTreeSet<Vec<u64>> = set(&a).intersection(&set(&b)).cloned().collect();
        prop_assert_eq!(set(&a.intersect(&b)), meet);
        prop_assert_eq!(a.contains_span(&b), set(&b).is_subset(&set(&a)));
    }

    #[test]
    fn modular_law(seed in any::<u64>()) {
        let mut s = Setup::new(seed);
        let (ra, rb, rc) = (s.rows(), s.rows(), s.rows());
        let a = s.span(&ra);
        let b = a.intersect(&s.span(&rb));
        let c = s.span(&rc);
        // b ⊆ a, so a ∩ (b + c) = b + (a ∩ c).
        let lhs = a.intersect(&b.join(&c));
        let rhs = b.join(&a.intersect(&c));
        prop_assert_eq!(set(&lhs), set(&rhs));
    }

    #[test]
    fn solver_kernel_and_preimages(seed in any::<u64>()) {
        let mut s = Setup::new(seed);
        let src = s.rng.gen_range(1..=2);
        let images: Vec<Vec<u64>> = (0..src).map(|_| {
            let mut r = s.rows();
            r.pop().unwrap_or_else(|| vec![0; s.dim])
        }).collect();
        let target_rows = s.rows();
        let target = s.span(&target_rows);
        let solver = Solver::new(s.zm, src, &images, &target);
        let q = s.zm.modulus();
        let apply = |x: &[u64]| -> Vec<u64> {
            (0..s.dim).map(|j| x.iter().zip(&images).fold(0, |acc, (&c, img)| (acc + c * img[j]) % q)).collect()
        };
        let sources = Span::full(s.zm, src).elements();
        let kernel: BTreeSet<Vec<u64>> = sources.iter().filter(|x| target.contains(&apply(x))).cloned().collect();
        prop_assert_eq!(set(&solver.kernel()), kernel);
        for x in sources.iter().take(20) {
            let y = apply(x);
            let pre = solver.solve(&y).expect("image vectors have preimages");
            let diff: Vec<u64> = apply(&pre).iter().zip(&y).map(|(a, b)| (a + q - b) % q).collect();
            prop_assert!(target.contains(&diff));
        }
    }

    #[test]
    fn zmod_arithmetic(p in prop::sample::select(vec![3u64, 5, 7, 11]), k in 1u32..=3, a in any::<u64>(), e in 0u64..40) {
        let zm = Zmod::new(p, k).unwrap();
        let q = zm.modulus();
        let a = a % q;
        let (v, u) = zm.split(a);
        if a != 0 {
            prop_assert!(zm.is_unit(u));
            prop_assert_eq!(zm.mul(zm.p_pow(v), u), a);
            prop_assert_eq!(zm.val(a), v);
        }
        prop_assert_eq!(zm.is_unit(a), a % p != 0);
        if let Some(b) = zm.inv(a) {
            prop_assert_eq!(zm.mul(a, b), 1);
        }
        let naive = (0..e).fold(1 % q, |acc, _| acc * a % q);
        prop_assert_eq!(zm.pow(a, e), naive);
    }
}
