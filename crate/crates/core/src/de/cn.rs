use super::edges::tidy;
use super::{Algorithm, EdgeTypeProbs, EdgeTypes};
use crate::Real;

/// Distribution of the check-node rule applied to two independent messages
/// (sign product; QMP keeps the smaller magnitude, TMP erases if either
/// input is erased).
#[inline]
pub fn cn_combine<F: Real>(alg: Algorithm, a: &[F; 4], b: &[F; 4]) -> [F; 4] {
    let z = F::zero();
    match alg {
        Algorithm::Bmp => {
            let neg = a[0] * b[1] + a[1] * b[0];
            let pos = a[0] * b[0] + a[1] * b[1];
            [neg, pos, z, z]
        }
        Algorithm::Tmp => {
            let era = a[1] + b[1] - a[1] * b[1];
            let neg = a[0] * b[2] + a[2] * b[0];
            let pos = a[0] * b[0] + a[2] * b[2];
            [neg, era, pos, z]
        }
        Algorithm::Qmp => {
            // split each side into sign and magnitude
            let (ahn, aln, alp, ahp) = (a[0], a[1], a[2], a[3]);
            let (bhn, bln, blp, bhp) = (b[0], b[1], b[2], b[3]);
            let hn = ahn * bhp + ahp * bhn;
            let hp = ahn * bhn + ahp * bhp;
            let an = ahn + aln;
            let ap = ahp + alp;
            let bn = bhn + bln;
            let bp = bhp + blp;
            let neg = an * bp + ap * bn;
            let pos = an * bn + ap * bp;
            [hn, neg - hn, pos - hp, hp]
        }
    }
}

/// Distribution of a message that is certainly correct and reliable.
pub fn cn_identity<F: Real>(alg: Algorithm) -> [F; 4] {
    let (o, z) = (F::one(), F::zero());
    match alg {
        Algorithm::Bmp => [z, o, z, z],
        Algorithm::Tmp => [z, z, o, z],
        Algorithm::Qmp => [z, z, z, o],
    }
}

/// Check-to-variable update for every edge type. Each outgoing message on
/// `(i, j)` combines the `b_is − δ_sj` incoming messages of all other edges
/// of check type `i`.
pub fn de_cn<F: Real>(p: &EdgeTypeProbs<F>, edges: &EdgeTypes) -> EdgeTypeProbs<F> {
    let alg = p.alg();
    let mut out = vec![[F::zero(); 4]; edges.len()];
    let mut factors: Vec<[F; 4]> = Vec::new();
    let mut first: Vec<usize> = Vec::new();
    let mut prefix: Vec<[F; 4]> = Vec::new();
    let mut suffix: Vec<[F; 4]> = Vec::new();
    for i in 0..edges.rows() {
        factors.clear();
        first.clear();
        for &k in edges.in_row(i) {
            first.push(factors.len());
            for _ in 0..edges.get(k).2 {
                factors.push(*p.get(k));
            }
        }
        let n = factors.len();
        prefix.clear();
        suffix.clear();
        prefix.push(cn_identity(alg));
        for f in &factors {
            let next = cn_combine(alg, prefix.last().expect("seeded"), f);
            prefix.push(next);
        }
        suffix.resize(n + 1, cn_identity(alg));
        for t in (0..n).rev() {
            suffix[t] = cn_combine(alg, &factors[t], &suffix[t + 1]);
        }
        for (&k, &pos) in edges.in_row(i).iter().zip(&first) {
            out[k] = tidy(alg, cn_combine(alg, &prefix[pos], &suffix[pos + 1]));
        }
    }
    EdgeTypeProbs::new(alg, out)
}

/// Check update through the product formulas (`Π(1 − 2p)` style). Kept as a
/// cross-check of [`de_cn`]; it loses relative accuracy on tiny error
/// masses.
pub fn de_cn_products<F: Real>(p: &EdgeTypeProbs<F>, edges: &EdgeTypes) -> EdgeTypeProbs<F> {
    let alg = p.alg();
    let (one, two, half) = (F::one(), F::of(2.0), F::of(0.5));
    let mut out = vec![[F::zero(); 4]; edges.len()];
    for i in 0..edges.rows() {
        let row = edges.in_row(i);
        for &k in row {
            let j = edges.get(k).1;
            let mut prods = [one; 3];
            for &s in row {
                let (_, col, b) = edges.get(s);
                let e = (b - u32::from(col == j)) as i32;
                let x = p.get(s);
                let terms = match alg {
                    Algorithm::Qmp => [one - x[1] - x[2], one - two * x[0] - x[1] - x[2], one - two * x[0] - two * x[1]],
                    Algorithm::Tmp => [x[0] + x[2], x[2] - x[0], one],
                    Algorithm::Bmp => [one - two * x[0], one, one],
                };
                for (acc, t) in prods.iter_mut().zip(terms) {
                    *acc = *acc * t.powi(e);
                }
            }
            let [a, b, c] = prods;
            out[k] = tidy(
                alg,
                match alg {
                    Algorithm::Qmp => {
                        let hn = half * (a - b);
                        let ln = half * (one - a - c + b);
                        let lp = half * (one - a + c - b);
                        [hn, ln, lp, one - hn - ln - lp]
                    }
                    Algorithm::Tmp => {
                        let neg = half * (a - b);
                        [neg, one - a, a - neg, F::zero()]
                    }
                    Algorithm::Bmp => {
                        let neg = half * (one - a);
                        [neg, one - neg, F::zero(), F::zero()]
                    }
                },
            );
        }
    }
    EdgeTypeProbs::new(alg, out)
}
