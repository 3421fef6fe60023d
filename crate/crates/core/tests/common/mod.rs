//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use ncy_core::action::CyclicAction;
use ncy_core::cohomology::h1;
use ncy_core::exactla::{determinant, hermite_normal_form, signature, smith_normal_form, unit_vector, Matrix};
use ncy_core::k3cert::CertStore;
use ncy_core::lattice::{primitivity, Lattice};
use ncy_core::scenario::builtin;
use ncy_core::{IntMatrix, IntVector};

pub type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn big(m: &Matrix<i64>) -> IntMatrix {
    m.map(|x| BigInt::from(*x))
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && determinant(m).abs().is_one()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix<i64> {
    Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()).unwrap()
}

/// `U·M·V = D`, `U` and `V` unimodular, `D` diagonal with the divisibility chain.
pub fn check_snf(m: &Matrix<i64>) -> Outcome {
    let m = big(m);
    let s = smith_normal_form(&m);
    ensure!(&(&s.u * &m) * &s.v == s.d, "U*M*V != D for {m}");
    ensure!(is_unimodular(&s.u) && is_unimodular(&s.v), "transforms not unimodular for {m}");
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            ensure!(i == j || s.d[(i, j)].is_zero(), "D not diagonal for {m}");
        }
    }
    let diag = s.diagonal();
    ensure!(diag.iter().all(|d| !d.is_negative()), "negative invariant factor for {m}");
    for w in diag.windows(2) {
        ensure!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])), "divisibility chain broken for {m}");
    }
    Ok(())
}

/// `U·M = H`, `U` unimodular, `H` in reduced row echelon form.
pub fn check_hnf(m: &Matrix<i64>) -> Outcome {
    let m = big(m);
    let h = hermite_normal_form(&m);
    ensure!(&h.u * &m == h.h, "U*M != H for {m}");
    ensure!(is_unimodular(&h.u), "U not unimodular for {m}");
    let mut last: Option<usize> = None;
    for (row, &p) in h.pivots.iter().enumerate() {
        ensure!(last.is_none_or(|l| p > l), "pivots not increasing for {m}");
        last = Some(p);
        ensure!(h.h[(row, p)].is_positive(), "non-positive pivot for {m}");
        ensure!((0..p).all(|c| h.h[(row, c)].is_zero()), "entry left of pivot for {m}");
        for above in 0..row {
            let x = &h.h[(above, p)];
            ensure!(!x.is_negative() && x < &h.h[(row, p)], "entry above pivot not reduced for {m}");
        }
    }
    for row in h.rank()..h.h.rows() {
        ensure!((0..h.h.cols()).all(|c| h.h[(row, c)].is_zero()), "nonzero row below rank for {m}");
    }
    Ok(())
}

/// `cases` random matrices with dimensions at most 6 and entries at most 5 in size.
pub fn normal_form_suite(seed: u64, cases: usize) -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m = random_matrix(&mut rng, r, c, 5);
        check_snf(&m)?;
        check_hnf(&m)?;
    }
    Ok(())
}

/// A random unimodular matrix as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                for c in 0..n {
                    let add = &p[(j, c)] * &k;
                    p[(i, c)] += add;
                }
            }
            1 => p.swap_rows(i, j),
            _ => {
                for c in 0..n {
                    p[(i, c)] = -p[(i, c)].clone();
                }
            }
        }
    }
    p
}

/// Diagonal forms with known signs, conjugated by random unimodular matrices.
pub fn signature_suite(seed: u64, cases: usize) -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let n = rng.gen_range(1..=6);
        let diag: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        let expected =
            (diag.iter().filter(|&&d| d > 0).count(), diag.iter().filter(|&&d| d < 0).count(), diag.iter().filter(|&&d| d == 0).count());
        let mut g = IntMatrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            g[(i, i)] = BigInt::from(*d);
        }
        let p = random_unimodular(&mut rng, n);
        ensure!(is_unimodular(&p), "conjugator not unimodular");
        let conj = &(&p.transpose() * &g) * &p;
        let s = signature(&conj).map_err(|e| e.to_string())?;
        ensure!((s.positive, s.negative, s.null) == expected, "signature {s} of {conj}, expected {expected:?}");
    }
    Ok(())
}

/// Every matrix with entries in {-1,0,1} and the given size.
pub fn all_sign_matrices(r: usize) -> impl Iterator<Item = IntMatrix> {
    let total = 3usize.pow((r * r) as u32);
    (0..total).map(move |mut code| {
        let mut m = IntMatrix::zeros(r, r);
        for k in 0..r * r {
            m[(k / r, k % r)] = BigInt::from((code % 3) as i64 - 1);
            code /= 3;
        }
        m
    })
}

fn mod2(v: &[BigInt]) -> u32 {
    v.iter().enumerate().fold(0, |acc, (i, x)| if x.is_odd() { acc | (1 << i) } else { acc })
}

/// Span over F2 of bitmask vectors.
fn f2_span(vectors: &[u32]) -> Vec<u32> {
    let mut span = vec![0u32];
    for &v in vectors {
        if !span.contains(&v) {
            let extra: Vec<u32> = span.iter().map(|s| s ^ v).collect();
            span.extend(extra);
        }
    }
    span
}

/// Integer vectors in the box [-b, b]^r.
fn box_vectors(r: usize, b: i64) -> Vec<IntVector> {
    let side = (2 * b + 1) as usize;
    (0..side.pow(r as u32))
        .map(|mut code| {
            (0..r)
                .map(|_| {
                    let x = (code % side) as i64 - b;
                    code /= side;
                    BigInt::from(x)
                })
                .collect()
        })
        .collect()
}

/// For an involution, 2·ker N lies in im(1-σ) and ker N is saturated, so H¹
/// is the quotient of the mod-2 reductions of ker N and im(1-σ). Both
/// reductions are found by enumeration. Returns the number of actions tested.
pub fn h1_brute_force_suite(seed: u64) -> Result<usize, String> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut tested = 0;
    for r in 1..=3usize {
        let vectors = box_vectors(r, 2);
        for sigma in all_sign_matrices(r) {
            if !(&sigma * &sigma).is_identity() || sigma.is_identity() {
                continue;
            }
            // A random form made invariant by averaging over the group.
            let m = big(&random_matrix(&mut rng, r, r, 2));
            let avg = &m + &(&(&sigma.transpose() * &m) * &sigma);
            let gram = &avg + &avg.transpose();
            let lattice = Lattice::new(gram).map_err(|e| e.to_string())?;
            let action = CyclicAction::new(lattice, sigma.clone(), 2).map_err(|e| format!("{sigma}: {e}"))?;
            let h = h1(&action);

            let norm = &IntMatrix::identity(r) + &sigma;
            let kernel: Vec<&IntVector> = vectors.iter().filter(|v| norm.mul_vec(v).iter().all(Zero::is_zero)).collect();
            let red_ker = f2_span(&kernel.iter().map(|v| mod2(v)).collect::<Vec<_>>());
            let coboundary = &IntMatrix::identity(r) - &sigma;
            let red_im = f2_span(&coboundary.columns().iter().map(|c| mod2(c)).collect::<Vec<_>>());
            let k = (red_ker.len().trailing_zeros() - red_im.len().trailing_zeros()) as usize;

            ensure!(
                h.group.invariant_factors == vec![BigInt::from(2); k],
                "{sigma}: H1 {:?}, brute force (Z/2)^{k}",
                h.group.invariant_factors
            );
            for a in &kernel {
                for b in &kernel {
                    let diff: IntVector = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                    let same = h.same_class(a, b).map_err(|e| e.to_string())?;
                    ensure!(same == red_im.contains(&mod2(&diff)), "{sigma}: class comparison of {a:?} and {b:?}");
                }
            }
            tested += 1;
        }
    }
    Ok(tested)
}

/// σ = -1 on ℤ^k for k up to `max_k`.
pub fn minus_identity_suite(max_k: usize) -> Outcome {
    for k in 1..=max_k {
        let lattice = Lattice::new(IntMatrix::identity(k)).map_err(|e| e.to_string())?;
        let minus = IntMatrix::identity(k).scale(&BigInt::from(-1));
        let h = h1(&CyclicAction::new(lattice, minus, 2).map_err(|e| e.to_string())?);
        ensure!(h.group.invariant_factors == vec![BigInt::from(2); k], "k = {k}: {:?}", h.group.invariant_factors);
    }
    Ok(())
}

pub fn maximal_minor_gcd(m: &IntMatrix) -> BigInt {
    let (rows, cols) = (m.rows(), m.cols());
    let all = m.to_rows();
    let mut g = BigInt::zero();
    for mask in 0u32..(1 << rows) {
        if mask.count_ones() as usize != cols {
            continue;
        }
        let picked: Vec<IntVector> = (0..rows).filter(|i| mask >> i & 1 == 1).map(|i| all[i].clone()).collect();
        g = g.gcd(&determinant(&IntMatrix::from_rows(picked).unwrap()));
    }
    g
}

/// Full-rank columns span a primitive sublattice exactly when the maximal
/// minors are coprime; the invariant factors multiply to their gcd.
pub fn primitivity_suite(seed: u64, cases: usize) -> Result<(usize, usize), String> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut seen = (0, 0);
    for _ in 0..cases {
        let rows = rng.gen_range(2..=5);
        let cols = rng.gen_range(1..=rows);
        let m = big(&random_matrix(&mut rng, rows, cols, 3));
        let g = maximal_minor_gcd(&m);
        if g.is_zero() {
            continue;
        }
        let p = primitivity(&m);
        ensure!(p.primitive == g.is_one(), "{m}: minors have gcd {g}");
        let product = p.diagonal.iter().fold(BigInt::one(), |a, d| a * d);
        ensure!(product == g, "{m}: invariant factors multiply to {product}, minors have gcd {g}");
        if p.primitive {
            seen.0 += 1
        } else {
            seen.1 += 1
        }
    }
    Ok(seen)
}

/// The certified effective set does not depend on the order candidates are offered in.
pub fn certificate_order_suite(seed: u64, shuffles: usize) -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for (name, n) in [("p2-sextic", Some(6)), ("quadric", None), ("hirzebruch2", None)] {
        let s = builtin(name, n).map_err(|e| e.to_string())?;
        let rank = s.sublattice.rank();
        let action = CyclicAction::new(s.sublattice.clone(), s.involution.matrix.clone(), s.involution.order).map_err(|e| e.to_string())?;
        let gens: Vec<IntVector> = (0..rank).map(|i| unit_vector(rank, i)).collect();
        let mut candidates = gens.clone();
        candidates.extend(gens.iter().map(|g| action.apply(g)));
        candidates.extend(s.extra_effective.iter().cloned());
        let certified = |cands: &[IntVector]| {
            let mut store = CertStore::new(s.sublattice.clone());
            for v in s.effective_seed.as_ref().unwrap().vectors() {
                store.seed_effective(&v).unwrap();
            }
            let left = store.propagate(cands).unwrap();
            let mut eff = store.effective().to_vec();
            eff.sort();
            (eff, left.len())
        };
        let reference = certified(&candidates);
        ensure!(reference.1 == 0, "{name}: {} candidates uncertified", reference.1);
        for _ in 0..shuffles {
            candidates.shuffle(&mut rng);
            ensure!(certified(&candidates) == reference, "{name}: result depends on candidate order");
        }
    }
    Ok(())
}

/// Roots orthogonal to random positive classes, against a box search: the
/// exact roots lying in the box are exactly the ones the box search finds.
/// Returns the number of classes tested and the number of roots seen.
pub fn orthogonal_root_suite(seed: u64, cases: usize) -> Result<(usize, usize), String> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let u = Lattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
    let minus_two = Lattice::from_rows(&[&[-2]]).unwrap();
    let a2 = Lattice::from_rows(&[&[-2, 1], &[1, -2]]).unwrap();
    let lattices = [
        u.direct_sum(&minus_two),
        u.direct_sum(&minus_two).direct_sum(&minus_two),
        u.direct_sum(&a2),
        builtin("p2-sextic", Some(3)).unwrap().sublattice,
        builtin("p2-sextic", Some(4)).unwrap().sublattice,
    ];
    let b = 4;
    let boxes: Vec<Vec<IntVector>> = lattices.iter().map(|l| box_vectors(l.rank(), b)).collect();
    let (mut tested, mut seen) = (0, 0);
    while tested < cases {
        let k = rng.gen_range(0..lattices.len());
        let l = &lattices[k];
        let s: IntVector = (0..l.rank()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
        if !l.square(&s).unwrap().is_positive() {
            continue;
        }
        let exact = ncy_core::lattice::roots_orthogonal_to(l, &s).map_err(|e| e.to_string())?;
        for r in &exact {
            ensure!(
                l.square(r).unwrap() == BigInt::from(-2) && l.pair(r, &s).unwrap().is_zero(),
                "{r:?} is not a root orthogonal to {s:?}"
            );
        }
        let in_box = |v: &IntVector| v.iter().all(|x| x.abs() <= BigInt::from(b));
        let mut expected: Vec<IntVector> = Vec::new();
        for r in exact.iter().filter(|r| in_box(r)) {
            expected.push(r.clone());
            expected.push(r.iter().map(|x| -x).collect());
        }
        expected.sort();
        ensure!(expected.windows(2).all(|w| w[0] != w[1]), "{s:?}: repeated root");
        let mut brute: Vec<IntVector> =
            boxes[k].iter().filter(|v| l.square(v).unwrap() == BigInt::from(-2) && l.pair(v, &s).unwrap().is_zero()).cloned().collect();
        brute.sort();
        ensure!(brute == expected, "{s:?} in lattice {k}: box search {brute:?}, exact {expected:?}");
        seen += exact.len();
        tested += 1;
    }
    Ok((tested, seen))
}
