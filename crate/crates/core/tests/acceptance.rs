//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use morsekit::flow::{integrate_with, model_flow_rk4_error, monotonicity_report, sample_start, Classifier, Direction, FlowOptions};
use morsekit::resolution::bs_max_check;
use morsekit::symfunc::{
    cohomological_degree, expand_in_basis, grass_relations, lr_oracle, partitions, product_constants, reduce, schur_p,
    strict_partitions, structure_constants, Basis, Partition, RingSpec, SymPoly,
};
use morsekit::{Field, Manifold, MorseSetup, Ring};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>, ctx: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

fn certified_kinds() -> Vec<Manifold> {
    vec![
        Manifold::orth(4, Field::Real).unwrap(),
        Manifold::special_orth(4).unwrap(),
        Manifold::unitary(3).unwrap(),
        Manifold::symplectic(2).unwrap(),
        Manifold::grass(5, 2).unwrap(),
        Manifold::lagrangian(3).unwrap(),
        Manifold::cplx_str(3).unwrap(),
        Manifold::flag_default(3).unwrap(),
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut points = 0;
    let mut worst_ratio = f64::INFINITY;
    for m in certified_kinds() {
        let setup = ok(MorseSetup::new(m.clone()), "setup")?;
        for c in ok(setup.enumerate_critical(), "enumerate")? {
            let num = ok(setup.index_numeric(&c), &format!("{m} {}", c.label))?;
            ensure(num.index == c.index, || {
                format!("{m} {}: numeric index {} != closed {}", c.label, num.index, c.index)
            })?;
            let ratio = num.min_abs_eigenvalue() / num.spectral_radius();
            ensure(ratio > 1e-6, || format!("{m} {}: eigenvalue ratio {ratio:e}", c.label))?;
            worst_ratio = worst_ratio.min(ratio);
            points += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{points} critical points agree, min |eig|/radius {worst_ratio:.3e}, {secs:.2} s"))
}

/// `Π (1 + t^e)` by summing `t^{Σ S}` over all subsets `S` of the exponents.
fn subset_product(exps: &[usize]) -> Vec<u64> {
    let top: usize = exps.iter().sum();
    let mut out = vec![0u64; top + 1];
    for mask in 0u32..(1 << exps.len()) {
        let d: usize = exps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).sum();
        out[d] += 1;
    }
    out
}

/// Gaussian binomial `[n, k]_q` by the q-Pascal rule, coefficients in `q`.
fn gaussian_binomial(n: usize, k: usize) -> Vec<u64> {
    if k == 0 || k == n {
        return vec![1];
    }
    let a = gaussian_binomial(n - 1, k - 1);
    let b = gaussian_binomial(n - 1, k);
    let mut out = vec![0u64; (k * (n - k) + 1).max(a.len()).max(b.len() + k)];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + k] += c;
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn in_t_squared(q: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; 2 * q.len() - 1];
    for (i, c) in q.iter().enumerate() {
        out[2 * i] = *c;
    }
    out
}

fn check_poincare(m: Manifold, ring: Ring, expected: Vec<u64>) -> std::result::Result<(), String> {
    let setup = ok(MorseSetup::new(m.clone()), "setup")?;
    let p = ok(setup.poincare(ring), &format!("{m}"))?;
    ensure(p.coeffs == expected, || format!("{m}: {:?} != {:?}", p.coeffs, expected))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let exps: Vec<usize> = (1..=n).map(|i| 2 * i - 1).collect();
        check_poincare(Manifold::unitary(n).unwrap(), Ring::Z, subset_product(&exps))?;
        let setup = MorseSetup::new(Manifold::unitary(n).unwrap()).unwrap();
        let chi = ok(setup.euler_characteristic(), "chi")?;
        ensure(chi == 0, || format!("chi(U({n})) = {chi}"))?;
        checked += 1;
    }
    for n in 1..=3 {
        let exps: Vec<usize> = (1..=n).map(|i| 4 * i - 1).collect();
        check_poincare(Manifold::symplectic(n).unwrap(), Ring::Z, subset_product(&exps))?;
        checked += 1;
    }
    for n in 2..=6 {
        for k in 1..n {
            check_poincare(Manifold::grass(n, k).unwrap(), Ring::Z, in_t_squared(&gaussian_binomial(n, k)))?;
            let setup = MorseSetup::new(Manifold::grass(n, k).unwrap()).unwrap();
            let chi = ok(setup.euler_characteristic(), "chi")?;
            let binom: i64 = (0..k).map(|i| (n - i) as i64).product::<i64>() / (1..=k as i64).product::<i64>();
            ensure(chi == binom, || format!("chi(G({n},{k})) = {chi}, expected {binom}"))?;
            checked += 1;
        }
    }
    for n in 1..=4 {
        let exps: Vec<usize> = (1..=n).collect();
        check_poincare(Manifold::lagrangian(n).unwrap(), Ring::Z2, subset_product(&exps))?;
        checked += 1;
    }
    for n in 2..=5 {
        let exps: Vec<usize> = (1..n).collect();
        check_poincare(Manifold::special_orth(n).unwrap(), Ring::Z2, subset_product(&exps))?;
        checked += 1;
    }
    check_poincare(Manifold::flag_default(3).unwrap(), Ring::Z, vec![1, 0, 2, 0, 2, 0, 1])?;
    checked += 1;
    Ok(format!("{checked} Poincare polynomials and Euler characteristics match"))
}

fn all_kinds() -> Vec<Manifold> {
    vec![
        Manifold::orth(4, Field::Real).unwrap(),
        Manifold::unitary(3).unwrap(),
        Manifold::symplectic(2).unwrap(),
        Manifold::special_orth(4).unwrap(),
        Manifold::grass(5, 2).unwrap(),
        Manifold::lagrangian(3).unwrap(),
        Manifold::cplx_str(3).unwrap(),
        Manifold::flag_default(3).unwrap(),
    ]
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in all_kinds() {
        let setup = MorseSetup::new(m.clone()).unwrap();
        for seed in 0..100u64 {
            let p = m.random_point(seed);
            let g = ok(setup.gradient_closed(&p), "gradient")?;
            let diff = (p.matrix() - setup.focal()).scale(2.0);
            let reference = ok(m.tangent_project(&p, &diff), "project")?;
            let err = (&g - &reference).norm();
            ensure(err <= 1e-9, || format!("{m} seed {seed}: error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("8 kinds x 100 points, max error {worst:.3e}"))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for m in all_kinds() {
        if matches!(m.kind(), morsekit::ManifoldKind::FlagU { .. }) {
            continue;
        }
        let setup = MorseSetup::new(m.clone()).unwrap();
        for c in setup.enumerate_critical().unwrap() {
            for u in ok(m.tangent_frame(&c.point), "frame")? {
                let h = ok(setup.hessian_apply(&c, &u), "hessian")?;
                let q = ok(setup.gradient_difference_quotient(&c, &u, 1e-6), "quotient")?;
                let rel = (&h - &q).norm() / h.norm();
                ensure(rel <= 1e-5, || format!("{m} {}: relative error {rel:e}", c.label))?;
                worst = worst.max(rel);
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} directions on 7 kinds, max relative error {worst:.3e}"))
}

fn criterion_5() -> Outcome {
    let opts = FlowOptions::default();
    let mut worst_step = f64::INFINITY;
    let mut worst_dist: f64 = 0.0;
    for m in all_kinds() {
        let setup = MorseSetup::new(m.clone()).unwrap();
        let classifier = ok(Classifier::new(&setup), "classifier")?;
        for i in 0..50u64 {
            let x0 = sample_start(&setup, 2024, i);
            let (traj, res) = ok(integrate_with(&setup, &classifier, &x0, Direction::Ascending, &opts), "flow")?;
            ensure(res.converged && res.limit_label.is_some(), || {
                format!("{m} start {i}: grad {:e}, distance {:e}", res.final_grad_norm, res.final_distance)
            })?;
            ensure(res.final_grad_norm < 1e-8 && res.final_distance <= 1e-6, || format!("{m} start {i}: loose limit"))?;
            let rep = monotonicity_report(&traj);
            ensure(rep.min_step >= -1e-12, || format!("{m} start {i}: f decreased by {:e}", -rep.min_step))?;
            worst_step = worst_step.min(rep.min_step);
            worst_dist = worst_dist.max(res.final_distance);
        }
    }
    let model = model_flow_rk4_error(&[1.0, -0.5, 0.25], &[0.1, -0.2], 1e-3, 3.0);
    ensure(model <= 1e-8, || format!("model flow error {model:e}"))?;
    Ok(format!(
        "400 flows converged (max distance {worst_dist:.2e}), min f step {worst_step:.2e}, model RK4 error {model:.2e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    for (n, k) in [(4, 2), (5, 2)] {
        let spec = RingSpec::GrassQuotient { n, k };
        let classes = spec.classes();
        for a in &classes {
            for b in &classes {
                let got = ok(structure_constants(&spec, a, b), "structure constants")?;
                let mut oracle = lr_oracle(a, b);
                oracle.retain(|nu, _| nu.len() <= k && nu.first() <= n - k);
                ensure(got == oracle, || format!("G({n},{k}) {a}x{b}: {got:?} != {oracle:?}"))?;
                ensure(got.values().all(|c| !c.is_negative()), || format!("negative constant in {a}x{b}"))?;
                pairs += 1;
            }
        }
    }
    let spec = RingSpec::GrassQuotient { n: 4, k: 2 };
    let one = Partition::parse("1").unwrap();
    let fourth = ok(product_constants(&spec, &[one.clone(), one.clone(), one.clone(), one]), "power")?;
    let expected: BTreeMap<Partition, BigInt> = [(Partition::parse("2,2").unwrap(), BigInt::from(2))].into();
    ensure(fourth == expected, || format!("sigma_1^4 = {fourth:?}"))?;

    let specs = [
        RingSpec::GrassQuotient { n: 4, k: 2 },
        RingSpec::GrassQuotient { n: 5, k: 2 },
        RingSpec::GrassQuotient { n: 5, k: 3 },
        RingSpec::TruncatedZ2 { n: 4, vars: 4 },
        RingSpec::TruncatedZ2 { n: 5, vars: 4 },
        RingSpec::SchurPRing { n: 3 },
        RingSpec::SchurPRing { n: 4 },
    ];
    let mut units = 0;
    for spec in specs {
        for mu in spec.classes() {
            let got = ok(structure_constants(&spec, &Partition::empty(), &mu), "unit")?;
            let expected: BTreeMap<Partition, BigInt> = [(mu.clone(), BigInt::one())].into();
            ensure(got == expected, || format!("{spec}: 1 x {mu} = {got:?}"))?;
            units += 1;
        }
    }
    Ok(format!("{pairs} Grassmannian pairs match LR, sigma_1^4 = 2 sigma_(2,2), unit checked on {units} classes"))
}

type MPoly = BTreeMap<Vec<u32>, BigRational>;

fn mpoly_add_term(p: &mut MPoly, e: Vec<u32>, c: BigRational) {
    let entry = p.entry(e.clone()).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&e);
    }
}

fn mpoly_mul(a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            mpoly_add_term(&mut out, e, ca * cb);
        }
    }
    out
}

fn mpoly_var_sum(v: usize, i: usize, j: usize, sign: i64) -> MPoly {
    let mut p = MPoly::new();
    let mut ei = vec![0; v];
    ei[i] = 1;
    let mut ej = vec![0; v];
    ej[j] = 1;
    mpoly_add_term(&mut p, ei, BigRational::one());
    mpoly_add_term(&mut p, ej, BigRational::from_integer(sign.into()));
    p
}

/// Exact quotient by long division in lex order; `None` if a remainder appears.
fn mpoly_div_exact(num: &MPoly, den: &MPoly) -> Option<MPoly> {
    let (lead_e, lead_c) = den.iter().next_back()?;
    let mut rest = num.clone();
    let mut q = MPoly::new();
    while let Some((e, c)) = rest.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if e.iter().zip(lead_e).any(|(a, b)| a < b) {
            return None;
        }
        let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
        let qc = c / lead_c;
        let mut t = MPoly::new();
        t.insert(qe.clone(), qc.clone());
        for (de, dc) in mpoly_mul(&t, den) {
            mpoly_add_term(&mut rest, de, -dc);
        }
        mpoly_add_term(&mut q, qe, qc);
    }
    Some(q)
}

fn permutations(v: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; v], &mut out);
    out.into_iter()
        .map(|w| {
            let inversions = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count();
            (w, if inversions % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// `P_λ(x_1..x_v)` from its symmetrisation formula
/// `(1/(v−ℓ)!) Σ_w w(x^λ Π_{i≤ℓ, i<j} (x_i + x_j)/(x_i − x_j))`,
/// computed as an alternant divided by the Vandermonde product.
fn brute_force_p(lambda: &Partition, v: usize) -> MPoly {
    let l = lambda.len();
    if l > v {
        return MPoly::new();
    }
    let mut g = MPoly::new();
    g.insert(lambda.padded(v).iter().map(|&p| p as u32).collect(), BigRational::one());
    let mut delta = MPoly::new();
    delta.insert(vec![0; v], BigRational::one());
    for i in 0..v {
        for j in i + 1..v {
            let sign = if i < l { 1 } else { -1 };
            g = mpoly_mul(&g, &mpoly_var_sum(v, i, j, sign));
            delta = mpoly_mul(&delta, &mpoly_var_sum(v, i, j, -1));
        }
    }
    let mut alt = MPoly::new();
    for (w, sgn) in permutations(v) {
        for (e, c) in &g {
            let mut moved = vec![0; v];
            for (i, x) in e.iter().enumerate() {
                moved[w[i]] = *x;
            }
            mpoly_add_term(&mut alt, moved, c * BigRational::from_integer(sgn.into()));
        }
    }
    let fact: i64 = (1..=(v - l) as i64).product();
    let q = mpoly_div_exact(&alt, &delta).expect("alternant divisible by the Vandermonde product");
    q.into_iter().map(|(e, c)| (e, c / BigRational::from_integer(fact.into()))).collect()
}

fn sympoly_as_mpoly(f: &SymPoly) -> MPoly {
    f.to_monomials()
        .into_iter()
        .map(|(e, c)| (e.into_iter().map(|x| x as u32).collect(), BigRational::from_integer(c)))
        .collect()
}

/// Solve `A c = b` exactly; `None` if inconsistent or underdetermined.
fn solve_rational(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return None;
        };
        rows.swap(pivot_row, r);
        let p = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pr = rows[pivot_row].clone();
                for (x, y) in rows[r].iter_mut().zip(&pr) {
                    *x = &*x - &factor * y;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][unknowns].clone()).collect())
}

fn criterion_7() -> Outcome {
    let mut funcs = 0;
    for v in 1..=4 {
        for w in 0..=6 {
            for lambda in strict_partitions(w, w, w) {
                let pf = ok(schur_p(&lambda, v), &format!("P{lambda}"))?;
                let brute = brute_force_p(&lambda, v);
                ensure(sympoly_as_mpoly(&pf) == brute, || format!("P{lambda} in {v} variables differs"))?;
                funcs += 1;
            }
        }
    }
    let mut products = 0;
    for v in 1..=4 {
        let strict: Vec<Partition> = (0..=6).flat_map(|w| strict_partitions(w, v, w)).collect();
        for a in &strict {
            for b in &strict {
                let w = a.weight() + b.weight();
                if w > 6 {
                    continue;
                }
                let prod = schur_p(a, v).unwrap().mul(&schur_p(b, v).unwrap()).unwrap();
                let basis = strict_partitions(w, v, w);
                let monos = partitions(w, v, w);
                let elems: Vec<SymPoly> = basis.iter().map(|nu| schur_p(nu, v).unwrap()).collect();
                let rows: Vec<Vec<BigRational>> = monos
                    .iter()
                    .map(|kappa| {
                        let mut row: Vec<BigRational> =
                            elems.iter().map(|e| BigRational::from_integer(e.coeff(kappa))).collect();
                        row.push(BigRational::from_integer(prod.coeff(kappa)));
                        row
                    })
                    .collect();
                let sol = solve_rational(rows, basis.len())
                    .ok_or_else(|| format!("P{a}P{b} in {v} variables is not in the P span"))?;
                ensure(sol.iter().all(|c| c.is_integer()), || format!("P{a}P{b}: non-integral {sol:?}"))?;
                let mut oracle: BTreeMap<Partition, BigInt> = BTreeMap::new();
                for (nu, c) in basis.iter().zip(&sol) {
                    if !c.is_zero() {
                        oracle.insert(nu.clone(), c.to_integer());
                    }
                }
                let got = ok(expand_in_basis(&prod, Basis::SchurP), "expand")?;
                ensure(got == oracle, || format!("P{a}P{b}: {got:?} != {oracle:?}"))?;
                products += 1;
            }
        }
    }
    Ok(format!("{funcs} P-functions match the symmetrisation, {products} products integral"))
}

fn criterion_8() -> Outcome {
    let mut labels = 0;
    let mut worst_near: f64 = 0.0;
    for m in [Manifold::special_orth(4).unwrap(), Manifold::grass(4, 2).unwrap()] {
        let setup = MorseSetup::new(m.clone()).unwrap();
        for c in setup.enumerate_critical().unwrap() {
            let rep = ok(bs_max_check(&setup, &c.label, 500, 7), &format!("{m} {}", c.label))?;
            ensure(rep.holds, || format!("{m} {}: max {} exceeds {}", c.label, rep.max_f, rep.f_sigma))?;
            if c.index > 0 {
                ensure(rep.near_max_fraction < 0.05, || {
                    format!("{m} {}: near-max fraction {}", c.label, rep.near_max_fraction)
                })?;
                worst_near = worst_near.max(rep.near_max_fraction);
            }
            labels += 1;
        }
    }
    Ok(format!("{labels} labels x 500 samples, max near-max fraction {worst_near}"))
}

fn criterion_9() -> Outcome {
    let mut spaces = 0;
    for n in 2..=5 {
        for k in 1..n {
            let m = Manifold::grass(n, k).unwrap();
            let setup = MorseSetup::new(m.clone()).unwrap();
            let p = ok(setup.poincare(Ring::Z), "poincare")?;
            for d in 0..=k * (n - k) {
                let count = partitions(d, k, n - k).len() as u64;
                ensure(count == p.coefficient(2 * d), || {
                    format!("G({n},{k}) degree {d}: {count} partitions, Betti {}", p.coefficient(2 * d))
                })?;
                ensure(p.coefficient(2 * d + 1) == 0, || format!("G({n},{k}) odd Betti number"))?;
            }
            let spec = RingSpec::GrassQuotient { n, k };
            for (i, rel) in grass_relations(n, k).iter().enumerate() {
                let r = ok(reduce(rel, &spec), "reduce")?;
                ensure(r.is_zero(), || format!("G({n},{k}) relation p_{} reduces to {r}", i + 1))?;
            }
            spaces += 1;
        }
    }
    let mut labels = 0;
    for n in 2..=5 {
        let mut ms = vec![Manifold::special_orth(n).unwrap(), Manifold::cplx_str(n).unwrap()];
        ms.extend((1..n).map(|k| Manifold::grass(n, k).unwrap()));
        for m in ms {
            let setup = MorseSetup::new(m.clone()).unwrap();
            for c in setup.enumerate_critical().unwrap() {
                let deg = ok(cohomological_degree(&m, &c.label), &format!("{m} {}", c.label))?;
                ensure(deg == c.index, || format!("{m} {}: degree {deg} != index {}", c.label, c.index))?;
                labels += 1;
            }
        }
    }
    Ok(format!(
        "{spaces} Grassmannians: box counts equal Betti numbers and relations vanish; degree = index on {labels} labels"
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
