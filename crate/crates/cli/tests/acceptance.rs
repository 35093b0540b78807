//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmfg::adm::{AdmGraph, Colour};
use kmfg::cartan::CartanMatrix;
use kmfg::coxeter::{CoxeterWord, WeylElement, WeylGroup};
use kmfg::fpgroup::{self, AbelianInvariants, EnumerationResult};
use kmfg::pi1::{self, Pi1Type};

const CAP: usize = 100_000;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn gcm(name: &str) -> CartanMatrix {
    CartanMatrix::from_named(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_pi1(name: &str, want: Pi1Type) -> Outcome {
    let got = pi1::pi1_group(&gcm(name), false).map_err(|e| format!("{name}: {e}"))?;
    ensure(got == want, || format!("{name}: expected {want}, got {got}"))
}

fn order(p: &fpgroup::Presentation) -> Result<usize, String> {
    match fpgroup::todd_coxeter(p, &[], CAP).map_err(|e| e.to_string())? {
        EnumerationResult::Finite { index } => Ok(index),
        EnumerationResult::Exhausted { limit } => Err(format!("enumeration exhausted at {limit}")),
    }
}

fn c2s(k: usize) -> AbelianInvariants {
    AbelianInvariants::new(0, &vec![2; k])
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1u32 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

fn spherical_table() -> Outcome {
    let z = Pi1Type::new(1, 0);
    let c2 = Pi1Type::new(0, 1);
    expect_pi1("A1", z)?;
    for n in 2..=8 {
        expect_pi1(&format!("A{n}"), c2)?;
        expect_pi1(&format!("C{n}"), z)?;
    }
    expect_pi1("B2", z)?;
    for n in 3..=8 {
        expect_pi1(&format!("B{n}"), c2)?;
    }
    for n in 4..=8 {
        expect_pi1(&format!("D{n}"), c2)?;
    }
    expect_pi1("F4", c2)?;
    expect_pi1("G2", c2)
}

fn indefinite_examples() -> Outcome {
    expect_pi1("E10", Pi1Type::new(0, 1))?;
    let x = kmfg::cartan::rank16_example();
    ensure(x.rank() == 16, || "X must have rank 16".into())?;
    let got = pi1::pi1_group(&x, false).map_err(|e| e.to_string())?;
    ensure(got == Pi1Type::new(2, 2), || format!("X: expected Z^2 x C2^2, got {got}"))
}

fn spin_covers() -> Outcome {
    for name in ["A2", "A3", "A4", "A5", "D4", "E6", "E10"] {
        let m = gcm(name);
        let g = AdmGraph::build(&m);
        let kappas = g.enumerate_kappa();
        ensure(kappas.len() == 2, || format!("{name}: {} admissible colourings", kappas.len()))?;
        let two = pi1::pi1_spin(&m, &g.constant_kappa(2), false).map_err(|e| e.to_string())?;
        ensure(two.is_trivial(), || format!("{name}: kappa=2 gives {two}"))?;
        let one = pi1::pi1_spin(&m, &g.constant_kappa(1), false).map_err(|e| e.to_string())?;
        ensure(one == Pi1Type::new(0, 1), || format!("{name}: kappa=1 gives {one}"))?;
    }
    Ok(())
}

fn component_groups() -> Outcome {
    for (name, want) in [("A2", 8), ("A3", 16), ("A4", 32), ("D4", 32)] {
        let m = gcm(name);
        let all: Vec<usize> = (0..m.rank()).collect();
        let g = AdmGraph::build(&m);
        ensure(g.components().len() == 1 && g.components()[0].colour == Colour::Blue, || {
            format!("{name} should be a single blue component")
        })?;
        let got = order(&fpgroup::h_j_presentation(&m, &all).map_err(|e| e.to_string())?)?;
        ensure(got == want, || format!("{name}: |H_J| = {got}, expected {want}"))?;
    }
    // red components, presented as the J-factor of H_I
    for n in 2..=5 {
        let name = format!("C{n}");
        let m = gcm(&name);
        let g = AdmGraph::build(&m);
        let red: Vec<_> = g.components().iter().filter(|c| c.colour == Colour::Red).collect();
        ensure(red.len() == 1 && red[0].vertices.len() == n - 1, || format!("{name}: unexpected red part"))?;
        let p = fpgroup::component_presentation(&m, &red[0].vertices).map_err(|e| e.to_string())?;
        let k = red[0].vertices.len();
        let got = order(&p)?;
        ensure(got == 1 << k, || format!("{name}: red order {got}, expected {}", 1 << k))?;
        let ab = fpgroup::abelianization(&p);
        ensure(ab == c2s(k), || format!("{name}: red abelianization {ab}"))?;
    }
    Ok(())
}

fn flag_varieties() -> Outcome {
    for n in 1..=5 {
        let m = gcm(&format!("A{n}"));
        for set in subsets(n).filter(|s| !s.is_empty()) {
            let p = fpgroup::flag_presentation(&m, &set).map_err(|e| e.to_string())?;
            let k = n - set.len();
            let ab = fpgroup::abelianization(&p);
            ensure(ab == c2s(k), || format!("A{n} J={set:?}: abelianization {ab}"))?;
            let got = order(&p)?;
            ensure(got == 1 << k, || format!("A{n} J={set:?}: order {got}"))?;
        }
    }
    let b3 = gcm("B3");
    let full = order(&fpgroup::flag_presentation(&b3, &[]).map_err(|e| e.to_string())?)?;
    let mut product = 1;
    for c in AdmGraph::build(&b3).components() {
        product *= order(&fpgroup::component_presentation(&b3, &c.vertices).map_err(|e| e.to_string())?)?;
    }
    ensure(full == 16 && product == 16, || format!("B3 G/B: order {full}, component product {product}"))
}

fn corpus() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for n in 1..=5 {
        names.push(format!("A{n}"));
    }
    for n in 2..=5 {
        names.push(format!("B{n}"));
        names.push(format!("C{n}"));
    }
    for n in 3..=5 {
        names.push(format!("D{n}"));
    }
    names.extend(["F4", "G2", "E10"].map(String::from));
    for n in 1..=4 {
        names.push(format!("A{n}~"));
    }
    names.extend(["B3~", "B4~", "C2~", "C3~", "C4~", "D4~", "G2~"].map(String::from));
    names
}

fn presentation_cross_check() -> Outcome {
    // small cap: only the finite cases are compared
    let cap = 5_000;
    for name in corpus() {
        let m = gcm(&name);
        let w = WeylGroup::new(&m);
        for set in subsets(m.rank()) {
            let flag = fpgroup::flag_presentation(&m, &set).map_err(|e| e.to_string())?;
            let cw = fpgroup::cw_presentation(&m, &set, &w).map_err(|e| e.to_string())?;
            let (a, b) = (fpgroup::abelianization(&flag), fpgroup::abelianization(&cw));
            ensure(a == b, || format!("{name} J={set:?}: {a} vs {b}"))?;
            if a.free_rank > 0 {
                continue;
            }
            let x = fpgroup::todd_coxeter(&flag, &[], cap).map_err(|e| e.to_string())?;
            let y = fpgroup::todd_coxeter(&cw, &[], cap).map_err(|e| e.to_string())?;
            if let (Some(x), Some(y)) = (x.index(), y.index()) {
                ensure(x == y, || format!("{name} J={set:?}: orders {x} vs {y}"))?;
            }
        }
    }
    Ok(())
}

/// Coefficients of `prod [d]_q` for the given degrees.
fn q_factorial(degrees: &[usize]) -> Vec<usize> {
    let mut poly = vec![1usize];
    for &d in degrees {
        let mut next = vec![0; poly.len() + d - 1];
        for (i, &c) in poly.iter().enumerate() {
            for j in 0..d {
                next[i + j] += c;
            }
        }
        poly = next;
    }
    poly
}

/// Permutation of `0..n` for a word in adjacent transpositions.
fn perm_of(word: &[usize], n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for &i in word {
        p.swap(i, i + 1);
    }
    p
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

/// All words of length `len` over `0..gens`.
fn words(gens: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..gens).map(move |g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

/// Reduced words of S_n by the inversion count of the permutation.
fn reduced_words(n: usize) -> Vec<Vec<usize>> {
    let max = n * (n - 1) / 2;
    (0..=max)
        .flat_map(|len| words(n - 1, len))
        .filter(|w| inversions(&perm_of(w, n)) == w.len())
        .collect()
}

fn weyl_vs_brute_force() -> Outcome {
    for (name, size, degrees) in [
        ("A2", 6, vec![2, 3]),
        ("A3", 24, vec![2, 3, 4]),
        ("B2", 8, vec![2, 4]),
        ("C2", 8, vec![2, 4]),
        ("B3", 48, vec![2, 4, 6]),
        ("G2", 12, vec![2, 6]),
    ] {
        let w = WeylGroup::new(&gcm(name));
        let els = w.elements_up_to(usize::MAX, 10_000).map_err(|e| e.to_string())?;
        ensure(els.len() == size, || format!("{name}: {} elements", els.len()))?;
        let mut hist = vec![0usize; q_factorial(&degrees).len()];
        for e in &els {
            hist[e.length()] += 1;
        }
        ensure(hist == q_factorial(&degrees), || format!("{name}: length histogram {hist:?}"))?;
    }

    for n in [3, 4] {
        let w = WeylGroup::new(&gcm(&format!("A{}", n - 1)));
        // permutation -> some reduced word
        let mut by_perm: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for rw in reduced_words(n) {
            by_perm.entry(perm_of(&rw, n)).or_insert(rw);
        }
        ensure(by_perm.len() == (1..=n).product::<usize>(), || format!("S{n}: oracle size"))?;
        let reps: Vec<(Vec<usize>, WeylElement)> = by_perm
            .iter()
            .map(|(p, rw)| (p.clone(), w.element_from_word(&CoxeterWord(rw.clone())).unwrap()))
            .collect();
        for rw_w in by_perm.values() {
            // every subword of one reduced word of w
            let below: HashSet<Vec<usize>> = (0..1u32 << rw_w.len())
                .map(|mask| {
                    let sub: Vec<usize> = rw_w
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &g)| g)
                        .collect();
                    perm_of(&sub, n)
                })
                .collect();
            let ew = w.element_from_word(&CoxeterWord(rw_w.clone())).unwrap();
            for (pv, ev) in &reps {
                let leq = w.bruhat_leq(ev, &ew).map_err(|e| e.to_string())?;
                ensure(leq == below.contains(pv), || format!("S{n}: bruhat mismatch {pv:?} vs {rw_w:?}"))?;
            }
        }
    }

    let w = WeylGroup::new(&gcm("A1~"));
    let els = w.elements_up_to(4, 1000).map_err(|e| e.to_string())?;
    for v in &els {
        for x in &els {
            if w.weak_leq(v, x).map_err(|e| e.to_string())? {
                ensure(w.bruhat_leq(v, x).map_err(|e| e.to_string())?, || "affine A1: weak but not Bruhat".into())?;
            }
        }
    }
    Ok(())
}

fn root_sequences() -> Outcome {
    for n in [3, 4] {
        let w = WeylGroup::new(&gcm(&format!("A{}", n - 1)));
        for rw in reduced_words(n) {
            let roots = w.root_sequence(&CoxeterWord(rw.clone())).map_err(|e| e.to_string())?;
            ensure(roots.iter().all(|r| r.is_positive()), || format!("S{n} {rw:?}: negative root"))?;
            let distinct: HashSet<_> = roots.iter().collect();
            ensure(distinct.len() == roots.len(), || format!("S{n} {rw:?}: repeated root"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let w = WeylGroup::new(&gcm("A3"));
    let mut tested = 0;
    while tested < 100 {
        let len = rng.gen_range(2..=12);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..3)).collect();
        if inversions(&perm_of(&word, 4)) == word.len() {
            continue;
        }
        let cw = CoxeterWord(word.clone());
        let by_roots = w.is_reduced(&cw).map_err(|e| e.to_string())?;
        let by_length = w.element_from_word(&cw).map_err(|e| e.to_string())?.length() == word.len();
        ensure(!by_roots && !by_length, || format!("{word:?}: reducedness {by_roots}, length test {by_length}"))?;
        tested += 1;
    }
    Ok(())
}

fn cell_counts() -> Outcome {
    let a2 = WeylGroup::new(&gcm("A2"));
    let got = a2.cell_counts(&[], 10, 1000).map_err(|e| e.to_string())?;
    let want = BTreeMap::from([(0, 1), (1, 2), (2, 2), (3, 1)]);
    ensure(got == want, || format!("A2: {got:?}"))?;
    let a3 = WeylGroup::new(&gcm("A3"));
    let got = a3.cell_counts(&[1, 2], 10, 1000).map_err(|e| e.to_string())?;
    let want = BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1)]);
    ensure(got == want, || format!("A3, J={{2,3}}: {got:?}"))?;
    let aff = WeylGroup::new(&gcm("A1~"));
    for l in 1..=12 {
        let got = aff.cell_counts(&[], l, 1000).map_err(|e| e.to_string())?;
        let mut want = BTreeMap::from([(0, 1)]);
        want.extend((1..=l).map(|d| (d, 2)));
        ensure(got == want, || format!("affine A1, L={l}: {got:?}"))?;
    }
    Ok(())
}

fn kmfg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kmfg"))
        .args(args)
        .env_remove("KMFG_MAX_COSETS")
        .output()
        .expect("kmfg runs")
}

fn hypothesis_gate() -> Outcome {
    let affine = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]]).map_err(|e| e.to_string())?;
    ensure(!affine.is_two_spherical() && affine.is_symmetrizable(), || "affine A1 hypotheses".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let affine_path = dir.path().join("affine.txt");
    std::fs::write(&affine_path, "2\n2 -2\n-2 2\n").map_err(|e| e.to_string())?;
    let out = kmfg(&["pi1", "--matrix", affine_path.to_str().unwrap()]);
    ensure(out.status.code() == Some(0), || format!("affine A1 exit {:?}", out.status.code()))?;

    let rows = vec![vec![2, -3, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
    let m = CartanMatrix::new(rows).map_err(|e| e.to_string())?;
    ensure(!m.is_symmetrizable() && !m.is_two_spherical(), || "gate matrix hypotheses".into())?;
    let path = dir.path().join("wild.txt");
    std::fs::write(&path, "3\n2 -3 -1\n-2 2 -1\n-1 -1 2\n").map_err(|e| e.to_string())?;
    let path = path.to_str().unwrap();
    let refused = kmfg(&["pi1", "--matrix", path]);
    ensure(refused.status.code() == Some(3), || format!("refusal exit {:?}", refused.status.code()))?;
    let stderr = String::from_utf8_lossy(&refused.stderr);
    ensure(stderr.starts_with("error[E300]"), || format!("refusal stderr: {stderr}"))?;
    let forced = kmfg(&["pi1", "--matrix", path, "--force"]);
    ensure(forced.status.code() == Some(0), || format!("forced exit {:?}", forced.status.code()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("spherical table", spherical_table),
        ("indefinite examples E10 and X", indefinite_examples),
        ("spin covers of simply-laced types", spin_covers),
        ("component groups by coset enumeration", component_groups),
        ("flag varieties", flag_varieties),
        ("cell presentation against full presentation", presentation_cross_check),
        ("Weyl engine against brute force", weyl_vs_brute_force),
        ("root sequences", root_sequences),
        ("Schubert cell counts", cell_counts),
        ("hypothesis gate", hypothesis_gate),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match run() {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({:.2?})", k + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
