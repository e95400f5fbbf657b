mod support;

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use orbilat::codes::{classify_codes, construction_b_has_roots, monomial_equivalent, CodeZp};
use orbilat::construction::ZpContext;
use orbilat::exact::{int, rat, Int, Rat};
use orbilat::isometry::LatticeIsometry;
use orbilat::lattice::Lattice;
use orbilat::leech::{
    build_leech, coinvariant_class, reconstruct_unimodular, reduce_binary_form, ClassTag, GolayCode, DEFAULT_SEED,
};
use orbilat::orbifold::decide::invariant_sublattices;
use orbilat::orbifold::{case2_parameter_table, chab_extract, decide_extra, Branch};
use orbilat::roots::simple_root;
use orbilat::triality::TrialityReport;
use support::cosets::qualifying_cosets;

type Outcome = Result<String, String>;

const LEECH_THETA: [(u64, u64); 3] = [(0, 1), (2, 0), (4, 196560)];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: orbilat::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Row {
    name: &'static str,
    p: u64,
    rows: Vec<Vec<i64>>,
    e: Vec<u64>,
    d_rank: u32,
}

impl Row {
    fn code(&self) -> CodeZp {
        CodeZp::new(self.p, self.rows[0].len(), &self.rows).unwrap()
    }

    fn t(&self) -> usize {
        self.rows[0].len()
    }
}

fn table() -> Vec<Row> {
    let row = |name, p, rows: Vec<Vec<i64>>, e: Vec<u64>, d_rank| Row {
        name,
        p,
        rows,
        e,
        d_rank,
    };
    vec![
        row("3B", 3, vec![vec![1; 6]], vec![1; 6], 6),
        row(
            "3C",
            3,
            vec![
                vec![1; 9],
                vec![1, 1, 1, 2, 2, 2, 0, 0, 0],
                vec![1, 2, 0, 1, 2, 0, 1, 2, 0],
            ],
            vec![1; 9],
            5,
        ),
        row("5B", 5, vec![vec![1, 1, 2, 2]], vec![1, 4, 2, 3], 4),
        row("5C", 5, vec![vec![1; 5], vec![1, 2, 4, 3, 0]], vec![1; 5], 3),
        row("7B", 7, vec![vec![1, 2, 3]], vec![1, 1, 6], 3),
    ]
}

fn lattice_b(r: &Row) -> Result<(ZpContext, Lattice, LatticeIsometry), String> {
    let ctx = ok(ZpContext::new(r.p, r.t()))?;
    let l = ok(ctx.construct_b(&r.code()))?;
    let g = ok(ctx.g_delta_e(&l, &r.e))?;
    Ok((ctx, l, g))
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = f();
    let spent = start.elapsed();
    let out = match out {
        Ok(_) if spent > limit => Err(format!("took {spent:.1?}, limit {limit:?}")),
        other => other,
    };
    (out, spent)
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn table1() -> Outcome {
    let mut seen = Vec::new();
    for r in table() {
        let (res, spent) = timed(secs(30), || {
            let c = r.code();
            let p = r.p;
            let t = r.t();
            let (ctx, l, _) = lattice_b(&r)?;
            ensure!(c.is_self_orthogonal(), "{} is not self-orthogonal", r.name);
            ensure!(l.rank() == t * (p as usize - 1), "{}: rank {}", r.name, l.rank());
            let d = ok(l.discriminant_group())?;
            let quotient = c.dual_code().size() / c.size();
            let want = Int::from(p.pow(r.d_rank));
            ensure!(d.order() == want, "{}: |D| = {}", r.name, d.order());
            ensure!(
                want == Int::from(p * p * quotient),
                "{}: |D| differs from p^2|C'/C|",
                r.name
            );
            ensure!(d.is_elementary(p), "{}: D is not {p}-elementary", r.name);
            let ambient = ok(ctx.context().root_lattice().roots())?;
            ensure!(
                ambient.len() as u64 == t as u64 * p * (p - 1),
                "{}: ambient has {} roots",
                r.name,
                ambient.len()
            );
            ensure!(
                !ok(construction_b_has_roots(&c))?,
                "{}: code predicate finds a root",
                r.name
            );
            ensure!(ok(l.is_rootless())?, "{}: lattice has roots", r.name);
            Ok(String::new())
        });
        res?;
        seen.push(format!("{} {:.1?}", r.name, spent));
    }
    Ok(seen.join(", "))
}

fn table2() -> Outcome {
    // (p, m, |D(L)|)
    let rows: [(u64, u64, u64); 7] = [
        (3, 12, 729),
        (3, 18, 243),
        (5, 16, 625),
        (5, 20, 125),
        (7, 18, 343),
        (11, 20, 121),
        (23, 22, 23),
    ];
    for p in [3u64, 5, 7, 11, 23] {
        let got: Vec<(u64, u64)> = ok(case2_parameter_table(p))?
            .iter()
            .map(|r| (r.m, r.discriminant_order))
            .collect();
        let want: Vec<(u64, u64)> = rows.iter().filter(|r| r.0 == p).map(|r| (r.1, r.2)).collect();
        ensure!(got == want, "p = {p}: {got:?}, expected {want:?}");
    }
    Ok("7 pairs".into())
}

fn leech() -> Outcome {
    let l = ok(build_leech(&ok(GolayCode::load())?))?;
    let g = l.gram();
    let n = l.rank();
    let even = (0..n).all(|i| (0..n).all(|j| g[(i, j)].is_integer()) && (g[(i, i)].to_integer() % int(2)).is_zero());
    ensure!(n == 24 && even, "rank {n}, even Gram {even}");
    ensure!(l.det().is_one(), "det {}", l.det());
    let theta = ok(l.theta_prefix(4))?;
    ensure!(theta == LEECH_THETA, "theta {theta:?}");
    Ok("196560 minimal vectors".into())
}

/// `(p/2)(λ|λ) mod p` for every element of a `p`-elementary `D(L)`.
fn discriminant_values(l: &Lattice, p: u64) -> Vec<u64> {
    let d = l.discriminant_group().unwrap();
    let factors = d.factors_u64();
    let total: u64 = factors.iter().product();
    (0..total)
        .map(|idx| {
            let mut x = idx;
            let coeffs: Vec<Int> = factors
                .iter()
                .map(|&f| {
                    let c = x % f;
                    x /= f;
                    Int::from(c)
                })
                .collect();
            let v = d.element(&coeffs);
            let q = l.norm(&v) * rat(p as i64, 2);
            assert!(q.is_integer());
            let r = q.to_integer() % Int::from(p);
            let r: u64 = ((r + Int::from(p)) % Int::from(p)).try_into().unwrap();
            r
        })
        .collect()
}

fn coinvariants() -> Outcome {
    let expect = [
        (ClassTag::B3, 12, 3u64, 6u32),
        (ClassTag::B5, 16, 5, 4),
        (ClassTag::B7, 18, 7, 3),
        (ClassTag::A11, 20, 11, 2),
        (ClassTag::A23, 22, 23, 1),
    ];
    for (tag, rank, p, d_rank) in expect {
        let c = ok(coinvariant_class(tag, DEFAULT_SEED))?;
        let l = &c.coinvariant;
        let d = ok(l.discriminant_group())?;
        ensure!(l.rank() == rank, "{tag}: rank {}", l.rank());
        ensure!(
            d.order() == Int::from(p.pow(d_rank)) && d.is_elementary(p),
            "{tag}: D = {}",
            d.label()
        );
        match tag {
            ClassTag::A11 => {
                let values = discriminant_values(l, 11);
                let singular = values.iter().skip(1).filter(|&&q| q == 0).count();
                ensure!(values.len() == 121 && singular == 0, "11A: {singular} singular vectors");
            }
            ClassTag::A23 => {
                let values = discriminant_values(l, 23);
                ensure!(values.contains(&22), "23A: q = -1 not attained");
                let f = &c.fixed;
                let theta = ok(f.theta_prefix(4))?;
                ensure!(
                    f.rank() == 2 && f.is_even() && f.det() == rat(23, 1),
                    "23A: fixed lattice has det {}",
                    f.det()
                );
                // An even binary form of det 23 and minimum 4 reduces to (4, 1, 6).
                ensure!(theta[1] == (2, 0) && theta[2].1 > 0, "23A: fixed theta {theta:?}");
                let g = f.gram();
                let form = ok(reduce_binary_form(
                    &g[(0, 0)].to_integer(),
                    &g[(0, 1)].to_integer(),
                    &g[(1, 1)].to_integer(),
                ))?;
                ensure!(form == (int(4), int(1), int(6)), "23A: reduced form {form:?}");
            }
            _ => {}
        }
    }
    Ok("3B 5B 7B 11A 23A".into())
}

fn padded_simple_root(p: u64, t: usize) -> Vec<Rat> {
    let mut v = simple_root(p as usize, 1);
    v.resize(p as usize * t, Rat::zero());
    v
}

fn round_trip() -> Outcome {
    let rows = table();
    for (tag, name) in [(ClassTag::B3, "3B"), (ClassTag::B5, "5B"), (ClassTag::B7, "7B")] {
        let c = ok(coinvariant_class(tag, DEFAULT_SEED))?;
        let cosets = qualifying_cosets(&c.coinvariant, &c.isometry, tag.p());
        ensure!(!cosets.is_empty(), "{tag}: no qualifying coset");
        let x = ok(chab_extract(&c.coinvariant, &c.isometry, &cosets[0]))?;
        let want = rows.iter().find(|r| r.name == name).unwrap().code();
        ensure!(
            ok(monomial_equivalent(&x.code, &want))?.is_some(),
            "{tag}: extracted code is not equivalent"
        );
    }
    for r in &rows {
        let (_, l, g) = lattice_b(r)?;
        let x = ok(chab_extract(&l, &g, &padded_simple_root(r.p, r.t())))?;
        ensure!(
            ok(monomial_equivalent(&x.code, &r.code()))?.is_some(),
            "{}: round trip changed the code",
            r.name
        );
    }
    Ok("3 coinvariants, 5 round trips".into())
}

fn decisions() -> Outcome {
    for r in table() {
        let (ctx, l, g) = lattice_b(&r)?;
        ensure!(
            ok(ctx.verify_extra_preconditions(&r.code(), &r.e))?,
            "{}: e fails the preconditions",
            r.name
        );
        let v = ok(decide_extra(&l, &g))?;
        ensure!(
            v.has_extra && v.branch == Branch::OddConstruction,
            "{}: branch {}",
            r.name,
            v.branch
        );
    }
    for (tag, branch) in [(ClassTag::A11, Branch::Leech11A), (ClassTag::A23, Branch::Leech23A)] {
        let c = ok(coinvariant_class(tag, DEFAULT_SEED))?;
        let v = ok(decide_extra(&c.coinvariant, &c.isometry))?;
        ensure!(v.has_extra && v.branch == branch, "{tag}: branch {}", v.branch);
    }
    // Control: an index-3 g-invariant sublattice of the 3B coinvariant.
    let c = ok(coinvariant_class(ClassTag::B3, DEFAULT_SEED))?;
    let subs = ok(invariant_sublattices(&c.coinvariant, &c.isometry))?;
    let m = subs.first().ok_or("no invariant sublattice")?;
    let g = ok(c.isometry.restrict(m))?;
    ensure!(
        m.is_even() && ok(m.is_rootless())? && g.is_fixed_point_free() && g.order() == 3,
        "control lattice does not meet the hypotheses"
    );
    let oracle = qualifying_cosets(m, &g, 3).len();
    ensure!(oracle == 0, "control: oracle finds {oracle} cosets");
    let v = ok(decide_extra(m, &g))?;
    ensure!(!v.has_extra && v.branch == Branch::None, "control: branch {}", v.branch);
    Ok(format!(
        "7 positive, control D = {}",
        ok(m.discriminant_group())?.label()
    ))
}

fn glue() -> Outcome {
    for tag in [ClassTag::A11, ClassTag::A23] {
        let u = ok(reconstruct_unimodular(&ok(coinvariant_class(tag, DEFAULT_SEED))?))?;
        ensure!(
            u.rank() == 24 && u.is_even() && u.det().is_one() && ok(u.is_rootless())?,
            "{tag}: not an even unimodular rootless rank-24 lattice"
        );
        let theta = ok(u.theta_prefix(4))?;
        ensure!(theta == LEECH_THETA, "{tag}: theta {theta:?}");
    }
    Ok("11A 23A".into())
}

fn triality() -> Outcome {
    for k in 2..=9 {
        let r = ok(TrialityReport::run(k))?;
        ensure!(r.passed(), "k = {k}: {r:?}");
    }
    Ok("k = 2..9".into())
}

fn classification() -> Outcome {
    let mut seen = Vec::new();
    for r in table() {
        let extended = r.rows.len() > 1;
        let limit = if extended { secs(7200) } else { secs(120) };
        let (res, spent) = timed(limit, || {
            let cl = ok(classify_codes(r.p, r.t(), r.rows.len(), true, true))?;
            ensure!(cl.classes.len() == 1, "{}: {} classes", r.name, cl.classes.len());
            ensure!(
                ok(monomial_equivalent(&cl.classes[0], &r.code()))?.is_some(),
                "{}: class differs from the known code",
                r.name
            );
            Ok(String::new())
        });
        res?;
        seen.push(format!("[{},{},{}] {:.1?}", r.p, r.t(), r.rows.len(), spent));
    }
    Ok(seen.join(", "))
}

fn properties() -> Outcome {
    let results = support::props::run_all();
    let n = results.len();
    for (name, r) in results {
        r.map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{n} properties x {} cases", support::props::CASES))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "Construction B lattices", 150, table1),
        (2, "parameter table", 1, table2),
        (3, "Leech lattice", 600, leech),
        (4, "coinvariant invariants", 300, coinvariants),
        (5, "code extraction round trip", 300, round_trip),
        (6, "extra automorphism decision", 600, decisions),
        (7, "glue reconstruction", 900, glue),
        (8, "triality identities", 30, triality),
        (9, "code classification", 14760, classification),
        (10, "property suites", 300, properties),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let (res, spent) = timed(secs(limit), run);
        match res {
            Ok(detail) => println!("criterion {n}: PASS {name} ({detail}) in {spent:.1?}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL {name}: {why} in {spent:.1?}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
