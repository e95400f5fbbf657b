//! Named verification suites with a wall-clock budget, shared by the
//! command-line front end.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::One;
use serde::Serialize;

use crate::codes::{classify_codes, monomial_equivalent, CodeZp};
use crate::construction::ZpContext;
use crate::error::{Error, Result};
use crate::exact::{int, Int};
use crate::lattice::abelian_label;
use crate::leech::{build_leech, coinvariant_class, reconstruct_unimodular, reduce_binary_form, ClassTag, GolayCode};
use crate::orbifold::{case2_parameter_table, QuadraticSpaceFp};
use crate::roots::decompose_root_set;
use crate::triality::TrialityReport;

/// A code from the uniqueness list together with the data of its row.
#[derive(Clone, Debug, Serialize)]
pub struct KnownCode {
    pub class: &'static str,
    pub p: u64,
    pub t: usize,
    pub dim: usize,
    pub rows: Vec<Vec<i64>>,
    pub rank: usize,
    pub discriminant: String,
}

impl KnownCode {
    pub fn code(&self) -> Result<CodeZp> {
        CodeZp::new(self.p, self.t, &self.rows)
    }
}

pub fn known_codes() -> Vec<KnownCode> {
    let row = |class, p: u64, rows: Vec<Vec<i64>>, d_rank: usize| {
        let t = rows[0].len();
        KnownCode {
            class,
            p,
            t,
            dim: rows.len(),
            rank: t * (p as usize - 1),
            discriminant: abelian_label(&vec![p; d_rank]),
            rows,
        }
    };
    vec![
        row("3B", 3, vec![vec![1; 6]], 6),
        row(
            "3C",
            3,
            vec![
                vec![1; 9],
                vec![1, 1, 1, 2, 2, 2, 0, 0, 0],
                vec![1, 2, 0, 1, 2, 0, 1, 2, 0],
            ],
            5,
        ),
        row("5B", 5, vec![vec![1, 1, 2, 2]], 4),
        row("5C", 5, vec![vec![1; 5], vec![1, 2, 4, 3, 0]], 3),
        row("7B", 7, vec![vec![1, 2, 3]], 3),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    #[serde(rename = "table1")]
    Table1,
    #[serde(rename = "table2")]
    Table2,
    #[serde(rename = "triality")]
    Triality,
    #[serde(rename = "leech")]
    Leech,
    #[serde(rename = "uniqueC")]
    UniqueC,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Table1,
        Suite::Table2,
        Suite::Triality,
        Suite::Leech,
        Suite::UniqueC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
            Suite::Triality => "triality",
            Suite::Leech => "leech",
            Suite::UniqueC => "uniqueC",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub rows: Vec<SuiteRow>,
    /// False when the budget ran out before every row was checked.
    pub complete: bool,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.complete && self.rows.iter().all(|r| r.passed)
    }
}

type Check = Box<dyn FnOnce() -> Result<(bool, String)>>;

struct Runner {
    start: Instant,
    budget: Option<Duration>,
    rows: Vec<SuiteRow>,
}

impl Runner {
    fn out_of_time(&self) -> bool {
        self.budget.is_some_and(|b| self.start.elapsed() >= b)
    }

    /// Runs the checks in order, stopping at the budget; errors become
    /// failed rows.
    fn run(mut self, suite: Suite, checks: Vec<(String, Check)>) -> SuiteReport {
        let mut complete = true;
        for (name, check) in checks {
            if self.out_of_time() {
                complete = false;
                break;
            }
            let (passed, detail) = check().unwrap_or_else(|e| (false, e.to_string()));
            self.rows.push(SuiteRow { name, passed, detail });
        }
        SuiteReport {
            suite,
            rows: self.rows,
            complete,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

/// Runs `suite`; a zero budget checks nothing and reports an incomplete run.
pub fn run_suite(suite: Suite, budget: Option<Duration>, seed: u64) -> SuiteReport {
    let runner = Runner {
        start: Instant::now(),
        budget,
        rows: Vec::new(),
    };
    let checks = match suite {
        Suite::Table1 => table1_checks(),
        Suite::Table2 => table2_checks(),
        Suite::Triality => triality_checks(),
        Suite::Leech => leech_checks(seed),
        Suite::UniqueC => unique_checks(),
    };
    runner.run(suite, checks)
}

fn table1_checks() -> Vec<(String, Check)> {
    known_codes()
        .into_iter()
        .map(|kc| {
            let name = format!("{} [{},{},{}]", kc.class, kc.p, kc.t, kc.dim);
            let check: Check = Box::new(move || {
                let c = kc.code()?;
                let ctx = ZpContext::new(kc.p, kc.t)?;
                let l = ctx.construct_b(&c)?;
                let d = l.discriminant_group()?.label();
                let r = ctx.context().root_lattice();
                let roots = r.roots()?;
                let dec = decompose_root_set(&roots, kc.p as usize, |x, y| r.inner(x, y))?;
                let rootless = l.is_rootless()?;
                let ok = c.is_self_orthogonal()
                    && l.rank() == kc.rank
                    && d == kc.discriminant
                    && dec.components.len() == kc.t
                    && dec.leftover.is_empty()
                    && rootless;
                Ok((
                    ok,
                    format!(
                        "rank {}, D {d}, roots A_{}^{}, rootless {rootless}",
                        l.rank(),
                        kc.p - 1,
                        dec.components.len()
                    ),
                ))
            });
            (name, check)
        })
        .collect()
}

fn table2_checks() -> Vec<(String, Check)> {
    let expected: [(u64, u64, u64, Option<u32>); 7] = [
        (3, 12, 729, Some(1)),
        (3, 18, 243, Some(3)),
        (5, 16, 625, Some(1)),
        (5, 20, 125, Some(2)),
        (7, 18, 343, Some(1)),
        (11, 20, 121, None),
        (23, 22, 23, None),
    ];
    let mut checks: Vec<(String, Check)> = Vec::new();
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        let want: Vec<(u64, u64, Option<u32>)> =
            expected.iter().filter(|r| r.0 == p).map(|r| (r.1, r.2, r.3)).collect();
        checks.push((
            format!("p = {p}"),
            Box::new(move || {
                let got: Vec<(u64, u64, Option<u32>)> = case2_parameter_table(p)?
                    .iter()
                    .map(|r| (r.m, r.discriminant_order, r.code_dim))
                    .collect();
                Ok((got == want, format!("(m, |D|, dim C) = {got:?}")))
            }),
        ));
    }
    checks
}

fn triality_checks() -> Vec<(String, Check)> {
    (2..=9)
        .map(|k| {
            let check: Check = Box::new(move || {
                let r = TrialityReport::run(k)?;
                Ok((
                    r.passed(),
                    format!(
                        "sfg {}, conjugation {}, grading {}",
                        r.sfg, r.conjugation, r.weight_grading
                    ),
                ))
            });
            (format!("k = {k}"), check)
        })
        .collect()
}

fn leech_checks(seed: u64) -> Vec<(String, Check)> {
    let mut checks: Vec<(String, Check)> = vec![(
        "Leech lattice".into(),
        Box::new(|| {
            let l = build_leech(&GolayCode::load()?)?;
            let theta = l.theta_prefix(4)?;
            let ok = l.is_even() && l.det().is_one() && theta == [(0, 1), (2, 0), (4, 196560)];
            Ok((ok, format!("theta {theta:?}")))
        }),
    )];
    for tag in ClassTag::ALL {
        checks.push((
            format!("coinvariant {tag}"),
            Box::new(move || {
                let c = coinvariant_class(tag, seed)?;
                let d = c.coinvariant.discriminant_group()?.label();
                let mut ok = c.coinvariant.rank() == tag.rank() && d == tag.discriminant_label();
                let mut extra = String::new();
                match tag {
                    ClassTag::A11 => {
                        let q = QuadraticSpaceFp::from_lattice(&c.coinvariant, 11)?;
                        let nonzero = q.values()?.len() - 1;
                        let singular = q.singular_vectors()?.len();
                        ok &= nonzero == 120 && singular == 0;
                        extra = format!(", {singular} singular among {nonzero}");
                    }
                    ClassTag::A23 => {
                        let q = QuadraticSpaceFp::from_lattice(&c.coinvariant, 23)?;
                        let minus_one = q.represents(22)?.is_some();
                        let g = c.fixed.gram();
                        let num = |r: &crate::exact::Rat| -> Int { r.to_integer() };
                        let form = reduce_binary_form(&num(&g[(0, 0)]), &num(&g[(0, 1)]), &num(&g[(1, 1)]))?;
                        ok &= minus_one && c.fixed.det().to_integer() == int(23) && form == (int(4), int(1), int(6));
                        extra = format!(", q = -1 attained {minus_one}, fixed form {form:?}");
                    }
                    _ => {}
                }
                Ok((ok, format!("rank {}, D {d}{extra}", c.coinvariant.rank())))
            }),
        ));
    }
    for tag in [ClassTag::A11, ClassTag::A23] {
        checks.push((
            format!("glue {tag}"),
            Box::new(move || {
                let u = reconstruct_unimodular(&coinvariant_class(tag, seed)?)?;
                let theta = u.theta_prefix(4)?;
                let ok = u.rank() == 24 && u.is_even() && u.det().is_one() && theta == [(0, 1), (2, 0), (4, 196560)];
                Ok((ok, format!("theta {theta:?}")))
            }),
        ));
    }
    checks
}

fn unique_checks() -> Vec<(String, Check)> {
    known_codes()
        .into_iter()
        .map(|kc| {
            let name = format!("[{},{},{}]", kc.p, kc.t, kc.dim);
            let check: Check = Box::new(move || {
                let cl = classify_codes(kc.p, kc.t, kc.dim, true, true)?;
                let want = kc.code()?;
                let matches = match cl.classes.as_slice() {
                    [only] => monomial_equivalent(only, &want)?.is_some(),
                    _ => false,
                };
                Ok((
                    matches,
                    format!(
                        "{} class(es) from {} candidates",
                        cl.classes.len(),
                        cl.candidates_examined
                    ),
                ))
            });
            (name, check)
        })
        .collect()
}
